"""Tension, Jacobi and indicial computations for maps between conformally
compact spaces.

The model-level functions take the boundary data of a linear model map:
dimensions ``m`` (source boundary) and ``n`` (target boundary), ``beta`` of
length ``n``, ``lambda_`` of shape ``(n, m)`` and the anchor scales ``a``
and ``A``. Omitted ``beta`` / ``lambda_`` are zero.

``run`` drives the command-line front end with a problem given as a dict.
"""

import json
import os
import tempfile

from ._zeroform import (
    Error,
    classify,
    curvature_term,
    harmonic_roots,
    indicial_roots,
    model_bitension,
    run_cli,
    tension_model,
)

__all__ = [
    "Error",
    "classify",
    "curvature_term",
    "harmonic_roots",
    "indicial_report",
    "indicial_roots",
    "model_bitension",
    "run",
    "run_cli",
    "tension_model",
]


def indicial_report(model, tol=1e-9):
    """Full indicial report of a linear model given as a dict."""
    from ._zeroform import indicial_report_json

    return json.loads(indicial_report_json(json.dumps(model), tol))


def run(command, problem=None, *flags):
    """Runs ``zeroform <command> <problem> [flags]``.

    Returns ``(exit_code, report)``. The report is parsed JSON, a list of
    objects for ``sweep`` (one per output line), or the raw text when
    ``--format text`` is among the flags.
    """
    args = [command]
    path = None
    if problem is not None:
        fd, path = tempfile.mkstemp(suffix=".json")
        with os.fdopen(fd, "w") as f:
            json.dump(problem, f)
        args.append(path)
    args.extend(str(f) for f in flags)
    try:
        code, out, _ = run_cli(args)
    finally:
        if path is not None:
            os.unlink(path)
    if "text" in flags:
        return code, out
    if command == "sweep" and code != 2:
        return code, [json.loads(line) for line in out.splitlines() if line]
    return code, json.loads(out)
