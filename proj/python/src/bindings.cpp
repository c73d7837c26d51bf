#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "zeroform/cli.hpp"
#include "zeroform/errors.hpp"
#include "zeroform/indicial.hpp"
#include "zeroform/io.hpp"
#include "zeroform/jacobi.hpp"

namespace py = pybind11;
using namespace zeroform;

namespace {

LinearModelMap model_from(std::size_t m, std::size_t n, const Vector& beta, const Matrix& lambda, double a, double A) {
  LinearModelMap v = make_model(m, n, a, A);
  if (beta.size() != 0) v.beta = beta;
  if (lambda.size() != 0) v.lambda = lambda;
  v.check();
  return v;
}

}  // namespace

PYBIND11_MODULE(_zeroform, mod) {
  mod.doc() = "Compiled core of the zeroform package";

  py::register_exception<Error>(mod, "Error", PyExc_ValueError);

  mod.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end; returns (exit_code, stdout, stderr).");

  mod.def(
      "indicial_report_json",
      [](const std::string& model_json, double tol) {
        const LinearModelMap v = io::model_from_json(io::Json::parse(model_json));
        return io::dump(io::indicial_report(v, tol), -1);
      },
      py::arg("model_json"), py::arg("tol") = 1e-9);


  mod.def(
      "tension_model",
      [](std::size_t m, std::size_t n, const Vector& beta, const Matrix& lambda, double a, double A) {
        return tension_model(model_from(m, n, beta, lambda, a, A));
      },
      py::arg("m"), py::arg("n"), py::arg("beta") = Vector(), py::arg("lambda_") = Matrix(), py::arg("a") = 1.0,
      py::arg("A") = 1.0);

  mod.def(
      "model_bitension",
      [](std::size_t m, std::size_t n, const Vector& beta, const Matrix& lambda, double a, double A) {
        return model_bitension(model_from(m, n, beta, lambda, a, A));
      },
      py::arg("m"), py::arg("n"), py::arg("beta") = Vector(), py::arg("lambda_") = Matrix(), py::arg("a") = 1.0,
      py::arg("A") = 1.0);

  mod.def(
      "curvature_term",
      [](std::size_t m, std::size_t n, const Vector& beta, const Matrix& lambda, double a, double A) {
        return curvature_term(model_from(m, n, beta, lambda, a, A));
      },
      py::arg("m"), py::arg("n"), py::arg("beta") = Vector(), py::arg("lambda_") = Matrix(), py::arg("a") = 1.0,
      py::arg("A") = 1.0);

  mod.def(
      "indicial_roots",
      [](std::size_t m, std::size_t n, const Vector& beta, const Matrix& lambda, double a, double A) {
        const IndicialSpectrum s = indicial_roots(indicial_jacobi(model_from(m, n, beta, lambda, a, A)));
        std::vector<std::pair<std::complex<double>, int>> out;
        for (const auto& r : s.roots) out.emplace_back(r.value, r.multiplicity);
        return out;
      },
      py::arg("m"), py::arg("n"), py::arg("beta") = Vector(), py::arg("lambda_") = Matrix(), py::arg("a") = 1.0,
      py::arg("A") = 1.0, "Distinct indicial roots with multiplicities.");

  mod.def(
      "classify",
      [](std::size_t m, std::size_t n, const Vector& beta, const Matrix& lambda, double a, double A, double tol) {
        return std::string(to_string(classify_model(model_from(m, n, beta, lambda, a, A), tol).classification));
      },
      py::arg("m"), py::arg("n"), py::arg("beta") = Vector(), py::arg("lambda_") = Matrix(), py::arg("a") = 1.0,
      py::arg("A") = 1.0, py::arg("tol") = 1e-9);

  mod.def("harmonic_roots", &harmonic_roots, py::arg("m"));
}
