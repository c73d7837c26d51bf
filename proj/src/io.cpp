#include "zeroform/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zeroform/errors.hpp"

namespace zeroform::io {
namespace {

const Json& field(const Json& j, const char* key, const char* context) {
  if (!j.is_object()) throw InputError(std::string(context) + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(context) + " is missing \"" + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InputError(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Vector vector_from(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

}  // namespace

ChartMetric metric_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("metric must be a JSON object");
  const std::string type = j.contains("type") ? text(j["type"], "metric type") : "chart";
  if (type == "model_half_space") {
    const std::size_t dim = count(field(j, "dim", "metric"), "metric dim");
    return HalfSpaceModel(dim, number(field(j, "scale", "metric"), "metric scale")).chart();
  }
  if (type != "chart") throw InputError("unknown metric type \"" + type + "\"");

  const std::size_t dim = count(field(j, "dim", "metric"), "metric dim");
  const Json& coords_json = field(j, "coords", "metric");
  if (!coords_json.is_array()) throw InputError("metric coords must be an array");
  std::vector<std::string> coords;
  for (const auto& c : coords_json) coords.push_back(text(c, "coordinate name"));
  if (coords.size() != dim) throw InputError("metric coords do not match dim");

  const Json& rows = field(j, "rescaled_metric", "metric");
  if (!rows.is_array() || rows.size() != dim) throw InputError("rescaled_metric must have dim rows");
  std::vector<std::vector<std::string>> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != dim) throw InputError("rescaled_metric must be dim x dim");
    std::vector<std::string> r;
    for (const auto& e : row) {
      if (e.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", e.get<double>());
        r.emplace_back(buf);
      } else {
        r.push_back(text(e, "metric entry"));
      }
    }
    entries.push_back(std::move(r));
  }
  return ChartMetric::parse(std::move(coords), entries);
}

LinearModelMap model_from_json(const Json& j) {
  LinearModelMap v;
  v.m = count(field(j, "m", "linear_model"), "m");
  v.n = count(field(j, "n", "linear_model"), "n");
  v.a = j.contains("a") ? number(j["a"], "a") : 1.0;
  v.A = j.contains("A") ? number(j["A"], "A") : 1.0;
  v.gamma = j.contains("gamma") ? number(j["gamma"], "gamma") : 1.0;
  const auto n = static_cast<Eigen::Index>(v.n);
  const auto m = static_cast<Eigen::Index>(v.m);

  // A bare number means that value in every entry (handy for beta = 0).
  if (!j.contains("beta")) {
    v.beta = Vector::Zero(n);
  } else if (j["beta"].is_number()) {
    v.beta = Vector::Constant(n, j["beta"].get<double>());
  } else {
    v.beta = vector_from(j["beta"], "beta");
  }
  if (!j.contains("lambda")) {
    v.lambda = Matrix::Zero(n, m);
  } else if (j["lambda"].is_number()) {
    v.lambda = Matrix::Constant(n, m, j["lambda"].get<double>());
  } else {
    const Json& rows = j["lambda"];
    if (!rows.is_array()) throw InputError("lambda must be an array of rows");
    // With m = 0 the rows are empty and may be omitted.
    const auto count_rows = rows.empty() && m == 0 ? n : static_cast<Eigen::Index>(rows.size());
    v.lambda = Matrix::Zero(count_rows, m);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Vector row = vector_from(rows[r], "lambda row");
      if (row.size() != m) throw ShapeMismatch("lambda rows must have m entries");
      v.lambda.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
  }
  v.check();
  return v;
}

BMapSpec map_from_json(const Json& j, const Json* source, const Json* target) {
  if (!j.is_object()) throw InputError("map must be a JSON object");
  const std::string type = text(field(j, "type", "map"), "map type");
  if (type == "linear_model") return BMapSpec::model(model_from_json(j));
  if (type != "expressions") throw InputError("unknown map type \"" + type + "\"");

  const Json* src = j.contains("source") ? &j["source"] : source;
  const Json* tgt = j.contains("target") ? &j["target"] : target;
  if (!src || !tgt) throw InputError("expression maps need source and target metrics");
  ChartMetric s = metric_from_json(*src);
  ChartMetric t = metric_from_json(*tgt);
  const Json& comps = field(j, "components", "map");
  if (!comps.is_array()) throw InputError("map components must be an array");
  std::vector<Expr> exprs;
  for (const auto& c : comps) {
    exprs.push_back(parse(text(c, "map component"), std::span<const std::string>(s.coords())));
  }
  return BMapSpec::expressions(std::move(s), std::move(t), std::move(exprs));
}

FieldAlongMap field_from_json(const Json& j, const std::vector<std::string>& source_coords) {
  if (!j.is_object()) throw InputError("field must be a JSON object");
  if (j.contains("type")) {
    const std::string type = text(j["type"], "field type");
    if (type == "tension") return FieldAlongMap::tension_of();
    if (type != "components") throw InputError("unknown field type \"" + type + "\"");
  }
  const Json& comps = field(j, "components", "field");
  if (!comps.is_array()) throw InputError("field components must be an array");
  std::vector<Expr> exprs;
  for (const auto& c : comps) {
    exprs.push_back(parse(text(c, "field component"), std::span<const std::string>(source_coords)));
  }
  return FieldAlongMap::expressions(std::move(exprs));
}

// ---------------------------------------------------------------------------

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const LinearModelMap& v) {
  Json out;
  out["type"] = "linear_model";
  out["m"] = v.m;
  out["n"] = v.n;
  out["a"] = v.a;
  out["A"] = v.A;
  out["gamma"] = v.gamma;
  out["beta"] = to_json(v.beta);
  out["lambda"] = to_json(v.lambda);
  return out;
}

Json to_json(const ValidationReport& r) {
  Json out;
  out["ok"] = r.ok;
  out["boundary_samples"] = r.boundary_samples;
  out["interior_samples"] = r.interior_samples;
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    Json e;
    e["point"] = f.point;
    e["check"] = f.check;
    e["value"] = f.value;
    failures.push_back(std::move(e));
  }
  out["failures"] = std::move(failures);
  return out;
}

Json to_json(const BoundaryData& b) {
  Json out;
  out["point"] = b.point;
  out["a"] = b.a;
  out["A"] = b.A;
  out["gamma"] = b.gamma;
  out["beta"] = to_json(b.beta);
  out["lambda"] = to_json(b.lambda);
  out["normalized"] = b.normalized;
  if (b.normalized) {
    out["rescaled_side"] = b.rescaled_side;
    out["source_rotation"] = to_json(b.source_rotation);
    out["target_rotation"] = to_json(b.target_rotation);
  }
  return out;
}

Json to_json(const MatrixPolynomial2& p) {
  Json out;
  out["A2"] = to_json(p.A2);
  out["A1"] = to_json(p.A1);
  out["A0"] = to_json(p.A0);
  out["scale"] = p.scale;
  return out;
}

Json to_json(const IndicialSpectrum& s) {
  Json out;
  Json roots = Json::array();
  for (const auto& r : s.roots) {
    Json e;
    e["re"] = r.value.real();
    e["im"] = r.value.imag();
    e["mult"] = r.multiplicity;
    roots.push_back(std::move(e));
  }
  out["roots"] = std::move(roots);
  Json pairs = Json::array();
  for (const auto& p : s.symmetry) {
    Json e;
    e["root"] = p.root;
    e["partner"] = p.partner;
    e["deviation"] = p.deviation;
    pairs.push_back(std::move(e));
  }
  out["symmetry"] = std::move(pairs);
  out["symmetry_deviation"] = s.symmetry_deviation;
  out["symmetry_ok"] = s.symmetry_ok;
  return out;
}

Json to_json(const JacobiResult& r) {
  Json out;
  out["laplacian"] = to_json(r.laplacian);
  out["curvature"] = to_json(r.curvature);
  out["total"] = to_json(r.total);
  return out;
}

Json indicial_report(const LinearModelMap& v, double tol) {
  const ModelClassification c = classify_model(v, tol);
  const MatrixPolynomial2 delta = indicial_delta(v);
  const MatrixPolynomial2 jac = indicial_jacobi(v);
  const ZeroDeterminant det = det_at_zero(v);

  Json out;
  out["model"] = to_json(v);
  out["sigma_sq"] = v.sigma_sq();
  out["indicial_delta"] = to_json(delta);
  out["curvature_term"] = to_json(curvature_term(v));
  out["indicial_jacobi"] = to_json(jac);
  Json d;
  d["direct"] = det.direct;
  d["factored"] = det.factored;
  d["scalar_identity"] = det.scalar_identity;
  d["scale"] = det.scale;
  out["det_at_zero"] = std::move(d);
  const Json spectrum = to_json(c.spectrum);
  out["roots"] = spectrum["roots"];
  out["symmetry_ok"] = c.spectrum.symmetry_ok;
  out["symmetry_deviation"] = c.spectrum.symmetry_deviation;
  out["classification"] = to_string(c.classification);
  Json gap;
  gap["interval"] = {c.root_gap.lower, c.root_gap.upper};
  gap["checked"] = c.root_gap.checked;
  gap["clean"] = c.root_gap.clean;
  out["root_gap"] = std::move(gap);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void write(const Json& j, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        write(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) {
        return e.is_object() || e.is_array();
      });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && pretty ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

void flatten(const Json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    }
    return;
  }
  if (j.is_array() && std::any_of(j.begin(), j.end(),
                                  [](const Json& e) { return e.is_object() || e.is_array(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    }
    return;
  }
  out += path;
  out += ": ";
  if (j.is_string()) {
    out += j.get<std::string>();
  } else {
    write(j, 0, 0, out);
  }
  out += '\n';
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

std::string render_text(const Json& j) {
  std::string out;
  flatten(j, "", out);
  return out;
}

}  // namespace zeroform::io
