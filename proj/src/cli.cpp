#include "zeroform/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "zeroform/errors.hpp"
#include "zeroform/io.hpp"
#include "zeroform/sweep.hpp"
#include "zeroform/verify.hpp"

namespace zeroform::cli {

namespace {

using io::Json;

const std::vector<std::string> kCommands = {"tension", "energy", "jacobi",   "bitension", "boundary", "model",
                                            "indicial", "roots", "classify", "sweep",     "verify"};

struct Options {
  std::string command;
  std::string problem_path;
  std::string format = "json";
  std::vector<std::string> at;
  std::optional<double> tol;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

/// Error raised while reading the problem file, with a byte offset.
struct JsonSyntax {
  std::string message;
  std::size_t offset;
};

Json error_object(const std::string& kind, const std::string& message, std::optional<std::size_t> offset) {
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  if (offset) e["offset"] = *offset;
  Json out;
  out["error"] = std::move(e);
  return out;
}

Json load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    Json j = Json::parse(buffer.str());
    if (!j.is_object()) throw InputError("problem file must hold a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonSyntax{e.what(), e.byte == 0 ? 0 : e.byte - 1};
  }
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("bad coordinate '" + item + "' in --at " + text);
    }
    if (used != item.size()) throw InputError("bad coordinate '" + item + "' in --at " + text);
    p.push_back(v);
  }
  if (p.empty()) throw InputError("empty --at point");
  return p;
}

class Session {
 public:
  Session(Options options, Json problem) : opt_(std::move(options)), problem_(std::move(problem)) {}

  int run(std::ostream& out);

 private:
  double tolerance() const;
  BMapSpec map() const;
  std::vector<std::vector<double>> points(std::size_t dim, bool required) const;
  /// Models for model-level commands: the map itself, or one per boundary point.
  std::vector<std::pair<std::optional<std::vector<double>>, LinearModelMap>> models() const;

  Json pointwise(const std::string& key,
                 const std::function<Json(const BMapSpec&, const std::vector<double>&)>& f) const;
  Json model_level(const std::function<Json(const LinearModelMap&)>& f) const;
  int boundary(Json& report) const;
  int sweep(std::ostream& out) const;
  int verify(Json& report) const;

  void emit(std::ostream& out, const Json& report) const;

  Options opt_;
  Json problem_;
};

double Session::tolerance() const {
  double tol = 1e-9;
  if (problem_.contains("tolerances")) {
    const Json& t = problem_["tolerances"];
    if (!t.is_object()) throw InputError("tolerances must be an object");
    if (t.contains("tol")) {
      if (!t["tol"].is_number()) throw InputError("tolerances.tol must be a number");
      tol = t["tol"].get<double>();
    }
  }
  if (opt_.tol) tol = *opt_.tol;
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  return tol;
}

BMapSpec Session::map() const {
  const Json* source = problem_.contains("source") ? &problem_["source"] : nullptr;
  const Json* target = problem_.contains("target") ? &problem_["target"] : nullptr;
  if (problem_.contains("map")) return io::map_from_json(problem_["map"], source, target);
  if (problem_.contains("m") && problem_.contains("n")) return BMapSpec::model(io::model_from_json(problem_));
  throw InputError("problem file has no map");
}

std::vector<std::vector<double>> Session::points(std::size_t dim, bool required) const {
  std::vector<std::vector<double>> pts;
  if (!opt_.at.empty()) {
    for (const auto& a : opt_.at) pts.push_back(parse_point(a));
  } else if (problem_.contains("points")) {
    const Json& list = problem_["points"];
    if (!list.is_array()) throw InputError("points must be an array of coordinate arrays");
    for (const auto& p : list) {
      if (!p.is_array()) throw InputError("each point must be an array of numbers");
      std::vector<double> q;
      for (const auto& c : p) {
        if (!c.is_number()) throw InputError("point coordinates must be numbers");
        q.push_back(c.get<double>());
      }
      pts.push_back(std::move(q));
    }
  }
  if (required && pts.empty()) throw InputError("no evaluation points: give --at or a points array");
  for (const auto& p : pts) {
    if (p.size() != dim) {
      throw ShapeMismatch("point has " + std::to_string(p.size()) + " coordinates, source dimension is " +
                          std::to_string(dim));
    }
  }
  return pts;
}

std::vector<std::pair<std::optional<std::vector<double>>, LinearModelMap>> Session::models() const {
  const BMapSpec u = map();
  std::vector<std::pair<std::optional<std::vector<double>>, LinearModelMap>> out;
  if (u.model_map() && opt_.at.empty() && !problem_.contains("points")) {
    LinearModelMap v = *u.model_map();
    v.check();
    out.emplace_back(std::nullopt, std::move(v));
    return out;
  }
  for (auto& p : points(u.source_dim(), true)) {
    LinearModelMap v = model_map_at(u, p);
    out.emplace_back(std::move(p), std::move(v));
  }
  return out;
}

Json Session::pointwise(const std::string& key,
                        const std::function<Json(const BMapSpec&, const std::vector<double>&)>& f) const {
  const BMapSpec u = map();
  Json results = Json::array();
  for (const auto& p : points(u.source_dim(), true)) {
    Json r;
    r["point"] = p;
    r[key] = f(u, p);
    results.push_back(std::move(r));
  }
  Json report;
  report["command"] = opt_.command;
  report["results"] = std::move(results);
  return report;
}

Json Session::model_level(const std::function<Json(const LinearModelMap&)>& f) const {
  const auto list = models();
  if (list.size() == 1 && !list[0].first) return f(list[0].second);
  Json results = Json::array();
  for (const auto& [p, v] : list) {
    Json r;
    r["point"] = *p;
    r["model"] = io::to_json(v);
    const Json body = f(v);
    for (auto it = body.begin(); it != body.end(); ++it) {
      if (it.key() != "model") r[it.key()] = it.value();
    }
    results.push_back(std::move(r));
  }
  Json report;
  report["command"] = opt_.command;
  report["results"] = std::move(results);
  return report;
}

int Session::boundary(Json& report) const {
  const BMapSpec u = map();
  const ValidationReport check = validate(u);
  report["command"] = opt_.command;
  report["validation"] = io::to_json(check);
  if (!check.ok) return kExitViolation;
  Json results = Json::array();
  for (const auto& p : points(u.source_dim(), true)) {
    Json r;
    r["point"] = p;
    r["raw"] = io::to_json(boundary_data(u, p, false));
    r["normalized"] = io::to_json(boundary_data(u, p, true));
    results.push_back(std::move(r));
  }
  report["results"] = std::move(results);
  return kExitOk;
}

GridAxis axis_from(const Json& j, const char* what) {
  GridAxis a;
  if (!j.is_object()) throw InputError(std::string("sweep.") + what + " must be an object");
  auto get = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw InputError(std::string("sweep.") + what + "." + key + " must be a number");
    out = j[key].get<double>();
  };
  get("min", a.min);
  get("max", a.max);
  get("step", a.step);
  a.count();
  return a;
}

int Session::sweep(std::ostream& out) const {
  if (!problem_.contains("sweep")) throw InputError("problem file has no sweep section");
  const Json& s = problem_["sweep"];
  if (!s.is_object()) throw InputError("sweep must be an object");
  ModelGrid grid;
  auto size = [&](const char* key, std::size_t& v) {
    if (!s.contains(key)) throw InputError(std::string("sweep.") + key + " is required");
    if (!s[key].is_number_unsigned()) throw InputError(std::string("sweep.") + key + " must be a nonnegative integer");
    v = s[key].get<std::size_t>();
  };
  size("m", grid.m);
  size("n", grid.n);
  if (grid.n == 0) throw InputError("sweep.n must be at least 1");
  for (const char* key : {"a", "A"}) {
    if (!s.contains(key)) continue;
    if (!s[key].is_number() || !(s[key].get<double>() > 0.0)) {
      throw InputError(std::string("sweep.") + key + " must be a positive number");
    }
    (key[0] == 'a' ? grid.a : grid.A) = s[key].get<double>();
  }
  if (s.contains("beta")) grid.beta = axis_from(s["beta"], "beta");
  if (s.contains("lambda")) grid.lambda = axis_from(s["lambda"], "lambda");
  std::string shape = s.value("lambda_shape", std::string("full"));
  if (shape != "full" && shape != "diagonal") throw InputError("sweep.lambda_shape must be full or diagonal");
  grid.diagonal_lambda = shape == "diagonal";
  std::string mode = s.value("emit", std::string("all"));
  if (mode != "all" && mode != "violations") throw InputError("sweep.emit must be all or violations");
  const bool all = mode == "all";
  const double tol = tolerance();
  grid.size();

  const bool text = opt_.format == "text";
  std::vector<double> beta(grid.n);
  std::vector<double> lambda(grid.n * grid.m);
  auto line = [&](const GridPoint& p) {
    if (text) {
      out << p.index << ' ' << to_string(p.classification) << ' ' << io::dump(Json(p.tension)) << ' '
          << io::dump(Json(p.bitension)) << (p.violation ? " violation" : "") << '\n';
      return;
    }
    grid.decode(p.index, beta.data(), lambda.data());
    Json j;
    j["index"] = p.index;
    j["beta"] = beta;
    Json rows = Json::array();
    for (std::size_t i = 0; i < grid.n; ++i) {
      rows.push_back(std::vector<double>(lambda.begin() + static_cast<std::ptrdiff_t>(i * grid.m),
                                         lambda.begin() + static_cast<std::ptrdiff_t>((i + 1) * grid.m)));
    }
    j["lambda"] = std::move(rows);
    j["tension"] = p.tension;
    j["bitension"] = p.bitension;
    j["classification"] = to_string(p.classification);
    j["violation"] = p.violation;
    out << io::dump(j, -1) << '\n';
  };
  const GridSummary sum = sweep_grid(
      grid, tol, opt_.jobs, [all](const GridPoint& p) { return all || p.violation; }, line);

  Json summary;
  summary["points"] = sum.points;
  summary["harmonic"] = sum.harmonic;
  summary["proper_biharmonic"] = sum.proper_biharmonic;
  summary["not_biharmonic"] = sum.not_biharmonic;
  summary["violations"] = sum.violations;
  if (text) {
    out << "summary: points=" << sum.points << " harmonic=" << sum.harmonic
        << " proper_biharmonic=" << sum.proper_biharmonic << " not_biharmonic=" << sum.not_biharmonic
        << " violations=" << sum.violations << '\n';
  } else {
    Json j;
    j["summary"] = std::move(summary);
    out << io::dump(j, -1) << '\n';
  }
  return sum.violations == 0 ? kExitOk : kExitViolation;
}

int Session::verify(Json& report) const {
  VerifyConfig config;
  if (problem_.contains("verify")) config = verify_config_from_json(problem_["verify"]);
  if (opt_.seed) config.seed = *opt_.seed;
  config.jobs = opt_.jobs;
  const auto checks = run_verify(config);
  report = to_json(checks, config);
  return report["ok"].get<bool>() ? kExitOk : kExitViolation;
}

void Session::emit(std::ostream& out, const Json& report) const {
  if (opt_.format == "text") {
    out << io::render_text(report);
  } else {
    out << io::dump(report) << '\n';
  }
}

int Session::run(std::ostream& out) {
  const std::string& c = opt_.command;
  if (c == "sweep") return sweep(out);

  Json report;
  int code = kExitOk;
  if (c == "verify") {
    code = verify(report);
  } else if (c == "boundary") {
    code = boundary(report);
  } else if (c == "tension") {
    report = pointwise("tension", [](const BMapSpec& u, const std::vector<double>& p) {
      const Vector t = tension(u, p);
      Json j;
      j["frame"] = io::to_json(t);
      j["norm"] = t.norm();
      return j;
    });
  } else if (c == "energy") {
    report = pointwise("energy_density",
                       [](const BMapSpec& u, const std::vector<double>& p) { return Json(energy_density(u, p)); });
  } else if (c == "jacobi") {
    if (!problem_.contains("field")) throw InputError("jacobi needs a field");
    const BMapSpec u = map();
    const FieldAlongMap W = io::field_from_json(problem_["field"], u.source().coords());
    report = pointwise("jacobi", [&W](const BMapSpec& s, const std::vector<double>& p) {
      return io::to_json(jacobi_apply(s, W, p));
    });
  } else if (c == "bitension") {
    report = pointwise("bitension", [](const BMapSpec& u, const std::vector<double>& p) {
      const Vector b = bitension(u, p);
      Json j;
      j["frame"] = io::to_json(b);
      j["norm"] = b.norm();
      if (u.model_map()) j["closed_form"] = io::to_json(model_bitension(*u.model_map()));
      return j;
    });
  } else if (c == "model") {
    report = model_level([](const LinearModelMap& v) {
      Json j;
      j["model"] = io::to_json(v);
      return j;
    });
  } else if (c == "indicial") {
    const double tol = tolerance();
    report = model_level([tol](const LinearModelMap& v) { return io::indicial_report(v, tol); });
  } else if (c == "roots") {
    report = model_level([](const LinearModelMap& v) { return io::to_json(indicial_roots(indicial_jacobi(v))); });
  } else if (c == "classify") {
    const double tol = tolerance();
    report = model_level([tol](const LinearModelMap& v) {
      const ModelClassification r = classify_model(v, tol);
      Json j;
      j["classification"] = to_string(r.classification);
      j["tension_norm"] = r.tension_norm;
      j["bitension_norm"] = r.bitension_norm;
      Json gap;
      gap["interval"] = {r.root_gap.lower, r.root_gap.upper};
      gap["checked"] = r.root_gap.checked;
      gap["clean"] = r.root_gap.clean;
      j["root_gap"] = std::move(gap);
      return j;
    });
  }
  emit(out, report);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Tension, Jacobi and indicial computations for maps between conformally compact spaces", "zeroform"};
  app.add_option("command", opt.command, "Command to run")->required()->check(CLI::IsMember(kCommands));
  app.add_option("problem", opt.problem_path, "Problem file (JSON); optional for verify");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--at", opt.at, "Evaluation point x,y1,... (repeatable)")->allow_extra_args(false);
  app.add_option("--tol", opt.tol, "Classification tolerance");
  app.add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", opt.seed, "Seed for randomized batteries");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    out << io::dump(error_object("InputError", e.what(), std::nullopt)) << '\n';
    err << "zeroform: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    Json problem = Json::object();
    if (!opt.problem_path.empty()) {
      problem = load_problem(opt.problem_path);
    } else if (opt.command != "verify") {
      throw InputError("command '" + opt.command + "' needs a problem file");
    }
    Session session(opt, std::move(problem));
    return session.run(out);
  } catch (const JsonSyntax& e) {
    out << io::dump(error_object("SyntaxError", e.message, e.offset)) << '\n';
    err << "zeroform: " << e.message << '\n';
  } catch (const SyntaxError& e) {
    out << io::dump(error_object(to_string(e.kind()), e.what(), e.offset())) << '\n';
    err << "zeroform: " << e.what() << '\n';
  } catch (const Error& e) {
    out << io::dump(error_object(to_string(e.kind()), e.what(), std::nullopt)) << '\n';
    err << "zeroform: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    out << io::dump(error_object("InputError", e.what(), std::nullopt)) << '\n';
    err << "zeroform: " << e.what() << '\n';
  }
  return kExitInputError;
}

}  // namespace zeroform::cli
