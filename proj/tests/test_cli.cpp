#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zeroform/cli.hpp"
#include "zeroform/io.hpp"

using zeroform::io::Json;
namespace cli = zeroform::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

fs::path write_problem(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "zeroform_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("classify the constant boundary model") {
  const auto p = write_problem("classify.json", R"j({"m":2,"n":2,"a":1,"A":1,"beta":0,"lambda":0})j");
  const Outcome r = run({"classify", p.string()});
  CHECK(r.code == cli::kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["classification"] == "ProperBiharmonic");
  CHECK(j["tension_norm"].get<double>() == doctest::Approx(2.0));
  CHECK(j["bitension_norm"].get<double>() == 0.0);

  const Outcome t = run({"classify", p.string(), "--format", "text"});
  CHECK(t.out.find("classification: ProperBiharmonic\n") != std::string::npos);
}

TEST_CASE("roots of a harmonic model") {
  const auto p = write_problem("roots.json", R"j({"map":{"type":"linear_model","m":1,"n":2,"lambda":[[1],[0]]}})j");
  const Outcome r = run({"roots", p.string()});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = Json::parse(r.out);
  REQUIRE(j["roots"].size() == 2);
  CHECK(j["roots"][0]["re"].get<double>() == doctest::Approx(-1.0));
  CHECK(j["roots"][0]["mult"] == 3);
  CHECK(j["roots"][1]["re"].get<double>() == doctest::Approx(2.0));
  CHECK(j["roots"][1]["mult"] == 3);
  CHECK(j["symmetry_ok"] == true);
}

TEST_CASE("pointwise commands on an expression map") {
  const auto p = write_problem("tension.json", R"j({
    "source": {"type":"model_half_space","dim":2,"scale":1},
    "target": {"type":"model_half_space","dim":2,"scale":1},
    "map": {"type":"expressions","components":["2*x","2*y1 + 1"]},
    "points": [[0.5, 0.0], [0.25, 1.0]],
    "field": {"components": ["x", "0"]}
  })j");
  const Outcome t = run({"tension", p.string()});
  REQUIRE(t.code == cli::kExitOk);
  const Json j = Json::parse(t.out);
  CHECK(j["command"] == "tension");
  REQUIRE(j["results"].size() == 2);
  CHECK(j["results"][1]["point"][1].get<double>() == 1.0);
  CHECK(j["results"][0]["tension"]["norm"].get<double>() < 1e-12);

  const Outcome at = run({"energy", p.string(), "--at", "0.3,0.1"});
  REQUIRE(at.code == cli::kExitOk);
  const Json e = Json::parse(at.out);
  REQUIRE(e["results"].size() == 1);
  CHECK(e["results"][0]["energy_density"].get<double>() == doctest::Approx(2.0));

  CHECK(run({"jacobi", p.string()}).code == cli::kExitOk);
  CHECK(run({"bitension", p.string()}).code == cli::kExitOk);

  const Outcome bad = run({"tension", p.string(), "--at", "0.3"});
  CHECK(bad.code == cli::kExitInputError);
  CHECK(Json::parse(bad.out)["error"]["kind"] == "ShapeMismatch");
}

TEST_CASE("boundary command validates first") {
  const auto good = write_problem("boundary.json", R"j({
    "source": {"type":"model_half_space","dim":3,"scale":1},
    "target": {"type":"model_half_space","dim":3,"scale":1},
    "map": {"type":"expressions","components":["x*exp(x)","y1 + x","2*y2"]},
    "points": [[0, 0, 0]]
  })j");
  const Outcome r = run({"boundary", good.string()});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["validation"]["ok"] == true);
  CHECK(j["results"][0]["normalized"]["lambda"][0][0].get<double>() == doctest::Approx(2.0));

  const auto bad = write_problem("boundary_bad.json", R"j({
    "source": {"type":"model_half_space","dim":2,"scale":1},
    "target": {"type":"model_half_space","dim":2,"scale":1},
    "map": {"type":"expressions","components":["x + 0.1","y1"]},
    "points": [[0, 0]]
  })j");
  const Outcome f = run({"boundary", bad.string()});
  CHECK(f.code == cli::kExitViolation);
  CHECK(Json::parse(f.out)["validation"]["ok"] == false);
}

TEST_CASE("input errors exit with code 2 and an error object") {
  const auto p = write_problem("broken.json", "{\"m\": 2,\n \"n\": }");
  const Outcome r = run({"classify", p.string()});
  CHECK(r.code == cli::kExitInputError);
  const Json e = Json::parse(r.out)["error"];
  CHECK(e["kind"] == "SyntaxError");
  CHECK(e["offset"].get<std::size_t>() == 15);
  CHECK_FALSE(r.err.empty());

  CHECK(run({"frobnicate"}).code == cli::kExitInputError);
  CHECK(run({"classify"}).code == cli::kExitInputError);
  CHECK(run({"classify", "/nonexistent/problem.json"}).code == cli::kExitInputError);

  const auto expr = write_problem("bad_expr.json", R"j({
    "source": {"type":"model_half_space","dim":2,"scale":1},
    "target": {"type":"model_half_space","dim":2,"scale":1},
    "map": {"type":"expressions","components":["x*(1 +","y1"]},
    "points": [[0.5, 0]]
  })j");
  const Outcome s = run({"tension", expr.string()});
  CHECK(s.code == cli::kExitInputError);
  const Json se = Json::parse(s.out)["error"];
  CHECK(se["kind"] == "SyntaxError");
  CHECK(se.contains("offset"));

  const auto model = write_problem("model.json", R"j({"m":1,"n":1})j");
  CHECK(run({"classify", model.string(), "--jobs", "0"}).code == cli::kExitInputError);
  CHECK(run({"classify", model.string(), "--format", "xml"}).code == cli::kExitInputError);
  CHECK(run({"classify", model.string(), "--tol", "-1"}).code == cli::kExitInputError);
}

TEST_CASE("sweep streams points in index order then a summary") {
  const auto p = write_problem("sweep.json", R"j({"sweep":{"m":1,"n":1,"beta":{"min":-1,"max":1,"step":1},
                                                 "lambda":{"min":-1,"max":1,"step":1}}})j");
  for (const char* jobs : {"1", "3"}) {
    const Outcome r = run({"sweep", p.string(), "--jobs", jobs});
    CHECK(r.code == cli::kExitOk);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 10);
    for (std::size_t i = 0; i < 9; ++i) CHECK(Json::parse(ls[i])["index"] == i);
    // Index 4 is beta = lambda = 0.
    CHECK(Json::parse(ls[4])["classification"] == "ProperBiharmonic");
    CHECK(Json::parse(ls[3])["classification"] == "Harmonic");
    const Json s = Json::parse(ls[9])["summary"];
    CHECK(s["points"] == 9);
    CHECK(s["harmonic"] == 2);
    CHECK(s["proper_biharmonic"] == 1);
    CHECK(s["violations"] == 0);
  }

  const auto v = write_problem("sweep_quiet.json", R"j({"sweep":{"m":1,"n":1,"emit":"violations"}})j");
  const Outcome q = run({"sweep", v.string()});
  CHECK(q.code == cli::kExitOk);
  CHECK(lines(q.out).size() == 1);
}

TEST_CASE("verify with a reduced battery") {
  const auto p = write_problem("verify.json", R"j({"verify":{"random_models":20,"zero_root_draws":50,"oracle_models":3,
      "positivity_models":20,"bitension_models":3,"curvature_samples":5,"max_dim":3,"grid_step":1.0}})j");
  const Outcome r = run({"verify", p.string(), "--seed", "7"});
  CHECK(r.code == cli::kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["failed"] == 0);
  CHECK(j["settings"]["seed"] == 7);
  CHECK(j["settings"]["random_models"] == 20);
  CHECK_FALSE(j["settings"].contains("jobs"));

  const auto unknown = write_problem("verify_bad.json", R"j({"verify":{"random_model":20}})j");
  CHECK(run({"verify", unknown.string()}).code == cli::kExitInputError);
}
