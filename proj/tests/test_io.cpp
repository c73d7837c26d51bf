#include <doctest.h>

#include <cmath>
#include <limits>

#include "zeroform/errors.hpp"
#include "zeroform/io.hpp"

using namespace zeroform;
using io::Json;

TEST_CASE("metrics from JSON") {
  const ChartMetric H = io::metric_from_json(Json::parse(R"({"type":"model_half_space","dim":3,"scale":2})"));
  CHECK(H.dim() == 3);
  CHECK((metric_at(H, std::vector<double>{1.0, 0, 0}) - 0.25 * Matrix::Identity(3, 3)).norm() < 1e-15);

  const ChartMetric C = io::metric_from_json(
      Json::parse(R"({"dim":2,"coords":["x","y1"],"rescaled_metric":[["1 + y1^2", 0.5],[0.5, "2"]]})"));
  CHECK(C.rescaled_at(std::vector<double>{0.1, 1.0})(0, 0) == doctest::Approx(2.0));
  CHECK(C.rescaled_at(std::vector<double>{0.1, 1.0})(0, 1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(io::metric_from_json(Json::parse(R"({"type":"ball"})")), InputError);
  CHECK_THROWS_AS(io::metric_from_json(Json::parse(R"({"dim":2,"coords":["x"],"rescaled_metric":[]})")), InputError);
  CHECK_THROWS_AS(io::metric_from_json(Json::parse("[1]")), InputError);
}

TEST_CASE("linear models from JSON") {
  const LinearModelMap v =
      io::model_from_json(Json::parse(R"({"m":2,"n":2,"a":1.5,"beta":[1,0],"lambda":[[1,0],[0,2]]})"));
  CHECK(v.a == 1.5);
  CHECK(v.A == 1.0);
  CHECK(v.lambda(1, 1) == 2.0);

  // Scalars broadcast.
  const LinearModelMap z = io::model_from_json(Json::parse(R"({"m":2,"n":3,"beta":0,"lambda":0})"));
  CHECK(z.beta.size() == 3);
  CHECK(z.lambda.rows() == 3);
  CHECK(z.lambda.cols() == 2);
  CHECK(z.lambda.norm() == 0.0);

  const LinearModelMap e = io::model_from_json(Json::parse(R"({"m":0,"n":2,"beta":[0.5,1],"lambda":[]})"));
  CHECK(e.lambda.rows() == 2);

  CHECK_THROWS_AS(io::model_from_json(Json::parse(R"({"m":2,"n":2,"lambda":[[1,0,0],[0,1,0]]})")), ShapeMismatch);
  CHECK_THROWS_AS(io::model_from_json(Json::parse(R"({"m":-1,"n":2})")), InputError);
  CHECK_THROWS_AS(io::model_from_json(Json::parse(R"({"n":2})")), InputError);
}

TEST_CASE("maps and fields from JSON") {
  const Json src = Json::parse(R"({"type":"model_half_space","dim":2,"scale":1})");
  const BMapSpec u = io::map_from_json(Json::parse(R"({"type":"expressions","components":["2*x","y1 + 3"]})"), &src, &src);
  CHECK(u.value_at(std::vector<double>{0.5, 1.0}) == std::vector<double>{1.0, 4.0});
  CHECK_THROWS_AS(io::map_from_json(Json::parse(R"({"type":"expressions","components":["x"]})")), InputError);
  CHECK_THROWS_AS(io::map_from_json(Json::parse(R"({"type":"spline"})")), InputError);
  CHECK_THROWS_AS(io::map_from_json(Json::parse(R"({"type":"expressions","components":["x +"]})"), &src, &src),
                  SyntaxError);

  const BMapSpec m = io::map_from_json(Json::parse(R"({"type":"linear_model","m":1,"n":1,"lambda":[[1]]})"));
  CHECK(m.model_map().has_value());

  const FieldAlongMap t = io::field_from_json(Json::parse(R"({"type":"tension"})"), {"x", "y1"});
  CHECK(t.is_tension());
  CHECK_NOTHROW(io::field_from_json(Json::parse(R"({"components":["x","y1*x"]})"), {"x", "y1"}));
  CHECK_THROWS_AS(io::field_from_json(Json::parse(R"({"components":["z"]})"), {"x", "y1"}), UnknownIdentifier);
}

TEST_CASE("dump writes 17 significant digits and null for non-finite values") {
  Json j;
  j["third"] = 1.0 / 3.0;
  j["inf"] = std::numeric_limits<double>::infinity();
  j["nan"] = std::nan("");
  j["neg_zero"] = -0.0;
  j["int"] = 3;
  j["list"] = {0.1, 2.5};
  const std::string s = io::dump(j, -1);
  CHECK(s == R"({"third":0.33333333333333331,"inf":null,"nan":null,"neg_zero":0,"int":3,"list":[0.10000000000000001,2.5]})");
  // Round trip is exact.
  CHECK(Json::parse(s)["third"].get<double>() == 1.0 / 3.0);

  const std::string pretty = io::dump(j, 2);
  CHECK(pretty.find("\n  \"third\": 0.33333333333333331") != std::string::npos);
  CHECK(pretty.find("[0.10000000000000001, 2.5]") != std::string::npos);
}

TEST_CASE("text rendering flattens paths") {
  Json j;
  j["classification"] = "Harmonic";
  j["root_gap"]["checked"] = true;
  j["roots"] = Json::array({Json{{"re", -1.0}, {"mult", 2}}});
  const std::string t = io::render_text(j);
  CHECK(t == "classification: Harmonic\nroot_gap.checked: true\nroots[0].re: -1\nroots[0].mult: 2\n");
}

TEST_CASE("indicial report keys") {
  LinearModelMap v = make_model(1, 1);
  v.lambda << 1.0;
  const Json r = io::indicial_report(v, 1e-10);
  for (const char* key : {"model", "sigma_sq", "indicial_delta", "curvature_term", "indicial_jacobi", "det_at_zero",
                          "roots", "symmetry_ok", "symmetry_deviation", "classification", "root_gap"}) {
    CHECK_MESSAGE(r.contains(key), key);
  }
  CHECK(r["classification"] == "Harmonic");
  CHECK(r["roots"].size() == 2);
  CHECK(r["roots"][0]["mult"] == 2);
  CHECK(r["indicial_jacobi"]["A2"].size() == 2);
  CHECK(r["root_gap"]["interval"][1].get<double>() == doctest::Approx(2.0));
}
