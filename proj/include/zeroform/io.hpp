#pragma once

// JSON forms of the library types, and the report writers.

#include <json.hpp>
#include <string>
#include <vector>

#include "zeroform/indicial.hpp"
#include "zeroform/jacobi.hpp"

namespace zeroform::io {

using Json = nlohmann::ordered_json;

/// {"type":"model_half_space","dim":..,"scale":..} or
/// {"dim":..,"coords":[..],"rescaled_metric":[[..]]}.
ChartMetric metric_from_json(const Json& j);
LinearModelMap model_from_json(const Json& j);
/// `source` / `target` are used when the map itself does not carry them.
BMapSpec map_from_json(const Json& j, const Json* source = nullptr, const Json* target = nullptr);
FieldAlongMap field_from_json(const Json& j, const std::vector<std::string>& source_coords);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const LinearModelMap& v);
Json to_json(const ValidationReport& r);
Json to_json(const BoundaryData& b);
Json to_json(const MatrixPolynomial2& p);
Json to_json(const IndicialSpectrum& s);
Json to_json(const JacobiResult& r);

/// Full indicial report of a model map.
Json indicial_report(const LinearModelMap& v, double tol);

/// Serializes with every floating-point number at 17 significant digits;
/// non-finite numbers become null. indent < 0 gives a single line.
std::string dump(const Json& j, int indent = 2);

/// Plain "path: value" lines.
std::string render_text(const Json& j);

}  // namespace zeroform::io
