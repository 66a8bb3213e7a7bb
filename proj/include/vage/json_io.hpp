#pragma once

#include <string>

#include <json.hpp>

#include "vage/linsys.hpp"
#include "vage/monoid.hpp"
#include "vage/series.hpp"
#include "vage/weights.hpp"

namespace vage {

using Json = nlohmann::ordered_json;

/// Compact JSON with every number printed as %.17g (integers as integers).
/// Object keys keep insertion order, so equal values give identical bytes.
std::string dump_canonical(const Json& j, int indent = -1);

Json to_json(const MultiIndex& a);
Json to_json(const TruncationSpec& t);
/// {"window":{"K":..,"N":..},"terms":[{"alpha":[[g,e],..],"re":..,"im":..},..]}
/// with terms in graded-lex order.
Json to_json(const Series& f);
/// {"family":"power","c":3} / {"family":"tensor","left":..,"right":..}
Json to_json(const WeightSpec& w);
/// [[series, ..], ..]
Json to_json(const RingMatrix& m);
/// {"A":..,"B":..,"C":..,"D":..}
Json to_json(const Realization& r);

// Readers throw DomainError on malformed input.
MultiIndex multi_index_from_json(const Json& j);
TruncationSpec window_from_json(const Json& j);
Series series_from_json(const Json& j);
WeightSpec weight_from_json(const Json& j);
RingMatrix matrix_from_json(const Json& j);
Realization realization_from_json(const Json& j);

}  // namespace vage
