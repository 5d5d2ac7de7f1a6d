#pragma once

// JSON forms of the persistent objects: null samples, barrier tables, and
// dependence diagrams. Numbers are emitted in shortest round-trip form, so
// serialization is lossless and byte-stable.

#include <json.hpp>

#include "qdep/diagram.hpp"
#include "qdep/independence_test.hpp"

namespace qdep {

inline constexpr int kFormatVersion = 1;

nlohmann::json null_sample_to_json(const NullSample& sample);
NullSample null_sample_from_json(const nlohmann::json& j);

nlohmann::json barrier_table_to_json(const BarrierTable& table);
BarrierTable barrier_table_from_json(const nlohmann::json& j);

nlohmann::json diagram_to_json(const DependenceDiagram& diagram);
DependenceDiagram diagram_from_json(const nlohmann::json& j);

}  // namespace qdep
