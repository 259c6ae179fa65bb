#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "torrec/cantor.hpp"
#include "torrec/conjugacy.hpp"
#include "torrec/dimension.hpp"
#include "torrec/periodic.hpp"
#include "torrec/recurrence.hpp"

namespace torrec {

using Json = nlohmann::ordered_json;

std::string rat_string(const Rat& q);         // "p/q"
std::string int_string(const Int& z);         // decimal
Json rat_vec_json(const RatVec& v);

/// Every command output starts with this block: tool id, the echoed
/// configuration, seed, and working precision.
Json output_header(const std::string& command, const Json& config, std::uint64_t seed,
                   unsigned precision_bits);

Json to_json(const Spectrum& s);
Json to_json(const DimensionResult& r);
Json to_json(const PeriodicSet& p, bool list_points);
Json to_json(const BallCountReport& r);
Json to_json(const EllipsoidCountReport& r);
Json to_json(const SemiAxesReport& r);
Json to_json(const AxisGrowthFit& r);
Json to_json(const SeparationReport& r);
Json to_json(const SeriesReport& r);
Json to_json(const BoxCountReport& r);
Json to_json(const LevelSequence& s);
Json to_json(const MassTree& t);
Json to_json(const MassBoundsReport& r);
Json to_json(const CoverCountReport& r);
Json to_json(const LocalDimensionReport& r);
Json to_json(const ConjugacyData& cd);
Json to_json(const CommutationReport& r);
Json to_json(const SandwichRow& r);

}  // namespace torrec
