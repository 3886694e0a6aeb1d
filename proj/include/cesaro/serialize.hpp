#pragma once

#include "cesaro/corollaries.hpp"
#include "cesaro/decomposition.hpp"
#include "cesaro/limits.hpp"
#include "cesaro/slln.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>

namespace cesaro {

using Json = nlohmann::ordered_json;

/// Non-finite doubles become the strings "inf", "-inf" and "nan".
Json number(double value);

Json to_json(const AtomSet& atoms);
Json to_json(const Partition& part);
Json to_json(const AtomicSpace& space, const BoundednessCertificate& cert, std::uint64_t seed);
Json to_json(const LimitProfile& profile);
Json to_json(const PropMainReport& report);
Json to_json(const EquivalenceChain& chain);
Json to_json(const TightnessReport& report);
Json to_json(const VarianceReport& report);
Json to_json(const RegimeReport& report);
Json to_json(const BoundednessDecision& decision);

//==============================================================================
// CSV plot data
//==============================================================================

/// Columns (k, atom, value): one row per window position and tracked atom.
void write_trajectory_csv(std::ostream& out, const AtomicSpace& space, const Trajectory& values);
/// Columns (k, atom, value) with `atom` holding the ε of each envelope.
void write_quantile_csv(std::ostream& out, const TightnessReport& report);
/// Columns (path, n, value).
void write_paths_csv(std::ostream& out, const EmpiricalRun& run);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace cesaro
