#pragma once

#include <string>

#include <json.hpp>

#include "secrep/analysis.hpp"

namespace secrep {

/// Malformed scheme definition (bad JSON, missing fields, shape errors).
struct SchemeParseError : std::runtime_error {
    explicit SchemeParseError(const std::string& what) : std::runtime_error(what) {}
};

using Json = nlohmann::ordered_json;

struct LoadedScheme {
    LinearScheme scheme;
    std::vector<RepairPlan> plans;  // declared as-is; verification exposes bad ones
};

/// Scheme definition: `construction` is "shamir", "ramp" or "generic";
/// named constructions take `q, n, z[, r], alphas`, generic takes
/// `q, n, k, r, z[, t], rho, generator` (row-major). Optional `repair_plans`
/// entries are {e, I, J, coeffs}.
LoadedScheme scheme_from_json(const Json& j);
LoadedScheme load_scheme_file(const std::string& path);

Json scheme_to_json(const LinearScheme& s, const std::vector<RepairPlan>& plans);

Json shares_to_json(const Network& net, const std::vector<FpVec>& keys, bool reveal_keys);
Json transcript_to_json(const Transcript& tr);
Json bandwidth_to_json(const BandwidthReport& bw);
Json verification_to_json(const std::string& scheme_name, Protocol kind,
                          const std::vector<VerifyCell>& cells);

std::string bounds_csv_header();
std::string bounds_csv_row(const BoundsReport& rep);

}  // namespace secrep
