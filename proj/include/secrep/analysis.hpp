#pragma once

#include <optional>
#include <unordered_map>

#include "secrep/protocol.hpp"

namespace secrep {

/// Raised when the outcome space exceeds the configured enumeration budget.
/// Out of budget means "not verified", never "sampled".
struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(std::uint64_t required_, std::uint64_t budget_)
        : std::runtime_error("enumeration needs " + std::to_string(required_) +
                             " outcomes, budget is " + std::to_string(budget_)),
          required(required_),
          budget(budget_) {}
    std::uint64_t required;
    std::uint64_t budget;
};

struct EnumOptions {
    std::uint64_t budget = 100'000'000;
    /// 0 = enumerate every instance. A positive value enumerates only that
    /// many instances and pins the rest to the zero codeword, which shrinks
    /// the outcome space by q^((k*t + rho) * fixed); the verified claim is
    /// then conditional on the fixed instances.
    std::uint32_t instances_enumerated = 0;
    std::uint32_t threads = 0;  // 0 = hardware concurrency
    /// Round-1 receiver override for the single-share protocol.
    std::vector<std::uint32_t> receivers;
};

struct U128Hash {
    std::size_t operator()(unsigned __int128 x) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(x) ^ static_cast<std::uint64_t>(x >> 64) * 0x9e3779b97f4a7c15ULL;
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }
};

using Marginal = std::unordered_map<std::uint64_t, std::uint64_t>;

/// Exact joint distribution of (message tuple, view tuple). Tuples are packed
/// base q; counts are plain integers and sum to total = q^(enumerated symbols).
struct DistributionTable {
    std::uint32_t q = 0;
    std::uint32_t message_len = 0;
    std::uint32_t view_len = 0;
    std::uint64_t total = 0;
    std::unordered_map<unsigned __int128, std::uint64_t, U128Hash> counts;

    static unsigned __int128 key(std::uint64_t m, std::uint64_t v) {
        return (static_cast<unsigned __int128>(m) << 64) | v;
    }
    static std::uint64_t message_of(unsigned __int128 k) {
        return static_cast<std::uint64_t>(k >> 64);
    }
    static std::uint64_t view_of(unsigned __int128 k) { return static_cast<std::uint64_t>(k); }

    Marginal message_marginal() const;
    Marginal view_marginal() const;
    void merge(DistributionTable&& other);
};

/// Exact independence: count(m,v) * total == count(m) * count(v) for every
/// cell, in integer arithmetic.
bool check_independence(const DistributionTable& table);

/// True iff each view value pins down exactly one message value.
bool deterministic_given_view(const DistributionTable& table);

/// Shannon entropy in base-q symbols; for reports only, never for decisions.
double entropy_base_q(const Marginal& marginal, std::uint64_t total, std::uint32_t q);

/// Exact uniformity: the marginal has `support` values with equal counts.
bool exactly_uniform(const Marginal& marginal, std::uint64_t support);

/// Unpacks a base-q packed tuple.
std::vector<std::uint32_t> unpack_tuple(std::uint64_t code, std::uint32_t len, std::uint32_t q);

/// Number of outcomes a protocol enumeration would visit: q^s with
/// s = enumerated (message + key) symbols + protocol coins.
std::uint64_t enumeration_outcomes(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                                   const EnumOptions& opt = {});

/// Runs the protocol once per outcome over every assignment of message
/// symbols, scheme keys and protocol coins, and tabulates
/// (message, adversary view). The protocol itself is executed each time;
/// nothing is derived from linearity.
DistributionTable enumerate_protocol(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                                     const std::vector<std::uint32_t>& adversary,
                                     const EnumOptions& opt = {});

/// True iff over every outcome the repaired values equal the lost ground
/// truth and are a function of d_e alone.
bool check_repairability(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                         const EnumOptions& opt = {});

/// Marginal of the distilled round-2 values c'_A over the outcome space.
/// The adversary set must not contain the failed node.
Marginal distilled_marginal(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                            const std::vector<std::uint32_t>& adversary,
                            const EnumOptions& opt = {});

/// Joint table of (message, shares of A) for the bare scheme, enumerated
/// over all q^(k*t + rho) encodings. No protocol involved.
DistributionTable scheme_message_share_table(const LinearScheme& s,
                                             const std::vector<std::uint32_t>& adversary,
                                             std::uint64_t budget = 100'000'000);

/// Marginal of the share tuple of S over all encodings.
Marginal scheme_share_marginal(const LinearScheme& s, const std::vector<std::uint32_t>& subset,
                               std::uint64_t budget = 100'000'000);

/// (n-1) W / (2 (n-z-1)): the floor on secure repair bandwidth for
/// rate-optimal schemes. nullopt when k != n - r - z (bound not claimed).
std::optional<Rational> lower_bound_bandwidth(const SchemeParams& p, std::uint64_t w);

struct BoundsReport {
    std::string construction;
    SchemeParams params;
    std::uint64_t w = 0;  // non-secure repair bandwidth: the plan's input size
    bool rate_optimal = false;
    std::optional<Rational> lower;
    std::uint64_t measured = 0;
    Rational upper{0};
    std::optional<Rational> ratio;  // measured / lower
};

BoundsReport bounds_report(const LinearScheme& s, const RepairPlan& plan, Protocol kind,
                           const BandwidthReport& bw);

struct VerifyCell {
    std::uint32_t e = 0;
    std::vector<std::uint32_t> adversary;
    bool independent = false;
    bool repairable = false;
    std::uint64_t outcomes = 0;
};

/// One cell per (failed node, z-subset): repairability and independence by
/// full enumeration. Declared plans take precedence over derived ones.
std::vector<VerifyCell> verify_scheme(const LinearScheme& s, Protocol kind,
                                      const std::vector<RepairPlan>& declared,
                                      const EnumOptions& opt = {});

}  // namespace secrep
