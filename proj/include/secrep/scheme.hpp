#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "secrep/linalg.hpp"
#include "secrep/rng.hpp"

namespace secrep {

/// Raised by derive_repair_function when no linear repair rule exists for
/// the requested helper/coordinate sets.
struct NoRepairFunction : std::runtime_error {
    explicit NoRepairFunction(const std::string& what) : std::runtime_error(what) {}
};

/// (n, k, r, z) scheme parameters plus share width t and field order q.
/// n nodes, k message symbols (of t field symbols each when t > 1), any
/// n-r shares decode, any z shares reveal nothing.
struct SchemeParams {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t r = 0;
    std::uint32_t z = 0;
    std::uint32_t t = 1;
    std::uint32_t q = 0;
};

/// Throws std::invalid_argument unless n >= 1, k >= 1, t >= 1, z < n - r
/// and q > n with q prime.
void check_params(const SchemeParams& p);

/// A linear secret sharing scheme described by its generator matrix.
/// Rows: k*t message symbols, then rho key symbols. Columns: share
/// coordinates, node-major (node i owns columns [(i-1)*t, i*t)).
struct LinearScheme {
    SchemeParams params;
    std::uint32_t rho = 0;
    Matrix generator;
    std::vector<Fp> alphas;    // evaluation points; empty for generic schemes
    std::string construction;  // "shamir" | "ramp" | "generic"

    PrimeField field() const { return generator.field(); }
    std::size_t message_symbols() const { return std::size_t(params.k) * params.t; }
    /// Generator column of coordinate `coord` (1-based in [1, t]) of node `node` (1-based).
    std::size_t share_col(std::uint32_t node, std::uint32_t coord) const {
        return std::size_t(node - 1) * params.t + (coord - 1);
    }
};

/// Linear repair rule for the share of node e: coeffs maps the |I|*|J|
/// helper coordinates (helper-major, coordinate-minor) to the t coordinates
/// of share e. Node ids and coordinates are 1-based.
struct RepairPlan {
    std::uint32_t e = 0;
    std::vector<std::uint32_t> helpers;  // I, ordered, e not a member
    std::vector<std::uint32_t> coords;   // J, subset of [1, t]
    Matrix coeffs;                       // t x (|I| * |J|)
};

/// Shares of one scheme instance: n entries of t coordinates each.
using Shares = std::vector<FpVec>;

LinearScheme shamir_scheme(std::uint32_t n, std::uint32_t z, std::vector<Fp> alphas);
LinearScheme ramp_scheme(std::uint32_t n, std::uint32_t r, std::uint32_t z, std::vector<Fp> alphas);
LinearScheme generic_scheme(SchemeParams params, Matrix generator, std::uint32_t rho);

/// (message || keys) * generator, split into n shares of t coordinates.
Shares encode(const LinearScheme& s, const FpVec& message, const FpVec& keys);

struct EncodeResult {
    Shares shares;
    FpVec keys;  // retained so transcripts can expose coin flips
};

/// encode with keys drawn uniformly from rng.
EncodeResult encode_random(const LinearScheme& s, const FpVec& message, Rng& rng);

/// Matrix D such that (flat shares of S) * D = message, for the share
/// coordinates of `nodes` in the given order. Throws std::invalid_argument
/// if the message is not a linear function of those coordinates.
Matrix decoding_matrix(const LinearScheme& s, const std::vector<std::uint32_t>& nodes);

/// Unique message consistent with the given shares. Throws on fewer than
/// n-r shares or on shares that are not a codeword projection.
FpVec decode(const LinearScheme& s, const std::map<std::uint32_t, FpVec>& available);

/// Finds coefficients expressing every codeword's share e from the helper
/// coordinates {(i, j) : i in I, j in J} by elimination over the generator;
/// free variables resolve to zero, so the plan is deterministic.
RepairPlan derive_repair_function(const LinearScheme& s, std::uint32_t e,
                                  std::vector<std::uint32_t> helpers,
                                  std::vector<std::uint32_t> coords);

/// Exact check of a plan against the generator: coeffs applied to the helper
/// columns must reproduce the columns of share e.
bool plan_reproduces_share(const LinearScheme& s, const RepairPlan& plan);

/// Coordinate-wise f(a, b) = f0*a + f1*b of two codewords of the same scheme.
Shares linear_combine_shares(const LinearScheme& s, const Shares& a, const Shares& b, Fp f0, Fp f1);

/// True iff `flat` (n*t coordinates, node-major) lies in the code, i.e. some
/// (message, keys) encodes to it.
bool is_codeword(const LinearScheme& s, const FpVec& flat);

struct SchemeValidity {
    bool decodable = false;  // every (n-r)-subset determines the message
    bool secure = false;     // every z-subset reveals nothing (rank criterion)
    std::vector<std::string> failures;
    bool ok() const { return decodable && secure; }
};

/// Structural validity report: rank checks over all (n-r)- and z-subsets.
SchemeValidity validate_scheme(const LinearScheme& s);

/// All size-k subsets of {1, ..., n}, ascending within and across.
std::vector<std::vector<std::uint32_t>> all_subsets(std::uint32_t n, std::uint32_t k);

}  // namespace secrep
