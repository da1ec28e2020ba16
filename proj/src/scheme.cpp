#include "secrep/scheme.hpp"

#include <algorithm>
#include <stdexcept>

namespace secrep {

void check_params(const SchemeParams& p) {
    if (p.n < 1) throw std::invalid_argument("scheme needs at least one node");
    if (p.k < 1) throw std::invalid_argument("scheme needs at least one message symbol");
    if (p.t < 1) throw std::invalid_argument("share width t must be at least 1");
    if (p.r >= p.n || p.z >= p.n - p.r)
        throw std::invalid_argument("parameters must satisfy 0 <= z < n - r");
    if (p.q <= p.n) throw std::invalid_argument("field order must exceed the node count");
    PrimeField check(p.q);  // primality
}

namespace {

std::vector<Fp> checked_points(std::uint32_t n, const std::vector<Fp>& alphas, PrimeField f) {
    if (alphas.size() != n) throw std::invalid_argument("need one evaluation point per node");
    for (const Fp& a : alphas)
        if (a.field() != f) throw FieldMismatch();
    return alphas;
}

}  // namespace

LinearScheme ramp_scheme(std::uint32_t n, std::uint32_t r, std::uint32_t z,
                         std::vector<Fp> alphas) {
    if (n <= r + z) throw std::invalid_argument("ramp scheme needs n > r + z");
    if (alphas.empty()) throw std::invalid_argument("ramp scheme needs evaluation points");
    const PrimeField f = alphas.front().field();
    SchemeParams p{n, n - r - z, r, z, 1, f.order()};
    check_params(p);
    checked_points(n, alphas, f);
    // rows 0..k-1 carry the message, rows k..k+z-1 the keys:
    // c_j = sum_i m_i a_j^(i-1) + sum_i u_i a_j^(k+i-1)
    LinearScheme s{p, z, vandermonde(alphas, p.k + z), std::move(alphas), "ramp"};
    return s;
}

LinearScheme shamir_scheme(std::uint32_t n, std::uint32_t z, std::vector<Fp> alphas) {
    if (n < z + 1) throw std::invalid_argument("shamir scheme needs n > z");
    LinearScheme s = ramp_scheme(n, n - z - 1, z, std::move(alphas));
    s.construction = "shamir";
    return s;
}

LinearScheme generic_scheme(SchemeParams params, Matrix generator, std::uint32_t rho) {
    check_params(params);
    if (generator.field().order() != params.q)
        throw std::invalid_argument("generator field does not match q");
    const std::size_t want_rows = std::size_t(params.k) * params.t + rho;
    const std::size_t want_cols = std::size_t(params.n) * params.t;
    if (generator.rows() != want_rows || generator.cols() != want_cols)
        throw std::invalid_argument("generator must be (k*t + rho) x (n*t)");
    return LinearScheme{params, rho, std::move(generator), {}, "generic"};
}

Shares encode(const LinearScheme& s, const FpVec& message, const FpVec& keys) {
    if (message.size() != s.message_symbols())
        throw std::invalid_argument("message must have k*t symbols");
    if (keys.size() != s.rho) throw std::invalid_argument("keys must have rho symbols");
    FpVec x = message;
    x.insert(x.end(), keys.begin(), keys.end());
    const FpVec flat = x * s.generator;
    Shares shares(s.params.n);
    for (std::uint32_t i = 0; i < s.params.n; ++i)
        shares[i] = FpVec(flat.begin() + std::size_t(i) * s.params.t,
                          flat.begin() + std::size_t(i + 1) * s.params.t);
    return shares;
}

EncodeResult encode_random(const LinearScheme& s, const FpVec& message, Rng& rng) {
    FpVec keys;
    keys.reserve(s.rho);
    for (std::uint32_t i = 0; i < s.rho; ++i) keys.push_back(uniform_element(rng, s.field()));
    return EncodeResult{encode(s, message, keys), std::move(keys)};
}

namespace {

std::vector<std::size_t> coordinate_columns(const LinearScheme& s,
                                            const std::vector<std::uint32_t>& nodes) {
    std::vector<std::size_t> cols;
    cols.reserve(nodes.size() * s.params.t);
    for (std::uint32_t node : nodes) {
        if (node < 1 || node > s.params.n) throw std::invalid_argument("node id out of range");
        for (std::uint32_t c = 1; c <= s.params.t; ++c) cols.push_back(s.share_col(node, c));
    }
    return cols;
}

}  // namespace

Matrix decoding_matrix(const LinearScheme& s, const std::vector<std::uint32_t>& nodes) {
    const Matrix g_sub = s.generator.columns(coordinate_columns(s, nodes));
    // want D with g_sub * D = [I_kt; 0]: then (x * g_sub) * D = x_message
    Matrix target(s.field(), g_sub.rows(), s.message_symbols());
    for (std::size_t i = 0; i < s.message_symbols(); ++i) target.at(i, i) = Fp(1, s.field());
    std::optional<Matrix> d = solve_linear(g_sub, target);
    if (!d) throw std::invalid_argument("message is not decodable from the given nodes");
    return *d;
}

FpVec decode(const LinearScheme& s, const std::map<std::uint32_t, FpVec>& available) {
    if (available.size() < s.params.n - s.params.r)
        throw std::invalid_argument("too few shares: need at least n - r");
    std::vector<std::uint32_t> nodes;
    FpVec flat;
    for (const auto& [node, share] : available) {
        if (share.size() != s.params.t) throw std::invalid_argument("share width must be t");
        nodes.push_back(node);
        flat.insert(flat.end(), share.begin(), share.end());
    }
    const Matrix g_sub = s.generator.columns(coordinate_columns(s, nodes));
    // consistency: some (message, keys) must produce exactly these shares
    if (!solve_linear(g_sub.transpose(), flat))
        throw std::invalid_argument("inconsistent shares: not a codeword projection");
    return flat * decoding_matrix(s, nodes);
}

RepairPlan derive_repair_function(const LinearScheme& s, std::uint32_t e,
                                  std::vector<std::uint32_t> helpers,
                                  std::vector<std::uint32_t> coords) {
    if (e < 1 || e > s.params.n) throw std::invalid_argument("node id out of range");
    for (std::uint32_t i : helpers)
        if (i == e) throw std::invalid_argument("failed node cannot be its own helper");
    if (coords.empty()) throw std::invalid_argument("coordinate set must be non-empty");
    for (std::uint32_t c : coords)
        if (c < 1 || c > s.params.t) throw std::invalid_argument("coordinate out of range");

    std::vector<std::size_t> cols;
    for (std::uint32_t i : helpers) {
        if (i < 1 || i > s.params.n) throw std::invalid_argument("node id out of range");
        for (std::uint32_t c : coords) cols.push_back(s.share_col(i, c));
    }
    const Matrix inputs = s.generator.columns(cols);
    std::vector<std::size_t> target_cols;
    for (std::uint32_t c = 1; c <= s.params.t; ++c) target_cols.push_back(s.share_col(e, c));
    const Matrix target = s.generator.columns(target_cols);

    // x with inputs * x = target: each column of x rebuilds one coordinate of
    // share e from the helper coordinates, for every codeword
    const std::optional<Matrix> x = solve_linear(inputs, target);
    if (!x)
        throw NoRepairFunction("no linear repair function from the given helpers for node " +
                               std::to_string(e));
    return RepairPlan{e, std::move(helpers), std::move(coords), x->transpose()};
}

bool plan_reproduces_share(const LinearScheme& s, const RepairPlan& plan) {
    if (plan.e < 1 || plan.e > s.params.n) return false;
    for (std::uint32_t i : plan.helpers)
        if (i == plan.e || i < 1 || i > s.params.n) return false;
    const std::size_t inputs = plan.helpers.size() * plan.coords.size();
    if (plan.coeffs.rows() != s.params.t || plan.coeffs.cols() != inputs) return false;
    std::vector<std::size_t> cols;
    for (std::uint32_t i : plan.helpers)
        for (std::uint32_t c : plan.coords) cols.push_back(s.share_col(i, c));
    const Matrix helper_cols = s.generator.columns(cols);
    for (std::uint32_t out = 0; out < s.params.t; ++out) {
        const std::size_t target_col = s.share_col(plan.e, out + 1);
        for (std::size_t row = 0; row < s.generator.rows(); ++row) {
            Fp acc(0, s.field());
            for (std::size_t j = 0; j < inputs; ++j)
                acc += plan.coeffs.at(out, j) * helper_cols.at(row, j);
            if (acc != s.generator.at(row, target_col)) return false;
        }
    }
    return true;
}

Shares linear_combine_shares(const LinearScheme& s, const Shares& a, const Shares& b, Fp f0,
                             Fp f1) {
    if (a.size() != s.params.n || b.size() != s.params.n)
        throw std::invalid_argument("codewords must have one share per node");
    Shares out(s.params.n);
    for (std::uint32_t i = 0; i < s.params.n; ++i) {
        if (a[i].size() != s.params.t || b[i].size() != s.params.t)
            throw std::invalid_argument("share width must be t");
        out[i].reserve(s.params.t);
        for (std::uint32_t c = 0; c < s.params.t; ++c)
            out[i].push_back(f0 * a[i][c] + f1 * b[i][c]);
    }
    return out;
}

bool is_codeword(const LinearScheme& s, const FpVec& flat) {
    if (flat.size() != std::size_t(s.params.n) * s.params.t)
        throw std::invalid_argument("codeword must have n*t coordinates");
    return solve_linear(s.generator.transpose(), flat).has_value();
}

std::vector<std::vector<std::uint32_t>> all_subsets(std::uint32_t n, std::uint32_t k) {
    std::vector<std::vector<std::uint32_t>> out;
    if (k > n) return out;
    std::vector<std::uint32_t> cur(k);
    for (std::uint32_t i = 0; i < k; ++i) cur[i] = i + 1;
    for (;;) {
        out.push_back(cur);
        // advance the rightmost index that can still move
        std::int64_t pos = std::int64_t(k) - 1;
        while (pos >= 0 && cur[pos] == n - (k - 1 - pos)) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (std::size_t j = pos + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

SchemeValidity validate_scheme(const LinearScheme& s) {
    SchemeValidity v;
    v.decodable = true;
    v.secure = true;
    const std::uint32_t n = s.params.n;

    for (const auto& subset : all_subsets(n, n - s.params.r)) {
        const Matrix g_sub = s.generator.columns(coordinate_columns(s, subset));
        Matrix target(s.field(), g_sub.rows(), s.message_symbols());
        for (std::size_t i = 0; i < s.message_symbols(); ++i) target.at(i, i) = Fp(1, s.field());
        if (!solve_linear(g_sub, target)) {
            v.decodable = false;
            std::string which;
            for (std::uint32_t id : subset) which += std::to_string(id) + " ";
            v.failures.push_back("message not decodable from nodes " + which);
        }
    }

    if (s.params.z > 0) {
        for (const auto& subset : all_subsets(n, s.params.z)) {
            // z-security: the adversary's view m*M + u*K is independent of m
            // iff the row space of M lies inside the row space of K
            const Matrix g_sub = s.generator.columns(coordinate_columns(s, subset));
            const std::size_t kt = s.message_symbols();
            Matrix key_part(s.field(), s.rho, g_sub.cols());
            for (std::uint32_t rrow = 0; rrow < s.rho; ++rrow)
                for (std::size_t c = 0; c < g_sub.cols(); ++c)
                    key_part.at(rrow, c) = g_sub.at(kt + rrow, c);
            Matrix both(s.field(), kt + s.rho, g_sub.cols());
            for (std::size_t rrow = 0; rrow < kt + s.rho; ++rrow)
                for (std::size_t c = 0; c < g_sub.cols(); ++c)
                    both.at(rrow, c) = g_sub.at(rrow, c);
            if (rank(key_part) != rank(both)) {
                v.secure = false;
                std::string which;
                for (std::uint32_t id : subset) which += std::to_string(id) + " ";
                v.failures.push_back("shares of nodes " + which + "leak message information");
            }
        }
    }
    return v;
}

}  // namespace secrep
