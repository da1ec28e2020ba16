#include "secrep/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace secrep {

Marginal DistributionTable::message_marginal() const {
    Marginal m;
    m.reserve(counts.size());
    for (const auto& [key, count] : counts) m[message_of(key)] += count;
    return m;
}

Marginal DistributionTable::view_marginal() const {
    Marginal m;
    m.reserve(counts.size());
    for (const auto& [key, count] : counts) m[view_of(key)] += count;
    return m;
}

void DistributionTable::merge(DistributionTable&& other) {
    total += other.total;
    counts.reserve(counts.size() + other.counts.size());
    for (const auto& [key, count] : other.counts) counts[key] += count;
    other.counts.clear();
}

bool check_independence(const DistributionTable& table) {
    // every observed cell must factorize exactly; because counts sum to the
    // total, this also rules out empty cells with both marginals positive
    const Marginal cm = table.message_marginal();
    const Marginal cv = table.view_marginal();
    for (const auto& [key, count] : table.counts) {
        const unsigned __int128 lhs = static_cast<unsigned __int128>(count) * table.total;
        const unsigned __int128 rhs =
            static_cast<unsigned __int128>(cm.at(DistributionTable::message_of(key))) *
            cv.at(DistributionTable::view_of(key));
        if (lhs != rhs) return false;
    }
    return true;
}

bool deterministic_given_view(const DistributionTable& table) {
    std::unordered_map<std::uint64_t, std::uint64_t> seen;
    for (const auto& [key, count] : table.counts) {
        (void)count;
        const auto [it, inserted] =
            seen.emplace(DistributionTable::view_of(key), DistributionTable::message_of(key));
        if (!inserted && it->second != DistributionTable::message_of(key)) return false;
    }
    return true;
}

double entropy_base_q(const Marginal& marginal, std::uint64_t total, std::uint32_t q) {
    double h = 0.0;
    for (const auto& [value, count] : marginal) {
        (void)value;
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(q));
}

bool exactly_uniform(const Marginal& marginal, std::uint64_t support) {
    if (marginal.size() != support || marginal.empty()) return false;
    const std::uint64_t first = marginal.begin()->second;
    for (const auto& [value, count] : marginal) {
        (void)value;
        if (count != first) return false;
    }
    return true;
}

std::vector<std::uint32_t> unpack_tuple(std::uint64_t code, std::uint32_t len, std::uint32_t q) {
    std::vector<std::uint32_t> out(len);
    for (std::uint32_t i = 0; i < len; ++i) {
        out[i] = static_cast<std::uint32_t>(code % q);
        code /= q;
    }
    return out;
}

namespace {

constexpr std::uint64_t kNoOverflowLimit = std::uint64_t(1) << 62;

std::uint64_t pow_saturating(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (out > kNoOverflowLimit / base) return std::numeric_limits<std::uint64_t>::max();
        out *= base;
    }
    return out;
}

std::uint64_t pack_tuple(const std::vector<std::uint32_t>& syms, std::uint32_t q) {
    std::uint64_t code = 0;
    for (std::size_t i = syms.size(); i-- > 0;) code = code * q + syms[i];
    return code;
}

std::vector<std::uint32_t> enum_receivers(const LinearScheme& s, const RepairPlan& plan,
                                          const EnumOptions& opt) {
    if (!opt.receivers.empty()) return opt.receivers;
    const std::uint32_t want = s.params.z + 1;
    std::vector<std::uint32_t> out;
    auto take = [&](std::uint32_t j) {
        if (out.size() < want && std::find(out.begin(), out.end(), j) == out.end())
            out.push_back(j);
    };
    for (std::uint32_t i : plan.helpers) take(i);
    for (std::uint32_t j = 1; j <= s.params.n; ++j)
        if (j != plan.e) take(j);
    take(plan.e);
    return out;
}

// Everything fixed across the outcome loop of one enumeration.
struct EnumSetup {
    LinearScheme scheme;
    PreparedRepair prep;
    std::uint32_t n_inst_total = 1;
    std::uint32_t n_inst_enum = 1;
    std::uint32_t sym_per_inst = 0;  // k*t + rho
    std::uint32_t coin_digits = 0;
    std::uint32_t n_digits = 0;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> pow;  // q^i
};

EnumSetup make_setup(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                     const EnumOptions& opt) {
    EnumSetup setup{s,
                    prepare_repair(s, kind, plan,
                                   kind == Protocol::C2 ? enum_receivers(s, plan, opt)
                                                        : std::vector<std::uint32_t>{}),
                    1, 1, 0, 0, 0, 0, {}};
    setup.n_inst_total = setup.prep.instances_used;
    setup.n_inst_enum = opt.instances_enumerated == 0
                            ? setup.n_inst_total
                            : std::min(opt.instances_enumerated, setup.n_inst_total);
    setup.sym_per_inst = static_cast<std::uint32_t>(s.message_symbols()) + s.rho;
    setup.coin_digits = setup.prep.coin_count;
    setup.n_digits = setup.n_inst_enum * setup.sym_per_inst + setup.coin_digits;
    setup.total = pow_saturating(s.params.q, setup.n_digits);
    if (setup.total > opt.budget) throw BudgetExceeded(setup.total, opt.budget);
    setup.pow.resize(setup.n_digits + 1);
    setup.pow[0] = 1;
    for (std::uint32_t i = 1; i <= setup.n_digits; ++i)
        setup.pow[i] = setup.pow[i - 1] * s.params.q;
    return setup;
}

// Per-thread scratch: a zero network whose enumerated instances are rewritten
// every outcome; fixed instances stay the all-zero codeword.
struct EnumWorker {
    explicit EnumWorker(const EnumSetup& setup)
        : net{setup.scheme, setup.n_inst_total,
              std::vector<FpVec>(setup.scheme.params.n,
                                 FpVec(std::size_t(setup.n_inst_total) * setup.scheme.params.t,
                                       Fp(0, setup.scheme.field()))),
              std::vector<bool>(setup.scheme.params.n, true)},
          x(setup.sym_per_inst, Fp(0, setup.scheme.field())),
          tape(setup.coin_digits, 0),
          coins(&tape) {}

    Network net;
    FpVec x;  // (message || keys) of one instance
    std::vector<std::uint32_t> tape;
    TapeCoins coins;
    Transcript tr;

    // Decodes the outcome index, refreshes the network and runs the protocol.
    // Returns the packed message tuple across all instances.
    std::uint64_t run(const EnumSetup& setup, std::uint64_t idx) {
        const LinearScheme& s = setup.scheme;
        const std::uint32_t q = s.params.q;
        const std::uint32_t kt = static_cast<std::uint32_t>(s.message_symbols());
        std::uint64_t m_code = 0;
        std::uint64_t m_weight = 1;
        for (std::uint32_t inst = 0; inst < setup.n_inst_enum; ++inst) {
            const std::uint32_t base = inst * setup.sym_per_inst;
            for (std::uint32_t j = 0; j < setup.sym_per_inst; ++j) {
                const std::uint32_t digit =
                    static_cast<std::uint32_t>((idx / setup.pow[base + j]) % q);
                x[j] = Fp(digit, s.field());
                if (j < kt) {
                    m_code += digit * m_weight;
                    m_weight *= q;
                }
            }
            // fixed instances contribute zero digits to the message code
            encode_instance(s, inst);
        }
        const std::uint32_t coin_base = setup.n_inst_enum * setup.sym_per_inst;
        for (std::uint32_t j = 0; j < setup.coin_digits; ++j)
            tape[j] = static_cast<std::uint32_t>((idx / setup.pow[coin_base + j]) % q);
        coins.rewind();
        execute_repair(setup.prep, net, coins, tr);
        return m_code;
    }

private:
    void encode_instance(const LinearScheme& s, std::uint32_t inst) {
        const std::uint32_t t = s.params.t;
        const std::size_t cols = s.generator.cols();
        for (std::size_t col = 0; col < cols; ++col) {
            Fp acc(0, s.field());
            for (std::size_t row = 0; row < x.size(); ++row)
                acc += x[row] * s.generator.at(row, col);
            net.stacks[col / t][std::size_t(inst) * t + col % t] = acc;
        }
    }
};

// Partitions [0, total) over the workers; fn(worker, idx, m_code) must only
// touch per-thread state. Table merging afterwards is count addition, so any
// partitioning yields the identical result.
template <class MakeState, class PerOutcome>
auto enumerate_parallel(const EnumSetup& setup, std::uint32_t threads_opt, MakeState make_state,
                        PerOutcome fn) {
    std::uint32_t threads = threads_opt ? threads_opt : std::thread::hardware_concurrency();
    if (threads < 1) threads = 1;
    if (setup.total < 4096) threads = 1;
    using State = decltype(make_state());
    std::vector<State> states;
    states.reserve(threads);
    for (std::uint32_t i = 0; i < threads; ++i) states.push_back(make_state());
    std::atomic<bool> stop{false};

    auto body = [&](std::uint32_t who, std::uint64_t begin, std::uint64_t end) {
        EnumWorker worker(setup);
        for (std::uint64_t idx = begin; idx < end && !stop.load(std::memory_order_relaxed);
             ++idx) {
            const std::uint64_t m_code = worker.run(setup, idx);
            if (!fn(states[who], worker, m_code)) {
                stop.store(true, std::memory_order_relaxed);
                break;
            }
        }
    };

    if (threads == 1) {
        body(0, 0, setup.total);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (setup.total + threads - 1) / threads;
        for (std::uint32_t i = 0; i < threads; ++i) {
            const std::uint64_t begin = std::uint64_t(i) * chunk;
            const std::uint64_t end = std::min(setup.total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(body, i, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }
    return states;
}

void require_packable(std::uint32_t q, std::size_t len, const char* what) {
    if (pow_saturating(q, len) == std::numeric_limits<std::uint64_t>::max())
        throw std::invalid_argument(std::string(what) + " tuple too wide to enumerate exactly");
}

// Packs (c_A, u_A, d_A) base q in the same symbol order as
// AdversaryView::flat(), without materializing the view.
std::pair<std::uint64_t, std::uint32_t> pack_view(const Transcript& tr, const Network& net,
                                                  const std::vector<std::uint32_t>& sorted,
                                                  std::uint32_t q) {
    std::uint64_t code = 0;
    std::uint64_t weight = 1;
    std::uint32_t len = 0;
    auto put = [&](std::uint32_t sym) {
        code += sym * weight;
        weight *= q;
        ++len;
    };
    for (std::uint32_t a : sorted)
        for (const Fp& v : net.stacks[a - 1]) put(v.value());
    for (std::uint32_t a : sorted)
        for (std::uint32_t c : tr.coins[a - 1]) put(c);
    for (std::uint32_t a : sorted)
        for (const ProtocolMessage& m : tr.messages)
            if (m.to == a)
                for (std::uint32_t i = 0; i < m.length; ++i) put(tr.pool[m.offset + i]);
    return {code, len};
}

}  // namespace

std::uint64_t enumeration_outcomes(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                                   const EnumOptions& opt) {
    const PreparedRepair prep = prepare_repair(
        s, kind, plan,
        kind == Protocol::C2 ? enum_receivers(s, plan, opt) : std::vector<std::uint32_t>{});
    const std::uint32_t total_inst = prep.instances_used;
    const std::uint32_t enum_inst =
        opt.instances_enumerated == 0 ? total_inst : std::min(opt.instances_enumerated, total_inst);
    const std::uint64_t digits =
        std::uint64_t(enum_inst) * (s.message_symbols() + s.rho) + prep.coin_count;
    return pow_saturating(s.params.q, digits);
}

DistributionTable enumerate_protocol(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                                     const std::vector<std::uint32_t>& adversary,
                                     const EnumOptions& opt) {
    const EnumSetup setup = make_setup(s, kind, plan, opt);
    const std::uint32_t message_len =
        static_cast<std::uint32_t>(s.message_symbols()) * setup.n_inst_total;
    require_packable(s.params.q, message_len, "message");

    std::vector<std::uint32_t> sorted = adversary;
    std::sort(sorted.begin(), sorted.end());

    auto states = enumerate_parallel(
        setup, opt.threads, [] { return DistributionTable{}; },
        [&](DistributionTable& table, EnumWorker& worker, std::uint64_t m_code) {
            const auto [v_code, v_len] = pack_view(worker.tr, worker.net, sorted, s.params.q);
            if (table.total == 0) {
                require_packable(s.params.q, v_len, "view");
                // every outcome in this thread's slice can be a fresh cell
                table.counts.reserve(static_cast<std::size_t>(
                    std::min<std::uint64_t>(setup.total, std::uint64_t(1) << 22)));
            }
            table.view_len = v_len;
            ++table.counts[DistributionTable::key(m_code, v_code)];
            ++table.total;
            return true;
        });

    DistributionTable table = std::move(states.front());
    for (std::size_t i = 1; i < states.size(); ++i) {
        table.view_len = std::max(table.view_len, states[i].view_len);
        table.merge(std::move(states[i]));
    }
    table.q = s.params.q;
    table.message_len = message_len;
    return table;
}

bool check_repairability(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                         const EnumOptions& opt) {
    const EnumSetup setup = make_setup(s, kind, plan, opt);
    struct State {
        bool exact = true;
        std::unordered_map<std::uint64_t, std::uint64_t> repaired_by_de;
    };
    const std::uint32_t e = plan.e;
    const std::uint32_t t = s.params.t;

    const std::uint32_t q = s.params.q;
    auto states = enumerate_parallel(
        setup, opt.threads, [] { return State{}; },
        [&](State& st, EnumWorker& worker, std::uint64_t) {
            // the repaired values must equal the lost share exactly
            const FpVec& truth = worker.net.stacks[e - 1];
            for (std::uint32_t inst = 0; inst < setup.prep.instances_used; ++inst)
                for (std::uint32_t c = 0; c < t; ++c)
                    if (worker.tr.repaired[inst][c] != truth[std::size_t(inst) * t + c].value()) {
                        st.exact = false;
                        return false;
                    }
            // and be a function of d_e alone: same received data, same output
            std::uint64_t de_code = 0, de_weight = 1;
            std::uint32_t de_len = 0;
            for (const ProtocolMessage& m : worker.tr.messages)
                if (m.to == e)
                    for (std::uint32_t i = 0; i < m.length; ++i) {
                        de_code += worker.tr.pool[m.offset + i] * de_weight;
                        de_weight *= q;
                        ++de_len;
                    }
            std::uint64_t rep_code = 0, rep_weight = 1;
            std::uint32_t rep_len = 0;
            for (const auto& inst : worker.tr.repaired)
                for (std::uint32_t v : inst) {
                    rep_code += v * rep_weight;
                    rep_weight *= q;
                    ++rep_len;
                }
            if (st.repaired_by_de.empty()) {
                require_packable(q, de_len, "received");
                require_packable(q, rep_len, "repaired");
                st.repaired_by_de.reserve(4096);
            }
            const auto [it, inserted] = st.repaired_by_de.emplace(de_code, rep_code);
            if (!inserted && it->second != rep_code) {
                st.exact = false;
                return false;
            }
            return true;
        });

    std::unordered_map<std::uint64_t, std::uint64_t> merged;
    for (const State& st : states) {
        if (!st.exact) return false;
        for (const auto& [de, rep] : st.repaired_by_de) {
            const auto [it, inserted] = merged.emplace(de, rep);
            if (!inserted && it->second != rep) return false;
        }
    }
    return true;
}

Marginal distilled_marginal(const LinearScheme& s, Protocol kind, const RepairPlan& plan,
                            const std::vector<std::uint32_t>& adversary, const EnumOptions& opt) {
    for (std::uint32_t a : adversary)
        if (a == plan.e)
            throw std::invalid_argument("distilled values of the failed node are not messages");
    const EnumSetup setup = make_setup(s, kind, plan, opt);
    std::vector<std::uint32_t> sorted = adversary;
    std::sort(sorted.begin(), sorted.end());

    auto states = enumerate_parallel(
        setup, opt.threads, [] { return Marginal{}; },
        [&](Marginal& marginal, EnumWorker& worker, std::uint64_t) {
            std::vector<std::uint32_t> tuple;
            for (std::uint32_t a : sorted)
                for (const ProtocolMessage& m : worker.tr.messages)
                    if (m.round == 2 && m.from == a) {
                        const auto payload = worker.tr.payload(m);
                        tuple.insert(tuple.end(), payload.begin(), payload.end());
                    }
            require_packable(s.params.q, tuple.size(), "distilled");
            ++marginal[pack_tuple(tuple, s.params.q)];
            return true;
        });

    Marginal out = std::move(states.front());
    for (std::size_t i = 1; i < states.size(); ++i)
        for (const auto& [k, v] : states[i]) out[k] += v;
    return out;
}

namespace {

// Single-instance walk over all q^(k*t + rho) encodings of the bare scheme.
template <class Fn>
void for_each_encoding(const LinearScheme& s, std::uint64_t budget, Fn&& fn) {
    const std::uint32_t q = s.params.q;
    const std::uint32_t digits = static_cast<std::uint32_t>(s.message_symbols()) + s.rho;
    const std::uint64_t total = pow_saturating(q, digits);
    if (total > budget) throw BudgetExceeded(total, budget);
    FpVec x(digits, Fp(0, s.field()));
    FpVec flat(s.generator.cols(), Fp(0, s.field()));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rest = idx;
        std::uint64_t m_code = 0;
        std::uint64_t m_weight = 1;
        for (std::uint32_t j = 0; j < digits; ++j) {
            const std::uint32_t digit = static_cast<std::uint32_t>(rest % q);
            rest /= q;
            x[j] = Fp(digit, s.field());
            if (j < s.message_symbols()) {
                m_code += digit * m_weight;
                m_weight *= q;
            }
        }
        for (std::size_t col = 0; col < flat.size(); ++col) {
            Fp acc(0, s.field());
            for (std::size_t row = 0; row < x.size(); ++row)
                acc += x[row] * s.generator.at(row, col);
            flat[col] = acc;
        }
        fn(m_code, flat);
    }
}

}  // namespace

DistributionTable scheme_message_share_table(const LinearScheme& s,
                                             const std::vector<std::uint32_t>& adversary,
                                             std::uint64_t budget) {
    std::vector<std::uint32_t> sorted = adversary;
    std::sort(sorted.begin(), sorted.end());
    DistributionTable table;
    table.q = s.params.q;
    table.message_len = static_cast<std::uint32_t>(s.message_symbols());
    table.view_len = static_cast<std::uint32_t>(sorted.size() * s.params.t);
    require_packable(s.params.q, table.message_len, "message");
    require_packable(s.params.q, table.view_len, "share");
    for_each_encoding(s, budget, [&](std::uint64_t m_code, const FpVec& flat) {
        std::vector<std::uint32_t> tuple;
        for (std::uint32_t a : sorted)
            for (std::uint32_t c = 1; c <= s.params.t; ++c)
                tuple.push_back(flat[s.share_col(a, c)].value());
        ++table.counts[DistributionTable::key(m_code, pack_tuple(tuple, s.params.q))];
        ++table.total;
    });
    return table;
}

Marginal scheme_share_marginal(const LinearScheme& s, const std::vector<std::uint32_t>& subset,
                               std::uint64_t budget) {
    std::vector<std::uint32_t> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    require_packable(s.params.q, sorted.size() * s.params.t, "share");
    Marginal out;
    for_each_encoding(s, budget, [&](std::uint64_t, const FpVec& flat) {
        std::vector<std::uint32_t> tuple;
        for (std::uint32_t a : sorted)
            for (std::uint32_t c = 1; c <= s.params.t; ++c)
                tuple.push_back(flat[s.share_col(a, c)].value());
        ++out[pack_tuple(tuple, s.params.q)];
    });
    return out;
}

std::optional<Rational> lower_bound_bandwidth(const SchemeParams& p, std::uint64_t w) {
    if (p.k != p.n - p.r - p.z) return std::nullopt;  // bound only claimed at rate-optimality
    if (p.n - p.z - 1 == 0) return std::nullopt;
    return Rational(static_cast<std::int64_t>(p.n - 1) * static_cast<std::int64_t>(w),
                    2 * static_cast<std::int64_t>(p.n - p.z - 1));
}

BoundsReport bounds_report(const LinearScheme& s, const RepairPlan& plan, Protocol kind,
                           const BandwidthReport& bw) {
    BoundsReport rep;
    rep.construction = s.construction;
    rep.params = s.params;
    rep.w = plan.helpers.size() * plan.coords.size();
    rep.rate_optimal = s.params.k == s.params.n - s.params.r - s.params.z;
    rep.lower = lower_bound_bandwidth(s.params, rep.w);
    rep.measured = bw.total_symbols;
    const std::int64_t isize = static_cast<std::int64_t>(plan.helpers.size());
    const std::int64_t jsize = static_cast<std::int64_t>(plan.coords.size());
    const std::int64_t n = s.params.n;
    const std::int64_t z = s.params.z;
    const std::int64_t t = s.params.t;
    switch (kind) {
        case Protocol::C2: rep.upper = Rational((isize + 1) * (z + 1)); break;
        case Protocol::C4: rep.upper = Rational((isize + 1) * n); break;
        case Protocol::C5: rep.upper = Rational((isize * jsize + t) * n); break;
    }
    if (rep.lower && *rep.lower != Rational(0))
        rep.ratio = Rational(static_cast<std::int64_t>(rep.measured)) / *rep.lower;
    return rep;
}

std::vector<VerifyCell> verify_scheme(const LinearScheme& s, Protocol kind,
                                      const std::vector<RepairPlan>& declared,
                                      const EnumOptions& opt) {
    // all-alive shell so plan derivation can reuse the network-level search
    Network shell{s, 1, std::vector<FpVec>(s.params.n), std::vector<bool>(s.params.n, true)};
    std::vector<VerifyCell> cells;
    for (std::uint32_t e = 1; e <= s.params.n; ++e) {
        fail_node(shell, e);
        const RepairPlan plan = default_plan(shell, e, declared);
        shell.alive[e - 1] = true;
        const bool repairable = check_repairability(s, kind, plan, opt);
        const std::uint64_t outcomes = enumeration_outcomes(s, kind, plan, opt);
        for (const auto& adversary : all_subsets(s.params.n, s.params.z)) {
            VerifyCell cell{e, adversary, false, repairable, outcomes};
            cell.independent = check_independence(enumerate_protocol(s, kind, plan, adversary, opt));
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace secrep
