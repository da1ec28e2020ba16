#include "secrep/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace secrep {

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::C2: return "c2";
        case Protocol::C4: return "c4";
        case Protocol::C5: return "c5";
    }
    return "?";
}

Protocol protocol_from_string(const std::string& name) {
    if (name == "c2") return Protocol::C2;
    if (name == "c4") return Protocol::C4;
    if (name == "c5") return Protocol::C5;
    throw std::invalid_argument("unknown protocol '" + name + "' (expected c2, c4 or c5)");
}

void Transcript::reset(std::uint32_t n) {
    messages.clear();
    pool.clear();
    if (coins.size() != n) coins.resize(n);
    for (auto& per_node : coins) per_node.clear();
    repaired_node = 0;
    repaired.clear();
}

std::vector<std::uint32_t> Transcript::payload(const ProtocolMessage& m) const {
    return {pool.begin() + m.offset, pool.begin() + m.offset + m.length};
}

std::vector<std::uint32_t> Transcript::received(std::uint32_t node) const {
    std::vector<std::uint32_t> out;
    for (const ProtocolMessage& m : messages)
        if (m.to == node)
            out.insert(out.end(), pool.begin() + m.offset, pool.begin() + m.offset + m.length);
    return out;
}

SeededCoins::SeededCoins(std::uint64_t seed, PrimeField field) : seed_(seed), field_(field) {}

std::uint32_t SeededCoins::draw(std::uint32_t node) {
    auto it = streams_.find(node);
    if (it == streams_.end()) it = streams_.emplace(node, Rng::split(seed_, node)).first;
    return it->second.below(field_.order());
}

std::uint32_t TapeCoins::draw(std::uint32_t) {
    if (pos_ >= tape_->size()) throw std::logic_error("coin tape exhausted");
    return (*tape_)[pos_++];
}

LinearScheme c2_mask_scheme(std::uint32_t z, PrimeField field, std::vector<Fp> points) {
    const std::uint32_t n = z + 1;
    if (field.order() <= n) throw std::invalid_argument("field too small for z+1 pieces");
    if (points.empty())
        for (std::uint32_t i = 0; i <= z; ++i) points.emplace_back(i, field);
    if (points.size() != n) throw std::invalid_argument("need z+1 sub-scheme points");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j])
                throw std::invalid_argument("sub-scheme points must be distinct");
    // share at b = sum_l u_l b^(l-1) + c b^z; generator row 0 is the message
    const Matrix powers = power_matrix(points, z + 1);
    Matrix gen(field, z + 1, n);
    for (std::uint32_t j = 0; j < n; ++j) {
        gen.at(0, j) = powers.at(z, j);
        for (std::uint32_t l = 1; l <= z; ++l) gen.at(l, j) = powers.at(l - 1, j);
    }
    SchemeParams p{n, 1, 0, z, 1, field.order()};
    LinearScheme mask = generic_scheme(p, std::move(gen), z);
    mask.alphas = std::move(points);
    return mask;
}

LinearScheme c4_mask_scheme(std::uint32_t n, std::uint32_t z, PrimeField field,
                            std::vector<Fp> alphas) {
    if (alphas.empty())
        for (std::uint32_t i = 1; i <= n; ++i) alphas.emplace_back(i, field);
    return ramp_scheme(n, 0, z, std::move(alphas));
}

namespace {

std::vector<std::uint32_t> all_nodes(std::uint32_t n) {
    std::vector<std::uint32_t> out(n);
    for (std::uint32_t i = 0; i < n; ++i) out[i] = i + 1;
    return out;
}

void check_plan_shape(const LinearScheme& s, const RepairPlan& plan) {
    if (plan.e < 1 || plan.e > s.params.n) throw std::invalid_argument("failed node out of range");
    if (plan.helpers.empty()) throw std::invalid_argument("plan has no helpers");
    for (std::uint32_t i : plan.helpers) {
        if (i < 1 || i > s.params.n) throw std::invalid_argument("helper out of range");
        if (i == plan.e) throw std::invalid_argument("failed node cannot be its own helper");
    }
    for (std::uint32_t c : plan.coords)
        if (c < 1 || c > s.params.t) throw std::invalid_argument("plan coordinate out of range");
    if (plan.coeffs.rows() != s.params.t ||
        plan.coeffs.cols() != plan.helpers.size() * plan.coords.size())
        throw std::invalid_argument("plan coefficient matrix has the wrong shape");
}

}  // namespace

PreparedRepair prepare_repair(const LinearScheme& s, Protocol kind, RepairPlan plan,
                              std::vector<std::uint32_t> receivers) {
    check_plan_shape(s, plan);
    const std::uint32_t n = s.params.n;
    const std::uint32_t z = s.params.z;
    const PrimeField f = s.field();

    if (kind == Protocol::C2 || kind == Protocol::C4) {
        if (s.params.t != 1) throw std::invalid_argument("scalar protocol on a vector scheme");
        if (plan.coords != std::vector<std::uint32_t>{1})
            throw std::invalid_argument("scalar plans use J = {1}");
    }

    PreparedRepair prep{kind, std::move(plan), {}, c2_mask_scheme(z, f), Matrix(f, 1, 1), 1, 0};
    switch (kind) {
        case Protocol::C2: {
            if (receivers.empty()) throw std::invalid_argument("receivers required");
            if (receivers.size() != std::size_t(z) + 1)
                throw std::invalid_argument("need exactly z+1 receivers");
            for (std::uint32_t j : receivers)
                if (j < 1 || j > n) throw std::invalid_argument("receiver out of range");
            for (std::size_t i = 0; i < receivers.size(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (receivers[i] == receivers[j])
                        throw std::invalid_argument("receivers must be distinct");
            prep.receivers = std::move(receivers);
            prep.mask_decoder = decoding_matrix(prep.mask, all_nodes(z + 1));
            prep.instances_used = 1;
            prep.coin_count = static_cast<std::uint32_t>(prep.plan.helpers.size()) * z;
            break;
        }
        case Protocol::C4:
        case Protocol::C5: {
            prep.mask = c4_mask_scheme(n, z, f);
            prep.mask_decoder = decoding_matrix(prep.mask, all_nodes(n));
            prep.instances_used = n - z;
            const std::uint32_t groups =
                static_cast<std::uint32_t>(prep.plan.helpers.size() * prep.plan.coords.size());
            prep.coin_count = (kind == Protocol::C4)
                                  ? static_cast<std::uint32_t>(prep.plan.helpers.size()) * z
                                  : groups * z;
            break;
        }
    }
    return prep;
}

namespace {

// mask shares are scalars (t = 1); writes all n of them without allocating
void encode_mask_into(const LinearScheme& mask, const FpVec& msg, const FpVec& keys,
                      FpVec& out) {
    out.clear();
    for (std::size_t col = 0; col < mask.generator.cols(); ++col) {
        Fp acc(0, mask.field());
        for (std::size_t row = 0; row < msg.size(); ++row)
            acc += msg[row] * mask.generator.at(row, col);
        for (std::size_t row = 0; row < keys.size(); ++row)
            acc += keys[row] * mask.generator.at(msg.size() + row, col);
        out.push_back(acc);
    }
}

void shape_repaired(Transcript& tr, std::uint32_t n_inst, std::uint32_t t) {
    if (tr.repaired.size() != n_inst) tr.repaired.resize(n_inst);
    for (auto& per_inst : tr.repaired) per_inst.assign(t, 0);
}

void append_message(Transcript& tr, std::uint32_t from, std::uint32_t to, std::uint32_t round,
                    const Fp* values, std::uint32_t count) {
    ProtocolMessage m{from, to, round, static_cast<std::uint32_t>(tr.pool.size()), count};
    for (std::uint32_t i = 0; i < count; ++i) tr.pool.push_back(values[i].value());
    tr.messages.push_back(m);
}

void require_alive(const Network& net, std::uint32_t node, const char* role) {
    if (!net.alive[node - 1])
        throw std::invalid_argument(std::string(role) + " node " + std::to_string(node) +
                                    " is not alive");
}

BandwidthReport finalize(Transcript& tr, std::uint64_t repaired_symbols) {
    BandwidthReport bw;
    for (const ProtocolMessage& m : tr.messages) {
        if (m.round == 1)
            bw.round1_symbols += m.length;
        else
            bw.round2_symbols += m.length;
    }
    bw.total_symbols = bw.round1_symbols + bw.round2_symbols;
    bw.symbols_repaired = repaired_symbols;
    bw.normalized = repaired_symbols == 0
                        ? Rational(0)
                        : Rational(static_cast<std::int64_t>(bw.total_symbols),
                                   static_cast<std::int64_t>(repaired_symbols));
    return bw;
}

}  // namespace

BandwidthReport execute_repair(const PreparedRepair& prep, const Network& net, CoinSource& coins,
                               Transcript& tr) {
    const LinearScheme& s = net.scheme;
    const std::uint32_t n = s.params.n;
    const std::uint32_t t = s.params.t;
    const std::uint32_t z = s.params.z;
    const PrimeField f = s.field();
    const RepairPlan& plan = prep.plan;
    const std::uint32_t e = plan.e;

    if (net.n_instances < prep.instances_used)
        throw std::invalid_argument("network holds too few instances for this protocol");
    if (prep.kind == Protocol::C2 && net.n_instances != 1)
        throw std::invalid_argument("single-share repair expects a one-instance network");
    for (std::uint32_t i : plan.helpers) require_alive(net, i, "helper");

    tr.reset(n);
    tr.repaired_node = e;

    // per-thread scratch so enumeration-scale run counts stay allocation-free
    static thread_local FpVec mask_keys, mask_msg, enc;
    static thread_local std::vector<FpVec> pieces, distilled;
    const std::uint32_t n_inst = prep.instances_used;
    mask_keys.assign(z, Fp(0, f));
    mask_msg.assign(prep.mask.params.k, Fp(0, f));

    if (prep.kind == Protocol::C2) {
        for (std::uint32_t j : prep.receivers)
            if (j != e) require_alive(net, j, "receiver");

        // round 1: each helper splits its share into z+1 pieces, one per receiver
        const std::uint32_t n_recv = z + 1;
        if (pieces.size() < n_recv) pieces.resize(n_recv);
        for (std::uint32_t kk = 0; kk < n_recv; ++kk) pieces[kk].clear();
        for (std::size_t h = 0; h < plan.helpers.size(); ++h) {
            const std::uint32_t i = plan.helpers[h];
            for (std::uint32_t l = 0; l < z; ++l) {
                const std::uint32_t c = coins.draw(i);
                tr.coins[i - 1].push_back(c);
                mask_keys[l] = Fp(c, f);
            }
            mask_msg[0] = net.stack_at(i, 0, 1);
            encode_mask_into(prep.mask, mask_msg, mask_keys, enc);
            for (std::uint32_t kk = 0; kk < n_recv; ++kk) {
                pieces[kk].push_back(enc[kk]);
                const std::uint32_t j = prep.receivers[kk];
                if (j != i) append_message(tr, i, j, 1, &enc[kk], 1);
            }
        }

        // round 2: every receiver distills its pieces through f and forwards
        shape_repaired(tr, 1, 1);
        Fp repaired(0, f);
        for (std::uint32_t kk = 0; kk < n_recv; ++kk) {
            Fp v(0, f);
            for (std::size_t h = 0; h < plan.helpers.size(); ++h)
                v += plan.coeffs.at(0, h) * pieces[kk][h];
            const std::uint32_t j = prep.receivers[kk];
            if (j != e) append_message(tr, j, e, 2, &v, 1);
            // node e decodes the mask scheme; the result is exactly c_e
            repaired += prep.mask_decoder.at(kk, 0) * v;
        }
        tr.repaired[0][0] = repaired.value();
        return finalize(tr, 1);
    }

    // C4 and C5: every node is a receiver, so everyone but e must be alive
    for (std::uint32_t j = 1; j <= n; ++j)
        if (j != e) require_alive(net, j, "receiver");

    static const std::vector<std::uint32_t> scalar_coord{1};
    const std::vector<std::uint32_t>& coords =
        prep.kind == Protocol::C4 ? scalar_coord : plan.coords;
    const std::size_t groups = plan.helpers.size() * coords.size();

    // round 1: for each helper and plan coordinate, the n-z instance values
    // ride one ramp codeword; piece k goes to node k (self-pieces are free)
    if (pieces.size() < n) pieces.resize(n);
    for (std::uint32_t j = 0; j < n; ++j) pieces[j].clear();
    for (std::size_t h = 0; h < plan.helpers.size(); ++h) {
        const std::uint32_t i = plan.helpers[h];
        for (std::uint32_t jc : coords) {
            for (std::uint32_t l = 0; l < z; ++l) {
                const std::uint32_t c = coins.draw(i);
                tr.coins[i - 1].push_back(c);
                mask_keys[l] = Fp(c, f);
            }
            for (std::uint32_t inst = 0; inst < n_inst; ++inst)
                mask_msg[inst] = net.stack_at(i, inst, jc);
            encode_mask_into(prep.mask, mask_msg, mask_keys, enc);
            for (std::uint32_t kk = 1; kk <= n; ++kk) {
                pieces[kk - 1].push_back(enc[kk - 1]);
                if (kk != i) append_message(tr, i, kk, 1, &enc[kk - 1], 1);
            }
        }
    }

    // round 2: every node applies f to its pieces and forwards the t outputs
    if (distilled.size() < n) distilled.resize(n);
    for (std::uint32_t kk = 1; kk <= n; ++kk) {
        FpVec& out = distilled[kk - 1];
        out.clear();
        for (std::uint32_t oc = 0; oc < t; ++oc) {
            Fp v(0, f);
            for (std::size_t g = 0; g < groups; ++g)
                v += plan.coeffs.at(oc, g) * pieces[kk - 1][g];
            out.push_back(v);
        }
        if (kk != e) append_message(tr, kk, e, 2, out.data(), t);
    }

    // node e decodes one ramp codeword per coordinate
    shape_repaired(tr, n_inst, t);
    for (std::uint32_t oc = 0; oc < t; ++oc) {
        for (std::uint32_t inst = 0; inst < n_inst; ++inst) {
            Fp v(0, f);
            for (std::uint32_t kk = 0; kk < n; ++kk)
                v += prep.mask_decoder.at(kk, inst) * distilled[kk][oc];
            tr.repaired[inst][oc] = v.value();
        }
    }
    return finalize(tr, std::uint64_t(n_inst) * t);
}

RepairResult run_c2(const Network& net, const RepairPlan& plan,
                    const std::vector<std::uint32_t>& receivers, CoinSource& coins) {
    const PreparedRepair prep = prepare_repair(net.scheme, Protocol::C2, plan, receivers);
    RepairResult res;
    res.bandwidth = execute_repair(prep, net, coins, res.transcript);
    return res;
}

RepairResult run_c4(const Network& net, const RepairPlan& plan, CoinSource& coins) {
    const PreparedRepair prep = prepare_repair(net.scheme, Protocol::C4, plan);
    RepairResult res;
    res.bandwidth = execute_repair(prep, net, coins, res.transcript);
    return res;
}

RepairResult run_c5(const Network& net, const RepairPlan& plan, CoinSource& coins) {
    const PreparedRepair prep = prepare_repair(net.scheme, Protocol::C5, plan);
    RepairResult res;
    res.bandwidth = execute_repair(prep, net, coins, res.transcript);
    return res;
}

std::vector<std::uint32_t> default_receivers(const Network& net, const RepairPlan& plan) {
    const std::uint32_t want = net.scheme.params.z + 1;
    std::vector<std::uint32_t> out;
    auto take = [&](std::uint32_t j) {
        if (out.size() < want && std::find(out.begin(), out.end(), j) == out.end())
            out.push_back(j);
    };
    for (std::uint32_t i : plan.helpers) take(i);
    for (std::uint32_t j = 1; j <= net.n(); ++j)
        if (net.alive[j - 1] && j != plan.e) take(j);
    take(plan.e);
    if (out.size() < want)
        throw UnrepairableError("fewer than z+1 nodes available to receive pieces");
    return out;
}

RepairPlan default_plan(const Network& net, std::uint32_t e,
                        const std::vector<RepairPlan>& declared) {
    const LinearScheme& s = net.scheme;
    for (const RepairPlan& p : declared) {
        if (p.e != e) continue;
        const bool helpers_live = std::all_of(p.helpers.begin(), p.helpers.end(),
                                              [&](std::uint32_t i) { return net.alive[i - 1]; });
        if (helpers_live) return p;
    }
    std::vector<std::uint32_t> live;
    for (std::uint32_t i = 1; i <= net.n(); ++i)
        if (net.alive[i - 1] && i != e) live.push_back(i);
    std::vector<std::uint32_t> full_j;
    for (std::uint32_t c = 1; c <= s.params.t; ++c) full_j.push_back(c);
    for (std::uint32_t size = 1; size <= live.size(); ++size) {
        for (const auto& pick : all_subsets(static_cast<std::uint32_t>(live.size()), size)) {
            std::vector<std::uint32_t> helpers;
            for (std::uint32_t idx : pick) helpers.push_back(live[idx - 1]);
            try {
                return derive_repair_function(s, e, helpers, full_j);
            } catch (const NoRepairFunction&) {
            }
        }
    }
    throw UnrepairableError("no linear repair function exists from the live nodes for node " +
                            std::to_string(e));
}

std::vector<RepairResult> repair_all_failures(Network& net, Protocol kind, CoinSource& coins,
                                              const std::vector<RepairPlan>& declared) {
    std::vector<RepairResult> results;
    for (std::uint32_t e = 1; e <= net.n(); ++e) {
        if (net.alive[e - 1]) continue;
        const RepairPlan plan = default_plan(net, e, declared);
        std::vector<std::uint32_t> receivers;
        if (kind == Protocol::C2) receivers = default_receivers(net, plan);
        const PreparedRepair prep = prepare_repair(net.scheme, kind, plan, receivers);
        if (net.n_instances != prep.instances_used)
            throw UnrepairableError("protocol repairs " + std::to_string(prep.instances_used) +
                                    " instances but nodes hold " +
                                    std::to_string(net.n_instances));
        RepairResult res;
        res.bandwidth = execute_repair(prep, net, coins, res.transcript);
        restore_node(net, e, res.transcript.repaired);
        results.push_back(std::move(res));
    }
    return results;
}

std::vector<std::uint32_t> AdversaryView::flat() const {
    std::vector<std::uint32_t> out = shares;
    out.insert(out.end(), coins.begin(), coins.end());
    out.insert(out.end(), received.begin(), received.end());
    return out;
}

AdversaryView adversary_view(const Transcript& tr, const Network& net,
                             const std::vector<std::uint32_t>& adversary) {
    AdversaryView view;
    std::vector<std::uint32_t> sorted = adversary;
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t a : sorted) {
        if (a < 1 || a > net.n()) throw std::invalid_argument("unknown node id in adversary set");
        for (const Fp& v : net.stacks[a - 1]) view.shares.push_back(v.value());
        view.coins.insert(view.coins.end(), tr.coins[a - 1].begin(), tr.coins[a - 1].end());
        const std::vector<std::uint32_t> d = tr.received(a);
        view.received.insert(view.received.end(), d.begin(), d.end());
    }
    return view;
}

}  // namespace secrep
