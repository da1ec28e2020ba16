#include "secrep/network.hpp"

#include <stdexcept>

namespace secrep {

Network make_network(const LinearScheme& s, const std::vector<FpVec>& messages,
                     const std::vector<FpVec>& keys) {
    if (messages.empty() || messages.size() != keys.size())
        throw std::invalid_argument("need matching message and key vectors per instance");
    Network net{s, static_cast<std::uint32_t>(messages.size()),
                std::vector<FpVec>(s.params.n), std::vector<bool>(s.params.n, true)};
    for (std::size_t inst = 0; inst < messages.size(); ++inst) {
        const Shares shares = encode(s, messages[inst], keys[inst]);
        for (std::uint32_t i = 0; i < s.params.n; ++i)
            net.stacks[i].insert(net.stacks[i].end(), shares[i].begin(), shares[i].end());
    }
    return net;
}

Network random_network(const LinearScheme& s, std::uint32_t n_instances, Rng& rng) {
    std::vector<FpVec> messages, keys;
    for (std::uint32_t inst = 0; inst < n_instances; ++inst) {
        FpVec m, u;
        for (std::size_t i = 0; i < s.message_symbols(); ++i)
            m.push_back(uniform_element(rng, s.field()));
        for (std::uint32_t i = 0; i < s.rho; ++i) u.push_back(uniform_element(rng, s.field()));
        messages.push_back(std::move(m));
        keys.push_back(std::move(u));
    }
    return make_network(s, messages, keys);
}

void fail_node(Network& net, std::uint32_t e) {
    if (e < 1 || e > net.n()) throw std::invalid_argument("node id out of range");
    net.stacks[e - 1].clear();
    net.alive[e - 1] = false;
}

void restore_node(Network& net, std::uint32_t e,
                  const std::vector<std::vector<std::uint32_t>>& values) {
    if (e < 1 || e > net.n()) throw std::invalid_argument("node id out of range");
    FpVec stack;
    for (const auto& inst : values)
        for (std::uint32_t v : inst) stack.push_back(Fp(v, net.scheme.field()));
    net.stacks[e - 1] = std::move(stack);
    net.alive[e - 1] = true;
}

bool network_consistent(const Network& net) {
    const LinearScheme& s = net.scheme;
    std::vector<std::uint32_t> live;
    for (std::uint32_t i = 1; i <= net.n(); ++i)
        if (net.alive[i - 1]) live.push_back(i);
    for (std::uint32_t i : live)
        if (net.stacks[i - 1].size() != std::size_t(net.n_instances) * s.params.t) return false;
    std::vector<std::size_t> cols;
    for (std::uint32_t i : live)
        for (std::uint32_t c = 1; c <= s.params.t; ++c) cols.push_back(s.share_col(i, c));
    const Matrix g_live = s.generator.columns(cols).transpose();
    for (std::uint32_t inst = 0; inst < net.n_instances; ++inst) {
        FpVec flat;
        for (std::uint32_t i : live)
            for (std::uint32_t c = 1; c <= s.params.t; ++c)
                flat.push_back(net.stack_at(i, inst, c));
        if (!solve_linear(g_live, flat)) return false;
    }
    return true;
}

}  // namespace secrep
