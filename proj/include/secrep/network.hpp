#pragma once

#include "secrep/scheme.hpp"

namespace secrep {

/// Simulated storage cluster. Every live node holds `n_instances` shares of
/// t coordinates each, all encoded by the same scheme. Stacks are flat,
/// instance-major: stack[inst * t + coord].
struct Network {
    LinearScheme scheme;
    std::uint32_t n_instances = 1;
    std::vector<FpVec> stacks;  // index node-1; empty when the node has failed
    std::vector<bool> alive;

    std::uint32_t n() const { return scheme.params.n; }
    Fp stack_at(std::uint32_t node, std::uint32_t instance, std::uint32_t coord) const {
        return stacks[node - 1][std::size_t(instance) * scheme.params.t + (coord - 1)];
    }
};

/// Builds a network from explicit per-instance messages and keys; checks that
/// every instance is a codeword before accepting it.
Network make_network(const LinearScheme& s, const std::vector<FpVec>& messages,
                     const std::vector<FpVec>& keys);

/// Network with uniformly random messages and keys, instance-major draw order.
Network random_network(const LinearScheme& s, std::uint32_t n_instances, Rng& rng);

/// Erases the node's stack and marks it failed.
void fail_node(Network& net, std::uint32_t e);

/// Writes repaired values (instances x t) back into the node's stack and
/// marks it live again.
void restore_node(Network& net, std::uint32_t e, const std::vector<std::vector<std::uint32_t>>& values);

/// True iff every instance held by the live nodes extends to a codeword.
bool network_consistent(const Network& net);

}  // namespace secrep
