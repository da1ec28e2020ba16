#pragma once

#include <map>

#include "secrep/network.hpp"
#include "secrep/rational.hpp"

namespace secrep {

/// Raised when a failure pattern admits no repair from the live nodes.
struct UnrepairableError : std::runtime_error {
    explicit UnrepairableError(const std::string& what) : std::runtime_error(what) {}
};

enum class Protocol { C2, C4, C5 };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

/// One message; the payload lives in the owning transcript's pool.
struct ProtocolMessage {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    std::uint32_t round = 0;
    std::uint32_t offset = 0;  // into Transcript::pool
    std::uint32_t length = 0;
};

/// Full record of one protocol run: every message in delivery order, the
/// coins each node flipped, and the repaired values. Self-deliveries are
/// internal state and never appear as messages.
struct Transcript {
    std::vector<ProtocolMessage> messages;
    std::vector<std::uint32_t> pool;
    std::vector<std::vector<std::uint32_t>> coins;  // index node-1
    std::uint32_t repaired_node = 0;
    std::vector<std::vector<std::uint32_t>> repaired;  // instances x t

    void reset(std::uint32_t n);
    std::vector<std::uint32_t> payload(const ProtocolMessage& m) const;
    /// Concatenated payloads addressed to `node`, in delivery order (d_i).
    std::vector<std::uint32_t> received(std::uint32_t node) const;
};

/// Field symbols transmitted between distinct nodes, per round.
struct BandwidthReport {
    std::uint64_t round1_symbols = 0;
    std::uint64_t round2_symbols = 0;
    std::uint64_t total_symbols = 0;
    std::uint64_t symbols_repaired = 0;
    Rational normalized{0};
};

/// Source of random field symbols; draws are attributed to the drawing node.
class CoinSource {
public:
    virtual ~CoinSource() = default;
    virtual std::uint32_t draw(std::uint32_t node) = 0;
};

/// Independent per-node tapes split from one master seed, so transcripts
/// replay exactly under the same seed.
class SeededCoins : public CoinSource {
public:
    SeededCoins(std::uint64_t seed, PrimeField field);
    std::uint32_t draw(std::uint32_t node) override;

private:
    std::uint64_t seed_;
    PrimeField field_;
    std::map<std::uint32_t, Rng> streams_;
};

/// Replays a fixed symbol tape in draw order; the enumeration oracle's source.
class TapeCoins : public CoinSource {
public:
    explicit TapeCoins(const std::vector<std::uint32_t>* tape) : tape_(tape) {}
    std::uint32_t draw(std::uint32_t) override;
    void rewind() { pos_ = 0; }

private:
    const std::vector<std::uint32_t>* tape_;
    std::size_t pos_ = 0;
};

/// Round-1 piece scheme for single-share repair: a (z+1, 1, 0, z) scheme
/// whose share at point b is sum_l u_l b^(l-1) + c b^z, points (0, 1, .., z).
/// The receiver at point 0 gets pure key material.
LinearScheme c2_mask_scheme(std::uint32_t z, PrimeField field,
                            std::vector<Fp> points = {});

/// Round-1 piece scheme for parallel repair: an (n, n-z, 0, z) ramp scheme
/// over points (1, ..., n), one point per receiving node.
LinearScheme c4_mask_scheme(std::uint32_t n, std::uint32_t z, PrimeField field,
                            std::vector<Fp> alphas = {});

/// Everything derivable once per (scheme, plan, receivers): the mask scheme
/// and its decoder. Repeated runs over the same plan reuse it.
struct PreparedRepair {
    Protocol kind;
    RepairPlan plan;
    std::vector<std::uint32_t> receivers;  // C2 round-1 targets, size z+1
    LinearScheme mask;
    Matrix mask_decoder;
    std::uint32_t instances_used = 1;  // 1 for C2, n-z otherwise
    std::uint32_t coin_count = 0;      // symbols drawn per run
};

PreparedRepair prepare_repair(const LinearScheme& s, Protocol kind, RepairPlan plan,
                              std::vector<std::uint32_t> receivers = {});

/// Runs the prepared protocol on the network; fills `tr` and returns the
/// bandwidth account. Validates liveness, not the plan's correctness (the
/// verification oracle is the place where bad plans surface).
BandwidthReport execute_repair(const PreparedRepair& prep, const Network& net, CoinSource& coins,
                               Transcript& tr);

struct RepairResult {
    Transcript transcript;
    BandwidthReport bandwidth;
};

RepairResult run_c2(const Network& net, const RepairPlan& plan,
                    const std::vector<std::uint32_t>& receivers, CoinSource& coins);
RepairResult run_c4(const Network& net, const RepairPlan& plan, CoinSource& coins);
RepairResult run_c5(const Network& net, const RepairPlan& plan, CoinSource& coins);

/// First z+1 of: helpers in plan order, then other live nodes ascending,
/// then the failed node itself. Round-1 self-pieces of helper-receivers are
/// free, which is why helpers come first.
std::vector<std::uint32_t> default_receivers(const Network& net, const RepairPlan& plan);

/// Plan for repairing e: first matching declared plan whose helpers are all
/// live, else the lexicographically first smallest live helper set that
/// admits a linear repair function. Throws UnrepairableError.
RepairPlan default_plan(const Network& net, std::uint32_t e,
                        const std::vector<RepairPlan>& declared = {});

/// Repairs every failed node in ascending order; nodes repaired earlier may
/// help later repairs. The network is mutated back to full consistency.
std::vector<RepairResult> repair_all_failures(Network& net, Protocol kind, CoinSource& coins,
                                              const std::vector<RepairPlan>& declared = {});

/// Exactly (c_A, u_A, d_A): the shares held by A, the coins A flipped, and
/// the concatenation of everything A received. Nothing else.
struct AdversaryView {
    std::vector<std::uint32_t> shares;
    std::vector<std::uint32_t> coins;
    std::vector<std::uint32_t> received;
    std::vector<std::uint32_t> flat() const;
};

AdversaryView adversary_view(const Transcript& tr, const Network& net,
                             const std::vector<std::uint32_t>& adversary);

}  // namespace secrep
