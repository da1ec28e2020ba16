// secrep: encode secret sharing schemes, run two-round secure repairs over a
// simulated cluster, and machine-check repairability, security and bandwidth
// bounds by exact enumeration.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "secrep/json_io.hpp"

namespace {

using namespace secrep;

// exit codes: 0 ok / all pass, 1 verification failure, 2 input parse,
// 3 parameter violation, 4 unrepairable, 5 enumeration budget
constexpr int kExitVerifyFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitParam = 3;
constexpr int kExitUnrepairable = 4;
constexpr int kExitBudget = 5;

struct Options {
    std::string scheme_path;
    std::string protocol = "c2";
    std::string failed;
    std::string helpers;
    std::string receivers;
    std::string message;
    std::string keys;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t budget = 100'000'000;
    std::uint32_t prune_instances = 0;
    bool reveal_keys = false;
};

std::vector<std::uint32_t> parse_id_list(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    return out;
}

// "1,2;3,4" -> one integer vector per instance
std::vector<std::vector<std::int64_t>> parse_symbol_groups(const std::string& text) {
    std::vector<std::vector<std::int64_t>> out;
    std::stringstream ss(text);
    std::string group;
    while (std::getline(ss, group, ';')) {
        std::vector<std::int64_t> vals;
        std::stringstream gs(group);
        std::string item;
        while (std::getline(gs, item, ',')) {
            if (item.empty()) continue;
            vals.push_back(std::stoll(item));
        }
        out.push_back(std::move(vals));
    }
    return out;
}

FpVec to_fp(const std::vector<std::int64_t>& vals, PrimeField f) {
    FpVec out;
    for (std::int64_t v : vals) out.push_back(Fp::from_int(v, f));
    return out;
}

std::uint64_t effective_seed(Options& opt) {
    if (!opt.seed_given) {
        std::random_device rd;
        opt.seed = (std::uint64_t(rd()) << 32) | rd();
    }
    return opt.seed;
}

void write_output(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + opt.out_path + "'");
    out << text;
}

// Builds the network cmd_repair and cmd_bounds operate on: pinned message and
// keys when given, otherwise drawn from the seed (stream 0; protocol coins
// use the per-node streams).
Network build_network(const LoadedScheme& loaded, Protocol kind, const Options& opt,
                      std::uint64_t seed) {
    const LinearScheme& s = loaded.scheme;
    const std::uint32_t instances = kind == Protocol::C2 ? 1 : s.params.n - s.params.z;
    Rng rng = Rng::split(seed, 0);
    std::vector<FpVec> messages, keys;
    if (!opt.message.empty()) {
        for (const auto& group : parse_symbol_groups(opt.message))
            messages.push_back(to_fp(group, s.field()));
        if (messages.size() != instances)
            throw std::invalid_argument("need one message group per instance (" +
                                        std::to_string(instances) + ")");
    } else {
        for (std::uint32_t i = 0; i < instances; ++i) {
            FpVec m;
            for (std::size_t j = 0; j < s.message_symbols(); ++j)
                m.push_back(uniform_element(rng, s.field()));
            messages.push_back(std::move(m));
        }
    }
    if (!opt.keys.empty()) {
        for (const auto& group : parse_symbol_groups(opt.keys))
            keys.push_back(to_fp(group, s.field()));
        if (keys.size() != instances)
            throw std::invalid_argument("need one key group per instance");
    } else {
        for (std::uint32_t i = 0; i < instances; ++i) {
            FpVec u;
            for (std::uint32_t j = 0; j < s.rho; ++j)
                u.push_back(uniform_element(rng, s.field()));
            keys.push_back(std::move(u));
        }
    }
    return make_network(s, messages, keys);
}

int cmd_encode(Options& opt) {
    const LoadedScheme loaded = load_scheme_file(opt.scheme_path);
    const LinearScheme& s = loaded.scheme;
    if (opt.message.empty()) throw std::invalid_argument("encode needs --message");
    const std::uint64_t seed = effective_seed(opt);
    Rng rng = Rng::split(seed, 0);

    std::vector<FpVec> messages, keys;
    for (const auto& group : parse_symbol_groups(opt.message))
        messages.push_back(to_fp(group, s.field()));
    if (!opt.keys.empty()) {
        for (const auto& group : parse_symbol_groups(opt.keys))
            keys.push_back(to_fp(group, s.field()));
        if (keys.size() != messages.size())
            throw std::invalid_argument("need one key group per message group");
    } else {
        for (std::size_t i = 0; i < messages.size(); ++i) {
            FpVec u;
            for (std::uint32_t j = 0; j < s.rho; ++j)
                u.push_back(uniform_element(rng, s.field()));
            keys.push_back(std::move(u));
        }
    }
    const Network net = make_network(s, messages, keys);
    Json j = shares_to_json(net, keys, opt.reveal_keys);
    j["seed"] = seed;
    write_output(opt, j.dump(2));
    return 0;
}

int cmd_repair(Options& opt) {
    const LoadedScheme loaded = load_scheme_file(opt.scheme_path);
    const Protocol kind = protocol_from_string(opt.protocol);
    if (opt.failed.empty()) throw std::invalid_argument("repair needs --failed");
    const std::vector<std::uint32_t> failed = parse_id_list(opt.failed);
    if (failed.empty()) throw std::invalid_argument("repair needs at least one failed node");

    const std::uint64_t seed = effective_seed(opt);
    Network net = build_network(loaded, kind, opt, seed);
    for (std::uint32_t e : failed) fail_node(net, e);

    SeededCoins coins(seed, net.scheme.field());
    std::vector<RepairResult> runs;
    if (failed.size() == 1 && (!opt.helpers.empty() || !opt.receivers.empty())) {
        const std::uint32_t e = failed.front();
        const RepairPlan plan = [&] {
            if (opt.helpers.empty()) return default_plan(net, e, loaded.plans);
            std::vector<std::uint32_t> coords;
            for (std::uint32_t c = 1; c <= net.scheme.params.t; ++c) coords.push_back(c);
            return derive_repair_function(net.scheme, e, parse_id_list(opt.helpers), coords);
        }();
        std::vector<std::uint32_t> receivers;
        if (kind == Protocol::C2)
            receivers = opt.receivers.empty() ? default_receivers(net, plan)
                                              : parse_id_list(opt.receivers);
        const PreparedRepair prep = prepare_repair(net.scheme, kind, plan, receivers);
        if (!plan_reproduces_share(net.scheme, plan))
            throw UnrepairableError("plan does not reproduce the lost share");
        RepairResult res;
        res.bandwidth = execute_repair(prep, net, coins, res.transcript);
        restore_node(net, e, res.transcript.repaired);
        runs.push_back(std::move(res));
    } else {
        if (!opt.helpers.empty() || !opt.receivers.empty())
            throw std::invalid_argument("helper/receiver overrides need a single failed node");
        for (const RepairPlan& p : loaded.plans)
            if (!plan_reproduces_share(net.scheme, p) &&
                std::find(failed.begin(), failed.end(), p.e) != failed.end())
                throw UnrepairableError("declared plan for node " + std::to_string(p.e) +
                                        " does not reproduce the lost share");
        runs = repair_all_failures(net, kind, coins, loaded.plans);
    }

    Json j;
    j["seed"] = seed;
    j["protocol"] = opt.protocol;
    Json rj = Json::array();
    for (const RepairResult& r : runs) {
        Json one;
        one["transcript"] = transcript_to_json(r.transcript);
        one["bandwidth"] = bandwidth_to_json(r.bandwidth);
        rj.push_back(one);
    }
    j["repairs"] = rj;
    write_output(opt, j.dump(2));
    return 0;
}

int cmd_verify(Options& opt) {
    const LoadedScheme loaded = load_scheme_file(opt.scheme_path);
    const Protocol kind = protocol_from_string(opt.protocol);
    EnumOptions eopt;
    eopt.budget = opt.budget;
    eopt.instances_enumerated = opt.prune_instances;
    const std::vector<VerifyCell> cells = verify_scheme(loaded.scheme, kind, loaded.plans, eopt);
    const Json j = verification_to_json(opt.scheme_path, kind, cells);
    write_output(opt, j.dump(2));
    for (const VerifyCell& c : cells) {
        if (!c.independent || !c.repairable) {
            std::ostringstream who;
            who << "FAIL e=" << c.e << " A={";
            for (std::size_t i = 0; i < c.adversary.size(); ++i)
                who << (i ? "," : "") << c.adversary[i];
            who << "} independent=" << (c.independent ? "yes" : "no")
                << " repairable=" << (c.repairable ? "yes" : "no");
            std::cerr << who.str() << '\n';
            return kExitVerifyFail;
        }
    }
    return 0;
}

int cmd_bounds(Options& opt) {
    const LoadedScheme loaded = load_scheme_file(opt.scheme_path);
    const Protocol kind = protocol_from_string(opt.protocol);
    const std::vector<std::uint32_t> failed = parse_id_list(opt.failed);
    const std::uint64_t seed = effective_seed(opt);

    std::string csv = bounds_csv_header();
    for (std::uint32_t e : failed) {
        Network net = build_network(loaded, kind, opt, seed);
        fail_node(net, e);
        const RepairPlan plan = default_plan(net, e, loaded.plans);
        std::vector<std::uint32_t> receivers;
        if (kind == Protocol::C2) receivers = default_receivers(net, plan);
        const PreparedRepair prep = prepare_repair(net.scheme, kind, plan, receivers);
        SeededCoins coins(seed, net.scheme.field());
        Transcript tr;
        const BandwidthReport bw = execute_repair(prep, net, coins, tr);
        csv += bounds_csv_row(bounds_report(net.scheme, plan, kind, bw));
    }
    write_output(opt, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "secure repair of linear secret sharing schemes: encode, repair, "
        "verify, bounds"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scheme", opt.scheme_path, "scheme definition JSON")->required();
        cmd->add_option("--seed", opt.seed, "seed for all randomness")
            ->each([&](const std::string&) { opt.seed_given = true; });
        cmd->add_option("--out", opt.out_path, "output path (default stdout)");
    };

    CLI::App* enc = app.add_subcommand("encode", "encode a message into per-node shares");
    add_common(enc);
    enc->add_option("--message", opt.message, "message symbols, comma separated; ';' between instances");
    enc->add_option("--keys", opt.keys, "key symbols (drawn from seed when omitted)");
    enc->add_flag("--reveal-keys", opt.reveal_keys, "echo the keys in the output");

    CLI::App* rep = app.add_subcommand("repair", "run a secure repair and dump the transcript");
    add_common(rep);
    rep->add_option("--protocol", opt.protocol, "c2, c4 or c5");
    rep->add_option("--failed", opt.failed, "failed node ids, comma separated");
    rep->add_option("--helpers", opt.helpers, "helper set override");
    rep->add_option("--receivers", opt.receivers, "receiver set override (c2)");
    rep->add_option("--message", opt.message, "pin the stored message");
    rep->add_option("--keys", opt.keys, "pin the scheme keys");

    CLI::App* ver = app.add_subcommand("verify", "exhaustively verify repairability and security");
    add_common(ver);
    ver->add_option("--protocol", opt.protocol, "c2, c4 or c5");
    ver->add_option("--budget", opt.budget, "max outcomes per enumeration cell");
    ver->add_option("--prune-instances", opt.prune_instances,
                    "enumerate only this many instances, pin the rest to zero (0 = all)");

    CLI::App* bnd = app.add_subcommand("bounds", "bandwidth bounds CSV for repair runs");
    add_common(bnd);
    bnd->add_option("--protocol", opt.protocol, "c2, c4 or c5");
    bnd->add_option("--failed", opt.failed, "failed nodes to sweep, comma separated");
    bnd->add_option("--message", opt.message, "pin the stored message");
    bnd->add_option("--keys", opt.keys, "pin the scheme keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParam;
    }

    try {
        if (enc->parsed()) return cmd_encode(opt);
        if (rep->parsed()) return cmd_repair(opt);
        if (ver->parsed()) return cmd_verify(opt);
        if (bnd->parsed()) return cmd_bounds(opt);
    } catch (const SchemeParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const NoRepairFunction& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnrepairable;
    } catch (const UnrepairableError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnrepairable;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParam;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParam;
    }
    return 0;
}
