#include "secrep/json_io.hpp"

#include <fstream>
#include <sstream>

namespace secrep {

namespace {

std::uint32_t require_u32(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned())
        throw SchemeParseError(std::string("scheme field '") + key +
                               "' missing or not a non-negative integer");
    return j[key].get<std::uint32_t>();
}

std::uint32_t optional_u32(const Json& j, const char* key, std::uint32_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_unsigned())
        throw SchemeParseError(std::string("scheme field '") + key + "' must be an integer");
    return j[key].get<std::uint32_t>();
}

std::vector<Fp> parse_alphas(const Json& j, PrimeField f) {
    if (!j.contains("alphas") || !j["alphas"].is_array())
        throw SchemeParseError("named constructions need an 'alphas' array");
    std::vector<Fp> alphas;
    for (const Json& v : j["alphas"]) {
        if (!v.is_number_integer()) throw SchemeParseError("alphas must be integers");
        alphas.push_back(Fp::from_int(v.get<std::int64_t>(), f));
    }
    return alphas;
}

Matrix parse_matrix(const Json& rows, PrimeField f, const char* what) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw SchemeParseError(std::string(what) + " must be an array of rows");
    const std::size_t cols = rows[0].size();
    Matrix m(f, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != cols)
            throw SchemeParseError(std::string(what) + " rows must all have the same length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!rows[r][c].is_number_integer())
                throw SchemeParseError(std::string(what) + " entries must be integers");
            m.at(r, c) = Fp::from_int(rows[r][c].get<std::int64_t>(), f);
        }
    }
    return m;
}

RepairPlan parse_plan(const Json& j, const LinearScheme& s) {
    const std::uint32_t e = require_u32(j, "e");
    std::vector<std::uint32_t> helpers, coords;
    if (!j.contains("I") || !j["I"].is_array())
        throw SchemeParseError("repair plan needs a helper array 'I'");
    for (const Json& v : j["I"]) helpers.push_back(v.get<std::uint32_t>());
    if (j.contains("J")) {
        for (const Json& v : j["J"]) coords.push_back(v.get<std::uint32_t>());
    } else {
        for (std::uint32_t c = 1; c <= s.params.t; ++c) coords.push_back(c);
    }
    if (!j.contains("coeffs")) throw SchemeParseError("repair plan needs 'coeffs'");
    const Json& co = j["coeffs"];
    if (co.is_array() && !co.empty() && co[0].is_number_integer()) {
        // flat list, a single output coordinate
        Matrix m(s.field(), 1, co.size());
        for (std::size_t c = 0; c < co.size(); ++c)
            m.at(0, c) = Fp::from_int(co[c].get<std::int64_t>(), s.field());
        return RepairPlan{e, std::move(helpers), std::move(coords), std::move(m)};
    }
    return RepairPlan{e, std::move(helpers), std::move(coords),
                      parse_matrix(co, s.field(), "plan coeffs")};
}

}  // namespace

LoadedScheme scheme_from_json(const Json& j) {
    if (!j.is_object()) throw SchemeParseError("scheme definition must be a JSON object");
    if (!j.contains("construction") || !j["construction"].is_string())
        throw SchemeParseError("scheme needs a 'construction' field");
    const std::string kind = j["construction"].get<std::string>();
    const std::uint32_t q = require_u32(j, "q");
    if (!is_prime(q)) throw SchemeParseError("field order q must be prime");
    const PrimeField f(q);
    const std::uint32_t n = require_u32(j, "n");

    LoadedScheme out{LinearScheme{SchemeParams{}, 0, Matrix(f, 1, 1), {}, kind}, {}};
    if (kind == "shamir") {
        out.scheme = shamir_scheme(n, require_u32(j, "z"), parse_alphas(j, f));
    } else if (kind == "ramp") {
        out.scheme = ramp_scheme(n, require_u32(j, "r"), require_u32(j, "z"), parse_alphas(j, f));
    } else if (kind == "generic") {
        SchemeParams p{n, require_u32(j, "k"), require_u32(j, "r"), require_u32(j, "z"),
                       optional_u32(j, "t", 1), q};
        if (!j.contains("generator"))
            throw SchemeParseError("generic schemes need a 'generator' matrix");
        out.scheme = generic_scheme(p, parse_matrix(j["generator"], f, "generator"),
                                    require_u32(j, "rho"));
    } else {
        throw SchemeParseError("unknown construction '" + kind + "'");
    }

    // declared params must agree with the derived ones
    const SchemeParams& p = out.scheme.params;
    if (optional_u32(j, "k", p.k) != p.k || optional_u32(j, "r", p.r) != p.r ||
        optional_u32(j, "t", p.t) != p.t)
        throw SchemeParseError("declared k/r/t disagree with the construction");

    if (j.contains("repair_plans")) {
        if (!j["repair_plans"].is_array())
            throw SchemeParseError("'repair_plans' must be an array");
        for (const Json& pj : j["repair_plans"]) out.plans.push_back(parse_plan(pj, out.scheme));
    }
    return out;
}

LoadedScheme load_scheme_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemeParseError("cannot open scheme file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemeParseError("scheme file '" + path + "': " + e.what());
    }
    return scheme_from_json(j);
}

Json scheme_to_json(const LinearScheme& s, const std::vector<RepairPlan>& plans) {
    Json j;
    j["construction"] = s.construction;
    j["q"] = s.params.q;
    j["n"] = s.params.n;
    j["k"] = s.params.k;
    j["r"] = s.params.r;
    j["z"] = s.params.z;
    j["t"] = s.params.t;
    if (!s.alphas.empty()) {
        Json a = Json::array();
        for (const Fp& v : s.alphas) a.push_back(v.value());
        j["alphas"] = a;
    }
    if (s.construction == "generic") {
        j["rho"] = s.rho;
        Json g = Json::array();
        for (std::size_t r = 0; r < s.generator.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < s.generator.cols(); ++c)
                row.push_back(s.generator.at(r, c).value());
            g.push_back(row);
        }
        j["generator"] = g;
    }
    if (!plans.empty()) {
        Json ps = Json::array();
        for (const RepairPlan& p : plans) {
            Json pj;
            pj["e"] = p.e;
            pj["I"] = p.helpers;
            pj["J"] = p.coords;
            Json rows = Json::array();
            for (std::size_t r = 0; r < p.coeffs.rows(); ++r) {
                Json row = Json::array();
                for (std::size_t c = 0; c < p.coeffs.cols(); ++c)
                    row.push_back(p.coeffs.at(r, c).value());
                rows.push_back(row);
            }
            pj["coeffs"] = rows;
            ps.push_back(pj);
        }
        j["repair_plans"] = ps;
    }
    return j;
}

Json shares_to_json(const Network& net, const std::vector<FpVec>& keys, bool reveal_keys) {
    Json j;
    j["q"] = net.scheme.params.q;
    j["n"] = net.scheme.params.n;
    j["t"] = net.scheme.params.t;
    j["instances"] = net.n_instances;
    Json shares;
    for (std::uint32_t i = 1; i <= net.n(); ++i) {
        Json per_instance = Json::array();
        for (std::uint32_t inst = 0; inst < net.n_instances; ++inst) {
            Json coords = Json::array();
            for (std::uint32_t c = 1; c <= net.scheme.params.t; ++c)
                coords.push_back(net.stack_at(i, inst, c).value());
            per_instance.push_back(coords);
        }
        shares[std::to_string(i)] = per_instance;
    }
    j["shares"] = shares;
    if (reveal_keys) {
        Json ks = Json::array();
        for (const FpVec& ku : keys) {
            Json inst = Json::array();
            for (const Fp& v : ku) inst.push_back(v.value());
            ks.push_back(inst);
        }
        j["keys"] = ks;
    }
    return j;
}

Json transcript_to_json(const Transcript& tr) {
    Json j;
    j["repaired_node"] = tr.repaired_node;
    Json msgs = Json::array();
    for (const ProtocolMessage& m : tr.messages) {
        Json mj;
        mj["from"] = m.from;
        mj["to"] = m.to;
        mj["round"] = m.round;
        mj["payload"] = tr.payload(m);
        msgs.push_back(mj);
    }
    j["messages"] = msgs;
    Json coins;
    for (std::size_t i = 0; i < tr.coins.size(); ++i)
        if (!tr.coins[i].empty()) coins[std::to_string(i + 1)] = tr.coins[i];
    j["coins"] = coins;
    j["repaired"] = tr.repaired;
    return j;
}

Json bandwidth_to_json(const BandwidthReport& bw) {
    Json j;
    j["round1_symbols"] = bw.round1_symbols;
    j["round2_symbols"] = bw.round2_symbols;
    j["total_symbols"] = bw.total_symbols;
    j["symbols_repaired"] = bw.symbols_repaired;
    j["normalized"] = Json{{"num", bw.normalized.numerator()}, {"den", bw.normalized.denominator()}};
    return j;
}

Json verification_to_json(const std::string& scheme_name, Protocol kind,
                          const std::vector<VerifyCell>& cells) {
    Json j;
    j["scheme"] = scheme_name;
    j["protocol"] = to_string(kind);
    bool all = true;
    Json cj = Json::array();
    for (const VerifyCell& c : cells) {
        Json e;
        e["e"] = c.e;
        e["A"] = c.adversary;
        e["independent"] = c.independent;
        e["repairable"] = c.repairable;
        e["outcomes"] = c.outcomes;
        cj.push_back(e);
        all = all && c.independent && c.repairable;
    }
    j["cells"] = cj;
    j["all_pass"] = all;
    return j;
}

std::string bounds_csv_header() {
    return "construction,n,k,r,z,t,W,measured,lower_num,lower_den,upper_num,upper_den,ratio\n";
}

std::string bounds_csv_row(const BoundsReport& rep) {
    std::ostringstream out;
    out << rep.construction << ',' << rep.params.n << ',' << rep.params.k << ',' << rep.params.r
        << ',' << rep.params.z << ',' << rep.params.t << ',' << rep.w << ',' << rep.measured
        << ',';
    if (rep.lower)
        out << rep.lower->numerator() << ',' << rep.lower->denominator() << ',';
    else
        out << ",,";
    out << rep.upper.numerator() << ',' << rep.upper.denominator() << ',';
    if (rep.ratio) {
        out << rep.ratio->numerator();
        if (rep.ratio->denominator() != 1) out << '/' << rep.ratio->denominator();
    }
    out << '\n';
    return out.str();
}

}  // namespace secrep
