#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "secrep/analysis.hpp"

using namespace secrep;

namespace {

const PrimeField f5(5);

FpVec vec(PrimeField f, std::initializer_list<std::uint32_t> vals) {
    FpVec out;
    for (auto v : vals) out.push_back(Fp(v, f));
    return out;
}

LinearScheme fig1() { return shamir_scheme(3, 1, vec(f5, {3, 2, 1})); }
LinearScheme ramp4() { return ramp_scheme(4, 1, 1, vec(f5, {1, 2, 3, 4})); }
LinearScheme ramp3() { return ramp_scheme(3, 1, 1, vec(f5, {1, 2, 3})); }

RepairPlan fig1_plan(std::uint32_t e) {
    std::vector<std::uint32_t> helpers;
    for (std::uint32_t i = 1; i <= 3; ++i)
        if (i != e) helpers.push_back(i);
    return derive_repair_function(fig1(), e, helpers, {1});
}

}  // namespace

TEST_CASE("fig1 enumeration covers exactly q^4 outcomes") {
    const DistributionTable table = enumerate_protocol(fig1(), Protocol::C2, fig1_plan(1), {2});
    CHECK(table.total == 625);  // m, u, u2, u3
    CHECK(table.q == 5);
    CHECK(table.message_len == 1);
    std::uint64_t sum = 0;
    for (const auto& [k, c] : table.counts) sum += c;
    CHECK(sum == table.total);
    CHECK(check_independence(table));
}

TEST_CASE("fig1 security holds for every failed node and every singleton") {
    for (std::uint32_t e = 1; e <= 3; ++e) {
        const RepairPlan plan = fig1_plan(e);
        CHECK(check_repairability(fig1(), Protocol::C2, plan));
        for (std::uint32_t a = 1; a <= 3; ++a) {
            const DistributionTable table =
                enumerate_protocol(fig1(), Protocol::C2, plan, {a});
            CHECK(check_independence(table));
        }
    }
}

TEST_CASE("hand-built tables pin the independence decision") {
    SUBCASE("view equal to the message is dependent") {
        DistributionTable t;
        t.q = 5;
        t.message_len = t.view_len = 1;
        t.total = 5;
        for (std::uint64_t m = 0; m < 5; ++m) t.counts[DistributionTable::key(m, m)] = 1;
        CHECK_FALSE(check_independence(t));
        CHECK(deterministic_given_view(t));
    }
    SUBCASE("a constant view is independent") {
        DistributionTable t;
        t.q = 5;
        t.message_len = t.view_len = 1;
        t.total = 5;
        for (std::uint64_t m = 0; m < 5; ++m) t.counts[DistributionTable::key(m, 0)] = 1;
        CHECK(check_independence(t));
    }
}

TEST_CASE("a zero-randomness scheme leaks deterministically") {
    // z = 0, rho = 0: every share equals the message
    const LinearScheme s = shamir_scheme(2, 0, vec(f5, {1, 2}));
    CHECK(s.rho == 0);
    const RepairPlan plan = derive_repair_function(s, 1, {2}, {1});
    const DistributionTable table = enumerate_protocol(s, Protocol::C2, plan, {2});
    CHECK(table.total == 5);
    CHECK_FALSE(check_independence(table));
    CHECK(deterministic_given_view(table));
    CHECK(check_repairability(s, Protocol::C2, plan));
}

TEST_CASE("sabotaged coefficients fail repairability but stay linear") {
    const LinearScheme s = fig1();
    Matrix coeffs(f5, 1, 2);
    coeffs.at(0, 0) = Fp(3, f5);
    coeffs.at(0, 1) = Fp(4, f5);
    const RepairPlan bad{1, {2, 3}, {1}, coeffs};
    CHECK_FALSE(plan_reproduces_share(s, bad));
    CHECK_FALSE(check_repairability(s, Protocol::C2, bad));
}

TEST_CASE("entropy reporting") {
    SUBCASE("a uniform single symbol has one base-q symbol of entropy") {
        const Marginal m = scheme_share_marginal(fig1(), {1});
        CHECK(exactly_uniform(m, 5));
        CHECK(entropy_base_q(m, 25, 5) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("distilled values of a z-set carry exactly z symbols") {
        const LinearScheme s = ramp4();
        const RepairPlan plan = derive_repair_function(s, 4, {1, 2, 3}, {1});
        EnumOptions opt;
        opt.instances_enumerated = 1;
        const Marginal m = distilled_marginal(s, Protocol::C4, plan, {2}, opt);
        CHECK(exactly_uniform(m, 5));
        std::uint64_t total = 0;
        for (const auto& [k, c] : m) total += c;
        CHECK(entropy_base_q(m, total, 5) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("the failed node's distilled values are not defined") {
        const LinearScheme s = ramp4();
        const RepairPlan plan = derive_repair_function(s, 4, {1, 2, 3}, {1});
        CHECK_THROWS_AS(distilled_marginal(s, Protocol::C4, plan, {4}), std::invalid_argument);
    }
}

TEST_CASE("parallel repair verifies on a pruned instance set") {
    const LinearScheme s = ramp4();
    const RepairPlan plan = derive_repair_function(s, 4, {1, 2, 3}, {1});
    EnumOptions opt;
    opt.instances_enumerated = 1;  // 5^(2+1) instance symbols + 5^3 coins = 5^6 outcomes
    CHECK(enumeration_outcomes(s, Protocol::C4, plan, opt) == 15625);
    CHECK(check_repairability(s, Protocol::C4, plan, opt));
    const DistributionTable table = enumerate_protocol(s, Protocol::C4, plan, {2}, opt);
    CHECK(table.total == 15625);
    CHECK(check_independence(table));
    // pruned instances contribute fixed zero digits to the message tuple
    CHECK(table.message_len == 6);
    for (const auto& [key, count] : table.counts) {
        (void)count;
        const auto symbols = unpack_tuple(DistributionTable::message_of(key), 6, 5);
        for (std::size_t i = 2; i < 6; ++i) CHECK(symbols[i] == 0);
    }
}

TEST_CASE("pruned and full enumerations agree where they overlap") {
    // small enough for the full space: 2 instances, 5^6 outcomes
    const LinearScheme s = ramp3();
    const RepairPlan plan = derive_repair_function(s, 3, {1, 2}, {1});
    EnumOptions full;
    EnumOptions pruned;
    pruned.instances_enumerated = 1;

    CHECK(enumeration_outcomes(s, Protocol::C4, plan, full) == 15625);
    CHECK(enumeration_outcomes(s, Protocol::C4, plan, pruned) == 625);
    CHECK(check_repairability(s, Protocol::C4, plan, full));
    CHECK(check_repairability(s, Protocol::C4, plan, pruned));
    for (std::uint32_t a = 1; a <= 3; ++a) {
        const DistributionTable tf = enumerate_protocol(s, Protocol::C4, plan, {a}, full);
        const DistributionTable tp = enumerate_protocol(s, Protocol::C4, plan, {a}, pruned);
        CHECK(tf.total == 15625);
        CHECK(tp.total == 625);
        CHECK(check_independence(tf));
        CHECK(check_independence(tp));
        // every pruned outcome also occurs in the full table, with the same view
        for (const auto& [key, count] : tp.counts) {
            (void)count;
            CHECK(tf.counts.count(key) == 1);
        }
    }
}

TEST_CASE("thread partitioning does not change the table") {
    const LinearScheme s = fig1();
    const RepairPlan plan = fig1_plan(2);
    EnumOptions one;
    one.threads = 1;
    EnumOptions four;
    four.threads = 4;
    const DistributionTable a = enumerate_protocol(s, Protocol::C2, plan, {3}, one);
    const DistributionTable b = enumerate_protocol(s, Protocol::C2, plan, {3}, four);
    CHECK(a.total == b.total);
    REQUIRE(a.counts.size() == b.counts.size());
    for (const auto& [key, count] : a.counts) {
        REQUIRE(b.counts.count(key) == 1);
        CHECK(b.counts.at(key) == count);
    }
}

TEST_CASE("budget guard reports the required outcome count") {
    const LinearScheme s = fig1();
    const RepairPlan plan = fig1_plan(1);
    EnumOptions opt;
    opt.budget = 100;
    try {
        enumerate_protocol(s, Protocol::C2, plan, {1}, opt);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.required == 625);
        CHECK(e.budget == 100);
    }
}

TEST_CASE("base scheme contract by enumeration") {
    SUBCASE("message independent of any z shares") {
        for (const LinearScheme& s : {fig1(), ramp4()}) {
            for (const auto& subset : all_subsets(s.params.n, s.params.z))
                CHECK(check_independence(scheme_message_share_table(s, subset)));
        }
    }
    SUBCASE("z+1 shares of fig1 do determine the message") {
        CHECK_FALSE(check_independence(scheme_message_share_table(fig1(), {1, 2})));
    }
    SUBCASE("every k+z share subset of the rate-optimal ramp is uniform") {
        const LinearScheme s = ramp4();
        const std::uint32_t kz = s.params.k + s.params.z;
        for (const auto& subset : all_subsets(s.params.n, kz)) {
            const Marginal m = scheme_share_marginal(s, subset);
            CHECK(exactly_uniform(m, 125));  // q^(k+z)
        }
    }
}

TEST_CASE("bandwidth bounds") {
    SUBCASE("lower bound formula") {
        CHECK(lower_bound_bandwidth(SchemeParams{3, 1, 1, 1, 1, 5}, 2) == Rational(2));
        CHECK(lower_bound_bandwidth(SchemeParams{5, 3, 1, 1, 1, 7}, 4) == Rational(16, 6));
        CHECK(lower_bound_bandwidth(SchemeParams{5, 3, 1, 1, 1, 7}, 4) == Rational(8, 3));
        CHECK(lower_bound_bandwidth(SchemeParams{3, 1, 1, 1, 1, 5}, 0) == Rational(0));
        CHECK_FALSE(lower_bound_bandwidth(SchemeParams{4, 1, 1, 1, 1, 5}, 2).has_value());
    }
    SUBCASE("fig1 report: W=2, lower 2, measured 4, upper 6, ratio 2") {
        const LinearScheme s = fig1();
        const RepairPlan plan = fig1_plan(1);
        Network net = make_network(s, {vec(f5, {2})}, {vec(f5, {1})});
        fail_node(net, 1);
        SeededCoins coins(7, f5);
        const RepairResult run = run_c2(net, plan, {2, 3}, coins);
        const BoundsReport rep = bounds_report(s, plan, Protocol::C2, run.bandwidth);
        CHECK(rep.w == 2);
        CHECK(rep.rate_optimal);
        REQUIRE(rep.lower.has_value());
        CHECK(*rep.lower == Rational(2));
        CHECK(rep.measured == 4);
        CHECK(rep.upper == Rational(6));
        REQUIRE(rep.ratio.has_value());
        CHECK(*rep.ratio == Rational(2));
        CHECK(Rational(static_cast<std::int64_t>(rep.measured)) >= *rep.lower);
        CHECK(Rational(static_cast<std::int64_t>(rep.measured)) <= rep.upper);
    }
}

TEST_CASE("verify_scheme runs every cell") {
    const std::vector<VerifyCell> cells = verify_scheme(fig1(), Protocol::C2, {});
    REQUIRE(cells.size() == 9);
    for (const VerifyCell& c : cells) {
        CHECK(c.independent);
        CHECK(c.repairable);
        CHECK(c.outcomes == 625);
    }
}

TEST_CASE("verify_scheme exposes sabotaged declared plans") {
    const LinearScheme s = fig1();
    Matrix coeffs(f5, 1, 2);
    coeffs.at(0, 0) = Fp(3, f5);
    coeffs.at(0, 1) = Fp(4, f5);
    const std::vector<RepairPlan> declared{RepairPlan{1, {2, 3}, {1}, coeffs}};
    const std::vector<VerifyCell> cells = verify_scheme(s, Protocol::C2, declared);
    bool saw_failure = false;
    for (const VerifyCell& c : cells)
        if (c.e == 1) {
            CHECK_FALSE(c.repairable);
            saw_failure = true;
        }
    CHECK(saw_failure);
}
