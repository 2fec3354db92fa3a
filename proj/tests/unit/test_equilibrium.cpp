#include "monohire/equilibrium.hpp"
#include "monohire/errors.hpp"

#include "../support/random_models.hpp"

#include <doctest.h>

#include <cmath>

using namespace monohire;

namespace {

constexpr auto kCorr = DecisionScheme::correlated;
constexpr auto kIndep = DecisionScheme::independent;

Instance uniform_instance(int n, double c, DecisionScheme scheme = kCorr) {
    return Instance(n, c, ScoreDistribution::uniform(), scheme);
}

StrategyProfile make_profile(const std::vector<std::vector<Interval>>& firms,
                             const ScoreDistribution& dist) {
    std::vector<Strategy> out;
    for (const auto& f : firms) out.emplace_back(f, dist);
    return StrategyProfile(std::move(out));
}

bool same_intervals(const Strategy& s, const std::vector<Interval>& want, double tol = 1e-9) {
    if (s.intervals().size() != want.size()) return false;
    for (std::size_t j = 0; j < want.size(); ++j) {
        if (std::abs(s.intervals()[j].lo - want[j].lo) > tol) return false;
        if (std::abs(s.intervals()[j].hi - want[j].hi) > tol) return false;
    }
    return true;
}

void check_threshold_invariants(const ThresholdSet& ts, const Instance& inst) {
    CHECK(ts.thresholds.front() == 0.0);
    CHECK(ts.thresholds.back() == 1.0);
    for (std::size_t m = 1; m < ts.thresholds.size(); ++m) {
        CHECK(ts.thresholds[m] >= ts.thresholds[m - 1]);
    }
    double total = 0.0;
    for (int m = 1; m <= ts.n_firms(); ++m) {
        if (m <= ts.m_max && ts.tau(m) < 1.0) {
            CHECK(std::abs(utility(m, ts.tau(m), inst.scheme) - ts.level) < 1e-10);
        }
        total += m * inst.dist.mass(ts.tau(m), ts.tau(m + 1));
    }
    CHECK(std::abs(total - inst.n_firms * inst.capacity) < 1e-9);
}

}  // namespace

TEST_CASE("equal-utility thresholds: examples") {
    {
        const auto inst = uniform_instance(2, 0.2);
        const auto ts = solve_equal_utility_thresholds(inst);
        CHECK(std::abs(ts.level - 0.6) < 1e-12);
        CHECK(std::abs(ts.tau(1) - 0.6) < 1e-12);
        CHECK(ts.tau(2) == 1.0);
        CHECK(ts.m_max == 1);
        check_threshold_invariants(ts, inst);
    }
    {
        const auto inst = uniform_instance(2, 0.35);
        const auto ts = solve_equal_utility_thresholds(inst);
        CHECK(std::abs(ts.level - 13.0 / 30.0) < 1e-12);
        CHECK(std::abs(ts.tau(2) - 13.0 / 15.0) < 1e-12);
        CHECK(ts.m_max == 2);
        check_threshold_invariants(ts, inst);
    }
    {
        const auto inst = uniform_instance(3, 0.2);
        const auto ts = solve_equal_utility_thresholds(inst);
        CHECK(std::abs(ts.level - 7.0 / 15.0) < 1e-12);
        CHECK(std::abs(ts.tau(2) - 14.0 / 15.0) < 1e-12);
        CHECK(ts.tau(3) == 1.0);
        CHECK(ts.m_max == 2);
        check_threshold_invariants(ts, inst);
    }
    {
        // Capacity chosen so the common level is 0.2.
        const auto probe = uniform_instance(5, 0.5, kIndep);
        const double c = capacity_at_level(0.2, 5, probe) / 5.0;
        const auto inst = uniform_instance(5, c, kIndep);
        const auto ts = solve_equal_utility_thresholds(inst);
        CHECK(std::abs(ts.level - 0.2) < 1e-10);
        CHECK(std::abs(ts.tau(1) - 0.2) < 1e-10);
        CHECK(std::abs(ts.tau(2) - 0.2254) < 1e-4);
        CHECK(std::abs(ts.tau(3) - 0.2632) < 1e-4);
        CHECK(std::abs(ts.tau(4) - (1.0 - std::pow(0.2, 0.25))) < 1e-6);
        CHECK(ts.tau(5) >= 1.0 - 1e-6);
        check_threshold_invariants(ts, inst);
    }
}

TEST_CASE("equal-utility thresholds: random instances") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = testing::random_instance(rng, trial % 3, trial % 2 ? kIndep : kCorr,
                                                   1, 12, 0.02, 0.9);
        check_threshold_invariants(solve_equal_utility_thresholds(inst), inst);
    }
    const auto big = uniform_instance(200, 0.25, kIndep);
    check_threshold_invariants(solve_equal_utility_thresholds(big), big);
}

TEST_CASE("assign_firms examples") {
    {
        const auto inst = uniform_instance(2, 0.2);
        const auto sol = assign_firms(solve_equal_utility_thresholds(inst), inst);
        CHECK(same_intervals(sol.profile.strategy(0), {{0.8, 1.0}}));
        CHECK(same_intervals(sol.profile.strategy(1), {{0.6, 0.8}}));
        CHECK(sol.method == AssignmentMethod::recursion);
    }
    {
        const auto inst = uniform_instance(2, 0.35);
        const auto sol = assign_firms(solve_equal_utility_thresholds(inst), inst);
        CHECK(same_intervals(sol.profile.strategy(0), {{0.65, 1.0}}));
        CHECK(same_intervals(sol.profile.strategy(1), {{13.0 / 30.0, 0.65}, {13.0 / 15.0, 1.0}}));
    }
    for (double c : {0.1, 0.5, 1.0}) {
        const auto inst = uniform_instance(1, c);
        const auto sol = assign_firms(solve_equal_utility_thresholds(inst), inst);
        CHECK(same_intervals(sol.profile.strategy(0), {{1.0 - c, 1.0}}));
    }
}

TEST_CASE("assign_firms output verifies") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 24; ++trial) {
        const auto inst = testing::random_instance(rng, trial % 3, trial % 2 ? kIndep : kCorr,
                                                   2, 6, 0.05, 0.6);
        const auto sol = assign_firms(solve_equal_utility_thresholds(inst), inst);
        const auto report = verify_equilibrium(sol.profile, inst, 1e-6);
        CHECK_MESSAGE(report.is_equilibrium, "N=", inst.n_firms, " c=", inst.capacity);
        CHECK(classify(sol) == EquilibriumKind::equal_utility);
    }
}

TEST_CASE("verify_equilibrium examples") {
    const auto a = uniform_instance(2, 0.2);
    const auto disjoint = make_profile({{{0.6, 0.8}}, {{0.8, 1.0}}}, a.dist);
    const auto r1 = verify_equilibrium(disjoint, a, 1e-6);
    CHECK(r1.is_equilibrium);
    CHECK(r1.condition_violations.empty());

    const auto naive = verify_equilibrium(naive_profile(a), a, 1e-6);
    CHECK_FALSE(naive.is_equilibrium);
    CHECK(std::abs(naive.max_deviation_gain - 0.05) < 1e-9);

    const auto b = uniform_instance(2, 0.35);
    const auto variable_profile = make_profile({{{0.4, 0.55}, {0.8, 1.0}}, {{0.55, 0.8}, {0.9, 1.0}}}, b.dist);
    const auto r4 = verify_equilibrium(variable_profile, b, 1e-6);
    CHECK(r4.is_equilibrium);
    CHECK(classify(r4.extracted) == EquilibriumKind::variable_utility);
    CHECK(std::abs(utility(1, r4.extracted.tau(1), kCorr) - 0.4) < 1e-9);
    CHECK(std::abs(utility(2, r4.extracted.tau(2), kCorr) - 0.45) < 1e-9);

    // Structural mode agrees on these profiles.
    CHECK(verify_equilibrium(variable_profile, b, 1e-6, VerifyMode::structural).is_equilibrium);
    CHECK_FALSE(verify_equilibrium(naive_profile(a), a, 1e-6, VerifyMode::structural).is_equilibrium);

    // Leaving capacity unused breaks condition 1.
    const auto slack = make_profile({{{0.6, 0.7}}, {{0.8, 1.0}}}, a.dist);
    const auto rs = verify_equilibrium(slack, a, 1e-6);
    CHECK_FALSE(rs.is_equilibrium);
    REQUIRE_FALSE(rs.condition_violations.empty());
    CHECK(rs.condition_violations.front().condition == 1);

    CHECK_THROWS_AS(verify_equilibrium(make_profile({{{0.5, 1.0}}, {}}, a.dist), a, 1e-6),
                    ValidationError);
    CHECK_THROWS_AS(verify_equilibrium(make_profile({{}}, a.dist), a, 1e-6), ValidationError);
}

TEST_CASE("classify examples") {
    const auto b = uniform_instance(2, 0.35);
    const auto sol = assign_firms(solve_equal_utility_thresholds(b), b);
    CHECK(classify(sol) == EquilibriumKind::equal_utility);
    const auto one = uniform_instance(1, 0.3);
    CHECK(classify(solve_equal_utility_thresholds(one)) == EquilibriumKind::equal_utility);
}

TEST_CASE("welfare examples") {
    const auto a = uniform_instance(2, 0.2);
    CHECK(std::abs(sw_ne(a) - 0.32) < 1e-12);
    CHECK(std::abs(sw_naive(a) - 0.18) < 1e-12);
    CHECK(std::abs(sw_max(a) - 0.32) < 1e-12);
    CHECK(std::abs(pons(a) - 16.0 / 9.0) < 1e-9);
    CHECK(std::abs(poa(a) - 1.0) < 1e-9);

    const auto b = uniform_instance(2, 0.35);
    const double t = 13.0 / 30.0;
    CHECK(std::abs(sw_ne(b) - 0.5 * (1.0 - t * t)) < 1e-12);
    CHECK(std::abs(sw_ne_correlated_closed_form(b) - sw_ne(b)) < 1e-12);

    // Full capacity: every firm interviews everyone.
    for (auto scheme : {kCorr, kIndep}) {
        const auto full = uniform_instance(3, 1.0, scheme);
        const double expect = 3.0 * full.dist.integrate_weighted(
                                        [scheme](double s) { return utility(3, s, scheme); }, 0, 1);
        CHECK(std::abs(sw_ne(full) - expect) < 1e-12);
    }

    CHECK(std::abs(sw_max(uniform_instance(4, 0.3)) - 0.5) < 1e-12);
    CHECK(std::abs(sw_max(uniform_instance(2, 0.2, kIndep)) - 0.32) < 2e-4);
    CHECK(sw_max_greedy(uniform_instance(2, 0.2, kIndep)).max_multiplicity == 1);

    CHECK(pons(uniform_instance(1, 0.3)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pons(uniform_instance(100, 0.2)) - 1.0 / (0.2 * 1.8)) < 0.01 * 2.7778);
    CHECK(std::abs(poa(uniform_instance(3, 1e-3)) - 1.0) < 1e-3);
    CHECK(std::abs(poa(uniform_instance(3, 1e-3, kIndep)) - 1.0) < 1e-3);
    CHECK(poa(uniform_instance(100, 0.2)) <= 1.01);
}

TEST_CASE("centralized optimum: closed form against the grid greedy") {
    for (auto [n, c] : {std::pair{2, 0.2}, {3, 0.25}, {4, 0.3}, {6, 0.5}, {5, 0.1}}) {
        const auto inst = uniform_instance(n, c);
        CHECK(std::abs(sw_max_greedy(inst).welfare - single_coverage_welfare(inst)) < 2e-4);
    }
    const auto tent = Instance(3, 0.1, ScoreDistribution::piecewise_linear({0, 0.5, 1}, {1, 3, 1}),
                               kCorr);
    CHECK(std::abs(sw_max_greedy(tent).welfare - single_coverage_welfare(tent)) < 2e-4);
    for (double c : {0.02, 0.05, 0.1}) {
        const auto inst = uniform_instance(3, c, kIndep);
        CHECK(std::abs(sw_max(inst) - single_coverage_welfare(inst)) < 2e-4);
    }
}

TEST_CASE("structural properties") {
    // tau_m = m tau_1 under the correlated scheme.
    for (int n = 2; n <= 8; ++n) {
        for (double c : {0.05, 0.2, 0.35}) {
            const auto ts = solve_equal_utility_thresholds(uniform_instance(n, c));
            for (int m = 1; m <= ts.m_max; ++m) {
                CHECK(std::abs(ts.tau(m) - std::min(1.0, m * ts.tau(1))) < 1e-9);
            }
        }
    }
    // Nc below the upper-half mass: one interview per applicant.
    for (auto scheme : {kCorr, kIndep}) {
        for (auto [n, c] : {std::pair{2, 0.2}, {4, 0.1}, {9, 0.05}}) {
            const auto inst = uniform_instance(n, c, scheme);
            const auto ts = solve_equal_utility_thresholds(inst);
            CHECK(ts.m_max == 1);
            CHECK(std::abs(inst.dist.mass(ts.tau(1), 1.0) - n * c) < 1e-9);
        }
    }
    // Welfare ordering.
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        const auto inst = testing::random_instance(rng, trial % 3, trial % 2 ? kIndep : kCorr);
        const auto w = welfare_summary(inst, 20000);
        CHECK(w.sw_naive + 1e-9 < w.sw_ne);
        CHECK(w.sw_ne <= w.sw_max + 2e-4);
    }
}

TEST_CASE("flexible capacity") {
    const auto u = ScoreDistribution::uniform();
    CHECK(std::abs(naive_capacity_for_welfare(0.32, 2, u, kCorr) - 0.4) < 1e-9);
    CHECK(std::abs(naive_capacity_for_welfare(0.18, 2, u, kCorr) - 0.2) < 1e-9);
    CHECK(naive_capacity_for_welfare(1e-6, 2, u, kCorr) < 1e-5);

    for (int n : {2, 8}) {
        const auto r = ne_with_capacity_over_n(0.32, n, u, kCorr);
        CHECK(std::abs(r.welfare - 0.32) < 1e-8);
        CHECK(std::abs(r.total_capacity - 0.4) < 1e-9);
        CHECK(r.report.is_equilibrium);
        for (const auto& s : r.solution.profile.strategies()) {
            CHECK(std::abs(s.mass() - 0.4 / n) < 1e-9);
        }
    }
    const auto edge = ne_with_capacity_over_n(0.375, 3, u, kCorr);
    CHECK(std::abs(edge.threshold - 0.5) < 1e-9);
    CHECK_THROWS_AS(ne_with_capacity_over_n(0.4, 3, u, kCorr), ArgumentError);
}
