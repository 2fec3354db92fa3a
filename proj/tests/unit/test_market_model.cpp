#include "monohire/errors.hpp"
#include "monohire/io.hpp"
#include "monohire/market_model.hpp"
#include "monohire/simulation.hpp"

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

}  // namespace

TEST_CASE("utility examples") {
    CHECK(utility(1, 0.73, kCorr) == doctest::Approx(0.73).epsilon(1e-15));
    CHECK(std::abs(utility(1, 0.73, kIndep) - 0.73) < 1e-15);
    CHECK(std::abs(utility(2, 0.8, kCorr) - 0.4) < 1e-15);
    CHECK(std::abs(utility(2, 0.5, kIndep) - 0.375) < 1e-15);
    CHECK(utility(4, 0.0, kCorr) == 0.0);
    CHECK(utility(4, 0.0, kIndep) == 0.0);
    CHECK_THROWS_AS(utility(0, 0.5, kCorr), ArgumentError);
    CHECK_THROWS_AS(utility(1, 1.5, kCorr), ArgumentError);
}

TEST_CASE("inverse_utility examples") {
    CHECK(std::abs(inverse_utility(3, 0.2, kCorr) - 0.6) < 1e-15);
    CHECK(std::abs(inverse_utility(4, 0.2, kIndep) - (1.0 - std::pow(0.2, 0.25))) < 1e-15);
    CHECK(std::abs(inverse_utility(4, 0.2, kIndep) - 0.3313) < 1e-4);
    CHECK(std::abs(inverse_utility(2, 13.0 / 30.0, kCorr) - 13.0 / 15.0) < 1e-15);
    CHECK_THROWS_AS(inverse_utility(2, 0.6, kCorr), RangeError);
    CHECK(utility_threshold(2, 0.6, kCorr) == 1.0);
}

TEST_CASE("utility shape on the grid") {
    for (auto scheme : {kCorr, kIndep}) {
        for (int n = 1; n <= 10; ++n) {
            for (int k = 1; k <= 99; ++k) {
                const double s = k / 100.0;
                // (1 - s)^n below one ulp of 1 makes neighbouring values equal.
                if (k < 99 && (scheme == kCorr || std::pow(1.0 - s, n) > 1e-15)) {
                    CHECK(utility(n, s, scheme) < utility(n, s + 0.01, scheme));
                }
                if (n < 10) CHECK(utility(n + 1, s, scheme) < utility(n, s, scheme));
                const double back = inverse_utility(n, utility(n, s, scheme), scheme);
                // 1 - (1 - n t)^{1/n} cancels catastrophically once (1 - s)^n is
                // tiny; the bound tracks the propagated rounding error.
                const double slack =
                    scheme == kCorr ? 1e-12
                                    : 1e-12 + 1e-14 / (n * std::pow(1.0 - s, n - 1));
                CHECK(std::abs(back - s) <= slack);
                if (std::pow(1.0 - s, n) > 1e-3) CHECK(std::abs(back - s) < 1e-12);
            }
        }
    }
    for (int n = 1; n <= 10; ++n) {
        CHECK(n * utility(n, 0.37, kCorr) == 0.37);
        CHECK(std::abs(n * utility(n, 0.37, kIndep) - (1.0 - std::pow(0.63, n))) < 1e-15);
    }
}

TEST_CASE("strategy normalization") {
    const auto u = ScoreDistribution::uniform();
    const Strategy s({{0.5, 0.6}, {0.2, 0.3}, {0.3, 0.35}, {0.6 + 1e-13, 0.7}}, u);
    REQUIRE(s.intervals().size() == 2);
    CHECK(s.intervals()[0] == Interval{0.2, 0.35});
    CHECK(std::abs(s.mass() - 0.35) < 1e-12);
    CHECK(s.contains(0.2));
    CHECK_FALSE(s.contains(0.35));
    CHECK_THROWS_AS(Strategy({{0.5, 1.2}}, u), ArgumentError);
}

TEST_CASE("firm_utility and social_welfare examples") {
    const auto inst = uniform_instance(2, 0.2);
    const auto both = make_profile({{{0.8, 1.0}}, {{0.8, 1.0}}}, inst.dist);
    CHECK(std::abs(firm_utility(both, 0, inst) - 0.09) < 1e-12);
    CHECK(std::abs(social_welfare(both, inst) - 0.18) < 1e-12);

    const auto split = make_profile({{{0.6, 0.8}}, {{0.8, 1.0}}}, inst.dist);
    CHECK(std::abs(firm_utility(split, 0, inst) - 0.14) < 1e-12);
    CHECK(std::abs(firm_utility(split, 1, inst) - 0.18) < 1e-12);
    CHECK(std::abs(social_welfare(split, inst) - 0.32) < 1e-12);

    const auto empty = make_profile({{}, {}}, inst.dist);
    CHECK(firm_utility(empty, 0, inst) == 0.0);
    CHECK(social_welfare(empty, inst) == 0.0);
}

TEST_CASE("naive profile") {
    const auto inst = uniform_instance(3, 0.2);
    const auto p = naive_profile(inst);
    for (const auto& s : p.strategies()) {
        REQUIRE(s.intervals().size() == 1);
        CHECK(std::abs(s.intervals()[0].lo - 0.8) < 1e-12);
        CHECK(s.intervals()[0].hi == 1.0);
    }
    CHECK(std::abs(social_welfare(p, inst) - 0.18) < 1e-12);
    const auto indep = uniform_instance(2, 0.2, kIndep);
    CHECK(std::abs(social_welfare(naive_profile(indep), indep) - (0.2 - 0.008 / 3.0)) < 1e-12);
}

TEST_CASE("profile validation") {
    const auto inst = uniform_instance(2, 0.2);
    CHECK_THROWS_AS(validate_profile(make_profile({{{0.7, 1.0}}, {}}, inst.dist), inst),
                    ValidationError);
    CHECK_THROWS_AS(validate_profile(make_profile({{}}, inst.dist), inst), ValidationError);
    CHECK_NOTHROW(validate_profile(make_profile({{{0.8, 1.0}}, {}}, inst.dist), inst));
    CHECK_THROWS_AS(Instance(2, 0.0, ScoreDistribution::uniform(), kCorr), ArgumentError);
    CHECK_THROWS_AS(Instance(0, 0.2, ScoreDistribution::uniform(), kCorr), ArgumentError);
}

TEST_CASE("random profiles: welfare two ways, bands partition, serialization") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = testing::random_instance(rng, trial % 3, trial % 2 ? kIndep : kCorr);
        const auto p = testing::random_profile(rng, inst);
        CHECK(std::abs(social_welfare(p, inst) - band_welfare(p, inst)) < 1e-9);

        const auto bands = p.bands();
        REQUIRE_FALSE(bands.empty());
        CHECK(bands.front().lo == 0.0);
        CHECK(bands.back().hi == 1.0);
        for (std::size_t j = 0; j < bands.size(); ++j) {
            if (j > 0) CHECK(bands[j].lo == bands[j - 1].hi);
            const double mid = 0.5 * (bands[j].lo + bands[j].hi);
            int count = 0;
            for (const auto& s : p.strategies()) count += s.contains(mid) ? 1 : 0;
            CHECK(bands[j].multiplicity == count);
        }

        for (const auto& again : {parse_profile(format_profile_text(p), inst.dist),
                                  profile_from_json(profile_to_json(p), inst.dist)}) {
            REQUIRE(again.bands().size() == bands.size());
            for (std::size_t j = 0; j < bands.size(); ++j) {
                CHECK(again.bands()[j].lo == bands[j].lo);
                CHECK(again.bands()[j].multiplicity == bands[j].multiplicity);
            }
        }
    }
}

TEST_CASE("monte carlo hiring") {
    const auto inst = uniform_instance(2, 0.2);
    const auto empty = make_profile({{}, {}}, inst.dist);
    const auto none = simulate_hiring(empty, inst, 10000, 1);
    CHECK(none.hire_rate[0] == 0.0);
    CHECK(none.welfare == 0.0);

    const auto both = make_profile({{{0.8, 1.0}}, {{0.8, 1.0}}}, inst.dist);
    const auto r = simulate_hiring(both, inst, 1000000, 11);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(r.hire_rate[i] - 0.09) < 3 * r.hire_se[i]);

    // Thread count does not change the draws.
    const auto a = simulate_hiring(both, inst, 100000, 5, 1);
    const auto b = simulate_hiring(both, inst, 100000, 5, 3);
    CHECK(a.hire_rate == b.hire_rate);

    const auto indep = uniform_instance(4, 0.15, kIndep);
    const auto p = make_profile({{{0.85, 1.0}}, {{0.7, 0.85}}, {{0.55, 0.7}}, {{0.4, 0.55}}},
                                indep.dist);
    const auto w = simulate_hiring(p, indep, 1000000, 3);
    CHECK(std::abs(w.welfare - social_welfare(p, indep)) < 3 * w.welfare_se);
}
