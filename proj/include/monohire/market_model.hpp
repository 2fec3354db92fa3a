// Decision schemes, utility curves, firm strategies and strategy profiles.
#pragma once

#include "monohire/score_dist.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace monohire {

enum class DecisionScheme { correlated, independent };

std::string to_string(DecisionScheme scheme);
// Accepts "correlated"/"corr" and "independent"/"indep".
DecisionScheme parse_scheme(std::string_view text);

// Expected hire probability U_n(s) for one of n firms interviewing score s:
// s / n when offers are correlated, (1 - (1 - s)^n) / n when independent.
double utility(int n, double s, DecisionScheme scheme);

// The unique s with utility(n, s) == t. Throws RangeError when t > U_n(1).
double inverse_utility(int n, double t, DecisionScheme scheme);

// inverse_utility clipped to 1 when the level t is out of reach of U_n.
double utility_threshold(int n, double t, DecisionScheme scheme);

// Welfare gained when the multiplicity at s rises from n to n + 1,
// (n + 1) U_{n+1}(s) - n U_n(s). Non-increasing in n.
double marginal_welfare(int n, double s, DecisionScheme scheme);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

// A firm's interview set: sorted, disjoint half-open intervals in [0, 1].
class Strategy {
public:
    Strategy() = default;

    // Sorts and merges the input (touching within 1e-12 counts as adjacent)
    // and caches the mass under `dist`. Throws ArgumentError for intervals
    // outside [0, 1] or with lo > hi.
    Strategy(std::vector<Interval> intervals, const ScoreDistribution& dist);

    static Strategy suffix(double lo, const ScoreDistribution& dist);

    std::span<const Interval> intervals() const { return intervals_; }
    double mass() const { return mass_; }
    bool empty() const { return intervals_.empty(); }
    bool contains(double s) const;

private:
    std::vector<Interval> intervals_;
    double mass_ = 0.0;
};

// Maximal interval of constant multiplicity.
struct Band {
    double lo = 0.0;
    double hi = 0.0;
    int multiplicity = 0;
};

// N strategies and the derived multiplicity function M(s).
//
// Endpoints closer than 1e-12 are snapped to a common grid point before the
// bands are formed, so round-off in independently computed endpoints cannot
// create sliver bands.
class StrategyProfile {
public:
    StrategyProfile() = default;
    explicit StrategyProfile(std::vector<Strategy> strategies);

    std::size_t size() const { return strategies_.size(); }
    std::span<const Strategy> strategies() const { return strategies_; }
    const Strategy& strategy(std::size_t i) const { return strategies_.at(i); }

    // Partition of [0, 1] into maximal constant-multiplicity bands.
    std::span<const Band> bands() const { return bands_; }
    int max_multiplicity() const;

    // Bands of the multiplicity function with firm i removed.
    std::vector<Band> bands_excluding(std::size_t i) const;

    // Firm i's interview set cut at multiplicity changes; each piece carries
    // the multiplicity including firm i.
    std::vector<Band> coverage(std::size_t i) const;

    StrategyProfile with_strategy(std::size_t i, Strategy replacement) const;

private:
    std::vector<Band> runs(const std::vector<int>& counts) const;

    std::vector<Strategy> strategies_;
    std::vector<double> grid_;
    std::vector<int> counts_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> firm_segments_;
    std::vector<Band> bands_;
};

// Model instance (N, c, distribution, decision scheme).
struct Instance {
    Instance(int n_firms, double capacity, ScoreDistribution dist, DecisionScheme scheme);

    int n_firms;
    double capacity;
    ScoreDistribution dist;
    DecisionScheme scheme;
};

// Capacity slack used when validating strategies produced by the solvers.
inline constexpr double kCapacitySlack = 1e-12;

// Throws ValidationError if the profile size differs from N or any strategy
// exceeds c + tolerance.
void validate_profile(const StrategyProfile& profile, const Instance& inst,
                      double tolerance = kCapacitySlack);

// Integral of U_m(s) phi(s) over [a, b]; zero for m == 0.
double utility_integral(int m, double a, double b, const Instance& inst);

double firm_utility(const StrategyProfile& profile, std::size_t i, const Instance& inst);

// Sum of firm utilities.
double social_welfare(const StrategyProfile& profile, const Instance& inst);

// The same welfare computed band by band: sum of m * int U_m phi.
double band_welfare(const StrategyProfile& profile, const Instance& inst);

// Every firm interviews the top-c mass [s_c, 1).
StrategyProfile naive_profile(const Instance& inst);

}  // namespace monohire
