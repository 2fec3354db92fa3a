// Equal-utility Nash equilibria, the equilibrium verifier, and welfare ratios.
#pragma once

#include "monohire/errors.hpp"
#include "monohire/market_model.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace monohire {

// Thresholds tau_0 = 0 <= tau_1 <= ... <= tau_N <= tau_{N+1} = 1: scores in
// [tau_m, tau_{m+1}) are interviewed by exactly m firms. `level` is the
// common threshold utility t of an equal-utility equilibrium.
struct ThresholdSet {
    DecisionScheme scheme = DecisionScheme::correlated;
    double level = 0.0;
    std::vector<double> thresholds;
    int m_max = 0;

    int n_firms() const { return static_cast<int>(thresholds.size()) - 2; }
    double tau(int m) const { return thresholds.at(static_cast<std::size_t>(m)); }
};

enum class EquilibriumKind { equal_utility, variable_utility };
std::string to_string(EquilibriumKind kind);

enum class AssignmentMethod {
    recursion,  // firms added one at a time by one-turn best responses
    rotation,   // fallback: cyclic rotation of equal-mass pieces inside each band
    direct,     // hand-built profile (flexible capacity, verified profiles)
};
std::string to_string(AssignmentMethod method);

struct EquilibriumSolution {
    ThresholdSet thresholds;
    StrategyProfile profile;
    EquilibriumKind kind = EquilibriumKind::equal_utility;
    AssignmentMethod method = AssignmentMethod::direct;

    bool used_fallback() const { return method == AssignmentMethod::rotation; }
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, StrategyProfile best)
        : NumericalError(what), best_(std::make_shared<const StrategyProfile>(std::move(best))) {}

    const StrategyProfile& best_profile() const { return *best_; }

private:
    std::shared_ptr<const StrategyProfile> best_;
};

struct Violation {
    int condition = 0;  // 1..4, numbered as in the equilibrium characterization
    double location = 0.0;
    std::string detail;
};

struct VerificationReport {
    bool is_equilibrium = false;
    bool behavioral_checked = false;
    double max_deviation_gain = 0.0;
    std::vector<double> deviation_gains;  // per firm; empty when not checked
    std::vector<Violation> condition_violations;
    std::vector<std::string> notes;
    ThresholdSet extracted;
};

enum class VerifyMode {
    full,        // structural conditions plus a best response for every firm
    structural,  // threshold conditions only
};

// Numerical slack for the structural conditions.
inline constexpr double kStructuralTolerance = 1e-8;

// Total interview mass sum_m m * mass([tau_m(t), tau_{m+1}(t))) at level t.
double capacity_at_level(double level, int n_firms, const Instance& inst);

// Thresholds tau_m(t) = min(U_m^{-1}(t), 1) for m = 1..n_firms.
ThresholdSet thresholds_at_level(double level, int n_firms, const Instance& inst);

// Bisection on the level t until the total capacity equals N c.
ThresholdSet solve_equal_utility_thresholds(const Instance& inst);

// Builds firm strategies realizing `ts`. Uses the one-turn recursion when
// its capacity bounds hold and otherwise the rotation construction; the
// result is checked structurally and a failure raises ConvergenceError.
EquilibriumSolution assign_firms(const ThresholdSet& ts, const Instance& inst);

// Thresholds read off the multiplicity bands; tau_m = inf{s : M(s) >= m}.
ThresholdSet extract_thresholds(const StrategyProfile& profile, const Instance& inst);

// Checks the four threshold conditions and, in full mode, that no firm can
// gain more than epsilon * c by best-responding. Throws ValidationError when
// the profile does not fit the instance (wrong size, mass above c + 1e-8).
VerificationReport verify_equilibrium(const StrategyProfile& profile, const Instance& inst,
                                      double epsilon, VerifyMode mode = VerifyMode::full);

EquilibriumKind classify(const ThresholdSet& ts);
EquilibriumKind classify(const EquilibriumSolution& sol);

double sw_naive(const Instance& inst);

// Welfare of the equal-utility equilibrium.
double sw_ne(const Instance& inst);

// Correlated closed form of the equilibrium welfare, int_{tau_1}^1 s phi(s) ds.
double sw_ne_correlated_closed_form(const Instance& inst);

// Welfare when the top min(Nc, 1) mass is interviewed exactly once:
// int_{s_Nc}^1 s phi(s) ds, or E[S] when Nc > 1.
double single_coverage_welfare(const Instance& inst);

inline constexpr std::size_t kDefaultGreedyGrid = 100000;

struct GreedyOptimum {
    double welfare = 0.0;
    int max_multiplicity = 0;
};

// Centralized optimum of the discretized program: raise multiplicities on a
// uniform score grid in order of decreasing marginal welfare until the total
// interview mass N c is spent.
GreedyOptimum sw_max_greedy(const Instance& inst, std::size_t grid = kDefaultGreedyGrid);

// Correlated: closed form. Independent: grid greedy.
double sw_max(const Instance& inst, std::size_t grid = kDefaultGreedyGrid);

double pons(const Instance& inst);
double poa(const Instance& inst, std::size_t grid = kDefaultGreedyGrid);

struct WelfareSummary {
    double sw_naive = 0.0;
    double sw_ne = 0.0;
    double sw_max = 0.0;
    double pons = 0.0;
    double poa = 0.0;
};

WelfareSummary welfare_summary(const Instance& inst, std::size_t grid = kDefaultGreedyGrid);

// The x* with N int_{x*}^1 U_N(s) phi(s) ds == welfare.
double naive_threshold_for_welfare(double welfare, int n_firms, const ScoreDistribution& dist,
                                   DecisionScheme scheme);

// Per-firm capacity c = mass([x*, 1]) at which the naive solution yields `welfare`.
double naive_capacity_for_welfare(double welfare, int n_firms, const ScoreDistribution& dist,
                                  DecisionScheme scheme);

struct FlexCapacityResult {
    Instance instance;         // N firms with capacity total_capacity / N
    double threshold = 0.0;    // x*: [x*, 1) is covered exactly once
    double total_capacity = 0.0;
    double naive_capacity = 0.0;  // per-firm capacity the naive solution needs
    double welfare = 0.0;
    EquilibriumSolution solution;
    VerificationReport report;
};

// N disjoint strategies of equal mass partitioning [x*, 1), where
// int_{x*}^1 s phi(s) ds == welfare. Requires welfare <= int_{0.5}^1 s phi(s) ds.
FlexCapacityResult ne_with_capacity_over_n(double welfare, int n_firms,
                                           const ScoreDistribution& dist,
                                           DecisionScheme scheme);

}  // namespace monohire
