// Best responses, the exact potential, and best-response dynamics.
#pragma once

#include "monohire/equilibrium.hpp"
#include "monohire/market_model.hpp"

#include <vector>

namespace monohire {

struct DynamicsStep {
    int round = 0;
    int firm = 0;
    double utility_before = 0.0;
    double utility_after = 0.0;
    double potential_before = 0.0;
    double potential_after = 0.0;
};

struct DynamicsTrace {
    std::vector<DynamicsStep> steps;
    bool converged = false;
    int rounds_used = 0;
};

// P(f) = int sum_{j=1}^{M(s)} U_j(s) phi(s) ds. Any unilateral change of
// strategy moves P by exactly the deviator's change in utility.
double potential(const StrategyProfile& profile, const Instance& inst);

// Firm i's optimal interview set against the others: the superlevel set
// {s : U_{M_-i(s)+1}(s) > lambda} of mass c.
Strategy best_response(const StrategyProfile& profile, std::size_t i, const Instance& inst);

struct DynamicsResult {
    StrategyProfile profile;
    DynamicsTrace trace;
};

// Round-robin dynamics in firm index order. A firm moves when its best
// response gains more than epsilon * c; stops after a quiet round or
// max_rounds rounds (converged == false in the latter case).
DynamicsResult run_best_response_dynamics(const Instance& inst, const StrategyProfile& init,
                                          double epsilon, int max_rounds = 200);

// min(0.5 delta, delta * min_m [(1 - m/(N+1))^{1/m} - (1 - (m+1)/(N+1))^{1/(m+1)}]).
double c0_bound(int n_total, double delta);

// Throws PreconditionError unless c <= 0.5 delta (correlated) or
// c <= c0_bound(N, delta) (independent).
void check_one_turn_bounds(const Instance& inst);
bool one_turn_bounds_hold(const Instance& inst);

struct OneTurnOptions {
    bool enforce_bounds = true;
};

struct OneTurnStep {
    Strategy strategy;       // the entering firm's best response
    ThresholdSet thresholds;  // refined thresholds for k + 1 firms
};

// Adds one firm to an equal-utility equilibrium of k firms: bisection for the
// level t in (t*, tau_1) with sum_m mass([tau'_{m+1}(t), tau_{m+1})) == c.
OneTurnStep one_turn_step(const EquilibriumSolution& current, const Instance& inst,
                          OneTurnOptions options = {});

// The single-firm equilibrium [s_c, 1).
EquilibriumSolution single_firm_solution(const Instance& inst);

struct OneTurnResult {
    EquilibriumSolution solution;
    DynamicsTrace trace;
    VerificationReport report;
    double max_threshold_gap = 0.0;  // versus solve_equal_utility_thresholds
};

// Firms 1..N enter in order, each playing one_turn_step once. With
// enforce_bounds off the capacity bounds are not checked; the result must
// still verify.
OneTurnResult run_one_turn_dynamics(const Instance& inst, OneTurnOptions options = {});

}  // namespace monohire
