#include "monohire/dynamics.hpp"

#include "monohire/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monohire {

namespace {

constexpr int kBisectionIterations = 200;
constexpr double kThresholdAgreement = 1e-9;
// Gain floor for the polishing rounds that follow an epsilon-quiet round.
constexpr double kPolishGain = 1e-15;

}  // namespace

double potential(const StrategyProfile& profile, const Instance& inst) {
    const DecisionScheme scheme = inst.scheme;
    double total = 0.0;
    for (const auto& band : profile.bands()) {
        const int m = band.multiplicity;
        if (m <= 0 || !(band.hi > band.lo)) continue;
        total += inst.dist.integrate_weighted(
            [m, scheme](double s) {
                double sum = 0.0;
                for (int j = 1; j <= m; ++j) sum += utility(j, s, scheme);
                return sum;
            },
            band.lo, band.hi);
    }
    return total;
}

Strategy best_response(const StrategyProfile& profile, std::size_t i, const Instance& inst) {
    const std::vector<Band> bands = profile.bands_excluding(i);
    const double c = inst.capacity;
    const DecisionScheme scheme = inst.scheme;
    const int cap = std::max(inst.n_firms, static_cast<int>(profile.size()));

    // Within a band of multiplicity m the marginal utility U_{m+1}(s) is
    // increasing, so the superlevel set at lambda is a suffix of the band.
    auto cut = [&](const Band& b, double lambda) {
        const int k = std::min(b.multiplicity + 1, cap);
        return std::clamp(utility_threshold(k, lambda, scheme), b.lo, b.hi);
    };
    auto mass_above = [&](double lambda) {
        double total = 0.0;
        for (const auto& b : bands) total += inst.dist.mass(cut(b, lambda), b.hi);
        return total;
    };

    // Invariant: mass_above(lo) >= c > mass_above(hi). Returning lo keeps
    // the critical-level ties, which sit at the high end of each band.
    double lo = 0.0;
    double hi = 1.0;
    if (mass_above(lo) > c) {
        for (int iter = 0; iter < kBisectionIterations && hi - lo > 1e-16; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (mass_above(mid) >= c) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    // Scores between cut(b, lo) and cut(b, hi) are tied at the critical level
    // (U can be flat to the last bit, e.g. U_k near s = 1 when independent).
    // The strictly better part is always taken; ties fill the remaining
    // capacity from the highest score down.
    std::vector<double> start(bands.size());
    double remaining = c;
    for (std::size_t j = 0; j < bands.size(); ++j) {
        start[j] = cut(bands[j], hi);
        remaining -= inst.dist.mass(start[j], bands[j].hi);
    }
    for (std::size_t j = bands.size(); j-- > 0 && remaining > 0.0;) {
        const double a = cut(bands[j], lo);
        const double tied = inst.dist.mass(a, start[j]);
        if (!(tied > 0.0)) continue;
        if (tied <= remaining) {
            start[j] = a;
            remaining -= tied;
        } else {
            const double y = inst.dist.quantile(inst.dist.cdf(start[j]) - remaining);
            start[j] = std::clamp(y, a, start[j]);
            remaining = 0.0;
        }
    }
    std::vector<Interval> intervals;
    for (std::size_t j = 0; j < bands.size(); ++j) {
        if (bands[j].hi > start[j]) intervals.push_back({start[j], bands[j].hi});
    }
    return Strategy(std::move(intervals), inst.dist);
}

DynamicsResult run_best_response_dynamics(const Instance& inst, const StrategyProfile& init,
                                          double epsilon, int max_rounds) {
    if (!(epsilon > 0.0)) throw ArgumentError("dynamics: epsilon must be > 0");
    if (max_rounds < 1) throw ArgumentError("dynamics: max_rounds must be >= 1");
    validate_profile(init, inst, kStructuralTolerance);

    DynamicsResult result{init, {}};
    StrategyProfile& current = result.profile;
    DynamicsTrace& trace = result.trace;
    // An epsilon-quiet profile can still miss the threshold conditions by
    // O(sqrt(epsilon c)) in utility, since the deviation gain is quadratic in
    // that gap. Such profiles get further rounds with a near-zero gain floor.
    bool polishing = false;
    for (int round = 1; round <= max_rounds; ++round) {
        const double threshold = polishing ? kPolishGain : epsilon * inst.capacity;
        bool updated = false;
        for (std::size_t i = 0; i < current.size(); ++i) {
            const double before = firm_utility(current, i, inst);
            StrategyProfile candidate = current.with_strategy(i, best_response(current, i, inst));
            const double after = firm_utility(candidate, i, inst);
            if (!(after - before > threshold)) continue;
            trace.steps.push_back({round, static_cast<int>(i), before, after,
                                   potential(current, inst), potential(candidate, inst)});
            current = std::move(candidate);
            updated = true;
        }
        trace.rounds_used = round;
        if (updated) continue;
        if (polishing ||
            verify_equilibrium(current, inst, epsilon, VerifyMode::structural).is_equilibrium) {
            trace.converged = true;
            break;
        }
        polishing = true;
    }
    return result;
}

double c0_bound(int n_total, double delta) {
    if (n_total < 1) throw ArgumentError("c0_bound: n_total must be >= 1");
    if (!(delta > 0.0)) throw ArgumentError("c0_bound: delta must be > 0");
    const double n1 = n_total + 1.0;
    double inner = 1.0;
    for (int m = 1; m <= n_total; ++m) {
        const double a = std::pow(1.0 - m / n1, 1.0 / m);
        const double b = std::pow(std::max(0.0, 1.0 - (m + 1) / n1), 1.0 / (m + 1));
        inner = std::min(inner, a - b);
    }
    return std::min(0.5 * delta, delta * inner);
}

void check_one_turn_bounds(const Instance& inst) {
    const double delta = inst.dist.delta();
    const double c = inst.capacity;
    std::ostringstream msg;
    msg.precision(12);
    if (inst.scheme == DecisionScheme::correlated) {
        if (c > 0.5 * delta * (1.0 + 1e-12)) {
            msg << "one-turn dynamics requires c <= 0.5*delta = " << 0.5 * delta << " (c = " << c
                << ")";
            throw PreconditionError(msg.str());
        }
        return;
    }
    const double bound = c0_bound(inst.n_firms, delta);
    if (c > bound * (1.0 + 1e-12)) {
        msg << "one-turn dynamics requires c <= c0(N=" << inst.n_firms << ", delta=" << delta
            << ") = " << bound << " (c = " << c << ")";
        throw PreconditionError(msg.str());
    }
}

bool one_turn_bounds_hold(const Instance& inst) {
    try {
        check_one_turn_bounds(inst);
        return true;
    } catch (const PreconditionError&) {
        return false;
    }
}

EquilibriumSolution single_firm_solution(const Instance& inst) {
    const double s_c = inst.dist.top_mass_threshold(inst.capacity);
    EquilibriumSolution sol;
    sol.thresholds.scheme = inst.scheme;
    sol.thresholds.level = s_c;
    sol.thresholds.thresholds = {0.0, s_c, 1.0};
    sol.thresholds.m_max = s_c < 1.0 ? 1 : 0;
    sol.profile = StrategyProfile({Strategy::suffix(s_c, inst.dist)});
    sol.kind = EquilibriumKind::equal_utility;
    sol.method = AssignmentMethod::recursion;
    return sol;
}

OneTurnStep one_turn_step(const EquilibriumSolution& current, const Instance& inst,
                          OneTurnOptions options) {
    const ThresholdSet& ts = current.thresholds;
    const int k = ts.n_firms();
    const int m_max = ts.m_max;
    const DecisionScheme scheme = inst.scheme;
    if (k < 1 || m_max < 1) throw ArgumentError("one_turn_step: need an equilibrium with k >= 1");

    if (options.enforce_bounds) {
        check_one_turn_bounds(inst);
        if (scheme == DecisionScheme::independent && !(ts.tau(1) > 1.0 / (m_max + 1))) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "one-turn step requires tau_1 > 1/(m_max+1) = " << 1.0 / (m_max + 1)
                << " (tau_1 = " << ts.tau(1) << ")";
            throw PreconditionError(msg.str());
        }
    }

    double t_star = 0.0;
    if (scheme == DecisionScheme::correlated) {
        t_star = ts.tau(m_max) / (m_max + 1);
    } else {
        for (int m = 1; m <= m_max; ++m) t_star = std::max(t_star, utility(m + 1, ts.tau(m), scheme));
    }

    // New thresholds tau'_{m+1}(t), each kept inside its old band.
    auto refined = [&](int m, double t) {
        return std::max(ts.tau(m), utility_threshold(m + 1, t, scheme));
    };
    auto taken = [&](double t) {
        double total = 0.0;
        for (int m = 0; m <= m_max; ++m) {
            const double a = std::min(refined(m, t), ts.tau(m + 1));
            total += inst.dist.mass(a, ts.tau(m + 1));
        }
        return total;
    };

    const double c = inst.capacity;
    double lo = t_star + 1e-12;
    double hi = ts.tau(1);
    if (!(lo < hi) || taken(lo) < c || taken(hi) > c) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "one-turn step: no root in (" << lo << ", " << hi << "): f(lo) = " << taken(lo)
            << ", f(hi) = " << taken(hi) << ", c = " << c;
        throw NumericalError(msg.str());
    }
    for (int iter = 0; iter < kBisectionIterations && hi - lo > 1e-16; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (taken(mid) >= c) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t = lo;

    std::vector<Interval> intervals;
    for (int m = 0; m <= m_max; ++m) {
        const double a = std::min(refined(m, t), ts.tau(m + 1));
        if (ts.tau(m + 1) > a) intervals.push_back({a, ts.tau(m + 1)});
    }

    OneTurnStep step;
    step.strategy = Strategy(std::move(intervals), inst.dist);
    step.thresholds.scheme = scheme;
    step.thresholds.level = t;
    step.thresholds.thresholds.assign(static_cast<std::size_t>(k) + 3, 1.0);
    step.thresholds.thresholds.front() = 0.0;
    for (int m = 1; m <= m_max + 1 && m <= k + 1; ++m) {
        step.thresholds.thresholds[static_cast<std::size_t>(m)] =
            m == 1 ? t : std::min(refined(m - 1, t), ts.tau(m));
    }
    int new_max = 0;
    for (int m = 1; m <= k + 1; ++m) {
        if (step.thresholds.tau(m) < 1.0) new_max = m;
    }
    step.thresholds.m_max = new_max;
    return step;
}

OneTurnResult run_one_turn_dynamics(const Instance& inst, OneTurnOptions options) {
    if (options.enforce_bounds) check_one_turn_bounds(inst);

    OneTurnResult result;
    EquilibriumSolution sol = single_firm_solution(inst);
    {
        const double u = firm_utility(sol.profile, 0, inst);
        result.trace.steps.push_back({1, 0, 0.0, u, 0.0, potential(sol.profile, inst)});
    }
    std::vector<Strategy> strategies(sol.profile.strategies().begin(),
                                     sol.profile.strategies().end());
    for (int k = 1; k < inst.n_firms; ++k) {
        const double p_before = potential(sol.profile, inst);
        OneTurnStep step = one_turn_step(sol, inst, options);
        strategies.push_back(std::move(step.strategy));
        sol.thresholds = std::move(step.thresholds);
        sol.profile = StrategyProfile(strategies);
        const double u = firm_utility(sol.profile, static_cast<std::size_t>(k), inst);
        result.trace.steps.push_back({1, k, 0.0, u, p_before, potential(sol.profile, inst)});
    }
    result.trace.converged = true;
    result.trace.rounds_used = 1;
    sol.kind = classify(sol.thresholds);
    sol.method = AssignmentMethod::recursion;

    const ThresholdSet direct = solve_equal_utility_thresholds(inst);
    for (std::size_t m = 0; m < direct.thresholds.size(); ++m) {
        result.max_threshold_gap = std::max(
            result.max_threshold_gap, std::abs(direct.thresholds[m] - sol.thresholds.thresholds[m]));
    }
    result.report = verify_equilibrium(sol.profile, inst, 1e-6);
    result.solution = std::move(sol);
    if (!result.report.is_equilibrium) {
        throw ConvergenceError("one-turn dynamics ended at a profile that does not verify",
                               result.solution.profile);
    }
    if (result.max_threshold_gap > kThresholdAgreement) {
        std::ostringstream msg;
        msg << "one-turn thresholds differ from the direct solve by " << result.max_threshold_gap;
        throw NumericalError(msg.str());
    }
    return result;
}

}  // namespace monohire
