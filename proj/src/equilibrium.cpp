#include "monohire/equilibrium.hpp"

#include "monohire/dynamics.hpp"
#include "monohire/format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monohire {

namespace {

constexpr int kBisectionIterations = 200;
constexpr double kThresholdAgreement = 1e-9;

int largest_open_index(const std::vector<double>& thresholds) {
    int m_max = 0;
    const int n = static_cast<int>(thresholds.size()) - 2;
    for (int m = 1; m <= n; ++m) {
        if (thresholds[static_cast<std::size_t>(m)] < 1.0) m_max = m;
    }
    return m_max;
}

// Mass of firm i's interview set inside [a, b).
double covered_mass(const Strategy& strategy, double a, double b, const ScoreDistribution& dist) {
    double total = 0.0;
    for (const auto& iv : strategy.intervals()) {
        const double lo = std::max(iv.lo, a);
        const double hi = std::min(iv.hi, b);
        if (hi > lo) total += dist.mass(lo, hi);
    }
    return total;
}

std::string describe(double x) { return format_number(x); }

void structural_checks(const StrategyProfile& profile, const Instance& inst,
                       VerificationReport& report) {
    const ThresholdSet& ts = report.extracted;
    const DecisionScheme scheme = inst.scheme;
    const double tol = kStructuralTolerance;

    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double m = profile.strategy(i).mass();
        if (std::abs(m - inst.capacity) > tol) {
            const auto ivs = profile.strategy(i).intervals();
            report.condition_violations.push_back(
                {1, ivs.empty() ? 0.0 : ivs.front().lo,
                 "firm " + std::to_string(i) + " interviews mass " + describe(m) +
                     " but capacity is " + describe(inst.capacity)});
        }
    }

    bool monotone = true;
    const auto bands = profile.bands();
    for (std::size_t k = 1; k < bands.size(); ++k) {
        if (bands[k].multiplicity < bands[k - 1].multiplicity &&
            inst.dist.mass(bands[k].lo, bands[k].hi) > tol) {
            monotone = false;
            report.condition_violations.push_back(
                {2, bands[k].lo,
                 "multiplicity drops from " + std::to_string(bands[k - 1].multiplicity) + " to " +
                     std::to_string(bands[k].multiplicity)});
        }
    }
    if (!monotone) return;

    const int m_max = ts.m_max;
    auto u_at = [&](int m) { return utility(m, ts.tau(m), scheme); };
    for (int n = 1; n < m_max; ++n) {
        for (int m = n + 1; m <= m_max; ++m) {
            if (u_at(n) > u_at(m) + tol) {
                report.condition_violations.push_back(
                    {3, ts.tau(m),
                     "U_" + std::to_string(n) + "(tau_" + std::to_string(n) + ")=" +
                         describe(u_at(n)) + " exceeds U_" + std::to_string(m) + "(tau_" +
                         std::to_string(m) + ")=" + describe(u_at(m))});
            }
        }
    }

    // Condition 4: a firm holding low-utility applicants in band n must hold
    // every applicant of band m-1 whose marginal utility U_m beats them.
    for (int n = 1; n <= m_max; ++n) {
        for (int m = n + 1; m <= std::min(m_max + 1, inst.n_firms); ++m) {
            const double target = utility(m, ts.tau(m), scheme);
            if (!(u_at(n) < target - tol)) continue;
            for (std::size_t i = 0; i < profile.size(); ++i) {
                double s_low = 2.0;
                for (const auto& piece : profile.coverage(i)) {
                    if (piece.multiplicity == n && piece.hi - piece.lo > 1e-12) {
                        s_low = std::min(s_low, piece.lo);
                    }
                }
                if (s_low > 1.0) continue;
                const double u_low = utility(n, s_low, scheme);
                if (!(u_low < target - tol)) continue;
                const double r_lo = std::max(ts.tau(m - 1), utility_threshold(m, u_low, scheme));
                const double r_hi = ts.tau(m);
                if (!(r_hi > r_lo)) continue;
                const double missing =
                    inst.dist.mass(r_lo, r_hi) -
                    covered_mass(profile.strategy(i), r_lo, r_hi, inst.dist);
                if (missing <= tol) continue;
                std::ostringstream detail;
                detail << "firm " << i << " holds s=" << describe(s_low) << " at multiplicity "
                       << n << " but leaves mass " << describe(missing) << " of ["
                       << describe(r_lo) << ", " << describe(r_hi) << ") uncovered";
                if (m == m_max + 1) {
                    report.notes.push_back("condition 4 at the boundary index m=" +
                                           std::to_string(m) + ": " + detail.str());
                } else {
                    report.condition_violations.push_back({4, s_low, detail.str()});
                }
            }
        }
    }
}

EquilibriumSolution rotation_assignment(const ThresholdSet& ts, const Instance& inst) {
    const int n = inst.n_firms;
    std::vector<std::vector<Interval>> pieces(static_cast<std::size_t>(n));
    for (int m = 1; m <= std::min(ts.m_max, n); ++m) {
        const double lo = ts.tau(m);
        const double hi = ts.tau(m + 1);
        if (!(hi > lo)) continue;
        const double base = inst.dist.cdf(lo);
        const double band_mass = inst.dist.mass(lo, hi);
        std::vector<double> cuts(static_cast<std::size_t>(n) + 1);
        cuts.front() = lo;
        cuts.back() = hi;
        for (int k = 1; k < n; ++k) {
            cuts[static_cast<std::size_t>(k)] =
                std::clamp(inst.dist.quantile(std::min(1.0, base + k * band_mass / n)), lo, hi);
        }
        // Piece j goes to firms j, j+1, ..., j+m-1 (mod N).
        for (int j = 0; j < n; ++j) {
            const Interval iv{cuts[static_cast<std::size_t>(j)],
                              cuts[static_cast<std::size_t>(j) + 1]};
            for (int r = 0; r < m; ++r) {
                pieces[static_cast<std::size_t>((j + r) % n)].push_back(iv);
            }
        }
    }
    std::vector<Strategy> strategies;
    strategies.reserve(pieces.size());
    for (auto& p : pieces) strategies.emplace_back(std::move(p), inst.dist);
    EquilibriumSolution sol;
    sol.thresholds = ts;
    sol.profile = StrategyProfile(std::move(strategies));
    sol.method = AssignmentMethod::rotation;
    sol.kind = classify(ts);
    return sol;
}

// Firms enter one at a time, each taking the one-turn best response.
// Returns false when a step fails or the end point misses `ts`.
bool recursion_assignment(const ThresholdSet& ts, const Instance& inst,
                          EquilibriumSolution& out) {
    try {
        EquilibriumSolution sol = single_firm_solution(inst);
        std::vector<Strategy> strategies(sol.profile.strategies().begin(),
                                         sol.profile.strategies().end());
        for (int k = 1; k < inst.n_firms; ++k) {
            OneTurnStep step = one_turn_step(sol, inst);
            strategies.push_back(std::move(step.strategy));
            sol.thresholds = std::move(step.thresholds);
            sol.profile = StrategyProfile(strategies);
        }
        for (std::size_t m = 0; m < ts.thresholds.size(); ++m) {
            if (std::abs(sol.thresholds.thresholds[m] - ts.thresholds[m]) > kThresholdAgreement) {
                return false;
            }
        }
        out.thresholds = ts;
        out.profile = std::move(sol.profile);
        out.method = AssignmentMethod::recursion;
        out.kind = classify(ts);
        return true;
    } catch (const ArgumentError&) {
        return false;
    } catch (const NumericalError&) {
        return false;
    }
}

double total_capacity(const ThresholdSet& ts, const Instance& inst) {
    double total = 0.0;
    for (int m = 1; m <= ts.n_firms(); ++m) {
        total += m * inst.dist.mass(ts.tau(m), ts.tau(m + 1));
    }
    return total;
}

// Thresholds with tau_m pinned at x and the level set to U_m(x).
ThresholdSet anchored_thresholds(int m, double x, int n_firms, const Instance& inst) {
    ThresholdSet ts = thresholds_at_level(utility(m, x, inst.scheme), n_firms, inst);
    ts.thresholds[static_cast<std::size_t>(m)] = x;
    for (std::size_t j = static_cast<std::size_t>(m) + 1; j < ts.thresholds.size(); ++j) {
        ts.thresholds[j] = std::max(ts.thresholds[j], x);
    }
    ts.m_max = largest_open_index(ts.thresholds);
    return ts;
}

}  // namespace

std::string to_string(EquilibriumKind kind) {
    return kind == EquilibriumKind::equal_utility ? "equal_utility" : "variable_utility";
}

std::string to_string(AssignmentMethod method) {
    switch (method) {
        case AssignmentMethod::recursion: return "recursion";
        case AssignmentMethod::rotation: return "rotation";
        case AssignmentMethod::direct: return "direct";
    }
    return "?";
}

ThresholdSet thresholds_at_level(double level, int n_firms, const Instance& inst) {
    ThresholdSet ts;
    ts.scheme = inst.scheme;
    ts.level = level;
    ts.thresholds.assign(static_cast<std::size_t>(n_firms) + 2, 1.0);
    ts.thresholds.front() = 0.0;
    for (int m = 1; m <= n_firms; ++m) {
        ts.thresholds[static_cast<std::size_t>(m)] = utility_threshold(m, level, inst.scheme);
    }
    // Round-off must not break monotonicity.
    for (std::size_t m = 1; m < ts.thresholds.size(); ++m) {
        ts.thresholds[m] = std::max(ts.thresholds[m], ts.thresholds[m - 1]);
    }
    ts.m_max = largest_open_index(ts.thresholds);
    return ts;
}

double capacity_at_level(double level, int n_firms, const Instance& inst) {
    return total_capacity(thresholds_at_level(level, n_firms, inst), inst);
}

ThresholdSet solve_equal_utility_thresholds(const Instance& inst) {
    const int n = inst.n_firms;
    const double target = n * inst.capacity;
    // Invariant: T(lo) >= N c > T(hi); T(0) = N and T(1) = 0.
    double lo = 0.0;
    double hi = 1.0;
    if (capacity_at_level(hi, n, inst) >= target) {
        std::ostringstream msg;
        msg << "equal-utility solve: capacity " << target << " is not bracketed";
        throw NumericalError(msg.str());
    }
    for (int iter = 0; iter < kBisectionIterations && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (capacity_at_level(mid, n, inst) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ThresholdSet best = thresholds_at_level(lo, n, inst);
    if (std::abs(total_capacity(best, inst) - target) <= 1e-12 * target || best.m_max < 1) {
        return best;
    }

    // Near t = 1/m the independent threshold 1 - (1 - m t)^{1/m} moves across
    // most of [0, 1] within one ulp of t. Bisect on the top open threshold
    // itself; the level then follows as U_m(x).
    const int m = best.m_max;
    double x_lo = best.tau(m);
    double x_hi = thresholds_at_level(hi, n, inst).tau(m);
    {
        ThresholdSet top = anchored_thresholds(m, x_hi, n, inst);
        const double t_top = total_capacity(top, inst);
        if (t_top >= target) {
            return std::abs(t_top - target) < std::abs(total_capacity(best, inst) - target) ? top
                                                                                            : best;
        }
    }
    for (int iter = 0; iter < kBisectionIterations && x_hi - x_lo > 1e-16; ++iter) {
        const double mid = 0.5 * (x_lo + x_hi);
        if (mid <= x_lo || mid >= x_hi) break;
        if (total_capacity(anchored_thresholds(m, mid, n, inst), inst) >= target) {
            x_lo = mid;
        } else {
            x_hi = mid;
        }
    }
    return anchored_thresholds(m, x_lo, n, inst);
}

ThresholdSet extract_thresholds(const StrategyProfile& profile, const Instance& inst) {
    const int n = static_cast<int>(profile.size());
    ThresholdSet ts;
    ts.scheme = inst.scheme;
    ts.thresholds.assign(static_cast<std::size_t>(n) + 2, 1.0);
    ts.thresholds.front() = 0.0;
    const auto bands = profile.bands();
    for (int m = 1; m <= n; ++m) {
        for (const auto& b : bands) {
            if (b.multiplicity >= m) {
                ts.thresholds[static_cast<std::size_t>(m)] = b.lo;
                break;
            }
        }
    }
    ts.m_max = largest_open_index(ts.thresholds);
    ts.level = ts.m_max >= 1 ? utility(1, ts.tau(1), inst.scheme) : 0.0;
    return ts;
}

EquilibriumKind classify(const ThresholdSet& ts) {
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (int m = 1; m <= ts.n_firms(); ++m) {
        const double tau = ts.tau(m);
        if (!(tau > 0.0 && tau < 1.0)) continue;
        const double u = utility(m, tau, ts.scheme);
        lo = any ? std::min(lo, u) : u;
        hi = any ? std::max(hi, u) : u;
        any = true;
    }
    return hi - lo <= kStructuralTolerance ? EquilibriumKind::equal_utility
                                           : EquilibriumKind::variable_utility;
}

EquilibriumKind classify(const EquilibriumSolution& sol) {
    return classify(sol.thresholds);
}

VerificationReport verify_equilibrium(const StrategyProfile& profile, const Instance& inst,
                                      double epsilon, VerifyMode mode) {
    if (!(epsilon > 0.0)) throw ArgumentError("verify_equilibrium: epsilon must be > 0");
    validate_profile(profile, inst, kStructuralTolerance);

    VerificationReport report;
    report.extracted = extract_thresholds(profile, inst);
    structural_checks(profile, inst, report);

    if (mode == VerifyMode::full) {
        report.behavioral_checked = true;
        for (std::size_t i = 0; i < profile.size(); ++i) {
            const double current = firm_utility(profile, i, inst);
            const Strategy br = best_response(profile, i, inst);
            const double better = firm_utility(profile.with_strategy(i, br), i, inst);
            const double gain = std::max(0.0, better - current);
            report.deviation_gains.push_back(gain);
            report.max_deviation_gain = std::max(report.max_deviation_gain, gain);
        }
    }
    report.is_equilibrium = report.condition_violations.empty() &&
                            report.max_deviation_gain <= epsilon * inst.capacity;
    return report;
}

EquilibriumSolution assign_firms(const ThresholdSet& ts, const Instance& inst) {
    if (ts.n_firms() != inst.n_firms) {
        throw ArgumentError("assign_firms: threshold set has " + std::to_string(ts.n_firms()) +
                            " firms but the instance has " + std::to_string(inst.n_firms));
    }
    EquilibriumSolution sol;
    if (!(one_turn_bounds_hold(inst) && recursion_assignment(ts, inst, sol))) {
        sol = rotation_assignment(ts, inst);
    }
    const VerificationReport report =
        verify_equilibrium(sol.profile, inst, 1.0, VerifyMode::structural);
    if (!report.condition_violations.empty()) {
        const Violation& v = report.condition_violations.front();
        throw ConvergenceError("assign_firms: " + to_string(sol.method) +
                                   " assignment fails condition " + std::to_string(v.condition) +
                                   ": " + v.detail,
                               sol.profile);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Welfare

double sw_naive(const Instance& inst) {
    const double s_c = inst.dist.top_mass_threshold(inst.capacity);
    return inst.n_firms * utility_integral(inst.n_firms, s_c, 1.0, inst);
}

double sw_ne_correlated_closed_form(const Instance& inst) {
    const ThresholdSet ts = solve_equal_utility_thresholds(inst);
    return inst.dist.integrate_weighted([](double s) { return s; }, ts.tau(1), 1.0);
}

double sw_ne(const Instance& inst) {
    if (inst.scheme == DecisionScheme::correlated) return sw_ne_correlated_closed_form(inst);
    const EquilibriumSolution sol = assign_firms(solve_equal_utility_thresholds(inst), inst);
    return social_welfare(sol.profile, inst);
}

double single_coverage_welfare(const Instance& inst) {
    const double total = inst.n_firms * inst.capacity;
    if (total > 1.0) return inst.dist.expected_score();
    const double s = inst.dist.top_mass_threshold(total);
    return inst.dist.integrate_weighted([](double x) { return x; }, s, 1.0);
}

GreedyOptimum sw_max_greedy(const Instance& inst, std::size_t grid) {
    if (grid < 1) throw ArgumentError("sw_max_greedy: grid must have at least one cell");
    const int n = inst.n_firms;
    const bool correlated = inst.scheme == DecisionScheme::correlated;
    const double budget = n * inst.capacity;

    std::vector<double> weight(grid);
    std::vector<double> score(grid);
    std::vector<double> log_miss(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const double a = static_cast<double>(j) / grid;
        const double b = j + 1 == grid ? 1.0 : static_cast<double>(j + 1) / grid;
        weight[j] = inst.dist.mass(a, b);
        const double first = inst.dist.integrate_weighted([](double s) { return s; }, a, b);
        score[j] = weight[j] > 0.0 ? std::clamp(first / weight[j], a, b) : 0.5 * (a + b);
        log_miss[j] = std::log1p(-score[j]);
    }

    // Number of units at cell j whose marginal gain s (1 - s)^k exceeds lambda.
    auto units = [&](std::size_t j, double lambda) -> int {
        const double s = score[j];
        if (lambda >= s) return 0;
        if (correlated || s >= 1.0) return 1;
        if (lambda <= 0.0) return n;
        const double x = std::log(lambda / s) / log_miss[j];
        return static_cast<int>(std::min<double>(n, std::ceil(x)));
    };
    auto spent = [&](double lambda) {
        double total = 0.0;
        for (std::size_t j = 0; j < grid; ++j) total += weight[j] * units(j, lambda);
        return total;
    };

    double lambda = 0.0;
    double leftover = 0.0;
    if (spent(0.0) > budget) {
        // Invariant: spent(lo) > budget >= spent(hi).
        double lo = 0.0;
        double hi = 1.0;
        for (int iter = 0; iter < 100 && hi - lo > 1e-15; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (spent(mid) > budget) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lambda = hi;
        leftover = std::max(0.0, budget - spent(hi));
    }

    GreedyOptimum out;
    for (std::size_t j = 0; j < grid; ++j) {
        const int k = units(j, lambda);
        if (k == 0) continue;
        const double s = score[j];
        const double hired = correlated ? s : -std::expm1(k * log_miss[j]);
        out.welfare += weight[j] * hired;
        out.max_multiplicity = std::max(out.max_multiplicity, k);
    }
    // Units priced exactly at the critical level fill the remaining budget.
    out.welfare += leftover * lambda;
    return out;
}

double sw_max(const Instance& inst, std::size_t grid) {
    if (inst.scheme == DecisionScheme::correlated) return single_coverage_welfare(inst);
    return sw_max_greedy(inst, grid).welfare;
}

double pons(const Instance& inst) { return sw_ne(inst) / sw_naive(inst); }

double poa(const Instance& inst, std::size_t grid) { return sw_max(inst, grid) / sw_ne(inst); }

WelfareSummary welfare_summary(const Instance& inst, std::size_t grid) {
    WelfareSummary w;
    w.sw_naive = sw_naive(inst);
    w.sw_ne = sw_ne(inst);
    w.sw_max = sw_max(inst, grid);
    w.pons = w.sw_ne / w.sw_naive;
    w.poa = w.sw_max / w.sw_ne;
    return w;
}

// ---------------------------------------------------------------------------
// Flexible capacity

double naive_threshold_for_welfare(double welfare, int n_firms, const ScoreDistribution& dist,
                                   DecisionScheme scheme) {
    const Instance full(n_firms, 1.0, dist, scheme);
    auto naive_welfare = [&](double x) {
        return n_firms * utility_integral(n_firms, x, 1.0, full);
    };
    const double top = naive_welfare(0.0);
    if (!(welfare > 0.0) || welfare > top * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "welfare " << welfare << " outside (0, " << top
            << "], the range of the naive solution with " << n_firms << " firms";
        throw ArgumentError(msg.str());
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < kBisectionIterations && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (naive_welfare(mid) >= welfare) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double naive_capacity_for_welfare(double welfare, int n_firms, const ScoreDistribution& dist,
                                  DecisionScheme scheme) {
    const double x = naive_threshold_for_welfare(welfare, n_firms, dist, scheme);
    return dist.mass(x, 1.0);
}

FlexCapacityResult ne_with_capacity_over_n(double welfare, int n_firms,
                                           const ScoreDistribution& dist,
                                           DecisionScheme scheme) {
    if (n_firms < 1) throw ArgumentError("number of firms must be >= 1");
    auto first_moment = [&](double x) {
        return dist.integrate_weighted([](double s) { return s; }, x, 1.0);
    };
    const double bound = first_moment(0.5);
    if (!(welfare > 0.0) || welfare > bound + 1e-12) {
        std::ostringstream msg;
        msg << "welfare " << welfare << " violates W <= int_{0.5}^1 s phi(s) ds = " << bound;
        throw ArgumentError(msg.str());
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < kBisectionIterations && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (first_moment(mid) >= welfare) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double x = std::max(lo, 0.5);
    const double total = dist.mass(x, 1.0);
    Instance inst(n_firms, total / n_firms, dist, scheme);

    const double base = dist.cdf(x);
    std::vector<double> cuts(static_cast<std::size_t>(n_firms) + 1);
    cuts.front() = x;
    cuts.back() = 1.0;
    for (int k = 1; k < n_firms; ++k) {
        cuts[static_cast<std::size_t>(k)] =
            std::clamp(dist.quantile(base + k * inst.capacity), x, 1.0);
    }
    std::vector<Strategy> strategies;
    for (int k = 0; k < n_firms; ++k) {
        strategies.emplace_back(std::vector<Interval>{{cuts[static_cast<std::size_t>(k)],
                                                       cuts[static_cast<std::size_t>(k) + 1]}},
                                dist);
    }

    EquilibriumSolution sol;
    sol.profile = StrategyProfile(std::move(strategies));
    sol.thresholds.scheme = scheme;
    sol.thresholds.level = x;
    sol.thresholds.thresholds.assign(static_cast<std::size_t>(n_firms) + 2, 1.0);
    sol.thresholds.thresholds[0] = 0.0;
    sol.thresholds.thresholds[1] = x;
    sol.thresholds.m_max = x < 1.0 ? 1 : 0;
    sol.kind = classify(sol.thresholds);
    sol.method = AssignmentMethod::direct;

    VerificationReport report = verify_equilibrium(sol.profile, inst, 1e-6);
    if (!report.is_equilibrium) {
        throw ConvergenceError("flexible-capacity construction does not verify as an equilibrium",
                               sol.profile);
    }
    const double achieved = social_welfare(sol.profile, inst);
    const double naive_c = naive_capacity_for_welfare(welfare, n_firms, dist, scheme);
    return FlexCapacityResult{std::move(inst), x,        total,          naive_c,
                              achieved,         std::move(sol), std::move(report)};
}

}  // namespace monohire
