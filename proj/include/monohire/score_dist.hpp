// Applicant-score distribution on [0, 1] and its measure primitives.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace monohire {

enum class DensityKind { uniform, piecewise_constant, piecewise_linear };

std::string to_string(DensityKind kind);
DensityKind parse_density_kind(std::string_view text);

// Density phi on [0, 1] with a strictly positive lower bound.
//
// Piecewise-constant densities take one value per segment; piecewise-linear
// densities take one value per breakpoint and interpolate linearly. Values
// are rescaled at construction so the density integrates to one. The object
// is immutable after construction.
class ScoreDistribution {
public:
    static ScoreDistribution uniform();
    static ScoreDistribution piecewise_constant(std::vector<double> breakpoints,
                                                std::vector<double> values);
    static ScoreDistribution piecewise_linear(std::vector<double> breakpoints,
                                              std::vector<double> values);

    DensityKind kind() const { return kind_; }
    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const double> density_values() const { return values_; }

    // Certified lower bound: phi(s) >= delta() on [0, 1].
    double delta() const { return delta_; }

    double density(double s) const;
    double cdf(double s) const;

    // Pr(S in [a, b)). Requires 0 <= a <= b <= 1.
    double mass(double a, double b) const;

    // The s_c with mass(s_c, 1) == c, by bisection. Requires c in (0, 1].
    double top_mass_threshold(double c) const;

    // Closed-form inverse CDF; u in [0, 1].
    double quantile(double u) const;

    // Adaptive Gauss-Kronrod quadrature of g(s) * phi(s) over [a, b], split at
    // the density breakpoints. Throws NumericalError on non-finite g.
    double integrate_weighted(const std::function<double(double)>& g, double a,
                              double b) const;

    double expected_score() const;

private:
    ScoreDistribution(DensityKind kind, std::vector<double> breakpoints,
                      std::vector<double> values);

    std::size_t segment_of(double s) const;
    double segment_mass_below(std::size_t seg, double s) const;

    DensityKind kind_;
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::vector<double> cumulative_;  // cdf at each breakpoint
    double delta_ = 1.0;
};

// Parses the flat key-value distribution format:
//
//   kind = piecewise-linear
//   breakpoints = 0, 0.5, 1
//   values = 1, 2, 1
//
// Blank lines and '#' comments are ignored. Unknown keys are rejected.
ScoreDistribution parse_distribution_config(std::string_view text);

// Builds a distribution from already split fields; `kind` accepts
// "uniform", "piecewise-constant", "piecewise-linear".
ScoreDistribution make_distribution(std::string_view kind, std::string_view breakpoints,
                                    std::string_view values);

std::string format_distribution_config(const ScoreDistribution& dist);

}  // namespace monohire
