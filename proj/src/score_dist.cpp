#include "monohire/score_dist.hpp"

#include "monohire/errors.hpp"
#include "monohire/format.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace monohire {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr double kQuadratureTolerance = 1e-12;
constexpr unsigned kQuadratureDepth = 18;

void check_breakpoints(const std::vector<double>& bp) {
    if (bp.size() < 2) throw ArgumentError("breakpoints need at least two entries");
    if (bp.front() != 0.0 || bp.back() != 1.0) {
        throw ArgumentError("breakpoints must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < bp.size(); ++i) {
        if (!(bp[i] > bp[i - 1])) {
            throw ArgumentError("breakpoints must be strictly increasing");
        }
    }
}

void check_values(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw ArgumentError("density values must be finite and strictly positive");
        }
    }
}

// Interval bisection around Boost's single-panel Gauss-Kronrod rule. Boost's
// own adaptive driver compares the panel error on [-1, 1] against a
// tolerance scaled to [a, b], so it never terminates on short intervals.
template <class F>
double adaptive_gauss_kronrod(const F& f, double a, double b, double abs_tol, unsigned depth) {
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    const double estimate = Quadrature::integrate(f, a, b, 0, 0.0, &err);
    err *= 0.5 * (b - a);
    if (depth == 0 || err <= abs_tol) return estimate;
    const double mid = 0.5 * (a + b);
    return adaptive_gauss_kronrod(f, a, mid, 0.5 * abs_tol, depth - 1) +
           adaptive_gauss_kronrod(f, mid, b, 0.5 * abs_tol, depth - 1);
}

template <class F>
double integrate_panel(const F& f, double a, double b) {
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    const double first = Quadrature::integrate(f, a, b, 0, 0.0, &err);
    err *= 0.5 * (b - a);
    const double abs_tol = kQuadratureTolerance * std::abs(first);
    if (err <= abs_tol) return first;
    const double mid = 0.5 * (a + b);
    return adaptive_gauss_kronrod(f, a, mid, 0.5 * abs_tol, kQuadratureDepth - 1) +
           adaptive_gauss_kronrod(f, mid, b, 0.5 * abs_tol, kQuadratureDepth - 1);
}

}  // namespace

std::string to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::uniform: return "uniform";
        case DensityKind::piecewise_constant: return "piecewise-constant";
        case DensityKind::piecewise_linear: return "piecewise-linear";
    }
    return "?";
}

DensityKind parse_density_kind(std::string_view text) {
    text = trim(text);
    if (text == "uniform") return DensityKind::uniform;
    if (text == "piecewise-constant" || text == "piecewise_constant")
        return DensityKind::piecewise_constant;
    if (text == "piecewise-linear" || text == "piecewise_linear")
        return DensityKind::piecewise_linear;
    throw ArgumentError("unknown density kind '" + std::string(text) + "'");
}

ScoreDistribution::ScoreDistribution(DensityKind kind, std::vector<double> breakpoints,
                                     std::vector<double> values)
    : kind_(kind), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    const std::size_t nseg = breakpoints_.size() - 1;
    double total = 0.0;
    for (std::size_t k = 0; k < nseg; ++k) {
        const double h = breakpoints_[k + 1] - breakpoints_[k];
        total += kind_ == DensityKind::piecewise_linear
                     ? 0.5 * (values_[k] + values_[k + 1]) * h
                     : values_[k] * h;
    }
    for (double& v : values_) v /= total;

    cumulative_.assign(nseg + 1, 0.0);
    for (std::size_t k = 0; k < nseg; ++k) {
        cumulative_[k + 1] =
            cumulative_[k] + segment_mass_below(k, breakpoints_[k + 1]);
    }
    // Pin the total so mass(0, 1) is exactly one.
    const double scale = cumulative_.back();
    for (double& c : cumulative_) c /= scale;
    for (double& v : values_) v /= scale;
    cumulative_.back() = 1.0;

    delta_ = *std::min_element(values_.begin(), values_.end());
}

ScoreDistribution ScoreDistribution::uniform() {
    return ScoreDistribution(DensityKind::uniform, {0.0, 1.0}, {1.0});
}

ScoreDistribution ScoreDistribution::piecewise_constant(std::vector<double> breakpoints,
                                                        std::vector<double> values) {
    check_breakpoints(breakpoints);
    if (values.size() != breakpoints.size() - 1) {
        throw ArgumentError("piecewise-constant density needs one value per segment");
    }
    check_values(values);
    return ScoreDistribution(DensityKind::piecewise_constant, std::move(breakpoints),
                             std::move(values));
}

ScoreDistribution ScoreDistribution::piecewise_linear(std::vector<double> breakpoints,
                                                      std::vector<double> values) {
    check_breakpoints(breakpoints);
    if (values.size() != breakpoints.size()) {
        throw ArgumentError("piecewise-linear density needs one value per breakpoint");
    }
    check_values(values);
    return ScoreDistribution(DensityKind::piecewise_linear, std::move(breakpoints),
                             std::move(values));
}

std::size_t ScoreDistribution::segment_of(double s) const {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
    const auto idx = static_cast<std::ptrdiff_t>(it - breakpoints_.begin()) - 1;
    const auto last = static_cast<std::ptrdiff_t>(breakpoints_.size()) - 2;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, last));
}

double ScoreDistribution::segment_mass_below(std::size_t seg, double s) const {
    const double x0 = breakpoints_[seg];
    const double d = s - x0;
    if (kind_ != DensityKind::piecewise_linear) return values_[seg] * d;
    const double h = breakpoints_[seg + 1] - x0;
    const double slope = (values_[seg + 1] - values_[seg]) / h;
    return d * (values_[seg] + 0.5 * slope * d);
}

double ScoreDistribution::density(double s) const {
    if (s < 0.0 || s > 1.0) return 0.0;
    const std::size_t seg = segment_of(s);
    if (kind_ != DensityKind::piecewise_linear) return values_[seg];
    const double x0 = breakpoints_[seg];
    const double h = breakpoints_[seg + 1] - x0;
    return values_[seg] + (values_[seg + 1] - values_[seg]) * (s - x0) / h;
}

double ScoreDistribution::cdf(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const std::size_t seg = segment_of(s);
    return std::min(1.0, cumulative_[seg] + segment_mass_below(seg, s));
}

double ScoreDistribution::mass(double a, double b) const {
    if (!(a >= -kDomainSlack) || !(b <= 1.0 + kDomainSlack) || !(a <= b + kDomainSlack)) {
        std::ostringstream msg;
        msg << "mass: need 0 <= a <= b <= 1, got a=" << a << " b=" << b;
        throw ArgumentError(msg.str());
    }
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    if (b <= a) return 0.0;
    return std::max(0.0, cdf(b) - cdf(a));
}

double ScoreDistribution::top_mass_threshold(double c) const {
    if (!(c > 0.0) || !(c <= 1.0)) {
        throw ArgumentError("top_mass_threshold: capacity must lie in (0, 1]");
    }
    // Invariant: mass(lo, 1) >= c > mass(hi, 1).
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (mass(mid, 1.0) >= c) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double ScoreDistribution::quantile(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto seg = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - cumulative_.begin() - 1));
    seg = std::min(seg, breakpoints_.size() - 2);
    const double x0 = breakpoints_[seg];
    const double x1 = breakpoints_[seg + 1];
    const double r = u - cumulative_[seg];
    double x = 0.0;
    if (kind_ != DensityKind::piecewise_linear) {
        x = r / values_[seg];
    } else {
        const double v0 = values_[seg];
        const double slope = (values_[seg + 1] - v0) / (x1 - x0);
        // Root of v0 x + slope x^2 / 2 = r in the cancellation-free form.
        x = 2.0 * r / (v0 + std::sqrt(std::max(0.0, v0 * v0 + 2.0 * slope * r)));
    }
    return std::clamp(x0 + x, x0, x1);
}

double ScoreDistribution::integrate_weighted(const std::function<double(double)>& g,
                                             double a, double b) const {
    if (!(a >= -kDomainSlack) || !(b <= 1.0 + kDomainSlack) || !(a <= b + kDomainSlack)) {
        std::ostringstream msg;
        msg << "integrate_weighted: need 0 <= a <= b <= 1, got a=" << a << " b=" << b;
        throw ArgumentError(msg.str());
    }
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    if (b <= a) return 0.0;

    double total = 0.0;
    for (std::size_t seg = segment_of(a); seg + 1 < breakpoints_.size(); ++seg) {
        const double x0 = breakpoints_[seg];
        const double x1 = breakpoints_[seg + 1];
        const double lo = std::max(a, x0);
        const double hi = std::min(b, x1);
        if (hi > lo) {
            const double v0 = values_[seg];
            const double slope =
                kind_ == DensityKind::piecewise_linear ? (values_[seg + 1] - v0) / (x1 - x0) : 0.0;
            auto integrand = [&](double s) {
                const double gs = g(s);
                if (!std::isfinite(gs)) {
                    std::ostringstream msg;
                    msg << "integrate_weighted: non-finite integrand " << gs << " at s=" << s;
                    throw NumericalError(msg.str());
                }
                return gs * (v0 + slope * (s - x0));
            };
            total += integrate_panel(integrand, lo, hi);
        }
        if (x1 >= b) break;
    }
    return total;
}

double ScoreDistribution::expected_score() const {
    return integrate_weighted([](double s) { return s; }, 0.0, 1.0);
}

ScoreDistribution make_distribution(std::string_view kind, std::string_view breakpoints,
                                    std::string_view values) {
    const DensityKind k = parse_density_kind(kind);
    if (k == DensityKind::uniform) {
        if (!trim(breakpoints).empty() || !trim(values).empty()) {
            throw ArgumentError("uniform distribution takes no breakpoints or values");
        }
        return ScoreDistribution::uniform();
    }
    auto bp = parse_double_list(breakpoints, "breakpoints");
    auto vals = parse_double_list(values, "values");
    return k == DensityKind::piecewise_constant
               ? ScoreDistribution::piecewise_constant(std::move(bp), std::move(vals))
               : ScoreDistribution::piecewise_linear(std::move(bp), std::move(vals));
}

ScoreDistribution parse_distribution_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> fields;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ArgumentError("distribution config line " + std::to_string(line_no) +
                                ": expected key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        if (key != "kind" && key != "breakpoints" && key != "values") {
            throw ArgumentError("distribution config: unknown key '" + key + "'");
        }
        if (fields.contains(key)) {
            throw ArgumentError("distribution config: duplicate key '" + key + "'");
        }
        fields.emplace(std::move(key), std::string(trim(line.substr(eq + 1))));
    }
    if (!fields.contains("kind")) throw ArgumentError("distribution config: missing 'kind'");
    return make_distribution(fields["kind"], fields["breakpoints"], fields["values"]);
}

std::string format_distribution_config(const ScoreDistribution& dist) {
    std::ostringstream out;
    out << "kind = " << to_string(dist.kind()) << '\n';
    if (dist.kind() == DensityKind::uniform) return out.str();
    auto join = [](std::span<const double> xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ", ";
            s += format_number(xs[i]);
        }
        return s;
    };
    out << "breakpoints = " << join(dist.breakpoints()) << '\n';
    out << "values = " << join(dist.density_values()) << '\n';
    return out.str();
}

}  // namespace monohire
