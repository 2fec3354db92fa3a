#include "monohire/market_model.hpp"

#include "monohire/errors.hpp"
#include "monohire/format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monohire {

namespace {

constexpr double kMergeGap = 1e-12;
constexpr double kSnap = 1e-12;
constexpr double kDomainSlack = 1e-12;

void check_n(int n, const char* where) {
    if (n < 1) throw ArgumentError(std::string(where) + ": n must be >= 1");
}

}  // namespace

std::string to_string(DecisionScheme scheme) {
    return scheme == DecisionScheme::correlated ? "correlated" : "independent";
}

DecisionScheme parse_scheme(std::string_view text) {
    text = trim(text);
    if (text == "correlated" || text == "corr") return DecisionScheme::correlated;
    if (text == "independent" || text == "indep") return DecisionScheme::independent;
    throw ArgumentError("unknown decision scheme '" + std::string(text) + "'");
}

double utility(int n, double s, DecisionScheme scheme) {
    check_n(n, "utility");
    if (!(s >= 0.0 && s <= 1.0)) throw ArgumentError("utility: score must lie in [0, 1]");
    if (n == 1) return s;
    if (scheme == DecisionScheme::correlated) return s / n;
    return -std::expm1(n * std::log1p(-s)) / n;
}

double inverse_utility(int n, double t, DecisionScheme scheme) {
    check_n(n, "inverse_utility");
    const double top = utility(n, 1.0, scheme);
    if (!(t >= 0.0) || t > top) {
        std::ostringstream msg;
        msg << "inverse_utility: level " << t << " outside [0, U_" << n << "(1)=" << top << "]";
        throw RangeError(msg.str());
    }
    if (n == 1) return t;
    if (scheme == DecisionScheme::correlated) return std::min(1.0, n * t);
    return std::min(1.0, -std::expm1(std::log1p(-n * t) / n));
}

double utility_threshold(int n, double t, DecisionScheme scheme) {
    if (t >= utility(n, 1.0, scheme)) return 1.0;
    return inverse_utility(n, std::max(t, 0.0), scheme);
}

double marginal_welfare(int n, double s, DecisionScheme scheme) {
    if (n < 0) throw ArgumentError("marginal_welfare: n must be >= 0");
    if (n == 0) return s;
    if (scheme == DecisionScheme::correlated) return 0.0;
    return s * std::exp(n * std::log1p(-s));
}

// ---------------------------------------------------------------------------
// Strategy

Strategy::Strategy(std::vector<Interval> intervals, const ScoreDistribution& dist) {
    for (auto& iv : intervals) {
        if (!(iv.lo >= -kDomainSlack) || !(iv.hi <= 1.0 + kDomainSlack) || !(iv.lo <= iv.hi)) {
            std::ostringstream msg;
            msg << "strategy interval [" << iv.lo << ", " << iv.hi << ") is not inside [0, 1]";
            throw ArgumentError(msg.str());
        }
        iv.lo = std::clamp(iv.lo, 0.0, 1.0);
        iv.hi = std::clamp(iv.hi, 0.0, 1.0);
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : intervals) {
        if (!(iv.hi > iv.lo)) continue;
        if (!intervals_.empty() && iv.lo <= intervals_.back().hi + kMergeGap) {
            intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
        } else {
            intervals_.push_back(iv);
        }
    }
    for (const auto& iv : intervals_) mass_ += dist.mass(iv.lo, iv.hi);
}

Strategy Strategy::suffix(double lo, const ScoreDistribution& dist) {
    return Strategy({{lo, 1.0}}, dist);
}

bool Strategy::contains(double s) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), s,
                               [](double x, const Interval& iv) { return x < iv.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    return s < it->hi;
}

// ---------------------------------------------------------------------------
// StrategyProfile

StrategyProfile::StrategyProfile(std::vector<Strategy> strategies)
    : strategies_(std::move(strategies)) {
    struct Endpoint {
        double x;
        std::size_t firm;  // strategies_.size() marks the 0/1 sentinels
        std::size_t interval;
        bool is_hi;
    };
    const std::size_t sentinel = strategies_.size();
    std::vector<Endpoint> endpoints{{0.0, sentinel, 0, false}, {1.0, sentinel, 0, true}};
    for (std::size_t f = 0; f < strategies_.size(); ++f) {
        const auto ivs = strategies_[f].intervals();
        for (std::size_t k = 0; k < ivs.size(); ++k) {
            endpoints.push_back({ivs[k].lo, f, k, false});
            endpoints.push_back({ivs[k].hi, f, k, true});
        }
    }
    std::stable_sort(endpoints.begin(), endpoints.end(),
                     [](const Endpoint& a, const Endpoint& b) { return a.x < b.x; });

    // Cluster ids: every point within kSnap of the cluster's first point.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> raw(strategies_.size());
    for (std::size_t f = 0; f < strategies_.size(); ++f) {
        raw[f].assign(strategies_[f].intervals().size(), {0, 0});
    }
    double rep = endpoints.front().x;
    grid_.push_back(rep);
    for (const auto& ep : endpoints) {
        if (ep.x - rep > kSnap) {
            rep = ep.x;
            grid_.push_back(rep);
        }
        if (ep.firm == sentinel) continue;
        auto& r = raw[ep.firm][ep.interval];
        (ep.is_hi ? r.second : r.first) = grid_.size() - 1;
    }
    grid_.front() = 0.0;
    grid_.back() = 1.0;
    if (grid_.size() < 2) grid_ = {0.0, 1.0};

    const std::size_t nseg = grid_.size() - 1;
    std::vector<int> diff(nseg + 1, 0);
    firm_segments_.resize(strategies_.size());
    for (std::size_t f = 0; f < strategies_.size(); ++f) {
        auto& segs = firm_segments_[f];
        for (const auto& [a, b] : raw[f]) {
            if (b <= a) continue;  // sliver collapsed by snapping
            if (!segs.empty() && segs.back().second >= a) {
                segs.back().second = std::max(segs.back().second, b);
            } else {
                segs.emplace_back(a, b);
            }
        }
        for (const auto& [a, b] : segs) {
            diff[a] += 1;
            diff[b] -= 1;
        }
    }
    counts_.assign(nseg, 0);
    int running = 0;
    for (std::size_t k = 0; k < nseg; ++k) {
        running += diff[k];
        counts_[k] = running;
    }
    bands_ = runs(counts_);
}

std::vector<Band> StrategyProfile::runs(const std::vector<int>& counts) const {
    std::vector<Band> out;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (!out.empty() && out.back().multiplicity == counts[k]) {
            out.back().hi = grid_[k + 1];
        } else {
            out.push_back({grid_[k], grid_[k + 1], counts[k]});
        }
    }
    return out;
}

int StrategyProfile::max_multiplicity() const {
    int best = 0;
    for (const auto& b : bands_) best = std::max(best, b.multiplicity);
    return best;
}

std::vector<Band> StrategyProfile::bands_excluding(std::size_t i) const {
    if (i >= strategies_.size()) throw ArgumentError("bands_excluding: firm index out of range");
    std::vector<int> counts = counts_;
    for (const auto& [a, b] : firm_segments_[i]) {
        for (std::size_t k = a; k < b; ++k) counts[k] -= 1;
    }
    return runs(counts);
}

std::vector<Band> StrategyProfile::coverage(std::size_t i) const {
    if (i >= strategies_.size()) throw ArgumentError("coverage: firm index out of range");
    std::vector<Band> out;
    for (const auto& [a, b] : firm_segments_[i]) {
        for (std::size_t k = a; k < b; ++k) {
            if (!out.empty() && out.back().hi == grid_[k] && out.back().multiplicity == counts_[k]) {
                out.back().hi = grid_[k + 1];
            } else {
                out.push_back({grid_[k], grid_[k + 1], counts_[k]});
            }
        }
    }
    return out;
}

StrategyProfile StrategyProfile::with_strategy(std::size_t i, Strategy replacement) const {
    if (i >= strategies_.size()) throw ArgumentError("with_strategy: firm index out of range");
    std::vector<Strategy> next = strategies_;
    next[i] = std::move(replacement);
    return StrategyProfile(std::move(next));
}

// ---------------------------------------------------------------------------
// Instance and welfare

Instance::Instance(int n, double c, ScoreDistribution d, DecisionScheme s)
    : n_firms(n), capacity(c), dist(std::move(d)), scheme(s) {
    if (n_firms < 1) throw ArgumentError("instance: number of firms must be >= 1");
    if (!(capacity > 0.0 && capacity <= 1.0)) {
        throw ArgumentError("instance: capacity must lie in (0, 1]");
    }
}

void validate_profile(const StrategyProfile& profile, const Instance& inst, double tolerance) {
    if (profile.size() != static_cast<std::size_t>(inst.n_firms)) {
        throw ValidationError("profile has " + std::to_string(profile.size()) +
                              " strategies but the instance has " +
                              std::to_string(inst.n_firms) + " firms");
    }
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double m = profile.strategy(i).mass();
        if (m > inst.capacity + tolerance) {
            std::ostringstream msg;
            msg << "firm " << i << " interviews mass " << m << " above capacity "
                << inst.capacity;
            throw ValidationError(msg.str());
        }
    }
}

double utility_integral(int m, double a, double b, const Instance& inst) {
    if (m <= 0 || b <= a) return 0.0;
    const DecisionScheme scheme = inst.scheme;
    return inst.dist.integrate_weighted([m, scheme](double s) { return utility(m, s, scheme); },
                                        a, b);
}

double firm_utility(const StrategyProfile& profile, std::size_t i, const Instance& inst) {
    if (i >= profile.size()) throw ArgumentError("firm_utility: firm index out of range");
    double total = 0.0;
    for (const auto& piece : profile.coverage(i)) {
        total += utility_integral(piece.multiplicity, piece.lo, piece.hi, inst);
    }
    return total;
}

double social_welfare(const StrategyProfile& profile, const Instance& inst) {
    double total = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) total += firm_utility(profile, i, inst);
    return total;
}

double band_welfare(const StrategyProfile& profile, const Instance& inst) {
    double total = 0.0;
    for (const auto& band : profile.bands()) {
        total += band.multiplicity * utility_integral(band.multiplicity, band.lo, band.hi, inst);
    }
    return total;
}

StrategyProfile naive_profile(const Instance& inst) {
    const double s_c = inst.dist.top_mass_threshold(inst.capacity);
    return StrategyProfile(
        std::vector<Strategy>(inst.n_firms, Strategy::suffix(s_c, inst.dist)));
}

}  // namespace monohire
