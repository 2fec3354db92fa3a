#include "monohire/estimation.hpp"

#include "monohire/format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monohire {

namespace {

void check_probability(double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << name << " = " << p << " must lie in (0, 1)";
        throw ArgumentError(msg.str());
    }
}

// Binomial pmf for j = 0..k from log-space terms, rescaled to unit mass so
// the lgamma round-off shared by every term cancels.
std::vector<double> binomial_pmf(long long k, double p) {
    std::vector<double> pmf(static_cast<std::size_t>(k) + 1);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double log_k_fact = std::lgamma(static_cast<double>(k) + 1.0);
    for (long long j = 0; j <= k; ++j) {
        const double log_choose = log_k_fact - std::lgamma(static_cast<double>(j) + 1.0) -
                                  std::lgamma(static_cast<double>(k - j) + 1.0);
        pmf[static_cast<std::size_t>(j)] =
            std::exp(log_choose + static_cast<double>(j) * log_p +
                     static_cast<double>(k - j) * log_q);
    }
    double sum = 0.0;
    for (double x : pmf) sum += x;
    for (double& x : pmf) x /= sum;
    return pmf;
}

void check_inputs(long long k, double p1, double p2) {
    if (k < 1) throw ArgumentError("number of samples k must be >= 1");
    check_probability(p1, "p1");
    check_probability(p2, "p2");
}

}  // namespace

double prob_correct(long long k, double p1, double p2) {
    check_inputs(k, p1, p2);
    const std::vector<double> pmf1 = binomial_pmf(k, p1);
    const std::vector<double> pmf2 = binomial_pmf(k, p2);
    double total = 0.0;
    double cdf1 = 0.0;  // Pr(X1 <= j - 1)
    for (std::size_t j = 1; j < pmf2.size(); ++j) {
        cdf1 += pmf1[j - 1];
        total += pmf2[j] * cdf1;
    }
    return std::clamp(total, 0.0, 1.0);
}

double tie_probability(long long k, double p1, double p2) {
    check_inputs(k, p1, p2);
    const std::vector<double> pmf1 = binomial_pmf(k, p1);
    const std::vector<double> pmf2 = binomial_pmf(k, p2);
    double total = 0.0;
    for (std::size_t j = 0; j < pmf1.size(); ++j) total += pmf1[j] * pmf2[j];
    return std::clamp(total, 0.0, 1.0);
}

long long min_samples(double p1, double p2, double q, long long k_max) {
    check_probability(p1, "p1");
    check_probability(p2, "p2");
    check_probability(q, "q");
    if (!(p1 < p2)) throw ArgumentError("min_samples requires p1 < p2");
    if (k_max < 1) throw ArgumentError("k_max must be >= 1");
    long long best_k = 1;
    double best = -1.0;
    for (long long k = 1; k <= k_max; ++k) {
        const double pr = prob_correct(k, p1, p2);
        if (pr >= q) return k;
        if (pr > best) {
            best = pr;
            best_k = k;
        }
    }
    std::ostringstream msg;
    msg.precision(12);
    msg << "no k <= " << k_max << " reaches Pr(X1 < X2) >= " << q << " for p1=" << p1
        << ", p2=" << p2 << "; best " << best << " at k=" << best_k;
    throw SearchError(msg.str(), best_k, best);
}

std::vector<SampleRow> sweep_sample_complexity(double p1, double p2_start, double p2_stop,
                                               double p2_step, const std::vector<double>& q_list,
                                               long long k_max) {
    if (!(p2_step > 0.0)) throw ArgumentError("p2 step must be > 0");
    if (!(p2_stop >= p2_start)) throw ArgumentError("p2 range must satisfy start <= stop");
    const auto count = static_cast<long long>(std::floor((p2_stop - p2_start) / p2_step + 1e-9));
    std::vector<SampleRow> rows;
    for (double q : q_list) {
        for (long long i = 0; i <= count; ++i) {
            SampleRow row{p1, round_significant(p2_start + static_cast<double>(i) * p2_step), q, 0};
            try {
                row.k = min_samples(row.p1, row.p2, row.q, k_max);
            } catch (const SearchError&) {
                row.k = 0;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string format_sample_table(const std::vector<SampleRow>& rows) {
    std::string out = "p1,p2,q,k\n";
    for (const auto& r : rows) {
        out += format_number(r.p1) + "," + format_number(r.p2) + "," + format_number(r.q) + "," +
               (r.resolved() ? std::to_string(r.k) : std::string("NA")) + "\n";
    }
    return out;
}

}  // namespace monohire
