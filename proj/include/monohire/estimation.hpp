// Exact sample complexity for telling two applicant pools apart from
// binomial hire counts.
#pragma once

#include "monohire/errors.hpp"

#include <string>
#include <vector>

namespace monohire {

// A bounded scan that ran out of candidates.
class SearchError : public NumericalError {
public:
    SearchError(const std::string& what, long long best_k, double best_probability)
        : NumericalError(what), best_k_(best_k), best_probability_(best_probability) {}

    long long best_k() const { return best_k_; }
    double best_probability() const { return best_probability_; }

private:
    long long best_k_;
    double best_probability_;
};

// Pr(X1 < X2) for independent X1 ~ Binom(k, p1), X2 ~ Binom(k, p2). Ties lose.
double prob_correct(long long k, double p1, double p2);

// Pr(X1 == X2) for the same pair, summed separately from prob_correct.
double tie_probability(long long k, double p1, double p2);

inline constexpr long long kDefaultSampleLimit = 10000;

// Smallest k with prob_correct(k, p1, p2) >= q, scanning k = 1, 2, ...
// Throws SearchError when no k <= k_max qualifies.
long long min_samples(double p1, double p2, double q, long long k_max = kDefaultSampleLimit);

struct SampleRow {
    double p1 = 0.0;
    double p2 = 0.0;
    double q = 0.0;
    long long k = 0;  // 0 when unresolved within k_max
    bool resolved() const { return k > 0; }
};

// Rows for q in q_list (outer) and p2 = start, start + step, ... <= stop (inner).
std::vector<SampleRow> sweep_sample_complexity(double p1, double p2_start, double p2_stop,
                                               double p2_step, const std::vector<double>& q_list,
                                               long long k_max = kDefaultSampleLimit);

// Header `p1,p2,q,k`; unresolved rows print NA.
std::string format_sample_table(const std::vector<SampleRow>& rows);

}  // namespace monohire
