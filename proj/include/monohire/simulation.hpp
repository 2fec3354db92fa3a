// Monte Carlo simulation of the interview and hiring process.
#pragma once

#include "monohire/market_model.hpp"

#include <cstdint>
#include <vector>

namespace monohire {

// Counter-based generator: the stream for (seed, key) is a pure function of
// both, so draws never depend on iteration order or thread count. Each
// output is the SplitMix64 finalizer applied to a Weyl sequence.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t key);

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t state_;
};

struct SimulationResult {
    std::int64_t num_applicants = 0;
    std::vector<double> hire_rate;     // hires of firm i / num_applicants
    std::vector<double> hire_se;       // binomial standard error of hire_rate
    double welfare = 0.0;              // applicants hired / num_applicants
    double welfare_se = 0.0;
};

// Draws num_applicants scores by inverse CDF. Under the correlated scheme one
// uniform per applicant decides the interview outcome for every interviewing
// firm; under the independent scheme each interviewing firm draws its own.
// An applicant with offers accepts one offering firm uniformly at random.
// threads == 0 picks the hardware concurrency; results do not depend on it.
SimulationResult simulate_hiring(const StrategyProfile& profile, const Instance& inst,
                                 std::int64_t num_applicants, std::uint64_t seed,
                                 unsigned threads = 0);

}  // namespace monohire
