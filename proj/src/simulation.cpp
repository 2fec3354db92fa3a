#include "monohire/simulation.hpp"

#include "monohire/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace monohire {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct Tally {
    std::vector<std::int64_t> hires;
    std::int64_t hired = 0;
};

void simulate_range(const StrategyProfile& profile, const Instance& inst, std::uint64_t seed,
                    std::int64_t begin, std::int64_t end, Tally& tally) {
    const std::size_t n = profile.size();
    std::vector<std::size_t> offers;
    offers.reserve(n);
    for (std::int64_t a = begin; a < end; ++a) {
        CounterRng rng(seed, static_cast<std::uint64_t>(a));
        const double s = inst.dist.quantile(rng.uniform());
        offers.clear();
        if (inst.scheme == DecisionScheme::correlated) {
            const bool pass = rng.uniform() < s;
            for (std::size_t i = 0; i < n; ++i) {
                if (pass && profile.strategy(i).contains(s)) offers.push_back(i);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                if (profile.strategy(i).contains(s) && rng.uniform() < s) offers.push_back(i);
            }
        }
        if (offers.empty()) continue;
        const auto pick = std::min<std::size_t>(
            offers.size() - 1, static_cast<std::size_t>(rng.uniform() * offers.size()));
        tally.hires[offers[pick]] += 1;
        tally.hired += 1;
    }
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t key)
    : state_(mix64(seed ^ mix64(key + kGolden))) {}

std::uint64_t CounterRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double CounterRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

SimulationResult simulate_hiring(const StrategyProfile& profile, const Instance& inst,
                                 std::int64_t num_applicants, std::uint64_t seed,
                                 unsigned threads) {
    if (num_applicants < 1) throw ArgumentError("simulate_hiring: num_applicants must be >= 1");
    validate_profile(profile, inst);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::int64_t>(threads, std::max<std::int64_t>(1, num_applicants / 10000)));

    std::vector<Tally> tallies(threads, Tally{std::vector<std::int64_t>(profile.size(), 0), 0});
    const std::int64_t chunk = (num_applicants + threads - 1) / threads;
    if (threads == 1) {
        simulate_range(profile, inst, seed, 0, num_applicants, tallies[0]);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            const std::int64_t begin = std::min(num_applicants, t * chunk);
            const std::int64_t end = std::min(num_applicants, begin + chunk);
            workers.emplace_back([&, t, begin, end] {
                simulate_range(profile, inst, seed, begin, end, tallies[t]);
            });
        }
    }

    SimulationResult result;
    result.num_applicants = num_applicants;
    const double total = static_cast<double>(num_applicants);
    std::int64_t hired = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        std::int64_t count = 0;
        for (const auto& t : tallies) count += t.hires[i];
        const double p = count / total;
        result.hire_rate.push_back(p);
        result.hire_se.push_back(std::sqrt(p * (1.0 - p) / total));
    }
    for (const auto& t : tallies) hired += t.hired;
    result.welfare = hired / total;
    result.welfare_se = std::sqrt(result.welfare * (1.0 - result.welfare) / total);
    return result;
}

}  // namespace monohire
