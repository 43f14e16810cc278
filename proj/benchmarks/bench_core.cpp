#include <benchmark/benchmark.h>

#include "fpa/agents.hpp"
#include "fpa/harness.hpp"

namespace {

void bm_utility_q(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const fpa::BidGrid grid(k, 1.0 / k);
    const auto dist = fpa::ValueDistribution::example1();
    const auto q = fpa::BidProbs::uniform(k + 1);
    const auto d = fpa::CompetingBidDist::point_mass(k / 2, k + 1);
    for (auto _ : state) benchmark::DoNotOptimize(fpa::utility_q(q, dist, d, grid));
}
BENCHMARK(bm_utility_q)->Arg(100)->Arg(256);

void bm_mwu_update(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const fpa::BidGrid grid(k, 1.0 / k);
    fpa::Learner learner(fpa::LearnerKind::mwu, grid);
    std::vector<double> g(k + 1, 0.25);
    for (auto _ : state) {
        learner.update(g);
        benchmark::DoNotOptimize(learner.next());
    }
}
BENCHMARK(bm_mwu_update)->Arg(100)->Arg(256);

void bm_known_episode_round(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const fpa::BidGrid grid(k, 1.0 / k);
    const auto dist = fpa::ValueDistribution::uniform();
    const long t = static_cast<long>(state.max_iterations) + 1;
    auto bidder = fpa::Bidder::known(dist, fpa::LearnerKind::mwu, grid);
    auto seller = fpa::Seller::adaptive_greedy(grid);
    fpa::CounterRng rng(7);
    long round = 0;
    for (auto _ : state) {
        const int h = seller.choose(++round, nullptr);
        const auto dec = bidder.begin_round(dist.sample(rng));
        benchmark::DoNotOptimize(bidder.finish_round(h));
        seller.observe_bid(dec.bid_index);
    }
    (void)t;
}
BENCHMARK(bm_known_episode_round)->Arg(100);

void bm_unknown_episode_round(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const fpa::BidGrid grid(k, 1.0 / k);
    const auto dist = fpa::ValueDistribution::uniform();
    auto bidder = fpa::Bidder::unknown(0.1, 1 << 22, fpa::LearnerKind::mwu, grid);
    auto seller = fpa::Seller::fixed(k / 2, grid);
    fpa::CounterRng rng(7);
    long round = 0;
    for (auto _ : state) {
        const int h = seller.choose(++round, nullptr);
        const auto dec = bidder.begin_round(dist.sample(rng));
        benchmark::DoNotOptimize(bidder.finish_round(h));
        seller.observe_bid(dec.bid_index);
    }
}
BENCHMARK(bm_unknown_episode_round)->Arg(100);

void bm_hindsight_benchmark(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const fpa::BidGrid grid(k, 1.0 / k);
    const auto dist = fpa::ValueDistribution::example1();
    std::vector<long> counts(k + 1, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(fpa::hindsight_benchmark(dist, counts, grid).value);
}
BENCHMARK(bm_hindsight_benchmark)->Arg(100)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
