#include <benchmark/benchmark.h>

#include "sampleahead/augment.hpp"
#include "sampleahead/difficulty.hpp"
#include "sampleahead/distribution.hpp"
#include "sampleahead/gaussian_task.hpp"
#include "sampleahead/learner.hpp"
#include "sampleahead/mnist_task.hpp"

using namespace sampleahead;

namespace {

std::vector<double> random_probs(std::size_t k, Rng& rng) {
    std::vector<double> p(k);
    double s = 0.0;
    for (auto& x : p) s += x = rng.uniform(0.01, 1.0);
    for (auto& x : p) x /= s;
    return p;
}

DifficultyField random_field(std::size_t k, Rng& rng) {
    DifficultyField f;
    for (std::size_t i = 0; i < k; ++i) f.values.push_back(rng.uniform01());
    f.counts.assign(k, 1);
    return f;
}

Dataset gaussian_batch(std::size_t n) {
    const GaussianGenerator gen(GaussianTaskSpec{});
    Rng rng(3);
    Dataset batch;
    for (std::size_t i = 0; i < n; ++i)
        batch.push_back(gen.generate(uniform_in_bucket(gen.partition(), rng.index(gen.partition().bucket_count()), rng), rng));
    return batch;
}

void BM_SampleBucket(benchmark::State& state) {
    Rng rng(1);
    const auto p = random_probs(static_cast<std::size_t>(state.range(0)), rng);
    const SamplingDistribution dist(p, 0, make_prior(p));
    for (auto _ : state) benchmark::DoNotOptimize(sample_bucket(dist, rng));
}
BENCHMARK(BM_SampleBucket)->Arg(24)->Arg(160)->Arg(4096);

void BM_UpdateDistribution(benchmark::State& state) {
    Rng rng(2);
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto prior = make_prior(random_probs(k, rng));
    const auto field = random_field(k, rng);
    for (auto _ : state) benchmark::DoNotOptimize(update_distribution(prior, field, {0.9, 3.0}, 1));
}
BENCHMARK(BM_UpdateDistribution)->Arg(24)->Arg(160)->Arg(4096);

void BM_TrainStep(benchmark::State& state) {
    const auto batch = gaussian_batch(64);
    auto clf = Classifier::initialize(Mlp{2, static_cast<std::size_t>(state.range(0)), 3}, 4);
    TrainConfig cfg;
    cfg.base_lr = 0.05;
    std::size_t it = 0;
    for (auto _ : state) benchmark::DoNotOptimize(train_step(clf, batch, cfg, it++));
}
BENCHMARK(BM_TrainStep)->Arg(32)->Arg(128);

void BM_AffineAugment(benchmark::State& state) {
    Rng rng(5);
    Image img{28, 28, std::vector<double>(28 * 28)};
    for (auto& p : img.pixels) p = rng.uniform01();
    const auto bins = augmentation_bins(AugmentationRanges{});
    const auto& bin = bins[static_cast<std::size_t>(state.range(0))];
    const double m = 0.5 * (bin.lo + bin.hi);
    for (auto _ : state) benchmark::DoNotOptimize(affine_augment(img, bin, m));
}
BENCHMARK(BM_AffineAugment)->DenseRange(0, 15, 5);

void BM_ProbeEvaluation(benchmark::State& state) {
    const GaussianGenerator gen(GaussianTaskSpec{});
    Rng a(6), b(7);
    const auto probes = build_probe_set(gen, static_cast<std::size_t>(state.range(0)), a, b);
    const auto clf = Classifier::initialize(Mlp{2, 32, 3}, 8);
    const auto fallback = DifficultyField::constant(gen.partition().bucket_count(), 0.5);
    for (auto _ : state) {
        const auto result = probe_difficulties(probes, clf, ProbeMode::hard);
        benchmark::DoNotOptimize(bucket_difficulties(result, probes, fallback));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * probes.size()));
}
BENCHMARK(BM_ProbeEvaluation)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
