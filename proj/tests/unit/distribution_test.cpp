#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sampleahead/distribution.hpp"
#include "sampleahead/errors.hpp"
#include "sampleahead/mnist_task.hpp"

using namespace sampleahead;

namespace {

DifficultyField field(std::vector<double> d) {
    DifficultyField f;
    f.counts.assign(d.size(), 1);
    f.values = std::move(d);
    return f;
}

std::vector<double> random_simplex(Rng& rng, std::size_t k) {
    std::vector<double> p(k);
    for (auto& v : p) v = rng.uniform(0.01, 1.0);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= s;
    return p;
}

}  // namespace

TEST(UpdateDistribution, WorkedExample) {
    const auto prior = make_prior({0.5, 0.5});
    const auto dist = update_distribution(prior, field({0.0, 1.0}), {0.5, std::log(2.0)}, 1);
    EXPECT_NEAR(dist.probs()[0], 0.4, 1e-12);
    EXPECT_NEAR(dist.probs()[1], 0.6, 1e-12);
    EXPECT_EQ(dist.epoch(), 1u);
}

TEST(UpdateDistribution, AlphaOneReturnsPriorExactly) {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p0 = random_simplex(rng, 1 + rng.index(40));
        std::vector<double> d(p0.size());
        for (auto& v : d) v = rng.uniform01();
        const auto prior = make_prior(p0);
        const auto dist = update_distribution(prior, field(d), {1.0, rng.uniform(0.0, 50.0)}, 3);
        for (std::size_t k = 0; k < p0.size(); ++k) EXPECT_EQ(dist.probs()[k], (*prior)[k]);
    }
}

TEST(UpdateDistribution, BetaZeroReturnsPriorExactly) {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p0 = random_simplex(rng, 1 + rng.index(40));
        std::vector<double> d(p0.size());
        for (auto& v : d) v = rng.uniform01();
        const auto prior = make_prior(p0);
        const auto dist = update_distribution(prior, field(d), {rng.uniform01(), 0.0}, 3);
        for (std::size_t k = 0; k < p0.size(); ++k) EXPECT_EQ(dist.probs()[k], (*prior)[k]);
    }
}

TEST(UpdateDistribution, NormalizedAndNonNegativeProperty) {
    Rng rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 1 + rng.index(200);
        std::vector<double> p0 = random_simplex(rng, k);
        if (k > 2) {
            p0[rng.index(k)] = 0.0;
            const double s = std::accumulate(p0.begin(), p0.end(), 0.0);
            for (auto& v : p0) v /= s;
        }
        std::vector<double> d(k);
        for (auto& v : d) v = rng.uniform01();
        const auto dist = update_distribution(make_prior(p0), field(d), {rng.uniform01(), rng.uniform(0.0, 700.0)}, 1);
        double s = 0.0;
        for (double v : dist.probs()) {
            ASSERT_GE(v, 0.0);
            s += v;
        }
        ASSERT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(UpdateDistribution, MatchesDirectFormulaProperty) {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 2 + rng.index(50);
        const auto p0 = random_simplex(rng, k);
        std::vector<double> d(k);
        for (auto& v : d) v = rng.uniform01();
        const double a = rng.uniform01(), b = rng.uniform(0.0, 10.0);
        const auto dist = update_distribution(make_prior(p0), field(d), {a, b}, 1);
        std::vector<double> ref(k);
        for (std::size_t i = 0; i < k; ++i) ref[i] = a * p0[i] + (1 - a) * p0[i] * std::exp(b * d[i]);
        const double z = std::accumulate(ref.begin(), ref.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i) ASSERT_NEAR(dist.probs()[i], ref[i] / z, 1e-12);
    }
}

TEST(UpdateDistribution, HarderBucketsGainRelativeMassProperty) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 2 + rng.index(30);
        const auto p0 = random_simplex(rng, k);
        std::vector<double> d(k);
        for (auto& v : d) v = rng.uniform01();
        const auto dist = update_distribution(make_prior(p0), field(d), {0.9, 2.0}, 1);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                if (d[i] > d[j]) ASSERT_GT(dist.probs()[i] / p0[i], dist.probs()[j] / p0[j]);
            }
        }
    }
}

TEST(UpdateDistribution, RejectsBadParameters) {
    const auto prior = make_prior({0.5, 0.5});
    EXPECT_THROW((void)update_distribution(prior, field({0, 1}), {1.5, 1.0}, 1), ContractError);
    EXPECT_THROW((void)update_distribution(prior, field({0, 1}), {0.5, -1.0}, 1), ContractError);
    EXPECT_THROW((void)update_distribution(prior, field({0, 1}), {0.5, 701.0}, 1), ContractError);
    EXPECT_THROW((void)update_distribution(prior, field({0, 1, 1}), {0.5, 1.0}, 1), ContractError);
}

TEST(MakePrior, RejectsInvalidPriors) {
    EXPECT_THROW((void)make_prior({}), ContractError);
    EXPECT_THROW((void)make_prior({0.5, 0.6}), ContractError);
    EXPECT_THROW((void)make_prior({-0.5, 1.5}), ContractError);
}

TEST(SampleBucket, ChiSquareOnRandomDistributions) {
    Rng rng(6);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_simplex(rng, 160);
        const SamplingDistribution dist(p, 0, make_prior(p));
        std::vector<std::size_t> counts(p.size());
        for (int i = 0; i < 200000; ++i) ++counts[sample_bucket(dist, rng)];
        EXPECT_GT(oracle::chi_square_p(counts, p), 1e-3);
    }
}

TEST(SampleBucket, NeverDrawsZeroProbabilityBuckets) {
    const std::vector<double> p{0.0, 0.5, 0.0, 0.5, 0.0};
    const SamplingDistribution dist(p, 0, make_prior(p));
    Rng rng(7);
    for (int i = 0; i < 100000; ++i) {
        const auto k = sample_bucket(dist, rng);
        ASSERT_TRUE(k == 1 || k == 3);
    }
}

TEST(SampleParams, ProvenanceMatchesBucketOf) {
    const auto partition = mnist_partition();
    Rng rng(8);
    const auto p = random_simplex(rng, partition.bucket_count());
    const SamplingDistribution dist(p, 0, make_prior(p));
    for (const auto& s : sample_params(dist, partition, 20000, rng)) {
        ASSERT_EQ(partition.bucket_of(s.point), s.bucket);
    }
}

TEST(SampleParams, SizeMismatchIsAnError) {
    const auto partition = mnist_partition();
    const std::vector<double> p{0.5, 0.5};
    Rng rng(9);
    EXPECT_THROW((void)sample_params(SamplingDistribution(p, 0, make_prior(p)), partition, 1, rng), ContractError);
}
