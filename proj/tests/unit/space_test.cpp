#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sampleahead/errors.hpp"
#include "sampleahead/rng.hpp"
#include "sampleahead/space.hpp"

using namespace sampleahead;

namespace {

BucketPartition random_partition(Rng& rng) {
    std::vector<AxisSpec> axes;
    const std::size_t dims = 1 + rng.index(3);
    for (std::size_t i = 0; i < dims; ++i) {
        if (rng.uniform01() < 0.4) {
            axes.push_back(AxisSpec::categorical("c" + std::to_string(i), 1 + rng.index(5)));
        } else {
            std::vector<double> edges{rng.uniform(-5.0, 5.0)};
            const std::size_t bins = 1 + rng.index(6);
            for (std::size_t b = 0; b < bins; ++b) edges.push_back(edges.back() + rng.uniform(0.01, 2.0));
            axes.push_back(AxisSpec::continuous("x" + std::to_string(i), edges));
        }
    }
    return BucketPartition(ParameterSpace(std::move(axes)));
}

}  // namespace

TEST(AxisSpec, HalfOpenBinsWithClosedLastBin) {
    const auto axis = AxisSpec::continuous("a", {0.0, 1.0, 2.0});
    EXPECT_EQ(axis.bin_of(0.0), 0u);
    EXPECT_EQ(axis.bin_of(0.999), 0u);
    EXPECT_EQ(axis.bin_of(1.0), 1u);
    EXPECT_EQ(axis.bin_of(2.0), 1u);
    EXPECT_THROW((void)axis.bin_of(2.0000001), DomainError);
    EXPECT_THROW((void)axis.bin_of(-1e-12), DomainError);
    EXPECT_THROW((void)axis.bin_of(NAN), DomainError);
}

TEST(AxisSpec, DomainErrorNamesTheAxis) {
    const auto axis = AxisSpec::uniform_bins("elevation", 0.0, 90.0, 3);
    try {
        (void)axis.bin_of(91.0);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_EQ(e.axis(), "elevation");
    }
}

TEST(AxisSpec, CategoricalBins) {
    const auto axis = AxisSpec::categorical("class", 4);
    EXPECT_EQ(axis.bin_count(), 4u);
    EXPECT_EQ(axis.bin_of(3.0), 3u);
    EXPECT_THROW((void)axis.bin_of(4.0), DomainError);
    EXPECT_THROW((void)axis.bin_of(1.5), DomainError);
    EXPECT_DOUBLE_EQ(axis.bin_fraction(2), 0.25);
}

TEST(AxisSpec, RejectsNonIncreasingEdges) {
    EXPECT_THROW((void)AxisSpec::continuous("a", {0.0, 0.0, 1.0}), ContractError);
    EXPECT_THROW((void)AxisSpec::continuous("a", {1.0}), ContractError);
    EXPECT_THROW((void)AxisSpec::categorical("a", 0), ContractError);
}

TEST(UniformInInterval, ZeroWidthReturnsLowerBound) {
    Rng rng(3);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(uniform_in_interval(0.25, 0.25, false, rng), 0.25);
}

TEST(UniformInInterval, HalfOpenNeverReachesUpperBound) {
    Rng rng(5);
    const double lo = 1.0, hi = std::nextafter(1.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = uniform_in_interval(lo, hi, false, rng);
        EXPECT_GE(x, lo);
        EXPECT_LT(x, hi);
    }
}

TEST(BucketPartition, RowMajorFlatIds) {
    BucketPartition p(ParameterSpace({AxisSpec::categorical("c", 3), AxisSpec::uniform_bins("a", 0.0, 1.0, 4)}));
    EXPECT_EQ(p.bucket_count(), 12u);
    EXPECT_EQ(p.bucket_of(ParamPoint{{2.0, 0.3}}), 2u * 4u + 1u);
    const std::vector<std::size_t> bins{1, 3};
    EXPECT_EQ(p.flat_id(bins), 7u);
    EXPECT_EQ(p.bins_of(7), bins);
}

TEST(BucketPartition, UniformInBucketRoundTripsProperty) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_partition(rng);
        for (std::size_t k = 0; k < p.bucket_count(); ++k) {
            for (int i = 0; i < 5; ++i) ASSERT_EQ(p.bucket_of(uniform_in_bucket(p, k, rng)), k);
        }
    }
}

TEST(BucketPartition, BinsOfInvertsFlatIdProperty) {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_partition(rng);
        for (std::size_t k = 0; k < p.bucket_count(); ++k) ASSERT_EQ(p.flat_id(p.bins_of(k)), k);
    }
}

TEST(VolumePrior, ProportionalToBinVolumeAndNormalized) {
    BucketPartition p(ParameterSpace({AxisSpec::categorical("c", 2), AxisSpec::continuous("a", {0.0, 1.0, 4.0})}));
    const auto prior = volume_prior(p);
    ASSERT_EQ(prior.size(), 4u);
    EXPECT_NEAR(prior[0], 0.5 * 0.25, 1e-15);
    EXPECT_NEAR(prior[1], 0.5 * 0.75, 1e-15);
    EXPECT_NEAR(std::accumulate(prior.begin(), prior.end(), 0.0), 1.0, 1e-12);
}

TEST(VolumePrior, SumsToOneProperty) {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto prior = volume_prior(random_partition(rng));
        double s = 0.0;
        for (double v : prior) {
            EXPECT_GT(v, 0.0);
            s += v;
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Descriptor, RoundTripsProperty) {
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_partition(rng);
        const auto text = to_descriptor(p);
        EXPECT_EQ(parse_descriptor(text), p) << text;
        EXPECT_EQ(to_descriptor(parse_descriptor(text)), text);
    }
}

TEST(Descriptor, Format) {
    BucketPartition p(ParameterSpace({AxisSpec::categorical("class", 3), AxisSpec::continuous("angle", {0.0, 1.5, 3.0})}));
    EXPECT_EQ(to_descriptor(p), "class:categorical(3);angle:continuous(0,1.5,3)");
}

TEST(Descriptor, RejectsGarbage) {
    EXPECT_THROW((void)parse_descriptor("class:weird(3)"), Error);
    EXPECT_THROW((void)parse_descriptor("class:categorical(x)"), Error);
    EXPECT_THROW((void)parse_descriptor(""), Error);
}

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    Rng rng(15);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-20.0, 5.0));
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}
