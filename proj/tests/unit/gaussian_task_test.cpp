#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sampleahead/errors.hpp"
#include "sampleahead/gaussian_task.hpp"

using namespace sampleahead;

TEST(GaussianTask, DefaultGeometryIsIdentityRings) {
    const GaussianGenerator gen(GaussianTaskSpec{});
    for (std::size_t c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(gen.ring_radius(c), 1.0 + double(c));
    EXPECT_EQ(gen.partition().bucket_count(), 24u);
    EXPECT_EQ(gen.sector_of(0.0), 0u);
    EXPECT_EQ(gen.sector_of(2.0 * std::numbers::pi), 7u);
}

TEST(GaussianTask, GeometrySeedPermutesRings) {
    GaussianTaskSpec spec;
    spec.classes = 6;
    spec.sectors = 2;
    spec.sector_noise = {0.1, 0.1};
    spec.geometry_seed = 17;
    const GaussianGenerator gen(spec);
    std::vector<double> radii;
    for (std::size_t c = 0; c < 6; ++c) radii.push_back(gen.ring_radius(c));
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t c = 0; c < 6; ++c) EXPECT_DOUBLE_EQ(sorted[c], 1.0 + double(c));
    EXPECT_NE(radii, sorted);
}

TEST(GaussianTask, GenerateMomentsAndProvenance) {
    const GaussianGenerator gen(GaussianTaskSpec{});
    Rng rng(1);
    const ParamPoint u{{2.0, 2.5}};  // sector 3, noise 1.0
    const std::size_t n = 100000;
    double sx = 0, sy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = gen.generate(u, rng);
        ASSERT_EQ(d.label, 2u);
        ASSERT_EQ(d.provenance->bucket, gen.partition().bucket_of(u));
        sx += d.features[0];
        sy += d.features[1];
        sxx += d.features[0] * d.features[0];
    }
    EXPECT_NEAR(sx / n, 3.0 * std::cos(2.5), 0.02);
    EXPECT_NEAR(sy / n, 3.0 * std::sin(2.5), 0.02);
    EXPECT_NEAR(sxx / n - (sx / n) * (sx / n), 1.0, 0.02);
}

TEST(GaussianTask, MonteCarloBayesErrorMatchesClosedForm) {
    GaussianTaskSpec spec;
    spec.sector_noise = {0.0, 0.15, 0.3, 1.0, 0.5, 2.0, 0.4, 0.15};
    const GaussianGenerator gen(spec);
    for (std::size_t s = 0; s < spec.sectors; ++s) {
        const double mc = oracle::gaussian_bayes_error_mc(gen, s, 200000, 100 + s);
        const double closed = oracle::gaussian_bayes_error_closed(spec.classes, spec.radius, spec.sector_noise[s]);
        EXPECT_NEAR(mc, closed, 0.006) << "sector " << s;
    }
}

TEST(GaussianTask, BayesErrorMonotoneInNoise) {
    GaussianTaskSpec spec;
    spec.sector_noise = {0.05, 0.1, 0.2, 0.35, 0.5, 0.8, 1.2, 2.0};
    const GaussianGenerator gen(spec);
    double previous = -1.0;
    for (std::size_t s = 0; s < spec.sectors; ++s) {
        const double e = oracle::gaussian_bayes_error_mc(gen, s, 100000, 7);
        EXPECT_GE(e, previous) << "sector " << s;
        previous = e;
    }
}

TEST(GaussianTask, AcceptanceSectorsAreHardAndEasy) {
    const GaussianGenerator gen(GaussianTaskSpec{});
    EXPECT_GE(oracle::gaussian_bayes_error_mc(gen, 3, 200000, 1), 0.4);
    EXPECT_LE(oracle::gaussian_bayes_error_mc(gen, 0, 200000, 2), 0.05);
}

TEST(GaussianTask, SpecValidation) {
    GaussianTaskSpec spec;
    spec.sector_noise.pop_back();
    EXPECT_THROW(GaussianGenerator{spec}, ContractError);
    spec = {};
    spec.classes = 1;
    EXPECT_THROW(GaussianGenerator{spec}, ContractError);
    spec = {};
    spec.sector_noise[2] = -0.1;
    EXPECT_THROW(GaussianGenerator{spec}, ContractError);
    spec = {};
    spec.radius = 0.0;
    EXPECT_THROW(GaussianGenerator{spec}, ContractError);
}

TEST(GaussianTask, OutOfSpacePointIsDomainError) {
    const GaussianGenerator gen(GaussianTaskSpec{});
    Rng rng(2);
    EXPECT_THROW((void)gen.generate(ParamPoint{{0.0, 7.0}}, rng), DomainError);
    EXPECT_THROW((void)gen.generate(ParamPoint{{3.0, 1.0}}, rng), DomainError);
}
