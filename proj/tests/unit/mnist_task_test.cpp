#include <gtest/gtest.h>

#include <memory>

#include "sampleahead/errors.hpp"
#include "sampleahead/mnist_task.hpp"

using namespace sampleahead;

namespace {

std::shared_ptr<const ImagePool> digit_pool(std::size_t classes) {
    std::vector<Image> images;
    std::vector<std::size_t> labels;
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < 3; ++i) {
            Image im{8, 8, std::vector<double>(64, 0.0)};
            for (std::size_t p = 0; p < 64; ++p) im.pixels[p] = double((p * (c + 1) + i * 7) % 11) / 10.0;
            images.push_back(im);
            labels.push_back(c);
        }
    }
    return std::make_shared<const ImagePool>(std::move(images), std::move(labels));
}

}  // namespace

TEST(MnistGenerator, OneHundredSixtyBuckets) {
    const MnistGenerator gen(digit_pool(10));
    EXPECT_EQ(gen.partition().bucket_count(), 160u);
    EXPECT_EQ(gen.feature_dim(), 64u);
    EXPECT_EQ(gen.class_count(), 10u);
}

TEST(MnistGenerator, SampledPointsKeepProvenanceProperty) {
    const MnistGenerator gen(digit_pool(10));
    Rng rng(1);
    for (std::size_t k = 0; k < 160; ++k) {
        for (int i = 0; i < 3; ++i) {
            const auto u = uniform_in_bucket(gen.partition(), k, rng);
            const auto d = gen.generate(u, rng);
            ASSERT_EQ(d.provenance->bucket, k);
            ASSERT_EQ(d.label, k / 16);
            ASSERT_EQ(d.features.size(), 64u);
            const auto b = k % 16;
            ASSERT_TRUE(gen.bin(b).contains(gen.magnitude(b, u.coords[2])));
        }
    }
}

TEST(MnistGenerator, MagnitudeEndpoints) {
    const MnistGenerator gen(digit_pool(10));
    EXPECT_DOUBLE_EQ(gen.magnitude(0, 0.0), -15.0);
    EXPECT_LT(gen.magnitude(0, 1.0), -7.5);
    EXPECT_DOUBLE_EQ(gen.magnitude(3, 1.0), 15.0);
}

TEST(MnistGenerator, IdentityMagnitudeReturnsSourceImage) {
    const auto pool = digit_pool(10);
    const MnistGenerator gen(pool);
    Rng rng(2);
    // class 4, bin 9 (h-shift, [0, 3]), u = 0 means shift 0, s = 0 picks the first image
    const auto d = gen.generate(ParamPoint{{4.0, 9.0, 0.0, 0.0}}, rng);
    EXPECT_EQ(d.features, pool->image(pool->of_class(4)[0]).pixels);
}

TEST(MnistGenerator, AbsentClassIsDataError) {
    const MnistGenerator gen(digit_pool(3));
    Rng rng(3);
    EXPECT_THROW((void)gen.generate(ParamPoint{{5.0, 0.0, 0.5, 0.5}}, rng), DataError);
    EXPECT_THROW(MnistGenerator(std::make_shared<const ImagePool>()), DataError);
}
