#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sampleahead/errors.hpp"
#include "sampleahead/fixed_pool.hpp"

using namespace sampleahead;

namespace {

Datum in_bucket(std::size_t k, double tag) { return Datum{{tag}, 0, Provenance{{}, k}}; }

}  // namespace

TEST(FixedPool, DrawsOnlyFromRequestedBucket) {
    FixedPool pool({in_bucket(0, 1), in_bucket(2, 2), in_bucket(2, 3), in_bucket(4, 4)}, 5);
    EXPECT_EQ(pool.size(), 4u);
    EXPECT_EQ(pool.bucket_size(2), 2u);
    Rng rng(1);
    int seen3 = 0;
    for (int i = 0; i < 200; ++i) {
        const auto d = pool.draw(2, rng);
        ASSERT_TRUE(d.has_value());
        ASSERT_EQ(d->get().provenance->bucket, 2u);
        seen3 += d->get().features[0] == 3.0;
    }
    EXPECT_GT(seen3, 50);
    EXPECT_LT(seen3, 150);
    EXPECT_FALSE(pool.draw(1, rng).has_value());
}

TEST(FixedPool, NearestPopulatedPrefersLowerOnTies) {
    FixedPool pool({in_bucket(0, 1), in_bucket(4, 2)}, 6);
    EXPECT_EQ(pool.nearest_populated(0), 0u);
    EXPECT_EQ(pool.nearest_populated(1), 0u);
    EXPECT_EQ(pool.nearest_populated(2), 0u);
    EXPECT_EQ(pool.nearest_populated(3), 4u);
    EXPECT_EQ(pool.nearest_populated(5), 4u);
}

TEST(FixedPool, RejectsBadMembers) {
    EXPECT_THROW(FixedPool({Datum{{1.0}, 0, std::nullopt}}, 2), ContractError);
    EXPECT_THROW(FixedPool({in_bucket(3, 1)}, 2), IndexError);
    const FixedPool empty({}, 2);
    EXPECT_THROW((void)empty.nearest_populated(0), DataError);
}

TEST(FixedPool, SnapshotFollowsPrior) {
    fixture::CoordinateGenerator gen(BucketPartition(ParameterSpace({AxisSpec::continuous("a", {0.0, 1.0, 4.0})})), 1);
    Rng rng(2);
    const auto pool = fixed_pool_snapshot(gen, 4000, rng);
    EXPECT_EQ(pool.size(), 4000u);
    EXPECT_NEAR(double(pool.bucket_size(0)) / 4000.0, 0.25, 0.03);
}
