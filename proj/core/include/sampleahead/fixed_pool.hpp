#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "sampleahead/datum.hpp"
#include "sampleahead/generator.hpp"

namespace sampleahead {

/// A finite dataset pre-generated from the prior, re-sampled with
/// replacement per bucket. Models training from a fixed synthesized set.
class FixedPool {
public:
    FixedPool(Dataset data, std::size_t bucket_count);

    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] std::size_t bucket_size(BucketId k) const { return by_bucket_.at(k).size(); }

    /// Uniform draw among the pool members of bucket `k`; nullopt when the
    /// bucket has no members.
    [[nodiscard]] std::optional<std::reference_wrapper<const Datum>> draw(BucketId k, Rng& rng) const;

    /// Closest populated bucket by flat id (ties go to the lower id).
    [[nodiscard]] BucketId nearest_populated(BucketId k) const;

private:
    Dataset data_;
    std::vector<std::vector<std::size_t>> by_bucket_;
};

/// Generate `n` data by two-stage sampling from the volume prior.
[[nodiscard]] FixedPool fixed_pool_snapshot(const Generator& generator, std::size_t n, Rng& rng);

}  // namespace sampleahead
