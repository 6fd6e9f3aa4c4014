#include "sampleahead/fixed_pool.hpp"

#include "sampleahead/distribution.hpp"
#include "sampleahead/errors.hpp"

namespace sampleahead {

FixedPool::FixedPool(Dataset data, std::size_t bucket_count) : data_(std::move(data)), by_bucket_(bucket_count) {
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!data_[i].provenance) throw ContractError("fixed pool members need provenance");
        const BucketId k = data_[i].provenance->bucket;
        if (k >= bucket_count) throw IndexError("pool member bucket out of range");
        by_bucket_[k].push_back(i);
    }
}

std::optional<std::reference_wrapper<const Datum>> FixedPool::draw(BucketId k, Rng& rng) const {
    const auto& members = by_bucket_.at(k);
    if (members.empty()) return std::nullopt;
    return std::cref(data_[members[rng.index(members.size())]]);
}

BucketId FixedPool::nearest_populated(BucketId k) const {
    if (data_.empty()) throw DataError("fixed pool is empty");
    const std::size_t n = by_bucket_.size();
    for (std::size_t step = 0; step < n; ++step) {
        if (k >= step && !by_bucket_[k - step].empty()) return k - step;
        if (k + step < n && !by_bucket_[k + step].empty()) return k + step;
    }
    throw DataError("fixed pool is empty");
}

FixedPool fixed_pool_snapshot(const Generator& generator, std::size_t n, Rng& rng) {
    if (n == 0) throw ContractError("fixed pool size must be positive");
    const BucketPartition& partition = generator.partition();
    const auto prior = make_prior(volume_prior(partition));
    const auto dist = SamplingDistribution::from_prior(prior);
    Dataset data;
    data.reserve(n);
    for (const auto& s : sample_params(dist, partition, n, rng)) data.push_back(generator.generate(s.point, rng));
    return FixedPool(std::move(data), partition.bucket_count());
}

}  // namespace sampleahead
