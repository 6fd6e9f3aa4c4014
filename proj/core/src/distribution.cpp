#include "sampleahead/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "sampleahead/errors.hpp"

namespace sampleahead {

void UpdateParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractError("alpha must lie in [0, 1]");
    if (!(beta >= 0.0 && beta <= 700.0)) throw ContractError("beta must lie in [0, 700]");
}

Prior make_prior(std::vector<double> probs) {
    if (probs.empty()) throw ContractError("prior over zero buckets");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ContractError("prior entries must be finite and non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ContractError("prior is not normalized");
    return std::make_shared<const std::vector<double>>(std::move(probs));
}

SamplingDistribution::SamplingDistribution(std::vector<double> probs, std::size_t epoch, Prior prior)
    : probs_(std::move(probs)), epoch_(epoch), prior_(std::move(prior)) {
    if (probs_.empty()) throw ContractError("distribution over zero buckets");
    cumulative_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probs_.size(); ++k) {
        if (!(probs_[k] >= 0.0) || !std::isfinite(probs_[k])) {
            throw ContractError("distribution entries must be finite and non-negative");
        }
        acc += probs_[k];
        cumulative_[k] = acc;
    }
    if (!(acc > 0.0)) throw ContractError("distribution has zero mass");
}

SamplingDistribution SamplingDistribution::from_prior(const Prior& prior) {
    return SamplingDistribution(*prior, 0, prior);
}

SamplingDistribution update_distribution(const Prior& prior, const DifficultyField& difficulty,
                                         const UpdateParams& params, std::size_t epoch) {
    params.validate();
    const auto& p0 = *prior;
    if (difficulty.values.size() != p0.size()) {
        throw ContractError("difficulty field has " + std::to_string(difficulty.values.size()) +
                            " buckets, prior has " + std::to_string(p0.size()));
    }
    double total = 0.0;
    for (double p : p0) total += p;
    if (std::abs(total - 1.0) > 1e-9) throw ContractError("prior is not normalized");

    if (params.alpha == 1.0 || params.beta == 0.0) return SamplingDistribution(p0, epoch, prior);

    std::vector<double> w(p0.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < p0.size(); ++k) {
        w[k] = params.alpha * p0[k] + (1.0 - params.alpha) * p0[k] * std::exp(params.beta * difficulty.values[k]);
        sum += w[k];
    }
    for (double& v : w) v /= sum;
    return SamplingDistribution(std::move(w), epoch, prior);
}

BucketId sample_bucket(const SamplingDistribution& dist, Rng& rng) {
    const auto cdf = dist.cumulative();
    const double u = rng.uniform01() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    auto k = static_cast<BucketId>(it - cdf.begin());
    // rounding can leave u on a flat stretch past the last positive entry
    while (dist.probs()[k] == 0.0 && k > 0) --k;
    return k;
}

std::vector<SampledPoint> sample_params(const SamplingDistribution& dist, const BucketPartition& partition,
                                        std::size_t n, Rng& rng) {
    if (dist.size() != partition.bucket_count()) {
        throw ContractError("distribution and partition disagree on the bucket count");
    }
    std::vector<SampledPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const BucketId k = sample_bucket(dist, rng);
        out.push_back({uniform_in_bucket(partition, k, rng), k});
    }
    return out;
}

}  // namespace sampleahead
