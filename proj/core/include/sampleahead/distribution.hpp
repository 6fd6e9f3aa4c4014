#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "sampleahead/difficulty.hpp"
#include "sampleahead/rng.hpp"
#include "sampleahead/space.hpp"

namespace sampleahead {

struct UpdateParams {
    double alpha = 0.9;
    double beta = 1.0;

    /// alpha in [0, 1], beta in [0, 700] (keeps exp(beta * d) finite for d <= 1).
    void validate() const;

    friend bool operator==(const UpdateParams&, const UpdateParams&) = default;
};

using Prior = std::shared_ptr<const std::vector<double>>;

/// Throws ContractError unless the entries are non-negative and sum to 1 within 1e-9.
[[nodiscard]] Prior make_prior(std::vector<double> probs);

/// Categorical distribution P_k^(t) over buckets, with the cumulative table
/// used for inverse-CDF sampling. Immutable.
class SamplingDistribution {
public:
    SamplingDistribution(std::vector<double> probs, std::size_t epoch, Prior prior);

    /// The prior itself, as the epoch-0 distribution.
    static SamplingDistribution from_prior(const Prior& prior);

    [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    [[nodiscard]] std::size_t epoch() const noexcept { return epoch_; }
    [[nodiscard]] const Prior& prior() const noexcept { return prior_; }
    [[nodiscard]] std::span<const double> cumulative() const noexcept { return cumulative_; }

private:
    std::vector<double> probs_;
    std::vector<double> cumulative_;
    std::size_t epoch_ = 0;
    Prior prior_;
};

/// P_k^(t) proportional to alpha * P_k^(0) + (1 - alpha) * P_k^(0) * exp(beta * d_k),
/// always anchored to the prior. alpha == 1 or beta == 0 return the prior
/// unchanged.
[[nodiscard]] SamplingDistribution update_distribution(const Prior& prior, const DifficultyField& difficulty,
                                                       const UpdateParams& params, std::size_t epoch);

[[nodiscard]] BucketId sample_bucket(const SamplingDistribution& dist, Rng& rng);

struct SampledPoint {
    ParamPoint point;
    BucketId bucket = 0;
};

/// Two-stage sampling: bucket from `dist`, then a uniform point inside it.
[[nodiscard]] std::vector<SampledPoint> sample_params(const SamplingDistribution& dist,
                                                      const BucketPartition& partition, std::size_t n, Rng& rng);

}  // namespace sampleahead
