#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "sampleahead/datum.hpp"
#include "sampleahead/generator.hpp"
#include "sampleahead/learner.hpp"
#include "sampleahead/space.hpp"

namespace sampleahead {

/// A fixed parameter point with its generated datum.
struct Probe {
    ParamPoint point;
    Datum datum;
    BucketId bucket = 0;
};

/// The standalone probe set V, generated once and indexed by bucket.
class ProbeSet {
public:
    ProbeSet(std::vector<Probe> probes, std::size_t bucket_count);

    [[nodiscard]] std::size_t size() const noexcept { return probes_.size(); }
    [[nodiscard]] std::size_t bucket_count() const noexcept { return by_bucket_.size(); }
    [[nodiscard]] std::span<const Probe> probes() const noexcept { return probes_; }
    [[nodiscard]] const Probe& operator[](std::size_t m) const { return probes_.at(m); }
    [[nodiscard]] std::span<const std::size_t> in_bucket(BucketId k) const { return by_bucket_.at(k); }

private:
    std::vector<Probe> probes_;
    std::vector<std::vector<std::size_t>> by_bucket_;
};

/// Per-probe difficulty d(V_m) in [0, 1] measured after epoch `epoch`.
struct ProbeResult {
    std::vector<double> difficulty;
    std::size_t epoch = 0;
};

/// Per-bucket difficulty d_k with the number of probes behind each value.
struct DifficultyField {
    std::vector<double> values;
    std::vector<std::size_t> counts;
    std::size_t epoch = 0;

    /// The field used before any probe has been evaluated.
    static DifficultyField constant(std::size_t bucket_count, double value);
};

enum class ProbeMode {
    hard,  ///< 1 if the arg-max prediction is wrong, else 0
    soft,  ///< 1 - probability assigned to the true class
};

/// omega(U, V) = I[U and V share a bucket].
struct BucketIndicatorKernel {};

/// omega(U, V) = 1 / (l2(U, V) + epsilon). Categorical coordinates contribute
/// 0 when equal and 1 otherwise.
struct InverseDistanceKernel {
    double epsilon = 1e-6;
};

using KernelWeight = std::variant<BucketIndicatorKernel, InverseDistanceKernel>;

/// Draw `per_bucket` points uniformly inside every bucket and generate each
/// once. Generator failures are rethrown as DataError naming the bucket.
[[nodiscard]] ProbeSet build_probe_set(const Generator& generator, std::size_t per_bucket, Rng& point_rng,
                                       Rng& generator_rng);

[[nodiscard]] ProbeResult probe_difficulties(const ProbeSet& probes, const Classifier& clf, ProbeMode mode,
                                             std::size_t epoch = 0);

/// Kernel-weighted mean of probe difficulties at `point`. Throws
/// EmptyBucketError when every weight is zero.
[[nodiscard]] double kernel_difficulty(const BucketPartition& partition, const ParamPoint& point,
                                       const ProbeResult& result, const ProbeSet& probes, const KernelWeight& weight);

/// Mean probe difficulty per bucket; buckets without probes keep the
/// fallback field's value.
[[nodiscard]] DifficultyField bucket_difficulties(const ProbeResult& result, const ProbeSet& probes,
                                                  const DifficultyField& fallback);

/// Mean of a probe result (the probe error rate in hard mode).
[[nodiscard]] double mean_difficulty(const ProbeResult& result);

}  // namespace sampleahead
