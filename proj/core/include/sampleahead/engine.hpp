#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sampleahead/augment.hpp"
#include "sampleahead/difficulty.hpp"
#include "sampleahead/distribution.hpp"
#include "sampleahead/gaussian_task.hpp"
#include "sampleahead/idx.hpp"
#include "sampleahead/learner.hpp"
#include "sampleahead/metrics.hpp"

namespace sampleahead {

enum class Mode {
    adaptive,             ///< probe, update, sample
    uniform_baseline,     ///< alpha forced to 1
    frozen_distribution,  ///< fresh data from P^(0), never updated
    fixed_pool,           ///< adaptive bucket choice over a pre-generated pool
};

[[nodiscard]] std::string_view to_string(Mode mode) noexcept;
[[nodiscard]] std::optional<Mode> parse_mode(std::string_view text) noexcept;

/// Augmented-MNIST task read from a directory of IDX files.
struct MnistTaskSpec {
    std::filesystem::path data_dir;
    AugmentationRanges ranges;
    /// Use only the first N training / test images (0 = all).
    std::size_t train_limit = 0;
    std::size_t test_limit = 0;

    friend bool operator==(const MnistTaskSpec&, const MnistTaskSpec&) = default;
};

using GeneratorSpec = std::variant<GaussianTaskSpec, MnistTaskSpec>;

struct ProbeSettings {
    std::size_t per_bucket = 100;
    ProbeMode mode = ProbeMode::hard;
    /// d_k for buckets that have never been probed.
    double initial_difficulty = 0.5;

    friend bool operator==(const ProbeSettings&, const ProbeSettings&) = default;
};

enum class ArchitectureKind { softmax, mlp };

struct LoopConfig {
    std::size_t total_iterations = 10000;
    std::size_t iterations_per_epoch = 500;
    /// Iterations trained on P^(0) before the first update.
    std::size_t warmup_iterations = 0;
    UpdateParams update;
    ProbeSettings probes;
    GeneratorSpec generator = GaussianTaskSpec{};
    TrainConfig train;
    ArchitectureKind architecture = ArchitectureKind::mlp;
    std::size_t hidden_units = 32;
    Mode mode = Mode::adaptive;
    std::uint64_t seed = 1;
    /// Size of the pre-generated pool in fixed-pool mode.
    std::size_t pool_size = 10000;
    std::size_t validation_size = 2000;
    /// Synthetic test-set size; MNIST uses the real test images when present.
    std::size_t test_size = 10000;
    bool record_wall_time = false;

    void validate() const;
    [[nodiscard]] std::size_t epoch_count() const noexcept;

    friend bool operator==(const LoopConfig&, const LoopConfig&) = default;
};

struct EpochRecord {
    std::size_t epoch = 0;
    /// P^(t) used to sample this epoch's training data.
    std::vector<double> distribution;
    /// d^(t-1) from the probes; absent when probes were not evaluated.
    std::optional<std::vector<double>> difficulty;
    std::optional<double> probe_error;
    double mean_loss = 0.0;
    double validation_error = 0.0;
    double wall_ms = 0.0;
};

struct RunReport {
    explicit RunReport(Classifier clf) : classifier(std::move(clf)) {}

    std::vector<EpochRecord> epochs;
    Classifier classifier;
    std::size_t iterations = 0;
    std::vector<double> prior;
    std::string partition_descriptor;
    double test_error = 0.0;
    std::vector<double> test_bucket_error;
    std::size_t pool_fallbacks = 0;
    std::optional<std::size_t> diverged_at;
};

using LogSink = std::function<void(const std::string&)>;

/// Materialized task: generator plus the fixed evaluation data.
struct Task {
    std::unique_ptr<Generator> generator;
    /// Real (non-synthesized) training data mixed into every batch; empty
    /// for purely synthetic tasks.
    Dataset real_train;
    Dataset validation;
    Dataset test;
};

/// Partition implied by a generator spec; needs no data on disk.
[[nodiscard]] BucketPartition partition_for(const GeneratorSpec& spec);

/// Throws DataError when MNIST files are missing or malformed.
[[nodiscard]] Task make_task(const LoopConfig& config);

/// The classifier-sampler loop. Each epoch: probe the classifier (after
/// warmup), rebuild P^(t) from the prior, draw the epoch's training data by
/// two-stage sampling and run SGD. Divergence ends the run early with the
/// records completed so far and `diverged_at` set.
[[nodiscard]] RunReport run(const LoopConfig& config, const LogSink& log = {});
[[nodiscard]] RunReport run(const LoopConfig& config, const Task& task, const LogSink& log = {});

struct ComparisonPair {
    std::size_t first = 0;
    std::size_t second = 0;
    /// Mean of (first - second) over seeds; NaN when the pair was skipped.
    double mean_difference = 0.0;
    /// Absent for a single seed, a zero-variance difference or a skipped pair.
    std::optional<PairedTTest> test;
    bool zero_variance = false;
    /// Set when a run in either config failed; the pair is then skipped.
    std::string skipped_reason;
};

struct ComparisonReport {
    std::vector<std::uint64_t> seeds;
    /// errors[config][seed]; nullopt marks a failed run.
    std::vector<std::vector<std::optional<double>>> errors;
    std::vector<std::vector<std::string>> failures;
    std::vector<double> means;
    std::vector<double> stddevs;
    std::vector<ComparisonPair> pairs;
};

/// Run every config under every seed and compare final test errors pairwise.
/// Cells may run on `jobs` worker threads; results are assembled by
/// (config, seed) index.
[[nodiscard]] ComparisonReport compare(const std::vector<LoopConfig>& configs, const std::vector<std::uint64_t>& seeds,
                                       std::size_t jobs = 1, const LogSink& log = {});

}  // namespace sampleahead
