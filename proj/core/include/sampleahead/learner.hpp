#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "sampleahead/datum.hpp"

namespace sampleahead {

struct SoftmaxRegression {
    std::size_t inputs = 0;
    std::size_t classes = 0;
    friend bool operator==(const SoftmaxRegression&, const SoftmaxRegression&) = default;
};

/// One tanh hidden layer followed by a softmax output.
struct Mlp {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t classes = 0;
    friend bool operator==(const Mlp&, const Mlp&) = default;
};

using Architecture = std::variant<SoftmaxRegression, Mlp>;

[[nodiscard]] std::size_t parameter_count(const Architecture& arch) noexcept;

/// SGD hyper-parameters. The learning rate follows the "inv" schedule
/// lr_t = base_lr * (1 + lr_gamma * t)^(-lr_power).
struct TrainConfig {
    double base_lr = 5e-3;
    double lr_gamma = 1e-4;
    double lr_power = 0.75;
    double weight_decay = 5e-4;
    std::size_t batch_size = 76;
    std::size_t real_per_batch = 60;
    std::size_t synth_per_batch = 16;
    std::size_t max_iterations = 10000;

    [[nodiscard]] double learning_rate(std::size_t iteration) const noexcept;
    void validate() const;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// f(x; theta). Parameters are stored flat:
///   softmax: W[classes x inputs], b[classes]
///   mlp:     W1[hidden x inputs], b1[hidden], W2[classes x hidden], b2[classes]
class Classifier {
public:
    Classifier(Architecture arch, std::vector<double> theta);

    /// Xavier-uniform weights, zero biases.
    static Classifier initialize(const Architecture& arch, std::uint64_t seed);

    [[nodiscard]] const Architecture& architecture() const noexcept { return arch_; }
    [[nodiscard]] std::span<const double> parameters() const noexcept { return theta_; }
    [[nodiscard]] std::span<double> parameters() noexcept { return theta_; }
    [[nodiscard]] std::size_t input_dim() const noexcept;
    [[nodiscard]] std::size_t class_count() const noexcept;

    /// Normalized class probabilities. Throws ContractError on a feature
    /// length mismatch.
    [[nodiscard]] std::vector<double> forward(std::span<const double> features) const;
    [[nodiscard]] std::size_t predict(std::span<const double> features) const;

private:
    Architecture arch_;
    std::vector<double> theta_;
};

struct LossGradient {
    double loss = 0.0;
    std::vector<double> gradient;
};

/// Mean cross-entropy over `batch` plus weight_decay * 0.5 * ||theta||^2,
/// with its analytic gradient.
[[nodiscard]] LossGradient loss_and_gradient(const Classifier& clf, std::span<const Datum> batch,
                                             double weight_decay);

/// One SGD step at the scheduled learning rate. Returns the pre-step loss;
/// throws DivergenceError if it is not finite.
double train_step(Classifier& clf, std::span<const Datum> batch, const TrainConfig& config,
                  std::size_t iteration);

struct Evaluation {
    double error = 0.0;
    /// Aligned with bucket ids; NaN where no datum of that bucket was seen.
    std::vector<double> bucket_error;
    std::vector<std::size_t> bucket_count;
};

/// Misclassification rate overall and per provenance bucket. Data without
/// provenance contribute to the overall rate only.
[[nodiscard]] Evaluation evaluate(const Classifier& clf, std::span<const Datum> data, std::size_t bucket_count);

/// Versioned little-endian blob: 8-byte magic, version, architecture,
/// iteration counter and parameters.
struct Checkpoint {
    Classifier classifier;
    std::uint64_t iteration = 0;
};

inline constexpr char kCheckpointMagic[8] = {'S', 'A', 'H', 'D', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(std::ostream& out, const Classifier& clf, std::uint64_t iteration);
[[nodiscard]] Checkpoint load_checkpoint(std::istream& in);

}  // namespace sampleahead
