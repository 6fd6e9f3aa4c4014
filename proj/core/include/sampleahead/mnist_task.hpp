#pragma once

#include <array>
#include <filesystem>
#include <memory>

#include "sampleahead/augment.hpp"
#include "sampleahead/generator.hpp"
#include "sampleahead/idx.hpp"

namespace sampleahead {

[[nodiscard]] BucketPartition mnist_partition();

/// Augmented digits over a (class x augmentation-bin) partition: 10 x 16 = 160
/// buckets.
///
/// Point coordinates are (class, bin, magnitude fraction u, source selector s)
/// with u, s in [0, 1]. The magnitude is lo + u * (hi - lo) of the bin's
/// interval and the source is the floor(s * n_c)-th image of class c.
class MnistGenerator final : public Generator {
public:
    MnistGenerator(std::shared_ptr<const ImagePool> pool, AugmentationRanges ranges = {});

    [[nodiscard]] const BucketPartition& partition() const noexcept override { return partition_; }
    [[nodiscard]] std::size_t feature_dim() const noexcept override { return pool_->rows() * pool_->cols(); }
    [[nodiscard]] std::size_t class_count() const noexcept override { return kMnistClasses; }

    /// Deterministic in the point; `rng` is not consumed.
    [[nodiscard]] Datum generate(const ParamPoint& point, Rng& rng) const override;

    [[nodiscard]] const AugmentationBin& bin(std::size_t b) const { return bins_.at(b); }
    [[nodiscard]] double magnitude(std::size_t b, double fraction) const;
    [[nodiscard]] const ImagePool& pool() const noexcept { return *pool_; }

private:
    std::shared_ptr<const ImagePool> pool_;
    AugmentationRanges ranges_;
    std::array<AugmentationBin, kAugmentationBinCount> bins_;
    BucketPartition partition_;
};

/// Standard MNIST file names inside a data directory.
struct MnistFiles {
    std::filesystem::path train_images;
    std::filesystem::path train_labels;
    std::filesystem::path test_images;
    std::filesystem::path test_labels;

    static MnistFiles in(const std::filesystem::path& dir);
};

/// Flatten an image into a feature vector for the classifier.
[[nodiscard]] Datum image_datum(const Image& image, std::size_t label);

}  // namespace sampleahead
