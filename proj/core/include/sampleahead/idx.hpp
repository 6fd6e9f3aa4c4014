#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sampleahead/augment.hpp"

namespace sampleahead {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Labelled grayscale images, immutable once loaded.
class ImagePool {
public:
    ImagePool() = default;
    ImagePool(std::vector<Image> images, std::vector<std::size_t> labels);

    [[nodiscard]] std::size_t size() const noexcept { return images_.size(); }
    [[nodiscard]] const Image& image(std::size_t i) const { return images_.at(i); }
    [[nodiscard]] std::size_t label(std::size_t i) const { return labels_.at(i); }
    [[nodiscard]] std::size_t rows() const noexcept { return images_.empty() ? 0 : images_.front().rows; }
    [[nodiscard]] std::size_t cols() const noexcept { return images_.empty() ? 0 : images_.front().cols; }

    /// Indices of the images carrying label `c` (empty when absent).
    [[nodiscard]] std::span<const std::size_t> of_class(std::size_t c) const noexcept;

    /// First `n` images (or all if n == 0 or n >= size()).
    [[nodiscard]] ImagePool prefix(std::size_t n) const;

private:
    std::vector<Image> images_;
    std::vector<std::size_t> labels_;
    std::vector<std::vector<std::size_t>> by_class_;
};

inline constexpr std::size_t kMnistClasses = 10;

/// Parse a big-endian IDX image file (magic 0x803) and label file (magic
/// 0x801). Pixel bytes are scaled to [0, 1] by 1/255. Throws ParseError
/// naming the file and byte offset on any format violation.
[[nodiscard]] ImagePool load_idx(const std::filesystem::path& images_path,
                                 const std::filesystem::path& labels_path);

/// Write an IDX pair; pixels are rounded to the nearest byte.
void write_idx(const ImagePool& pool, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

}  // namespace sampleahead
