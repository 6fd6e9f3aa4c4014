#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace sampleahead {

/// Row-major grayscale image with values in [0, 1].
struct Image {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pixels;

    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return pixels[r * cols + c]; }

    friend bool operator==(const Image&, const Image&) = default;
};

enum class AugmentationKind { rotation, h_scale, v_scale, h_shift, v_shift, h_shear, v_shear };

[[nodiscard]] std::string_view to_string(AugmentationKind kind) noexcept;

/// One of the 16 augmentation bins: a single transform type restricted to a
/// magnitude interval. Intervals are [lo, hi) unless `closed_hi`.
struct AugmentationBin {
    AugmentationKind kind = AugmentationKind::rotation;
    double lo = 0.0;
    double hi = 0.0;
    bool closed_hi = false;

    [[nodiscard]] bool contains(double magnitude) const noexcept {
        return magnitude >= lo && (magnitude < hi || (closed_hi && magnitude == hi));
    }
};

/// Magnitude ranges. Rotation is in degrees, scale is a factor, shift is in
/// pixels and shear is the off-diagonal coefficient.
struct AugmentationRanges {
    double rotation_deg = 15.0;
    double scale_lo = 0.85;
    double scale_hi = 1.15;
    double shift_px = 3.0;
    double shear = 0.15;

    void validate() const;

    friend bool operator==(const AugmentationRanges&, const AugmentationRanges&) = default;
};

inline constexpr std::size_t kAugmentationBinCount = 16;

/// Bins 0-3: rotation quarters of [-r, r]. Bins 4..15: {h-scale, v-scale,
/// h-shift, v-shift, h-shear, v-shear} x {low half, high half}, split at the
/// identity value (scale 1, shift 0, shear 0).
[[nodiscard]] std::array<AugmentationBin, kAugmentationBinCount> augmentation_bins(const AugmentationRanges& ranges);

/// Forward 2x3 map in pixel coordinates: out = A * (in - c) + c + t.
struct AffineMap {
    std::array<double, 4> linear = {1.0, 0.0, 0.0, 1.0};  // row-major 2x2 acting on (x, y)
    std::array<double, 2> translation = {0.0, 0.0};
};

[[nodiscard]] AffineMap affine_for(AugmentationKind kind, double magnitude);

/// Resample `image` under `map` about the image centre: bilinear
/// interpolation, zero fill outside the source, output clamped to [0, 1].
[[nodiscard]] Image warp_affine(const Image& image, const AffineMap& map);

/// Apply one bin's transform. Throws ContractError when `magnitude` is
/// outside the bin.
[[nodiscard]] Image affine_augment(const Image& image, const AugmentationBin& bin, double magnitude);

}  // namespace sampleahead
