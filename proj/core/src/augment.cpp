#include "sampleahead/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sampleahead/errors.hpp"
#include "sampleahead/space.hpp"

namespace sampleahead {

std::string_view to_string(AugmentationKind kind) noexcept {
    switch (kind) {
        case AugmentationKind::rotation: return "rotation";
        case AugmentationKind::h_scale: return "h-scale";
        case AugmentationKind::v_scale: return "v-scale";
        case AugmentationKind::h_shift: return "h-shift";
        case AugmentationKind::v_shift: return "v-shift";
        case AugmentationKind::h_shear: return "h-shear";
        case AugmentationKind::v_shear: return "v-shear";
    }
    return "unknown";
}

void AugmentationRanges::validate() const {
    if (!(rotation_deg > 0.0)) throw ContractError("rotation range must be positive");
    if (!(scale_lo > 0.0 && scale_lo < 1.0 && scale_hi > 1.0)) {
        throw ContractError("scale range must straddle 1 with a positive lower bound");
    }
    if (!(shift_px > 0.0)) throw ContractError("shift range must be positive");
    if (!(shear > 0.0)) throw ContractError("shear range must be positive");
}

std::array<AugmentationBin, kAugmentationBinCount> augmentation_bins(const AugmentationRanges& r) {
    using K = AugmentationKind;
    const double q = r.rotation_deg / 2.0;
    return {{
        {K::rotation, -r.rotation_deg, -q, false},
        {K::rotation, -q, 0.0, false},
        {K::rotation, 0.0, q, false},
        {K::rotation, q, r.rotation_deg, true},
        {K::h_scale, r.scale_lo, 1.0, false},
        {K::h_scale, 1.0, r.scale_hi, true},
        {K::v_scale, r.scale_lo, 1.0, false},
        {K::v_scale, 1.0, r.scale_hi, true},
        {K::h_shift, -r.shift_px, 0.0, false},
        {K::h_shift, 0.0, r.shift_px, true},
        {K::v_shift, -r.shift_px, 0.0, false},
        {K::v_shift, 0.0, r.shift_px, true},
        {K::h_shear, -r.shear, 0.0, false},
        {K::h_shear, 0.0, r.shear, true},
        {K::v_shear, -r.shear, 0.0, false},
        {K::v_shear, 0.0, r.shear, true},
    }};
}

AffineMap affine_for(AugmentationKind kind, double m) {
    AffineMap map;
    switch (kind) {
        case AugmentationKind::rotation: {
            // Positive angles rotate counter-clockwise as displayed (y grows downward).
            const double a = m * std::numbers::pi / 180.0;
            const double c = std::cos(a);
            const double s = std::sin(a);
            map.linear = {c, s, -s, c};
            break;
        }
        case AugmentationKind::h_scale: map.linear = {m, 0.0, 0.0, 1.0}; break;
        case AugmentationKind::v_scale: map.linear = {1.0, 0.0, 0.0, m}; break;
        case AugmentationKind::h_shift: map.translation = {m, 0.0}; break;
        case AugmentationKind::v_shift: map.translation = {0.0, m}; break;
        case AugmentationKind::h_shear: map.linear = {1.0, m, 0.0, 1.0}; break;
        case AugmentationKind::v_shear: map.linear = {1.0, 0.0, m, 1.0}; break;
    }
    return map;
}

Image warp_affine(const Image& image, const AffineMap& map) {
    const auto& a = map.linear;
    const double det = a[0] * a[3] - a[1] * a[2];
    if (!(std::abs(det) > 0.0)) throw ContractError("affine map is singular");
    const std::array<double, 4> inv = {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};

    const double cx = (static_cast<double>(image.cols) - 1.0) / 2.0;
    const double cy = (static_cast<double>(image.rows) - 1.0) / 2.0;
    const auto rows = static_cast<long>(image.rows);
    const auto cols = static_cast<long>(image.cols);
    auto sample = [&](long r, long c) -> double {
        if (r < 0 || c < 0 || r >= rows || c >= cols) return 0.0;
        return image.pixels[static_cast<std::size_t>(r * cols + c)];
    };

    Image out{image.rows, image.cols, std::vector<double>(image.pixels.size(), 0.0)};
    for (std::size_t r = 0; r < image.rows; ++r) {
        for (std::size_t c = 0; c < image.cols; ++c) {
            const double dx = static_cast<double>(c) - cx - map.translation[0];
            const double dy = static_cast<double>(r) - cy - map.translation[1];
            const double sx = inv[0] * dx + inv[1] * dy + cx;
            const double sy = inv[2] * dx + inv[3] * dy + cy;
            const double fx = std::floor(sx);
            const double fy = std::floor(sy);
            const double tx = sx - fx;
            const double ty = sy - fy;
            const auto x0 = static_cast<long>(fx);
            const auto y0 = static_cast<long>(fy);
            double v = (1.0 - ty) * ((1.0 - tx) * sample(y0, x0) + tx * sample(y0, x0 + 1)) +
                       ty * ((1.0 - tx) * sample(y0 + 1, x0) + tx * sample(y0 + 1, x0 + 1));
            out.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

Image affine_augment(const Image& image, const AugmentationBin& bin, double magnitude) {
    if (!bin.contains(magnitude)) {
        throw ContractError("magnitude " + format_double(magnitude) + " outside " +
                            std::string(to_string(bin.kind)) + " bin [" + format_double(bin.lo) + ", " +
                            format_double(bin.hi) + (bin.closed_hi ? "]" : ")"));
    }
    return warp_affine(image, affine_for(bin.kind, magnitude));
}

}  // namespace sampleahead
