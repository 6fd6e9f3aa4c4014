#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sampleahead/generator.hpp"

namespace sampleahead {

/// Desk-scale synthetic task with a controllable difficulty landscape.
///
/// Class c lives on a ring of radius `radius * (1 + ring(c))`, where ring()
/// is a permutation frozen by `geometry_seed`. A point (c, phi) places the
/// class mean on its ring at angle phi and adds isotropic Gaussian noise whose
/// scale depends on the angular sector containing phi. Noisy sectors overlap
/// neighbouring rings and therefore carry a higher Bayes error.
struct GaussianTaskSpec {
    std::size_t classes = 3;
    std::size_t sectors = 8;
    double radius = 1.0;
    /// Noise scale per sector; length must equal `sectors`.
    std::vector<double> sector_noise = {0.15, 0.15, 0.15, 1.0, 0.15, 0.15, 0.15, 0.15};
    std::uint64_t geometry_seed = 0;

    void validate() const;

    friend bool operator==(const GaussianTaskSpec&, const GaussianTaskSpec&) = default;
};

/// (class, angle) axes with one angular bin per sector.
[[nodiscard]] BucketPartition gaussian_partition(const GaussianTaskSpec& spec);

class GaussianGenerator final : public Generator {
public:
    explicit GaussianGenerator(GaussianTaskSpec spec);

    [[nodiscard]] const BucketPartition& partition() const noexcept override { return partition_; }
    [[nodiscard]] std::size_t feature_dim() const noexcept override { return 2; }
    [[nodiscard]] std::size_t class_count() const noexcept override { return spec_.classes; }

    /// Point coordinates: (class index, angle in [0, 2*pi]).
    [[nodiscard]] Datum generate(const ParamPoint& point, Rng& rng) const override;

    [[nodiscard]] const GaussianTaskSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::array<double, 2> class_mean(std::size_t c, double angle) const;
    [[nodiscard]] double ring_radius(std::size_t c) const { return ring_radius_.at(c); }
    [[nodiscard]] std::size_t sector_of(double angle) const;
    [[nodiscard]] double noise_scale(std::size_t sector) const { return spec_.sector_noise.at(sector); }

private:
    GaussianTaskSpec spec_;
    BucketPartition partition_;
    std::vector<double> ring_radius_;
};

}  // namespace sampleahead
