#include "sampleahead/gaussian_task.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "sampleahead/errors.hpp"

namespace sampleahead {

void GaussianTaskSpec::validate() const {
    if (classes < 2) throw ContractError("gaussian task needs at least 2 classes");
    if (sectors < 1) throw ContractError("gaussian task needs at least 1 sector");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ContractError("gaussian radius must be positive");
    if (sector_noise.size() != sectors) {
        throw ContractError("sector_noise has " + std::to_string(sector_noise.size()) +
                            " entries, expected " + std::to_string(sectors));
    }
    for (double s : sector_noise) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw ContractError("sector noise scales must be finite and >= 0");
    }
}

BucketPartition gaussian_partition(const GaussianTaskSpec& spec) {
    std::vector<AxisSpec> axes;
    axes.push_back(AxisSpec::categorical("class", spec.classes));
    axes.push_back(AxisSpec::uniform_bins("angle", 0.0, 2.0 * std::numbers::pi, spec.sectors));
    return BucketPartition(ParameterSpace(std::move(axes)));
}

GaussianGenerator::GaussianGenerator(GaussianTaskSpec spec)
    : spec_((spec.validate(), std::move(spec))), partition_(gaussian_partition(spec_)) {
    std::vector<std::size_t> ring(spec_.classes);
    std::iota(ring.begin(), ring.end(), std::size_t{0});
    // Fisher-Yates with the frozen geometry seed; seed 0 keeps the identity.
    if (spec_.geometry_seed != 0) {
        Rng rng(spec_.geometry_seed);
        for (std::size_t i = ring.size(); i > 1; --i) std::swap(ring[i - 1], ring[rng.index(i)]);
    }
    ring_radius_.resize(spec_.classes);
    for (std::size_t c = 0; c < spec_.classes; ++c) {
        ring_radius_[c] = spec_.radius * static_cast<double>(1 + ring[c]);
    }
}

std::size_t GaussianGenerator::sector_of(double angle) const {
    return partition_.space().axes()[1].bin_of(angle);
}

std::array<double, 2> GaussianGenerator::class_mean(std::size_t c, double angle) const {
    const double r = ring_radius_.at(c);
    return {r * std::cos(angle), r * std::sin(angle)};
}

Datum GaussianGenerator::generate(const ParamPoint& point, Rng& rng) const {
    const BucketId bucket = partition_.bucket_of(point);
    const auto c = static_cast<std::size_t>(point.coords[0]);
    const double angle = point.coords[1];
    const double sigma = spec_.sector_noise[sector_of(angle)];
    const auto mean = class_mean(c, angle);
    Datum d;
    d.features = {mean[0] + sigma * rng.normal(), mean[1] + sigma * rng.normal()};
    d.label = c;
    d.provenance = Provenance{point, bucket};
    return d;
}

}  // namespace sampleahead
