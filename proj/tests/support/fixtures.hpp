#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "sampleahead/generator.hpp"
#include "sampleahead/learner.hpp"
#include "sampleahead/metrics.hpp"
#include "sampleahead/rng.hpp"

namespace fixture {

using namespace sampleahead;

/// Features are the point coordinates; the label is the first coordinate's bin.
class CoordinateGenerator final : public Generator {
public:
    explicit CoordinateGenerator(BucketPartition p, std::size_t classes) : p_(std::move(p)), classes_(classes) {}
    const BucketPartition& partition() const noexcept override { return p_; }
    std::size_t feature_dim() const noexcept override { return p_.space().dimension(); }
    std::size_t class_count() const noexcept override { return classes_; }
    Datum generate(const ParamPoint& point, Rng&) const override {
        const auto k = p_.bucket_of(point);
        return Datum{point.coords, p_.bins_of(k).front() % classes_, Provenance{point, k}};
    }

private:
    BucketPartition p_;
    std::size_t classes_;
};

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("sampleahead-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Dataset random_batch(Rng& rng, std::size_t n, std::size_t inputs, std::size_t classes) {
    Dataset batch(n);
    for (auto& d : batch) {
        d.features.resize(inputs);
        for (auto& x : d.features) x = rng.uniform(-2.0, 2.0);
        d.label = rng.index(classes);
    }
    return batch;
}

/// Xavier initialization plus a uniform jitter so no parameter sits at a special value.
inline Classifier perturbed(const Architecture& arch, Rng& rng) {
    auto clf = Classifier::initialize(arch, rng.bits());
    for (auto& t : clf.parameters()) t += rng.uniform(-0.3, 0.3);
    return clf;
}

inline RotationMatrix random_rotation(Rng& rng) {
    return rotation_from_angles(rng.uniform(-180, 180), rng.uniform(-90, 90), rng.uniform(-180, 180));
}

}  // namespace fixture
