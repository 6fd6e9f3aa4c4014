#include "sampleahead/mnist_task.hpp"

#include <cmath>

#include "sampleahead/errors.hpp"

namespace sampleahead {

BucketPartition mnist_partition() {
    std::vector<AxisSpec> axes;
    axes.push_back(AxisSpec::categorical("class", kMnistClasses));
    axes.push_back(AxisSpec::categorical("bin", kAugmentationBinCount));
    axes.push_back(AxisSpec::continuous("magnitude", {0.0, 1.0}));
    axes.push_back(AxisSpec::continuous("source", {0.0, 1.0}));
    return BucketPartition(ParameterSpace(std::move(axes)));
}

MnistGenerator::MnistGenerator(std::shared_ptr<const ImagePool> pool, AugmentationRanges ranges)
    : pool_(std::move(pool)), ranges_(ranges), bins_(augmentation_bins(ranges)), partition_(mnist_partition()) {
    if (!pool_ || pool_->size() == 0) throw DataError("image pool is empty");
    ranges_.validate();
}

double MnistGenerator::magnitude(std::size_t b, double fraction) const {
    const AugmentationBin& bin = bins_.at(b);
    double m = bin.lo + fraction * (bin.hi - bin.lo);
    if (m > bin.hi) m = bin.hi;
    if (!bin.closed_hi && m >= bin.hi) m = std::nextafter(bin.hi, bin.lo);
    return m;
}

Datum MnistGenerator::generate(const ParamPoint& point, Rng& /*rng*/) const {
    const BucketId bucket = partition_.bucket_of(point);
    const auto c = static_cast<std::size_t>(point.coords[0]);
    const auto b = static_cast<std::size_t>(point.coords[1]);
    const auto sources = pool_->of_class(c);
    if (sources.empty()) throw DataError("class " + std::to_string(c) + " absent from image pool");
    auto pick = static_cast<std::size_t>(point.coords[3] * static_cast<double>(sources.size()));
    if (pick >= sources.size()) pick = sources.size() - 1;

    const Image augmented = affine_augment(pool_->image(sources[pick]), bins_[b], magnitude(b, point.coords[2]));
    Datum d = image_datum(augmented, c);
    d.provenance = Provenance{point, bucket};
    return d;
}

MnistFiles MnistFiles::in(const std::filesystem::path& dir) {
    return {dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", dir / "t10k-images-idx3-ubyte",
            dir / "t10k-labels-idx1-ubyte"};
}

Datum image_datum(const Image& image, std::size_t label) {
    Datum d;
    d.features = image.pixels;
    d.label = label;
    return d;
}

}  // namespace sampleahead
