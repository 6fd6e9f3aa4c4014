#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sampleahead/rng.hpp"

namespace sampleahead {

using BucketId = std::size_t;

/// One axis of the parameter space: either a set of categories (each its own
/// bin) or a closed real interval cut into bins at strictly increasing edges.
///
/// Continuous bins are half-open [e_i, e_{i+1}) except the last, which is
/// closed at the upper bound, so every value in [lo, hi] has exactly one bin.
class AxisSpec {
public:
    struct Categorical {
        std::size_t n_values;
    };
    struct Continuous {
        std::vector<double> edges;
    };

    static AxisSpec categorical(std::string name, std::size_t n_values);
    /// `edges` must be strictly increasing with at least two entries; the
    /// first and last edge are the axis bounds.
    static AxisSpec continuous(std::string name, std::vector<double> edges);
    static AxisSpec uniform_bins(std::string name, double lo, double hi, std::size_t n_bins);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool is_categorical() const noexcept;
    [[nodiscard]] std::size_t bin_count() const noexcept;

    /// Lower and upper axis bound. For categorical axes: [0, n_values - 1].
    [[nodiscard]] double lo() const noexcept;
    [[nodiscard]] double hi() const noexcept;
    [[nodiscard]] std::span<const double> edges() const;

    /// Bin containing `value`; throws DomainError outside the axis.
    [[nodiscard]] std::size_t bin_of(double value) const;

    /// Share of the axis covered by bin `i` (width ratio, or 1/n_values).
    [[nodiscard]] double bin_fraction(std::size_t i) const;

    /// Draw uniformly within bin `i`. Categorical axes return the category.
    [[nodiscard]] double uniform_in_bin(std::size_t i, Rng& rng) const;

    friend bool operator==(const AxisSpec& a, const AxisSpec& b);

private:
    AxisSpec(std::string name, std::variant<Categorical, Continuous> kind)
        : name_(std::move(name)), kind_(std::move(kind)) {}

    std::string name_;
    std::variant<Categorical, Continuous> kind_;
};

/// Uniform draw on [lo, hi). When the interval is half-open and rounding
/// lands on `hi`, the result is pulled back to the largest double below it.
/// A zero-width interval returns `lo` exactly.
[[nodiscard]] double uniform_in_interval(double lo, double hi, bool closed_hi, Rng& rng) noexcept;

class ParameterSpace {
public:
    explicit ParameterSpace(std::vector<AxisSpec> axes);

    [[nodiscard]] std::span<const AxisSpec> axes() const noexcept { return axes_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return axes_.size(); }

    friend bool operator==(const ParameterSpace&, const ParameterSpace&) = default;

private:
    std::vector<AxisSpec> axes_;
};

/// A point U of the parameter space; one coordinate per axis. Categorical
/// coordinates hold the category index.
struct ParamPoint {
    std::vector<double> coords;

    friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

/// The finite disjoint cover {B_k} induced by the per-axis bins. Flat ids
/// are the row-major flattening of the per-axis bin tuple (last axis fastest).
class BucketPartition {
public:
    explicit BucketPartition(ParameterSpace space);

    [[nodiscard]] const ParameterSpace& space() const noexcept { return space_; }
    [[nodiscard]] std::size_t bucket_count() const noexcept { return bucket_count_; }

    [[nodiscard]] BucketId bucket_of(const ParamPoint& point) const;

    [[nodiscard]] std::vector<std::size_t> bins_of(BucketId k) const;
    [[nodiscard]] BucketId flat_id(std::span<const std::size_t> bins) const;

    friend bool operator==(const BucketPartition& a, const BucketPartition& b) {
        return a.space_ == b.space_;
    }

private:
    ParameterSpace space_;
    std::vector<std::size_t> strides_;
    std::size_t bucket_count_ = 1;
};

[[nodiscard]] ParamPoint uniform_in_bucket(const BucketPartition& partition, BucketId k, Rng& rng);

/// P^(0): probability that a uniform draw over the space lands in each bucket.
[[nodiscard]] std::vector<double> volume_prior(const BucketPartition& partition);

/// Text form of a partition, e.g. `class:categorical(10);angle:continuous(0,1.5,3)`.
[[nodiscard]] std::string to_descriptor(const BucketPartition& partition);
[[nodiscard]] BucketPartition parse_descriptor(std::string_view text);

/// Shortest round-trip decimal form of a double, independent of locale.
[[nodiscard]] std::string format_double(double value);

}  // namespace sampleahead
