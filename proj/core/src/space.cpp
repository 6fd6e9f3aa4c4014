#include "sampleahead/space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "sampleahead/errors.hpp"

namespace sampleahead {

AxisSpec AxisSpec::categorical(std::string name, std::size_t n_values) {
    if (n_values == 0) {
        throw ContractError("categorical axis '" + name + "' needs at least one value");
    }
    return AxisSpec(std::move(name), Categorical{n_values});
}

AxisSpec AxisSpec::continuous(std::string name, std::vector<double> edges) {
    if (edges.size() < 2) {
        throw ContractError("continuous axis '" + name + "' needs at least two edges");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!std::isfinite(edges[i])) {
            throw ContractError("continuous axis '" + name + "' has a non-finite edge");
        }
        if (i > 0 && !(edges[i] > edges[i - 1])) {
            throw ContractError("continuous axis '" + name + "' edges must be strictly increasing");
        }
    }
    return AxisSpec(std::move(name), Continuous{std::move(edges)});
}

AxisSpec AxisSpec::uniform_bins(std::string name, double lo, double hi, std::size_t n_bins) {
    if (n_bins == 0) throw ContractError("axis '" + name + "' needs at least one bin");
    std::vector<double> edges(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i) {
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
    }
    edges.back() = hi;
    return continuous(std::move(name), std::move(edges));
}

bool AxisSpec::is_categorical() const noexcept {
    return std::holds_alternative<Categorical>(kind_);
}

std::size_t AxisSpec::bin_count() const noexcept {
    if (const auto* c = std::get_if<Categorical>(&kind_)) return c->n_values;
    return std::get<Continuous>(kind_).edges.size() - 1;
}

double AxisSpec::lo() const noexcept {
    if (is_categorical()) return 0.0;
    return std::get<Continuous>(kind_).edges.front();
}

double AxisSpec::hi() const noexcept {
    if (const auto* c = std::get_if<Categorical>(&kind_)) return static_cast<double>(c->n_values - 1);
    return std::get<Continuous>(kind_).edges.back();
}

std::span<const double> AxisSpec::edges() const {
    if (is_categorical()) return {};
    return std::get<Continuous>(kind_).edges;
}

std::size_t AxisSpec::bin_of(double value) const {
    if (const auto* c = std::get_if<Categorical>(&kind_)) {
        if (!(value >= 0.0) || value != std::floor(value) ||
            value >= static_cast<double>(c->n_values)) {
            throw DomainError(name_, "category " + format_double(value) + " outside [0, " +
                                         std::to_string(c->n_values) + ")");
        }
        return static_cast<std::size_t>(value);
    }
    const auto& edges = std::get<Continuous>(kind_).edges;
    if (!(value >= edges.front() && value <= edges.back())) {
        throw DomainError(name_, "value " + format_double(value) + " outside [" +
                                     format_double(edges.front()) + ", " +
                                     format_double(edges.back()) + "]");
    }
    if (value == edges.back()) return edges.size() - 2;
    // first edge strictly greater than value closes the containing bin
    const auto it = std::upper_bound(edges.begin(), edges.end(), value);
    return static_cast<std::size_t>(it - edges.begin()) - 1;
}

double AxisSpec::bin_fraction(std::size_t i) const {
    if (i >= bin_count()) throw IndexError("bin " + std::to_string(i) + " out of range on axis '" + name_ + "'");
    if (const auto* c = std::get_if<Categorical>(&kind_)) return 1.0 / static_cast<double>(c->n_values);
    const auto& edges = std::get<Continuous>(kind_).edges;
    return (edges[i + 1] - edges[i]) / (edges.back() - edges.front());
}

double AxisSpec::uniform_in_bin(std::size_t i, Rng& rng) const {
    if (i >= bin_count()) throw IndexError("bin " + std::to_string(i) + " out of range on axis '" + name_ + "'");
    if (is_categorical()) return static_cast<double>(i);
    const auto& edges = std::get<Continuous>(kind_).edges;
    return uniform_in_interval(edges[i], edges[i + 1], i + 2 == edges.size(), rng);
}

bool operator==(const AxisSpec& a, const AxisSpec& b) {
    if (a.name_ != b.name_ || a.is_categorical() != b.is_categorical()) return false;
    if (a.is_categorical()) return a.bin_count() == b.bin_count();
    return std::get<AxisSpec::Continuous>(a.kind_).edges == std::get<AxisSpec::Continuous>(b.kind_).edges;
}

double uniform_in_interval(double lo, double hi, bool closed_hi, Rng& rng) noexcept {
    if (lo == hi) return lo;
    double x = lo + (hi - lo) * rng.uniform01();
    if (x > hi) x = hi;
    if (!closed_hi && x >= hi) x = std::nextafter(hi, lo);
    return x;
}

ParameterSpace::ParameterSpace(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw ContractError("parameter space needs at least one axis");
}

BucketPartition::BucketPartition(ParameterSpace space) : space_(std::move(space)) {
    const auto axes = space_.axes();
    strides_.assign(axes.size(), 1);
    for (std::size_t i = axes.size(); i-- > 0;) {
        strides_[i] = bucket_count_;
        const std::size_t bins = axes[i].bin_count();
        if (bucket_count_ > std::numeric_limits<std::size_t>::max() / bins) {
            throw ContractError("bucket count overflows");
        }
        bucket_count_ *= bins;
    }
}

BucketId BucketPartition::bucket_of(const ParamPoint& point) const {
    const auto axes = space_.axes();
    if (point.coords.size() != axes.size()) {
        throw ContractError("point has " + std::to_string(point.coords.size()) +
                            " coordinates, space has " + std::to_string(axes.size()) + " axes");
    }
    BucketId k = 0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        k += axes[i].bin_of(point.coords[i]) * strides_[i];
    }
    return k;
}

std::vector<std::size_t> BucketPartition::bins_of(BucketId k) const {
    if (k >= bucket_count_) {
        throw IndexError("bucket " + std::to_string(k) + " out of range [0, " +
                         std::to_string(bucket_count_) + ")");
    }
    std::vector<std::size_t> bins(strides_.size());
    for (std::size_t i = 0; i < strides_.size(); ++i) {
        bins[i] = k / strides_[i];
        k %= strides_[i];
    }
    return bins;
}

BucketId BucketPartition::flat_id(std::span<const std::size_t> bins) const {
    const auto axes = space_.axes();
    if (bins.size() != axes.size()) throw ContractError("bin tuple arity does not match the space");
    BucketId k = 0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (bins[i] >= axes[i].bin_count()) {
            throw IndexError("bin " + std::to_string(bins[i]) + " out of range on axis '" +
                             axes[i].name() + "'");
        }
        k += bins[i] * strides_[i];
    }
    return k;
}

ParamPoint uniform_in_bucket(const BucketPartition& partition, BucketId k, Rng& rng) {
    const auto bins = partition.bins_of(k);
    const auto axes = partition.space().axes();
    ParamPoint point;
    point.coords.resize(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
        point.coords[i] = axes[i].uniform_in_bin(bins[i], rng);
    }
    return point;
}

std::vector<double> volume_prior(const BucketPartition& partition) {
    std::vector<double> prior(partition.bucket_count());
    const auto axes = partition.space().axes();
    for (BucketId k = 0; k < prior.size(); ++k) {
        const auto bins = partition.bins_of(k);
        double p = 1.0;
        for (std::size_t i = 0; i < axes.size(); ++i) p *= axes[i].bin_fraction(bins[i]);
        prior[k] = p;
    }
    return prior;
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string to_descriptor(const BucketPartition& partition) {
    std::string out;
    for (const auto& axis : partition.space().axes()) {
        if (!out.empty()) out += ';';
        out += axis.name();
        if (axis.is_categorical()) {
            out += ":categorical(" + std::to_string(axis.bin_count()) + ")";
        } else {
            out += ":continuous(";
            bool first = true;
            for (double e : axis.edges()) {
                if (!first) out += ',';
                out += format_double(e);
                first = false;
            }
            out += ")";
        }
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s) {
    s = trim(s);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ContractError("bad number '" + std::string(s) + "' in partition descriptor");
    }
    return value;
}

}  // namespace

BucketPartition parse_descriptor(std::string_view text) {
    std::vector<AxisSpec> axes;
    while (!text.empty()) {
        const auto semi = text.find(';');
        const auto item = trim(text.substr(0, semi));
        text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);

        const auto colon = item.find(':');
        const auto open = item.find('(');
        if (colon == std::string_view::npos || open == std::string_view::npos || item.back() != ')' ||
            open < colon) {
            throw ContractError("malformed axis '" + std::string(item) + "' in partition descriptor");
        }
        std::string name(trim(item.substr(0, colon)));
        const auto kind = trim(item.substr(colon + 1, open - colon - 1));
        auto args = item.substr(open + 1, item.size() - open - 2);
        if (kind == "categorical") {
            const double n = parse_number(args);
            if (n < 1 || n != std::floor(n)) throw ContractError("bad category count for axis '" + name + "'");
            axes.push_back(AxisSpec::categorical(std::move(name), static_cast<std::size_t>(n)));
        } else if (kind == "continuous") {
            std::vector<double> edges;
            while (!args.empty()) {
                const auto comma = args.find(',');
                edges.push_back(parse_number(args.substr(0, comma)));
                args = comma == std::string_view::npos ? std::string_view{} : args.substr(comma + 1);
            }
            axes.push_back(AxisSpec::continuous(std::move(name), std::move(edges)));
        } else {
            throw ContractError("unknown axis kind '" + std::string(kind) + "'");
        }
    }
    return BucketPartition(ParameterSpace(std::move(axes)));
}

}  // namespace sampleahead
