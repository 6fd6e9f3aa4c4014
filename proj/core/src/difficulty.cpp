#include "sampleahead/difficulty.hpp"

#include <algorithm>
#include <cmath>

#include "sampleahead/errors.hpp"

namespace sampleahead {

ProbeSet::ProbeSet(std::vector<Probe> probes, std::size_t bucket_count)
    : probes_(std::move(probes)), by_bucket_(bucket_count) {
    if (probes_.empty()) throw ContractError("probe set must not be empty");
    for (std::size_t m = 0; m < probes_.size(); ++m) {
        const BucketId k = probes_[m].bucket;
        if (k >= bucket_count) throw IndexError("probe bucket " + std::to_string(k) + " out of range");
        by_bucket_[k].push_back(m);
    }
}

DifficultyField DifficultyField::constant(std::size_t bucket_count, double value) {
    return DifficultyField{std::vector<double>(bucket_count, value), std::vector<std::size_t>(bucket_count, 0), 0};
}

ProbeSet build_probe_set(const Generator& generator, std::size_t per_bucket, Rng& point_rng, Rng& generator_rng) {
    if (per_bucket == 0) throw ContractError("probes_per_bucket must be positive");
    const BucketPartition& partition = generator.partition();
    const std::size_t k_total = partition.bucket_count();
    std::vector<Probe> probes;
    probes.reserve(k_total * per_bucket);
    for (BucketId k = 0; k < k_total; ++k) {
        for (std::size_t i = 0; i < per_bucket; ++i) {
            Probe probe;
            probe.point = uniform_in_bucket(partition, k, point_rng);
            probe.bucket = k;
            try {
                probe.datum = generator.generate(probe.point, generator_rng);
            } catch (const Error& e) {
                throw DataError("probe generation failed in bucket " + std::to_string(k) + ": " + e.what());
            }
            probes.push_back(std::move(probe));
        }
    }
    return ProbeSet(std::move(probes), k_total);
}

ProbeResult probe_difficulties(const ProbeSet& probes, const Classifier& clf, ProbeMode mode, std::size_t epoch) {
    ProbeResult result;
    result.epoch = epoch;
    result.difficulty.resize(probes.size());
    for (std::size_t m = 0; m < probes.size(); ++m) {
        const Datum& d = probes[m].datum;
        const auto p = clf.forward(d.features);
        if (d.label >= p.size()) throw ContractError("probe label exceeds classifier classes");
        if (mode == ProbeMode::hard) {
            std::size_t arg = 0;
            for (std::size_t c = 1; c < p.size(); ++c) {
                if (p[c] > p[arg]) arg = c;
            }
            result.difficulty[m] = arg == d.label ? 0.0 : 1.0;
        } else {
            result.difficulty[m] = std::clamp(1.0 - p[d.label], 0.0, 1.0);
        }
    }
    return result;
}

double kernel_difficulty(const BucketPartition& partition, const ParamPoint& point, const ProbeResult& result,
                         const ProbeSet& probes, const KernelWeight& weight) {
    if (result.difficulty.size() != probes.size()) throw ContractError("probe result and probe set differ in size");
    if (std::holds_alternative<BucketIndicatorKernel>(weight)) {
        const BucketId k = partition.bucket_of(point);
        const auto members = probes.in_bucket(k);
        if (members.empty()) throw EmptyBucketError(k);
        double sum = 0.0;
        for (std::size_t m : members) sum += result.difficulty[m];
        return sum / static_cast<double>(members.size());
    }

    const double eps = std::get<InverseDistanceKernel>(weight).epsilon;
    if (!(eps > 0.0)) throw ContractError("inverse-distance epsilon must be positive");
    const auto axes = partition.space().axes();
    if (point.coords.size() != axes.size()) throw ContractError("point arity does not match the space");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = 0; m < probes.size(); ++m) {
        const auto& v = probes[m].point.coords;
        double sq = 0.0;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            if (axes[i].is_categorical()) {
                sq += point.coords[i] == v[i] ? 0.0 : 1.0;
            } else {
                const double diff = point.coords[i] - v[i];
                sq += diff * diff;
            }
        }
        const double w = 1.0 / (std::sqrt(sq) + eps);
        num += result.difficulty[m] * w;
        den += w;
    }
    if (!(den > 0.0)) throw EmptyBucketError(partition.bucket_of(point));
    return num / den;
}

DifficultyField bucket_difficulties(const ProbeResult& result, const ProbeSet& probes,
                                    const DifficultyField& fallback) {
    if (result.difficulty.size() != probes.size()) throw ContractError("probe result and probe set differ in size");
    if (fallback.values.size() != probes.bucket_count()) {
        throw ContractError("fallback field has the wrong bucket count");
    }
    DifficultyField field;
    field.epoch = result.epoch;
    field.values.resize(probes.bucket_count());
    field.counts.resize(probes.bucket_count());
    for (BucketId k = 0; k < probes.bucket_count(); ++k) {
        const auto members = probes.in_bucket(k);
        field.counts[k] = members.size();
        if (members.empty()) {
            field.values[k] = fallback.values[k];
            continue;
        }
        double sum = 0.0;
        for (std::size_t m : members) sum += result.difficulty[m];
        field.values[k] = sum / static_cast<double>(members.size());
    }
    return field;
}

double mean_difficulty(const ProbeResult& result) {
    if (result.difficulty.empty()) return std::nan("");
    double sum = 0.0;
    for (double d : result.difficulty) sum += d;
    return sum / static_cast<double>(result.difficulty.size());
}

}  // namespace sampleahead
