#pragma once

#include <cstddef>

#include "sampleahead/datum.hpp"
#include "sampleahead/rng.hpp"
#include "sampleahead/space.hpp"

namespace sampleahead {

/// X = g(U): turns a parameter point into a labelled datum.
///
/// Implementations are immutable after construction; `generate` is a pure
/// function of (point, rng state).
class Generator {
public:
    virtual ~Generator() = default;

    [[nodiscard]] virtual const BucketPartition& partition() const noexcept = 0;
    [[nodiscard]] virtual std::size_t feature_dim() const noexcept = 0;
    [[nodiscard]] virtual std::size_t class_count() const noexcept = 0;

    [[nodiscard]] virtual Datum generate(const ParamPoint& point, Rng& rng) const = 0;
};

}  // namespace sampleahead
