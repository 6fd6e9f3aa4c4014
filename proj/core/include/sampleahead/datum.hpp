#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sampleahead/space.hpp"

namespace sampleahead {

/// Where a synthesized datum came from.
struct Provenance {
    ParamPoint point;
    BucketId bucket = 0;
};

/// One labelled input. Real (non-synthesized) data carries no provenance.
struct Datum {
    std::vector<double> features;
    std::size_t label = 0;
    std::optional<Provenance> provenance;
};

using Dataset = std::vector<Datum>;

}  // namespace sampleahead
