#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ssikit {

// Per-block severity index; parallel arrays keyed by position.
struct SsiVector {
    std::vector<std::string> block_ids;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

}  // namespace ssikit
