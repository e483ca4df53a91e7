#pragma once

#include <cstdint>
#include <vector>

#include "maskagent/mask.hpp"

namespace maskagent {

// Squared Euclidean distances (pixel^2) from each in-region pixel to the
// nearest out-of-region pixel; positions outside the raster count as
// out-of-region. Zero everywhere outside the region.
struct DistanceField {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> values;

    std::int32_t at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    bool operator==(const DistanceField&) const = default;
};

// Exact separable transform (lower envelope of parabolas per row after an
// exact column pass). Columns and rows are distributed over OpenMP threads
// once the raster is large enough to amortize the team start-up.
DistanceField edt_sq(const BitMask& region);

// Same algorithm on one thread. Kept as the reference for the parallel path.
DistanceField edt_sq_serial(const BitMask& region);

struct FieldMax {
    Pixel at;
    std::int32_t value = 0;
};

// First maximum in row-major order.
FieldMax argmax_point(const DistanceField& field);

}  // namespace maskagent
