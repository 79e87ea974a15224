#pragma once

#include "roadsafe/types.hpp"

namespace roadsafe {

// Intersection over union; 0 for disjoint or degenerate boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

// Width of the overlap of the two boxes' x-extents (0 when disjoint).
double horizontal_overlap(const BoundingBox& a, const BoundingBox& b);

}  // namespace roadsafe
