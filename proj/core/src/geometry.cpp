#include "roadsafe/geometry.hpp"

#include <algorithm>

namespace roadsafe {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return 0.0;
  // Areas from edge differences so that identical boxes give exactly 1.
  const double area_a = (a.right() - a.x) * (a.bottom() - a.y);
  const double area_b = (b.right() - b.x) * (b.bottom() - b.y);
  const double inter = iw * ih;
  const double uni = area_a + area_b - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double horizontal_overlap(const BoundingBox& a, const BoundingBox& b) {
  return std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
}

}  // namespace roadsafe
