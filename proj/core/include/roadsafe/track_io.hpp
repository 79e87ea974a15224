#pragma once

#include <iosfwd>
#include <span>

#include "roadsafe/tracker.hpp"

namespace roadsafe {

// One line per associated detection, ordered by track id then frame:
//   track_id class frame x y w h confidence
void emit_track_log(std::ostream& out, std::span<const Track> tracks);

// One line per track: track_id first_frame last_frame hits status
void emit_track_summary(std::ostream& out, std::span<const Track> tracks);

}  // namespace roadsafe
