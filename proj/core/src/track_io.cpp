#include "roadsafe/track_io.hpp"

#include <ostream>

namespace roadsafe {

void emit_track_log(std::ostream& out, std::span<const Track> tracks) {
  for (const auto& t : tracks) {
    for (const auto& d : t.history) {
      out << t.id << ' ' << to_string(t.cls) << ' ' << d.frame << ' ' << format_double(d.box.x) << ' '
          << format_double(d.box.y) << ' ' << format_double(d.box.w) << ' ' << format_double(d.box.h) << ' '
          << format_double(d.confidence) << '\n';
    }
  }
}

void emit_track_summary(std::ostream& out, std::span<const Track> tracks) {
  for (const auto& t : tracks) {
    out << t.id << ' ' << t.first_frame << ' ' << t.last_frame << ' ' << t.hits << ' ' << to_string(t.status)
        << '\n';
  }
}

}  // namespace roadsafe
