#include "roadsafe/fusion.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "roadsafe/error.hpp"
#include "roadsafe/geometry.hpp"

namespace roadsafe {
namespace {

bool is_non_violation(const std::string& label) { return label == "normal" || label == "helmet"; }

std::optional<std::string> attribute_of(const DetectionRecord& d) {
  switch (d.cls) {
    case ObjectClass::TrafficSign:
      if (d.attrs.sign_state) return std::string(to_string(*d.attrs.sign_state));
      break;
    case ObjectClass::Rider:
      if (d.attrs.helmet_state) return std::string(to_string(*d.attrs.helmet_state));
      break;
    default:
      break;
  }
  return std::nullopt;
}

// Candidate test for one frame: enough horizontal overlap, and the rider's
// bottom edge between slightly above the motorcycle top and its bottom.
bool rides_on(const BoundingBox& rider, const BoundingBox& moto, const FusionConfig& cfg) {
  const double overlap = horizontal_overlap(rider, moto);
  if (overlap <= 0 || overlap < cfg.rider_overlap_ratio * std::min(rider.w, moto.w)) return false;
  const double bottom = rider.bottom();
  return bottom >= moto.y - cfg.rider_vertical_tolerance * moto.h && bottom <= moto.bottom();
}

const DetectionRecord* at_frame(const Track& t, FrameIndex f) {
  auto it = std::lower_bound(t.history.begin(), t.history.end(), f,
                             [](const DetectionRecord& d, FrameIndex frame) { return d.frame < frame; });
  if (it == t.history.end() || it->frame != f) return nullptr;
  return &*it;
}

int shared_frames(const Track& a, const Track& b) {
  int n = 0;
  auto i = a.history.begin();
  auto j = b.history.begin();
  while (i != a.history.end() && j != b.history.end()) {
    if (i->frame < j->frame) {
      ++i;
    } else if (j->frame < i->frame) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

void FusionConfig::validate() const {
  if (min_track_frames < 1) throw InvalidArgument("min_track_frames must be at least 1");
  if (!(rider_overlap_ratio >= 0 && rider_overlap_ratio <= 1)) throw InvalidArgument("rider_overlap_ratio must lie in [0,1]");
  if (!(rider_vertical_tolerance >= 0)) throw InvalidArgument("rider_vertical_tolerance must be non-negative");
  if (min_shared_frames < 1) throw InvalidArgument("min_shared_frames must be at least 1");
  if (min_plate_support < 1) throw InvalidArgument("min_plate_support must be at least 1");
}

std::string majority_vote(const std::map<std::string, int>& counts) {
  const std::string* best = nullptr;
  int best_count = 0;
  for (const auto& [label, count] : counts) {  // ascending label order
    if (count <= 0) continue;
    if (best == nullptr || count > best_count ||
        (count == best_count && is_non_violation(label) && !is_non_violation(*best))) {
      best = &label;
      best_count = count;
    }
  }
  if (best == nullptr) throw InvalidArgument("majority vote over an empty multiset");
  return *best;
}

std::string majority_vote(std::span<const std::string> labels) {
  std::map<std::string, int> counts;
  for (const auto& l : labels) ++counts[l];
  return majority_vote(counts);
}

std::vector<Track> filter_short_tracks(std::span<const Track> tracks, int min_frames) {
  std::vector<Track> out;
  for (const auto& t : tracks) {
    if (t.span() >= min_frames) out.push_back(t);
  }
  return out;
}

FusedTrack fuse_track(Track track) {
  FusedTrack f;
  for (const auto& d : track.history) {
    if (auto a = attribute_of(d)) {
      ++f.vote_counts[*a];
      ++f.support;
    }
  }
  if (f.support > 0) f.fused_attr = majority_vote(f.vote_counts);
  f.track = std::move(track);
  return f;
}

std::optional<std::string> fuse_plate(std::span<const std::string> plates, int min_support) {
  if (plates.empty()) return std::nullopt;
  std::map<std::string, int> counts;
  for (const auto& p : plates) ++counts[p];
  const std::string winner = majority_vote(counts);
  if (counts[winner] < min_support) return std::nullopt;
  return winner;
}

std::vector<RiderGroup> associate_riders(std::span<const FusedTrack> riders, std::span<const FusedTrack> motorcycles,
                                         const FusionConfig& config) {
  constexpr TrackId kNone = -1;
  std::map<TrackId, std::vector<const FusedTrack*>> riders_of;

  for (const auto& rider : riders) {
    std::vector<const FusedTrack*> eligible;
    for (const auto& moto : motorcycles) {
      if (shared_frames(rider.track, moto.track) >= config.min_shared_frames) eligible.push_back(&moto);
    }
    if (eligible.empty()) continue;

    std::map<TrackId, int> votes;
    for (const auto& rd : rider.track.history) {
      bool present = false;
      TrackId best = kNone;
      double best_overlap = 0;
      for (const auto* moto : eligible) {
        const DetectionRecord* md = at_frame(moto->track, rd.frame);
        if (md == nullptr) continue;
        present = true;
        if (!rides_on(rd.box, md->box, config)) continue;
        const double overlap = horizontal_overlap(rd.box, md->box);
        if (best == kNone || overlap > best_overlap || (overlap == best_overlap && moto->track.id < best)) {
          best = moto->track.id;
          best_overlap = overlap;
        }
      }
      if (present) ++votes[best];
    }

    TrackId winner = kNone;
    int winner_votes = 0;
    for (const auto& [id, n] : votes) {  // kNone sorts first and wins ties
      if (n > winner_votes) {
        winner = id;
        winner_votes = n;
      }
    }
    if (winner != kNone) riders_of[winner].push_back(&rider);
  }

  std::vector<RiderGroup> groups;
  std::vector<const FusedTrack*> motos;
  for (const auto& m : motorcycles) motos.push_back(&m);
  std::sort(motos.begin(), motos.end(), [](auto* a, auto* b) { return a->track.id < b->track.id; });

  for (const auto* moto : motos) {
    auto it = riders_of.find(moto->track.id);
    if (it == riders_of.end()) continue;
    RiderGroup g;
    g.group_id = static_cast<std::int64_t>(groups.size());
    g.motorcycle = *moto;
    g.first_frame = moto->track.first_frame;
    g.last_frame = moto->track.last_frame;
    std::vector<std::string> plates;
    auto collect_plates = [&plates](const Track& t) {
      for (const auto& d : t.history) {
        if (d.attrs.plate_text) plates.push_back(*d.attrs.plate_text);
      }
    };
    collect_plates(moto->track);
    std::set<FrameIndex> evidence;
    auto sorted_riders = it->second;
    std::sort(sorted_riders.begin(), sorted_riders.end(), [](auto* a, auto* b) { return a->track.id < b->track.id; });
    for (const auto* r : sorted_riders) {
      g.riders.push_back(*r);
      g.first_frame = std::min(g.first_frame, r->track.first_frame);
      g.last_frame = std::max(g.last_frame, r->track.last_frame);
      collect_plates(r->track);
      if (r->fused_attr == "no_helmet") {
        ++g.no_helmet_riders;
        for (const auto& d : r->track.history) {
          if (d.attrs.helmet_state == HelmetState::NoHelmet) evidence.insert(d.frame);
        }
      }
    }
    g.violation = g.no_helmet_riders > 0;
    g.plate_text = fuse_plate(plates, config.min_plate_support);
    g.evidence_frames.assign(evidence.begin(), evidence.end());
    groups.push_back(std::move(g));
  }
  return groups;
}

void emit_violations(std::ostream& out, std::string_view sequence_id, std::span<const RiderGroup> groups) {
  for (const auto& g : groups) {
    if (!g.violation) continue;
    out << g.group_id << ' ' << sequence_id << ' ' << g.first_frame << '-' << g.last_frame << ' '
        << (g.plate_text ? *g.plate_text : std::string("NONE")) << ' ' << g.riders.size() << ' '
        << g.no_helmet_riders << ' ';
    if (g.evidence_frames.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < g.evidence_frames.size(); ++i) {
        if (i) out << ',';
        out << g.evidence_frames[i];
      }
    }
    out << '\n';
  }
}

}  // namespace roadsafe
