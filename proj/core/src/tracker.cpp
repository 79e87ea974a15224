#include "roadsafe/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "roadsafe/error.hpp"
#include "roadsafe/geometry.hpp"
#include "roadsafe/hungarian.hpp"

namespace roadsafe {

std::string_view to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::Tentative: return "tentative";
    case TrackStatus::Confirmed: return "confirmed";
    case TrackStatus::Dead: return "dead";
  }
  return "unknown";
}

void TrackerConfig::validate() const {
  if (!(iou_threshold > 0 && iou_threshold < 1)) throw InvalidArgument("iou_threshold must lie in (0,1)");
  if (min_hits < 1) throw InvalidArgument("min_hits must be at least 1");
  if (max_age < 1) throw InvalidArgument("max_age must be at least 1");
  if (!(kalman.process_noise_scale > 0) || !(kalman.measurement_noise_scale > 0)) {
    throw InvalidArgument("noise scales must be positive");
  }
}

Association associate(std::span<const BoundingBox> tracks, std::span<const BoundingBox> detections,
                      double iou_threshold) {
  Association out;
  if (tracks.empty() || detections.empty()) {
    for (std::size_t i = 0; i < tracks.size(); ++i) out.unmatched_tracks.push_back(i);
    for (std::size_t j = 0; j < detections.size(); ++j) out.unmatched_detections.push_back(j);
    return out;
  }

  CostMatrix cost(static_cast<Eigen::Index>(tracks.size()), static_cast<Eigen::Index>(detections.size()));
  CostMatrix overlap(cost.rows(), cost.cols());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = 0; j < detections.size(); ++j) {
      const double o = iou(tracks[i], detections[j]);
      overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = o;
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0 - o;
    }
  }

  std::vector<char> track_used(tracks.size(), 0);
  std::vector<char> det_used(detections.size(), 0);
  for (const auto& [i, j] : hungarian(cost)) {
    if (overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < iou_threshold) continue;
    out.matches.emplace_back(i, j);
    track_used[i] = 1;
    det_used[j] = 1;
  }
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (!track_used[i]) out.unmatched_tracks.push_back(i);
  }
  for (std::size_t j = 0; j < detections.size(); ++j) {
    if (!det_used[j]) out.unmatched_detections.push_back(j);
  }
  return out;
}

SortTracker::SortTracker(ObjectClass cls, TrackerConfig config, std::shared_ptr<TrackId> id_source)
    : cls_(cls), config_(config), next_id_(id_source ? std::move(id_source) : std::make_shared<TrackId>(0)) {
  config_.validate();
}

void SortTracker::advance_one() {
  for (auto& t : live_) {
    t.state = kalman_predict(t.state, config_.kalman);
    ++t.time_since_update;
  }
}

void SortTracker::step(FrameIndex frame, std::span<const DetectionRecord> detections) {
  if (last_frame_ && frame <= *last_frame_) {
    throw InvalidArgument("frames must be presented in increasing order");
  }
  for (const auto& d : detections) {
    if (d.cls != cls_) throw InvalidArgument("detection class does not match tracker class");
  }

  // Frames skipped since the previous call carry no detections.
  if (last_frame_) {
    for (FrameIndex f = *last_frame_ + 1; f < frame; ++f) {
      advance_one();
      std::erase_if(live_, [&](Track& t) {
        if (t.time_since_update <= config_.max_age) return false;
        t.status = TrackStatus::Dead;
        finished_.push_back(std::move(t));
        return true;
      });
    }
  }
  last_frame_ = frame;
  advance_one();

  std::vector<BoundingBox> predicted;
  predicted.reserve(live_.size());
  for (const auto& t : live_) predicted.push_back(t.predicted_box());
  std::vector<BoundingBox> boxes;
  boxes.reserve(detections.size());
  for (const auto& d : detections) boxes.push_back(d.box);

  const Association assoc = associate(predicted, boxes, config_.iou_threshold);
  for (const auto& [ti, di] : assoc.matches) {
    Track& t = live_[ti];
    const DetectionRecord& det = detections[di];
    try {
      t.state = kalman_update(t.state, det.box, config_.kalman);
    } catch (const InvalidMeasurement&) {
      continue;  // keep the prediction; the track ages as if unmatched
    }
    t.time_since_update = 0;
    ++t.hits;
    t.last_frame = frame;
    t.history.push_back(det);
    if (t.status == TrackStatus::Tentative && t.hits >= config_.min_hits) {
      t.status = TrackStatus::Confirmed;
      t.confirmed_frame = frame;
    }
  }

  std::vector<Track> died;
  std::erase_if(live_, [&](Track& t) {
    if (t.time_since_update <= config_.max_age) return false;
    t.status = TrackStatus::Dead;
    died.push_back(std::move(t));
    return true;
  });
  for (auto& t : died) finished_.push_back(std::move(t));

  for (std::size_t di : assoc.unmatched_detections) {
    const DetectionRecord& det = detections[di];
    Track t;
    try {
      t.state = kalman_init(det.box, config_.kalman);
    } catch (const InvalidMeasurement&) {
      continue;
    }
    t.id = (*next_id_)++;
    t.cls = cls_;
    t.first_frame = frame;
    t.last_frame = frame;
    t.hits = 1;
    t.time_since_update = 0;
    t.history.push_back(det);
    if (config_.min_hits <= 1) {
      t.status = TrackStatus::Confirmed;
      t.confirmed_frame = frame;
    }
    live_.push_back(std::move(t));
  }
}

std::vector<Track> SortTracker::all_tracks() const {
  std::vector<Track> out = finished_;
  out.insert(out.end(), live_.begin(), live_.end());
  std::sort(out.begin(), out.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
  return out;
}

MultiClassTracker::MultiClassTracker(TrackerConfig config)
    : config_(config), next_id_(std::make_shared<TrackId>(0)) {
  config_.validate();
}

void MultiClassTracker::step(FrameIndex frame, std::span<const DetectionRecord> detections) {
  if (last_frame_ && frame <= *last_frame_) {
    throw InvalidArgument("frames must be presented in increasing order");
  }
  last_frame_ = frame;
  std::map<ObjectClass, std::vector<DetectionRecord>> by_class;
  for (const auto& d : detections) {
    if (d.cls == ObjectClass::LaneMarking) continue;
    by_class[d.cls].push_back(d);
  }
  for (const auto& [cls, dets] : by_class) {
    if (!trackers_.contains(cls)) trackers_.emplace(cls, SortTracker(cls, config_, next_id_));
  }
  // Every tracker advances every frame so that ageing is uniform.
  for (auto& [cls, tracker] : trackers_) {
    auto it = by_class.find(cls);
    if (it == by_class.end()) {
      tracker.step(frame, {});
    } else {
      tracker.step(frame, it->second);
    }
  }
}

std::vector<Track> MultiClassTracker::all_tracks() const {
  std::vector<Track> out;
  for (const auto& [cls, tracker] : trackers_) {
    auto tracks = tracker.all_tracks();
    out.insert(out.end(), std::make_move_iterator(tracks.begin()), std::make_move_iterator(tracks.end()));
  }
  std::sort(out.begin(), out.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
  return out;
}

std::vector<Track> track_sequence(std::span<const DetectionRecord> records, FrameIndex frame_count,
                                  const TrackerConfig& config) {
  MultiClassTracker tracker(config);
  FrameIndex end = frame_count;
  for (const auto& r : records) end = std::max(end, r.frame + 1);
  std::size_t i = 0;
  for (FrameIndex f = 0; f < end; ++f) {
    std::size_t j = i;
    while (j < records.size() && records[j].frame == f) ++j;
    if (j == i && i < records.size() && records[i].frame < f) {
      throw InvalidArgument("detection records must be sorted by frame");
    }
    tracker.step(f, records.subspan(i, j - i));
    i = j;
  }
  if (i != records.size()) throw InvalidArgument("detection records must be sorted by frame");
  return tracker.all_tracks();
}

}  // namespace roadsafe
