#include "roadsafe/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include "roadsafe/error.hpp"

namespace roadsafe {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool skip_line(std::string_view line) {
  auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

void check_stream(std::istream& in) {
  if (!in.good() && !in.eof()) throw IngestError("input stream is not readable");
}

// Reads all lines; throws IngestError if the underlying stream fails
// mid-read (as opposed to reaching end of input).
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  check_stream(in);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (skip_line(line)) continue;
    fn(number, std::string_view(line));
  }
  if (in.bad()) throw IngestError("read error on input stream");
}

std::string rejected(std::string_view what) { return "rejected: " + std::string(what); }

}  // namespace

DetectionLog parse_detection_log(std::istream& in, const VideoMeta& meta) {
  meta.validate();
  DetectionLog log;
  auto malformed = [&log](std::size_t line, std::string msg) {
    ++log.malformed;
    log.diagnostics.push_back({line, "malformed: " + std::move(msg)});
  };
  auto reject = [&log](std::size_t line, std::string_view msg) {
    ++log.rejected;
    log.diagnostics.push_back({line, rejected(msg)});
  };

  for_each_line(in, [&](std::size_t number, std::string_view line) {
    auto tok = split_ws(line);
    if (tok.size() < 7) return malformed(number, "expected at least 7 fields");
    DetectionRecord r;
    if (!parse_number(tok[0], r.frame)) return malformed(number, "bad frame index");
    auto cls = parse_object_class(tok[1]);
    if (!cls) return malformed(number, "unknown class '" + std::string(tok[1]) + "'");
    r.cls = *cls;
    if (!parse_number(tok[2], r.box.x) || !parse_number(tok[3], r.box.y) ||
        !parse_number(tok[4], r.box.w) || !parse_number(tok[5], r.box.h)) {
      return malformed(number, "bad box");
    }
    if (!parse_number(tok[6], r.confidence)) return malformed(number, "bad confidence");
    for (std::size_t k = 7; k < tok.size(); ++k) {
      auto eq = tok[k].find('=');
      if (eq == std::string_view::npos) return malformed(number, "attribute without '='");
      auto key = tok[k].substr(0, eq);
      auto value = tok[k].substr(eq + 1);
      if (key == "sign_state") {
        r.attrs.sign_state = parse_sign_state(value);
        if (!r.attrs.sign_state) return malformed(number, "bad sign_state");
      } else if (key == "helmet_state") {
        r.attrs.helmet_state = parse_helmet_state(value);
        if (!r.attrs.helmet_state) return malformed(number, "bad helmet_state");
      } else if (key == "plate") {
        if (value.empty()) return malformed(number, "empty plate");
        r.attrs.plate_text = std::string(value);
      } else if (key == "lane_fraction") {
        double f = 0;
        if (!parse_number(value, f)) return malformed(number, "bad lane_fraction");
        r.attrs.lane_fraction = f;
      } else {
        return malformed(number, "unknown attribute '" + std::string(key) + "'");
      }
    }

    if (r.frame < 0 || r.frame >= meta.frame_count) return reject(number, "frame index out of range");
    const auto& b = r.box;
    if (!(b.w > 0) || !(b.h > 0)) return reject(number, "non-positive box size");
    if (!(b.x >= 0) || !(b.y >= 0) || !(b.right() <= meta.width) || !(b.bottom() <= meta.height)) {
      return reject(number, "box outside frame");
    }
    if (!(r.confidence >= 0 && r.confidence <= 1)) return reject(number, "confidence outside [0,1]");
    if (r.attrs.lane_fraction && !(*r.attrs.lane_fraction >= 0 && *r.attrs.lane_fraction <= 1)) {
      return reject(number, "lane_fraction outside [0,1]");
    }
    log.records.push_back(std::move(r));
  });

  std::stable_sort(log.records.begin(), log.records.end(),
                   [](const DetectionRecord& a, const DetectionRecord& b) { return a.frame < b.frame; });
  return log;
}

std::string format_detection(const DetectionRecord& r) {
  std::string s;
  s.reserve(96);
  s += std::to_string(r.frame);
  s += ' ';
  s += to_string(r.cls);
  for (double v : {r.box.x, r.box.y, r.box.w, r.box.h, r.confidence}) {
    s += ' ';
    s += format_double(v);
  }
  if (r.attrs.sign_state) {
    s += " sign_state=";
    s += to_string(*r.attrs.sign_state);
  }
  if (r.attrs.helmet_state) {
    s += " helmet_state=";
    s += to_string(*r.attrs.helmet_state);
  }
  if (r.attrs.plate_text) {
    const auto& p = *r.attrs.plate_text;
    if (p.empty() || p.find_first_of(" \t\r\n") != std::string::npos) {
      throw InvalidArgument("plate text must be non-empty and contain no whitespace");
    }
    s += " plate=";
    s += p;
  }
  if (r.attrs.lane_fraction) {
    s += " lane_fraction=";
    s += format_double(*r.attrs.lane_fraction);
  }
  return s;
}

void emit_detection_log(std::ostream& out, std::span<const DetectionRecord> records) {
  for (const auto& r : records) out << format_detection(r) << '\n';
}

GpsLog parse_gps_log(std::istream& in) {
  GpsLog log;
  for_each_line(in, [&](std::size_t number, std::string_view line) {
    auto tok = split_ws(line);
    GeoSample s;
    if (tok.size() != 3 || !parse_number(tok[0], s.t) || !parse_number(tok[1], s.lat) ||
        !parse_number(tok[2], s.lon)) {
      log.diagnostics.push_back({number, "malformed: expected `t lat lon`"});
      return;
    }
    if (!(s.lat >= -90 && s.lat <= 90) || !(s.lon >= -180 && s.lon <= 180) || !std::isfinite(s.t)) {
      log.diagnostics.push_back({number, rejected("coordinate out of range")});
      return;
    }
    if (!log.samples.empty() && !(s.t > log.samples.back().t)) {
      log.diagnostics.push_back({number, rejected("timestamp does not increase")});
      return;
    }
    log.samples.push_back(s);
  });
  return log;
}

void emit_gps_log(std::ostream& out, std::span<const GeoSample> samples) {
  for (const auto& s : samples) {
    out << format_double(s.t) << ' ' << format_double(s.lat) << ' ' << format_double(s.lon) << '\n';
  }
}

// ---- conditions ----

std::string_view to_string(RoadType v) {
  switch (v) {
    case RoadType::Narrow: return "narrow";
    case RoadType::Standard: return "standard";
    case RoadType::Highway: return "highway";
    case RoadType::Bridge: return "bridge";
  }
  return "unknown";
}

std::string_view to_string(TrafficDensity v) {
  switch (v) {
    case TrafficDensity::Sparse: return "sparse";
    case TrafficDensity::Moderate: return "moderate";
    case TrafficDensity::Dense: return "dense";
  }
  return "unknown";
}

std::string_view to_string(RoadDamage v) {
  switch (v) {
    case RoadDamage::Low: return "low";
    case RoadDamage::Moderate: return "moderate";
    case RoadDamage::High: return "high";
  }
  return "unknown";
}

std::string_view to_string(TimeOfDay v) {
  switch (v) {
    case TimeOfDay::Morning: return "morning";
    case TimeOfDay::Noon: return "noon";
    case TimeOfDay::Evening: return "evening";
    case TimeOfDay::Unlabeled: return "unlabeled";
  }
  return "unknown";
}

ConditionLabel label_condition(const ConditionAnnotation& a) {
  if (a.lanes < 1) throw InvalidArgument("annotation has no lanes");
  if (a.vehicles < 0 || a.potholes < 0) throw InvalidArgument("annotation counts must be non-negative");
  if (a.capture_hour < 0 || a.capture_hour > 23) throw InvalidArgument("capture hour outside [0,23]");

  ConditionLabel l;
  if (a.bridge) {
    l.road_type = RoadType::Bridge;
  } else if (a.lanes == 1) {
    l.road_type = RoadType::Narrow;
  } else if (a.lanes <= 3) {
    l.road_type = RoadType::Standard;
  } else {
    l.road_type = RoadType::Highway;
  }

  l.traffic = a.vehicles <= 4 ? TrafficDensity::Sparse
              : a.vehicles <= 8 ? TrafficDensity::Moderate
                                : TrafficDensity::Dense;
  l.damage = a.potholes <= 2 ? RoadDamage::Low : a.potholes <= 4 ? RoadDamage::Moderate : RoadDamage::High;

  const int h = a.capture_hour;
  l.time_of_day = (h >= 7 && h < 12)    ? TimeOfDay::Morning
                  : (h >= 12 && h < 16) ? TimeOfDay::Noon
                  : (h >= 16 && h < 19) ? TimeOfDay::Evening
                                        : TimeOfDay::Unlabeled;
  return l;
}

ConditionLog parse_condition_file(std::istream& in) {
  ConditionLog log;
  for_each_line(in, [&](std::size_t number, std::string_view line) {
    auto tok = split_ws(line);
    ConditionAnnotation a;
    int bridge = 0;
    bool ok = tok.size() == 6 && parse_number(tok[0], a.second) && parse_number(tok[1], a.lanes) &&
              parse_number(tok[2], a.vehicles) && parse_number(tok[3], a.potholes) &&
              parse_number(tok[5], a.capture_hour);
    if (ok) {
      if (tok[4] == "true") {
        bridge = 1;
      } else if (tok[4] == "false") {
        bridge = 0;
      } else {
        ok = parse_number(tok[4], bridge) && (bridge == 0 || bridge == 1);
      }
    }
    if (!ok) {
      log.diagnostics.push_back({number, "malformed: expected `second lanes vehicles potholes bridge hour`"});
      return;
    }
    a.bridge = bridge == 1;
    try {
      (void)label_condition(a);
    } catch (const InvalidArgument& e) {
      log.diagnostics.push_back({number, rejected(e.what())});
      return;
    }
    log.annotations.push_back(a);
  });
  return log;
}

void emit_condition_file(std::ostream& out, std::span<const ConditionAnnotation> annotations) {
  for (const auto& a : annotations) {
    out << a.second << ' ' << a.lanes << ' ' << a.vehicles << ' ' << a.potholes << ' ' << (a.bridge ? 1 : 0)
        << ' ' << a.capture_hour << '\n';
  }
}

ConditionTable::ConditionTable(std::span<const ConditionAnnotation> annotations) {
  for (const auto& a : annotations) labels_[a.second] = label_condition(a);
}

std::optional<ConditionLabel> ConditionTable::label_for_second(std::int64_t second) const {
  auto it = labels_.find(second);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConditionLabel> ConditionTable::label_for_frame(FrameIndex frame, double fps) const {
  return label_for_second(static_cast<std::int64_t>(std::floor(static_cast<double>(frame) / fps)));
}

}  // namespace roadsafe
