#include "roadsafe/types.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "roadsafe/error.hpp"

namespace roadsafe {
namespace {

constexpr std::array<std::pair<ObjectClass, std::string_view>, 8> kClassNames{{
    {ObjectClass::StreetLight, "street_light"},
    {ObjectClass::TrafficSign, "traffic_sign"},
    {ObjectClass::Pothole, "pothole"},
    {ObjectClass::Rider, "rider"},
    {ObjectClass::Motorcycle, "motorcycle"},
    {ObjectClass::Helmet, "helmet"},
    {ObjectClass::LicensePlate, "license_plate"},
    {ObjectClass::LaneMarking, "lane_marking"},
}};

}  // namespace

std::string_view to_string(ObjectClass c) {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  return "unknown";
}

std::optional<ObjectClass> parse_object_class(std::string_view s) {
  for (const auto& [cls, name] : kClassNames) {
    if (name == s) return cls;
  }
  return std::nullopt;
}

std::string_view to_string(SignState s) {
  return s == SignState::Normal ? "normal" : "defective";
}

std::string_view to_string(HelmetState s) {
  return s == HelmetState::Helmet ? "helmet" : "no_helmet";
}

std::optional<SignState> parse_sign_state(std::string_view s) {
  if (s == "normal") return SignState::Normal;
  if (s == "defective") return SignState::Defective;
  return std::nullopt;
}

std::optional<HelmetState> parse_helmet_state(std::string_view s) {
  if (s == "helmet") return HelmetState::Helmet;
  if (s == "no_helmet") return HelmetState::NoHelmet;
  return std::nullopt;
}

void VideoMeta::validate() const {
  if (!(fps > 0) || !std::isfinite(fps)) throw InvalidArgument("fps must be positive");
  if (frame_count < 0) throw InvalidArgument("frame_count must be non-negative");
  if (width <= 0 || height <= 0) throw InvalidArgument("frame dimensions must be positive");
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

}  // namespace roadsafe
