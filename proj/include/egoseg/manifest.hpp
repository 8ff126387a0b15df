#pragma once

#include <array>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "egoseg/error.hpp"

namespace egoseg {

// Capture attributes of a recording session and their closed vocabularies.
enum class Gender { male, female };
enum class ArmPose { close_hands, open_palm, open_dorsum, left_arm, right_arm };
enum class Scenario { indoors, outdoors };
enum class Outfit { outfit1, outfit2 };
enum class Sleeve { long_sleeve, short_sleeve };
enum class Ethnicity { caucasian, black, mixed };

namespace detail {

template <typename Enum, std::size_t N>
struct Vocabulary {
  const char* field;
  std::array<std::string_view, N> names;

  std::string_view name(Enum e) const { return names[static_cast<std::size_t>(e)]; }

  Enum parse(std::string_view text) const {
    for (std::size_t i = 0; i < N; ++i) {
      if (names[i] == text) return static_cast<Enum>(i);
    }
    std::string allowed;
    for (auto n : names) allowed += (allowed.empty() ? "" : "|") + std::string(n);
    throw ConfigError(field, "'" + std::string(text) + "' is not one of " + allowed);
  }
};

inline constexpr Vocabulary<Gender, 2> kGender{"gender", {"male", "female"}};
inline constexpr Vocabulary<ArmPose, 5> kArmPose{
    "arm_pose", {"close-hands", "open-palm", "open-dorsum", "left-arm", "right-arm"}};
inline constexpr Vocabulary<Scenario, 2> kScenario{"scenario", {"indoors", "outdoors"}};
inline constexpr Vocabulary<Outfit, 2> kOutfit{"outfit", {"outfit1", "outfit2"}};
inline constexpr Vocabulary<Sleeve, 2> kSleeve{"sleeve", {"long", "short"}};
inline constexpr Vocabulary<Ethnicity, 3> kEthnicity{"ethnicity",
                                                     {"caucasian", "black", "mixed"}};

}  // namespace detail

struct CaptureMetadata {
  std::string subject_id;
  Gender gender = Gender::male;
  ArmPose arm_pose = ArmPose::close_hands;
  Scenario scenario = Scenario::indoors;
  Outfit outfit = Outfit::outfit1;
  Sleeve sleeve = Sleeve::long_sleeve;
  Ethnicity ethnicity = Ethnicity::caucasian;
};

struct SampleManifest {
  std::string sample_id;
  std::string image_path;  // relative to the dataset root
  std::string mask_path;
  std::string background_source;
  CaptureMetadata capture;
};

inline nlohmann::ordered_json toJson(const SampleManifest& m) {
  nlohmann::ordered_json j;
  j["sample_id"] = m.sample_id;
  j["image_path"] = m.image_path;
  j["mask_path"] = m.mask_path;
  j["background_source"] = m.background_source;
  j["subject_id"] = m.capture.subject_id;
  j["gender"] = detail::kGender.name(m.capture.gender);
  j["arm_pose"] = detail::kArmPose.name(m.capture.arm_pose);
  j["scenario"] = detail::kScenario.name(m.capture.scenario);
  j["outfit"] = detail::kOutfit.name(m.capture.outfit);
  j["sleeve"] = detail::kSleeve.name(m.capture.sleeve);
  j["ethnicity"] = detail::kEthnicity.name(m.capture.ethnicity);
  return j;
}

// Rejects missing fields and values outside the vocabularies.
inline SampleManifest manifestFromJson(const nlohmann::ordered_json& j) {
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw ConfigError(key, "missing or not a string");
    }
    return j[key].get<std::string>();
  };
  SampleManifest m;
  m.sample_id = str("sample_id");
  if (m.sample_id.empty()) throw ConfigError("sample_id", "must not be empty");
  m.image_path = str("image_path");
  m.mask_path = str("mask_path");
  m.background_source = str("background_source");
  m.capture.subject_id = str("subject_id");
  m.capture.gender = detail::kGender.parse(str("gender"));
  m.capture.arm_pose = detail::kArmPose.parse(str("arm_pose"));
  m.capture.scenario = detail::kScenario.parse(str("scenario"));
  m.capture.outfit = detail::kOutfit.parse(str("outfit"));
  m.capture.sleeve = detail::kSleeve.parse(str("sleeve"));
  m.capture.ethnicity = detail::kEthnicity.parse(str("ethnicity"));
  return m;
}

}  // namespace egoseg
