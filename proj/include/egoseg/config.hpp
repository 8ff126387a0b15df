#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "egoseg/chroma.hpp"
#include "egoseg/compositor.hpp"
#include "egoseg/error.hpp"
#include "egoseg/manifest.hpp"
#include "egoseg/morphology.hpp"
#include "egoseg/qc.hpp"
#include "egoseg/segmenters.hpp"

namespace egoseg {

inline constexpr int kSchemaVersion = 1;

enum class SegmenterKind { skin, depth, external };

inline std::string_view to_string(SegmenterKind k) {
  switch (k) {
    case SegmenterKind::skin: return "skin";
    case SegmenterKind::depth: return "depth";
    default: return "external";
  }
}

inline SegmenterKind parseSegmenterKind(std::string_view text) {
  if (text == "skin" || text == "color") return SegmenterKind::skin;
  if (text == "depth") return SegmenterKind::depth;
  if (text == "external") return SegmenterKind::external;
  throw ConfigError("segmenter.kind", "'" + std::string(text) +
                                          "' is not one of skin|depth|external");
}

struct SegmenterConfig {
  SegmenterKind kind = SegmenterKind::skin;
  SkinBand skin;
  DepthBand depth;
};

struct EvaluateConfig {
  bool resize_pred = false;
  Size heatmap_size{256, 256};
};

struct BenchConfig {
  SegmenterKind kind = SegmenterKind::skin;
  Size size{720, 720};
  int iterations = 100;
  int warmup = 3;
};

// Every tunable of every command. Loaded from TOML or JSON, then patched
// by command-line overrides; `toJson` yields the effective configuration,
// which loads back to an identical RunConfig.
struct RunConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 42;
  int threads = 0;  // 0 = all available cores

  int stride = 5;
  ChromaThresholds chroma;
  MorphConfig morph;
  bool scale_min_area = true;
  QcConfig qc;

  int target_size = kReferenceSide;
  int feather_radius = 0;
  int copies = 1;
  std::optional<CaptureMetadata> metadata;

  SegmenterConfig segmenter;
  EvaluateConfig evaluate;
  BenchConfig bench;

  CompositeConfig composite_config() const { return {seed, feather_radius, copies}; }
  int effective_threads() const { return threads > 0 ? threads : defaultThreadCount(); }

  // Morphology for a frame of the given size.
  MorphConfig morph_for(Size size) const {
    return scale_min_area ? morph.scaled_for(size) : morph;
  }

  void validate() const;
};

namespace detail {

using json = nlohmann::ordered_json;

// Typed reads from one config section; every key not read is reported as
// unknown by `finish`.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (name_.empty()) {
      node_ = &root;
    } else if (root.contains(name_)) {
      node_ = &root.at(name_);
      if (!node_->is_object()) throw ConfigError(name_, "must be a table");
    }
  }

  bool present() const { return node_ != nullptr; }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return;
    const json& v = node_->at(key);
    const std::string field = qualified(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(field, "expected a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) {
          out = v.get<T>();
        } else {
          const auto s = v.get<long long>();
          if (s < 0) throw ConfigError(field, "must be >= 0");
          out = static_cast<T>(s);
        }
      } else {
        out = v.get<T>();
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(field, "expected a number");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(field, "expected a string");
      out = v.get<std::string>();
    } else {
      static_assert(sizeof(T) == 0, "unsupported config value type");
    }
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }

  std::string qualified(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

  void finish(const std::set<std::string>& nested = {}) const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.contains(key) && !nested.contains(key)) {
        throw ConfigError(qualified(key), "unknown key");
      }
    }
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

template <typename Fn>
void rethrowAs(const std::string& field, Fn&& fn) {
  try {
    fn();
  } catch (const UsageError& e) {
    throw ConfigError(field, e.what());
  }
}

inline json sizeJson(Size s) { return json::array({s.width, s.height}); }

inline Size readSize(Section& sec, const char* key, Size fallback) {
  const json* v = sec.raw(key);
  if (!v) return fallback;
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() ||
      !(*v)[1].is_number_integer()) {
    throw ConfigError(sec.qualified(key), "expected [width, height]");
  }
  Size s{(*v)[0].get<int>(), (*v)[1].get<int>()};
  if (s.width < 1 || s.height < 1) throw ConfigError(sec.qualified(key), "must be >= 1");
  return s;
}

}  // namespace detail

inline void RunConfig::validate() const {
  using detail::rethrowAs;
  if (schema_version != kSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " +
                                            std::to_string(schema_version) + " (expected " +
                                            std::to_string(kSchemaVersion) + ")");
  }
  if (threads < 0) throw ConfigError("threads", "must be >= 0");
  if (stride < 1) throw ConfigError("extract.stride", "must be >= 1");
  rethrowAs("chroma", [&] { chroma.validate(); });
  rethrowAs("morph", [&] { morph.validate(); });
  rethrowAs("qc", [&] { qc.validate(); });
  if (target_size < 1) throw ConfigError("composite.target_size", "must be >= 1");
  if (feather_radius < 0) throw ConfigError("composite.feather_radius", "must be >= 0");
  if (copies < 1) throw ConfigError("composite.copies", "must be >= 1");
  rethrowAs("segmenter", [&] { segmenter.skin.validate(); });
  rethrowAs("segmenter", [&] { segmenter.depth.validate(); });
  if (bench.iterations < 10) throw ConfigError("bench.iterations", "must be >= 10");
  if (bench.warmup < 0) throw ConfigError("bench.warmup", "must be >= 0");
  if (bench.size.width < 1 || bench.size.height < 1) {
    throw ConfigError("bench.size", "must be >= 1x1");
  }
}

inline nlohmann::ordered_json toJson(const RunConfig& c) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["extract"] = {{"stride", c.stride}};
  j["chroma"] = {{"h1", c.chroma.h1},
                 {"h2", c.chroma.h2},
                 {"s1", c.chroma.s1},
                 {"band_mode", std::string(to_string(c.chroma.band_mode))}};
  j["morph"] = {{"open_radius", c.morph.open_radius},
                {"close_radius", c.morph.close_radius},
                {"min_component_area", c.morph.min_component_area},
                {"scale_min_area", c.scale_min_area}};
  j["qc"] = {{"min_fg_fraction", c.qc.min_fg_fraction},
             {"max_fg_fraction", c.qc.max_fg_fraction},
             {"max_components", c.qc.max_components},
             {"forbid_top_border", c.qc.forbid_top_border}};
  j["composite"] = {{"target_size", c.target_size},
                    {"feather_radius", c.feather_radius},
                    {"copies", c.copies}};
  if (c.metadata) {
    const auto& m = *c.metadata;
    j["metadata"] = {{"subject_id", m.subject_id},
                     {"gender", detail::kGender.name(m.gender)},
                     {"arm_pose", detail::kArmPose.name(m.arm_pose)},
                     {"scenario", detail::kScenario.name(m.scenario)},
                     {"outfit", detail::kOutfit.name(m.outfit)},
                     {"sleeve", detail::kSleeve.name(m.sleeve)},
                     {"ethnicity", detail::kEthnicity.name(m.ethnicity)}};
  }
  json ranges = json::array();
  for (const auto& r : c.segmenter.skin.hue_ranges) ranges.push_back({r.lo, r.hi});
  j["segmenter"] = {{"kind", std::string(to_string(c.segmenter.kind))},
                    {"hue_ranges", ranges},
                    {"s_min", c.segmenter.skin.s_min},
                    {"s_max", c.segmenter.skin.s_max},
                    {"v_min", c.segmenter.skin.v_min},
                    {"d_min", c.segmenter.depth.d_min},
                    {"d_max", c.segmenter.depth.d_max},
                    {"fill_holes", c.segmenter.depth.fill_holes}};
  j["evaluate"] = {{"resize_pred", c.evaluate.resize_pred},
                   {"heatmap_size", detail::sizeJson(c.evaluate.heatmap_size)}};
  j["bench"] = {{"kind", std::string(to_string(c.bench.kind))},
                {"size", detail::sizeJson(c.bench.size)},
                {"iterations", c.bench.iterations},
                {"warmup", c.bench.warmup}};
  return j;
}

inline RunConfig configFromJson(const nlohmann::ordered_json& root) {
  using detail::Section;
  if (!root.is_object()) throw ConfigError("<root>", "config must be a table");
  RunConfig c;

  Section top(root, "");
  top.read("schema_version", c.schema_version);
  top.read("seed", c.seed);
  top.read("threads", c.threads);
  top.finish({"extract", "chroma", "morph", "qc", "composite", "metadata", "segmenter",
              "evaluate", "bench"});
  if (c.schema_version != kSchemaVersion) c.validate();

  Section extract(root, "extract");
  extract.read("stride", c.stride);
  extract.finish();

  Section chroma(root, "chroma");
  chroma.read("h1", c.chroma.h1);
  chroma.read("h2", c.chroma.h2);
  chroma.read("s1", c.chroma.s1);
  std::string band = std::string(to_string(c.chroma.band_mode));
  chroma.read("band_mode", band);
  detail::rethrowAs("chroma.band_mode", [&] { c.chroma.band_mode = parseBandMode(band); });
  chroma.finish();

  Section morph(root, "morph");
  morph.read("open_radius", c.morph.open_radius);
  morph.read("close_radius", c.morph.close_radius);
  morph.read("min_component_area", c.morph.min_component_area);
  morph.read("scale_min_area", c.scale_min_area);
  morph.finish();

  Section qc(root, "qc");
  qc.read("min_fg_fraction", c.qc.min_fg_fraction);
  qc.read("max_fg_fraction", c.qc.max_fg_fraction);
  qc.read("max_components", c.qc.max_components);
  qc.read("forbid_top_border", c.qc.forbid_top_border);
  qc.finish();

  Section comp(root, "composite");
  comp.read("target_size", c.target_size);
  comp.read("feather_radius", c.feather_radius);
  comp.read("copies", c.copies);
  comp.finish();

  if (root.contains("metadata") && !root.at("metadata").is_null()) {
    Section meta(root, "metadata");
    CaptureMetadata m;
    std::string gender, pose, scenario, outfit, sleeve, ethnicity;
    auto required = [&](const char* key, std::string& out) {
      meta.read(key, out);
      if (out.empty()) throw ConfigError(meta.qualified(key), "is required");
    };
    required("subject_id", m.subject_id);
    required("gender", gender);
    required("arm_pose", pose);
    required("scenario", scenario);
    required("outfit", outfit);
    required("sleeve", sleeve);
    required("ethnicity", ethnicity);
    meta.finish();
    auto scoped = [](const char* key, auto&& fn) {
      try {
        return fn();
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("metadata.") + key, e.message());
      }
    };
    m.gender = scoped("gender", [&] { return detail::kGender.parse(gender); });
    m.arm_pose = scoped("arm_pose", [&] { return detail::kArmPose.parse(pose); });
    m.scenario = scoped("scenario", [&] { return detail::kScenario.parse(scenario); });
    m.outfit = scoped("outfit", [&] { return detail::kOutfit.parse(outfit); });
    m.sleeve = scoped("sleeve", [&] { return detail::kSleeve.parse(sleeve); });
    m.ethnicity = scoped("ethnicity", [&] { return detail::kEthnicity.parse(ethnicity); });
    c.metadata = m;
  }

  Section seg(root, "segmenter");
  std::string kind = std::string(to_string(c.segmenter.kind));
  seg.read("kind", kind);
  c.segmenter.kind = parseSegmenterKind(kind);
  if (const auto* ranges = seg.raw("hue_ranges")) {
    if (!ranges->is_array() || ranges->empty()) {
      throw ConfigError("segmenter.hue_ranges", "expected a non-empty list of [lo, hi]");
    }
    c.segmenter.skin.hue_ranges.clear();
    for (const auto& r : *ranges) {
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
        throw ConfigError("segmenter.hue_ranges", "expected [lo, hi] pairs");
      }
      c.segmenter.skin.hue_ranges.push_back({r[0].get<double>(), r[1].get<double>()});
    }
  }
  seg.read("s_min", c.segmenter.skin.s_min);
  seg.read("s_max", c.segmenter.skin.s_max);
  seg.read("v_min", c.segmenter.skin.v_min);
  seg.read("d_min", c.segmenter.depth.d_min);
  seg.read("d_max", c.segmenter.depth.d_max);
  seg.read("fill_holes", c.segmenter.depth.fill_holes);
  seg.finish();

  Section eval(root, "evaluate");
  eval.read("resize_pred", c.evaluate.resize_pred);
  c.evaluate.heatmap_size = detail::readSize(eval, "heatmap_size", c.evaluate.heatmap_size);
  eval.finish();

  Section bench(root, "bench");
  std::string bench_kind = std::string(to_string(c.bench.kind));
  bench.read("kind", bench_kind);
  try {
    c.bench.kind = parseSegmenterKind(bench_kind);
  } catch (const ConfigError& e) {
    throw ConfigError("bench.kind", e.message());
  }
  c.bench.size = detail::readSize(bench, "size", c.bench.size);
  bench.read("iterations", c.bench.iterations);
  bench.read("warmup", c.bench.warmup);
  bench.finish();

  c.validate();
  return c;
}

inline RunConfig configFromToml(std::string_view text, const std::string& source = "<string>") {
  toml::table table;
  try {
    table = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(source, msg.str());
  }
  std::ostringstream as_json;
  as_json << toml::json_formatter{table};
  return configFromJson(nlohmann::ordered_json::parse(as_json.str()));
}

// `.json` files are parsed as JSON, everything else as TOML.
inline RunConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (path.extension() == ".json") {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(path.string(), e.what());
    }
    return configFromJson(j);
  }
  return configFromToml(buffer.str(), path.string());
}

}  // namespace egoseg
