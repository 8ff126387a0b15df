#pragma once

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoseg/bench.hpp"
#include "egoseg/chroma.hpp"
#include "egoseg/compositor.hpp"
#include "egoseg/config.hpp"
#include "egoseg/image_io.hpp"
#include "egoseg/log.hpp"
#include "egoseg/metrics.hpp"
#include "egoseg/parallel.hpp"
#include "egoseg/qc.hpp"
#include "egoseg/report.hpp"
#include "egoseg/segmenters.hpp"

// Batch drivers behind the `egoseg` subcommands. Each one reads inputs from
// directories, writes deterministic, index-named outputs, and echoes the
// effective configuration into its report. Fatal problems are thrown;
// per-item problems are logged and recorded in the report.

namespace egoseg {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kConfig = 2;
inline constexpr int kIo = 3;
inline constexpr int kEmptyPool = 4;
}  // namespace exit_code

// Maps an exception escaping a command to the process exit status.
inline int exitCodeFor(const std::exception& e) {
  if (dynamic_cast<const EmptyPoolError*>(&e)) return exit_code::kEmptyPool;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UsageError*>(&e)) {
    return exit_code::kConfig;
  }
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) {
    return exit_code::kIo;
  }
  return exit_code::kFailure;
}

namespace detail {

inline void writeText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

inline void writeJson(const fs::path& path, const nlohmann::ordered_json& j) {
  writeText(path, j.dump(2) + "\n");
}

}  // namespace detail

// Dataset names become part of file names; anything outside [A-Za-z0-9._-]
// is replaced by '_'.
inline std::string fileSafe(std::string name) {
  for (char& c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return name;
}

// ---------------------------------------------------------------- extract

struct FrameResult {
  long long index = 0;
  std::string source;
  std::optional<QcVerdict> verdict;
  std::string error;
};

struct ExtractSummary {
  std::size_t frames_total = 0;
  std::vector<FrameResult> frames;  // selected frames, in sequence order

  std::size_t accepted() const {
    return static_cast<std::size_t>(std::count_if(frames.begin(), frames.end(), [](auto& f) {
      return f.verdict && f.verdict->accepted();
    }));
  }
};

// frame_<index> images -> gt_<index>.png, fg_<index>.png and qc_report.json.
inline ExtractSummary cmdExtract(const fs::path& frames_dir, const fs::path& out_dir,
                                 const RunConfig& config) {
  config.validate();
  std::vector<std::pair<long long, fs::path>> frames;
  for (const auto& p : listImages(frames_dir)) {
    if (auto idx = parseFrameIndex(p.stem().string())) {
      frames.emplace_back(*idx, p);
    } else {
      logger().warn("ignoring {}: no frame index in file name", p.filename().string());
    }
  }
  std::sort(frames.begin(), frames.end());

  ExtractSummary summary;
  summary.frames_total = frames.size();
  const auto selected = selectFrames(frames.size(), static_cast<std::size_t>(config.stride));
  summary.frames.resize(selected.size());
  fs::create_directories(out_dir);

  parallelFor(selected.size(), config.effective_threads(), [&](std::size_t i) {
    const auto& [index, path] = frames[selected[i]];
    FrameResult& fr = summary.frames[i];
    fr.index = index;
    fr.source = path.filename().string();
    try {
      const RgbImage frame = loadRgb(path);
      const BinaryMask gt =
          extractGroundtruth(frame, config.chroma, config.morph_for(frame.size()));
      const std::string id = formatIndex(index);
      saveMask(out_dir / ("gt_" + id + ".png"), gt);
      saveRgb(out_dir / ("fg_" + id + ".png"), maskForeground(frame, gt));
      fr.verdict = qcScreen(gt, config.qc);
    } catch (const IoError& e) {
      logger().warn("frame {}: {}", fr.source, e.what());
      fr.error = e.what();
    }
  });

  nlohmann::ordered_json report;
  report["config"] = toJson(config);
  report["frames_total"] = summary.frames_total;
  report["frames_selected"] = summary.frames.size();
  report["accepted"] = summary.accepted();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  nlohmann::ordered_json review = nlohmann::ordered_json::array();
  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (const auto& fr : summary.frames) {
    if (!fr.verdict) {
      errors.push_back({{"index", fr.index}, {"source", fr.source}, {"error", fr.error}});
      continue;
    }
    nlohmann::ordered_json row;
    row["index"] = fr.index;
    row["source"] = fr.source;
    row["accepted"] = fr.verdict->accepted();
    row["reasons"] = fr.verdict->reasons;
    row["fg_fraction"] = fr.verdict->fg_fraction;
    row["components"] = fr.verdict->components;
    rows.push_back(row);
    if (!fr.verdict->accepted()) review.push_back(fr.index);
  }
  report["frames"] = rows;
  report["review"] = review;
  report["errors"] = errors;
  detail::writeJson(out_dir / "qc_report.json", report);
  return summary;
}

// -------------------------------------------------------------- composite

inline BuildResult cmdComposite(const fs::path& fg_dir, const fs::path& mask_dir,
                                const fs::path& bg_dir, const fs::path& out_dir,
                                const RunConfig& config) {
  config.validate();
  if (!config.metadata) {
    throw ConfigError("metadata", "capture metadata is required for composite");
  }
  const BackgroundPool pool = prepareBackgrounds(bg_dir, config.target_size);
  const BuildResult result =
      buildDataset(fg_dir, mask_dir, pool, *config.metadata, config.composite_config(),
                   config.qc, out_dir, config.effective_threads());

  nlohmann::ordered_json report;
  report["config"] = toJson(config);
  report["seed"] = config.seed;
  report["counts"] = {{"inputs", result.input_count},
                      {"samples", result.manifest.size()},
                      {"rejected", result.rejected.size()},
                      {"missing", result.missing.size()}};
  nlohmann::ordered_json sources = nlohmann::ordered_json::array();
  for (const auto& e : pool.entries) sources.push_back(e.source);
  report["background_pool"] = {{"size", pool.size()}, {"sources", sources}};
  nlohmann::ordered_json missing = nlohmann::ordered_json::array();
  for (const auto& m : result.missing) {
    missing.push_back({{"index", m.index}, {"foreground", m.foreground}, {"reason", m.reason}});
  }
  report["missing"] = missing;
  detail::writeJson(out_dir / "build_report.json", report);
  return result;
}

// ---------------------------------------------------------------- segment

// One <stem>.png prediction mask per input image.
inline std::size_t cmdSegment(const fs::path& input_dir, const fs::path& out_dir,
                              const RunConfig& config) {
  config.validate();
  const SegmenterKind kind = config.segmenter.kind;
  if (kind == SegmenterKind::external) {
    throw ConfigError("segmenter.kind",
                      "external masks are produced by another tool; feed them to evaluate");
  }
  const auto inputs = listImages(input_dir);
  fs::create_directories(out_dir);
  std::vector<std::string> outputs(inputs.size());

  parallelFor(inputs.size(), config.effective_threads(), [&](std::size_t i) {
    const fs::path& in = inputs[i];
    const fs::path out = out_dir / (in.stem().string() + ".png");
    try {
      if (kind == SegmenterKind::skin) {
        saveMask(out, skinSegment(loadRgb(in), config.segmenter.skin));
      } else {
        saveMask(out, depthSegment(loadDepth(in), config.segmenter.depth));
      }
    } catch (const FormatError& e) {
      throw UsageError(std::string(to_string(kind)) + " segmenter cannot take " +
                       in.filename().string() + ": " + e.what());
    }
    outputs[i] = out.filename().string();
  });

  nlohmann::ordered_json report;
  report["config"] = toJson(config);
  report["kind"] = std::string(to_string(kind));
  report["inputs"] = inputs.size();
  report["outputs"] = outputs;
  detail::writeJson(out_dir / "segment_report.json", report);
  return inputs.size();
}

// --------------------------------------------------------------- evaluate

struct EvalPair {
  std::string sample_id;
  std::string gt_path;
  std::string pred_path;
  std::string dataset;
  std::string scene;
};

// JSON lines of {sample_id, gt_path, pred_path, dataset[, scene]}. Malformed
// lines, empty ids or dataset names and duplicate ids are config errors.
inline std::vector<EvalPair> readPairs(const fs::path& pairs_file) {
  std::ifstream in(pairs_file, std::ios::binary);
  if (!in) throw IoError("cannot read pairs file " + pairs_file.string());
  std::vector<EvalPair> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = pairs_file.filename().string() + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(where, e.what());
    }
    auto field = [&](const char* key, bool required) -> std::string {
      if (!j.contains(key) || j[key].is_null()) {
        if (required) throw ConfigError(where, std::string("missing '") + key + "'");
        return {};
      }
      if (!j[key].is_string()) throw ConfigError(where, std::string("'") + key + "' must be a string");
      std::string v = j[key].get<std::string>();
      if (required && v.empty()) throw ConfigError(where, std::string("empty '") + key + "'");
      return v;
    };
    EvalPair p{field("sample_id", true), field("gt_path", true), field("pred_path", true),
               field("dataset", true), field("scene", false)};
    if (!seen.emplace(p.dataset, p.sample_id).second) {
      throw ConfigError(where, "duplicate sample_id '" + p.sample_id + "' in " + p.dataset);
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

struct EvaluateResult {
  std::vector<MetricRecord> records;
  std::vector<MetricSummary> summaries;
  std::vector<std::pair<std::string, std::string>> unreadable;  // sample_id, error
};

inline EvaluateResult cmdEvaluate(const fs::path& pairs_file, const fs::path& out_dir,
                                  const RunConfig& config) {
  config.validate();
  const auto pairs = readPairs(pairs_file);
  if (pairs.empty()) throw ConfigError(pairs_file.string(), "no pairs");
  const fs::path base = pairs_file.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  struct Scored {
    std::optional<MetricRecord> record;
    std::string error;
  };
  std::vector<Scored> scored(pairs.size());
  std::map<std::string, HeatmapAccumulator> heatmaps;
  for (const auto& p : pairs) heatmaps.try_emplace(p.dataset, config.evaluate.heatmap_size);
  std::mutex heatmap_mutex;

  parallelFor(pairs.size(), config.effective_threads(), [&](std::size_t i) {
    const EvalPair& p = pairs[i];
    try {
      const BinaryMask gt = loadMask(resolve(p.gt_path));
      const BinaryMask pred =
          loadPredictionMask(resolve(p.pred_path), gt.size(), config.evaluate.resize_pred);
      scored[i].record = makeRecord(p.sample_id, confusion(gt, pred), p.dataset, p.scene);
      // Integer counts: the sum does not depend on insertion order.
      std::lock_guard lock(heatmap_mutex);
      heatmaps.at(p.dataset).add(gt);
    } catch (const std::exception& e) {
      logger().warn("pair {}: {}", p.sample_id, e.what());
      scored[i].error = e.what();
    }
  });

  EvaluateResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!scored[i].record) {
      result.unreadable.emplace_back(pairs[i].sample_id, scored[i].error);
      continue;
    }
    result.records.push_back(std::move(*scored[i].record));
  }
  if (result.records.empty()) {
    throw IoError("no readable pairs in " + pairs_file.filename().string());
  }
  std::sort(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dataset, a.sample_id) < std::tie(b.dataset, b.sample_id);
  });

  std::map<std::string, std::vector<MetricRecord>> by_dataset;
  std::map<std::pair<std::string, std::string>, std::vector<MetricRecord>> by_scene;
  for (const auto& r : result.records) {
    by_dataset[r.dataset].push_back(r);
    if (!r.scene.empty()) by_scene[{r.dataset, r.scene}].push_back(r);
  }
  for (const auto& [name, recs] : by_dataset) {
    result.summaries.push_back(aggregate(recs, name));
    for (const auto& [key, scene_recs] : by_scene) {
      if (key.first == name) result.summaries.push_back(aggregate(scene_recs, name, key.second));
    }
  }

  fs::create_directories(out_dir);
  std::string lines;
  for (const auto& r : result.records) lines += toJson(r).dump() + "\n";
  detail::writeText(out_dir / "metrics.jsonl", lines);

  nlohmann::ordered_json summary;
  summary["config"] = toJson(config);
  summary["n_pairs"] = pairs.size();
  summary["n_scored"] = result.records.size();
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const auto& s : result.summaries) blocks.push_back(toJson(s));
  summary["summaries"] = blocks;
  nlohmann::ordered_json bad = nlohmann::ordered_json::array();
  for (const auto& [id, err] : result.unreadable) bad.push_back({{"sample_id", id}, {"error", err}});
  summary["unreadable"] = bad;
  detail::writeJson(out_dir / "summary.json", summary);

  std::string md = report(result.summaries, ReportFormat::markdown);
  md += "\nEffective configuration:\n\n```json\n" + toJson(config).dump(2) + "\n```\n";
  detail::writeText(out_dir / "report.md", md);
  detail::writeText(out_dir / "report.csv", report(result.summaries, ReportFormat::csv));

  for (const auto& [name, acc] : heatmaps) {
    if (acc.count() == 0) continue;
    saveGray16(out_dir / ("heatmap_" + fileSafe(name) + ".png"), encodeHeatmap(acc.result()));
  }
  return result;
}

// ---------------------------------------------------------------- heatmap

inline Heatmap cmdHeatmap(const fs::path& masks_dir, const fs::path& out_path,
                          const RunConfig& config) {
  config.validate();
  const auto files = listImages(masks_dir);
  if (files.empty()) throw IoError("no masks in " + masks_dir.string());
  HeatmapAccumulator acc(config.evaluate.heatmap_size);
  std::vector<std::string> sources;
  for (const auto& f : files) {
    acc.add(loadMask(f));
    sources.push_back(f.filename().string());
  }
  const Heatmap map = acc.result();
  saveGray16(out_path, encodeHeatmap(map));

  nlohmann::ordered_json sidecar;
  sidecar["config"] = toJson(config);
  sidecar["n_masks"] = files.size();
  sidecar["sources"] = sources;
  sidecar["encoding"] = "uint16 = floor(occupancy * 65535 + 0.5)";
  detail::writeJson(fs::path(out_path.string() + ".json"), sidecar);
  return map;
}

// ------------------------------------------------------------------ bench

inline BenchResult cmdBench(const RunConfig& config) {
  config.validate();
  return runBench(config.bench, config.segmenter);
}

}  // namespace egoseg
