#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "egoseg/metrics.hpp"

namespace egoseg {

using ordered_json = nlohmann::ordered_json;

enum class ReportFormat { csv, json, markdown };

inline ReportFormat parseReportFormat(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  throw UsageError("unknown report format '" + std::string(text) + "'");
}

namespace detail {

inline ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// Shortest round-trip representation; empty when undefined.
inline std::string opt_full(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

inline std::string opt_fixed2(const std::optional<double>& v) {
  return v ? fmt::format("{:.2f}", *v) : std::string("n/a");
}

}  // namespace detail

inline ordered_json toJson(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

inline ordered_json toJson(const MetricRecord& r) {
  ordered_json j;
  j["sample_id"] = r.sample_id;
  j["dataset"] = r.dataset;
  j["scene"] = r.scene;
  j["iou_arm"] = detail::opt_json(r.iou_arm);
  j["miss_rate"] = detail::opt_json(r.miss_rate);
  j["counts"] = toJson(r.counts);
  return j;
}

inline ordered_json toJson(const MetricSummary& s) {
  ordered_json j;
  j["dataset"] = s.dataset_name;
  j["scene"] = s.scene;
  j["n_samples"] = s.n_samples;
  j["n_undefined"] = s.n_undefined;
  j["n_miss_undefined"] = s.n_miss_undefined;
  j["iou_mean"] = detail::opt_json(s.iou_mean);
  j["iou_std"] = detail::opt_json(s.iou_std);
  j["miss_mean"] = detail::opt_json(s.miss_mean);
  j["miss_std"] = detail::opt_json(s.miss_std);
  j["iou_micro"] = detail::opt_json(s.iou_micro);
  j["miss_micro"] = detail::opt_json(s.miss_micro);
  j["pooled"] = toJson(s.pooled);
  return j;
}

// "IoU (MissRate)" at two decimals.
inline std::string iouMissCell(const MetricSummary& s) {
  return detail::opt_fixed2(s.iou_mean) + " (" + detail::opt_fixed2(s.miss_mean) + ")";
}

inline std::string report(std::span<const MetricSummary> summaries, ReportFormat format) {
  if (summaries.empty()) throw UsageError("report: no summaries");
  std::string out;
  switch (format) {
    case ReportFormat::json: {
      ordered_json arr = ordered_json::array();
      for (const auto& s : summaries) arr.push_back(toJson(s));
      out = arr.dump(2);
      out += '\n';
      break;
    }
    case ReportFormat::csv: {
      out = "dataset,scene,n_samples,n_undefined,iou_mean,iou_std,miss_mean,miss_std,"
            "iou_micro,miss_micro\n";
      for (const auto& s : summaries) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", s.dataset_name, s.scene,
                           s.n_samples, s.n_undefined, detail::opt_full(s.iou_mean),
                           detail::opt_full(s.iou_std), detail::opt_full(s.miss_mean),
                           detail::opt_full(s.miss_std), detail::opt_full(s.iou_micro),
                           detail::opt_full(s.miss_micro));
      }
      break;
    }
    case ReportFormat::markdown: {
      out = "| Database | # Images | IoU (Miss Rate) | IoU std | Miss Rate std | "
            "Micro IoU | Undefined |\n";
      out += "|---|---:|---:|---:|---:|---:|---:|\n";
      for (const auto& s : summaries) {
        out += fmt::format("| {} | {} | {} | {} | {} | {} | {} |\n", s.label(), s.n_samples,
                           iouMissCell(s), detail::opt_fixed2(s.iou_std),
                           detail::opt_fixed2(s.miss_std), detail::opt_fixed2(s.iou_micro),
                           s.n_undefined);
      }
      break;
    }
  }
  return out;
}

}  // namespace egoseg
