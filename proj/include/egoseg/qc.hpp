#pragma once

#include <string>
#include <vector>

#include "egoseg/morphology.hpp"
#include "egoseg/raster.hpp"

namespace egoseg {

// Automated stand-in for manually discarding groundtruth frames that carry
// false positives. Each rule that fires contributes one identifier.
struct QcConfig {
  double min_fg_fraction = 0.01;
  double max_fg_fraction = 0.60;
  int max_components = 3;
  bool forbid_top_border = true;

  void validate() const {
    if (!(0.0 <= min_fg_fraction && min_fg_fraction <= max_fg_fraction &&
          max_fg_fraction <= 1.0)) {
      throw UsageError("qc fractions need 0 <= min_fg_fraction <= max_fg_fraction <= 1");
    }
    if (max_components < 1) throw UsageError("qc max_components must be >= 1");
  }
};

namespace qc_rule {
inline constexpr const char* kFgFractionLow = "fg-fraction-low";
inline constexpr const char* kFgFractionHigh = "fg-fraction-high";
inline constexpr const char* kTooManyComponents = "too-many-components";
inline constexpr const char* kTouchesTopBorder = "touches-top-border";
}  // namespace qc_rule

struct QcVerdict {
  std::vector<std::string> reasons;
  double fg_fraction = 0.0;
  int components = 0;

  bool accepted() const noexcept { return reasons.empty(); }
};

inline QcVerdict qcScreen(const BinaryMask& mask, const QcConfig& config) {
  config.validate();
  QcVerdict verdict;
  verdict.fg_fraction =
      static_cast<double>(mask.foreground_count()) / static_cast<double>(mask.pixel_count());
  verdict.components = static_cast<int>(connectedComponents(mask).size());

  if (verdict.fg_fraction < config.min_fg_fraction) {
    verdict.reasons.emplace_back(qc_rule::kFgFractionLow);
  }
  if (verdict.fg_fraction > config.max_fg_fraction) {
    verdict.reasons.emplace_back(qc_rule::kFgFractionHigh);
  }
  if (verdict.components > config.max_components) {
    verdict.reasons.emplace_back(qc_rule::kTooManyComponents);
  }
  if (config.forbid_top_border) {
    for (std::uint8_t v : mask.row(0)) {
      if (v) {
        verdict.reasons.emplace_back(qc_rule::kTouchesTopBorder);
        break;
      }
    }
  }
  return verdict;
}

}  // namespace egoseg
