// egoseg: groundtruth extraction, semi-synthetic compositing, baseline
// segmentation, evaluation and latency benchmarking for egocentric arm
// segmentation datasets.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "egoseg/egoseg.hpp"

namespace {

using egoseg::RunConfig;
using egoseg::Size;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> stride;
  std::optional<int> copies;
  bool resize_pred = false;
};

Size parseSize(const std::string& text, const char* field) {
  int w = 0, h = 0;
  char x = 0;
  if (std::sscanf(text.c_str(), "%d%c%d", &w, &x, &h) != 3 || (x != 'x' && x != 'X') ||
      w < 1 || h < 1) {
    throw egoseg::ConfigError(field, "expected WIDTHxHEIGHT, got '" + text + "'");
  }
  return {w, h};
}

RunConfig effectiveConfig(const GlobalOptions& opts) {
  RunConfig config = opts.config_path.empty() ? RunConfig{} : egoseg::loadConfig(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.threads) config.threads = *opts.threads;
  if (opts.stride) config.stride = *opts.stride;
  if (opts.copies) config.copies = *opts.copies;
  if (opts.resize_pred) config.evaluate.resize_pred = true;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Egocentric arm segmentation dataset and evaluation toolkit", "egoseg"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "TOML or JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", opts.seed, "seed for background assignment");
  app.add_option("--threads", opts.threads, "worker threads (0 = all cores)");

  std::string frames_dir, fg_dir, mask_dir, bg_dir, input_dir, out_path, pairs_file, masks_dir;
  std::string size_text, kind_text;
  std::optional<int> iterations;

  auto* extract = app.add_subcommand("extract", "chroma-key frames -> groundtruth masks");
  extract->add_option("--frames", frames_dir, "directory of frame_<index> images")->required();
  extract->add_option("--out", out_path, "output directory")->required();
  extract->add_option("--stride", opts.stride, "keep every Nth frame");

  auto* composite = app.add_subcommand("composite", "masked foregrounds + backgrounds -> dataset");
  composite->add_option("--fg", fg_dir, "directory of fg_<index> images")->required();
  composite->add_option("--masks", mask_dir, "directory of gt_<index> masks")->required();
  composite->add_option("--backgrounds", bg_dir, "directory of scene images")->required();
  composite->add_option("--out", out_path, "dataset directory")->required();
  composite->add_option("--copies", opts.copies, "backgrounds per foreground");

  auto* segment = app.add_subcommand("segment", "run a baseline segmenter over a directory");
  segment->add_option("--input", input_dir, "RGB images (skin) or 16-bit depth (depth)")
      ->required();
  segment->add_option("--out", out_path, "prediction mask directory")->required();
  segment->add_option("--kind", kind_text, "skin | depth (overrides segmenter.kind)");

  auto* evaluate = app.add_subcommand("evaluate", "score predictions against groundtruth");
  evaluate->add_option("--pairs", pairs_file, "JSON-lines pairs file")->required();
  evaluate->add_option("--out", out_path, "report directory")->required();
  evaluate->add_flag("--resize-pred", opts.resize_pred,
                     "nearest-resize predictions to the groundtruth size");

  auto* heatmap = app.add_subcommand("heatmap", "foreground occurrence heatmap of a mask set");
  heatmap->add_option("--masks", masks_dir, "directory of masks")->required();
  heatmap->add_option("--out", out_path, "16-bit PNG output")->required();
  heatmap->add_option("--size", size_text, "reference size WxH (overrides evaluate.heatmap_size)");

  auto* bench = app.add_subcommand("bench", "single-threaded per-image segmentation latency");
  bench->add_option("--kind", kind_text, "skin | depth");
  bench->add_option("--size", size_text, "image size WxH");
  bench->add_option("--iterations", iterations, "timed iterations (>= 10)");

  auto* show = app.add_subcommand("config", "print the effective configuration as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return egoseg::exit_code::kConfig;
  }

  try {
    RunConfig config = effectiveConfig(opts);
    if (*segment) {
      if (!kind_text.empty()) config.segmenter.kind = egoseg::parseSegmenterKind(kind_text);
      egoseg::cmdSegment(input_dir, out_path, config);
    } else if (*extract) {
      const auto summary = egoseg::cmdExtract(frames_dir, out_path, config);
      std::cout << "extracted " << summary.frames.size() << " of " << summary.frames_total
                << " frames, " << summary.accepted() << " passed QC\n";
    } else if (*composite) {
      const auto result = egoseg::cmdComposite(fg_dir, mask_dir, bg_dir, out_path, config);
      std::cout << result.manifest.size() << " samples, " << result.rejected.size()
                << " rejected, " << result.missing.size() << " missing\n";
    } else if (*evaluate) {
      const auto result = egoseg::cmdEvaluate(pairs_file, out_path, config);
      std::cout << egoseg::report(result.summaries, egoseg::ReportFormat::markdown);
    } else if (*heatmap) {
      if (!size_text.empty()) config.evaluate.heatmap_size = parseSize(size_text, "--size");
      egoseg::cmdHeatmap(masks_dir, out_path, config);
    } else if (*bench) {
      if (!kind_text.empty()) {
        try {
          config.bench.kind = egoseg::parseSegmenterKind(kind_text);
        } catch (const egoseg::ConfigError& e) {
          throw egoseg::ConfigError("--kind", e.message());
        }
      }
      if (!size_text.empty()) config.bench.size = parseSize(size_text, "--size");
      if (iterations) config.bench.iterations = *iterations;
      config.validate();
      nlohmann::ordered_json out;
      out["result"] = egoseg::toJson(egoseg::cmdBench(config));
      out["note"] = "depth timing covers band thresholding only, not depth-map generation";
      out["config"] = egoseg::toJson(config);
      std::cout << out.dump(2) << '\n';
    } else if (*show) {
      std::cout << egoseg::toJson(config).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "egoseg: " << e.what() << '\n';
    return egoseg::exitCodeFor(e);
  }
  return egoseg::exit_code::kOk;
}
