#pragma once

#include <cstdlib>
#include <memory>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace egoseg {

// Process-wide logger writing to stderr. Verbosity comes from EGOSEG_LOG
// (trace|debug|info|warn|error|off), default "warn".
inline spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto lg = spdlog::stderr_color_mt("egoseg");
    lg->set_pattern("[%l] %v");
    const char* env = std::getenv("EGOSEG_LOG");
    lg->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    return lg;
  }();
  return *instance;
}

}  // namespace egoseg
