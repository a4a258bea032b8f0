#include "sameval/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace sameval {

namespace {

LogLevel parse_level(const char* value) {
  if (value == nullptr || *value == '\0') return LogLevel::Warn;
  if (std::strcmp(value, "error") == 0 || std::strcmp(value, "0") == 0) return LogLevel::Error;
  if (std::strcmp(value, "warn") == 0 || std::strcmp(value, "1") == 0) return LogLevel::Warn;
  if (std::strcmp(value, "info") == 0 || std::strcmp(value, "2") == 0) return LogLevel::Info;
  if (std::strcmp(value, "debug") == 0 || std::strcmp(value, "3") == 0) return LogLevel::Debug;
  return LogLevel::Warn;
}

std::atomic<int>& level_storage() {
  static std::atomic<int> level{static_cast<int>(parse_level(std::getenv("SAME_EVAL_LOG")))};
  return level;
}

const char* level_tag(LogLevel level) {
  switch (level) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
  }
  return "?";
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_storage().load()); }

void set_log_level(LogLevel level) { level_storage().store(static_cast<int>(level)); }

void log(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > level_storage().load()) return;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  std::fprintf(stderr, "[same-eval %s] %s\n", level_tag(level), message.c_str());
}

}  // namespace sameval
