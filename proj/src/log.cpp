#include "tpl/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace tpl {

LogLevel log_level() {
  static LogLevel lvl = [] {
    const char* env = std::getenv("TECG_LOG");
    if (!env) return LogLevel::off;
    if (!std::strcmp(env, "debug") || !std::strcmp(env, "2"))
      return LogLevel::debug;
    if (!std::strcmp(env, "info") || !std::strcmp(env, "1"))
      return LogLevel::info;
    return LogLevel::off;
  }();
  return lvl;
}

bool log_enabled(LogLevel lvl) {
  return lvl != LogLevel::off && static_cast<int>(lvl) <= static_cast<int>(log_level());
}

void log_line(LogLevel lvl, const std::string& msg) {
  const char* tag = lvl == LogLevel::debug ? "debug" : "info";
  std::fprintf(stderr, "[tecg:%s] %s\n", tag, msg.c_str());
}

}  // namespace tpl
