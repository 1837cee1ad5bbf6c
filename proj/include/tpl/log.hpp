#pragma once

#include <sstream>
#include <string>

namespace tpl {

enum class LogLevel { off = 0, info = 1, debug = 2 };

// Level parsed once from the TECG_LOG environment variable
// ("info"/"1", "debug"/"2", anything else = off).
LogLevel log_level();

bool log_enabled(LogLevel lvl);

void log_line(LogLevel lvl, const std::string& msg);

// Usage: TPL_LOG(info, "ripped net " << name);
#define TPL_LOG(lvl, expr)                                \
  do {                                                    \
    if (::tpl::log_enabled(::tpl::LogLevel::lvl)) {       \
      std::ostringstream tpl_log_os;                      \
      tpl_log_os << expr;                                 \
      ::tpl::log_line(::tpl::LogLevel::lvl,               \
                      tpl_log_os.str());                  \
    }                                                     \
  } while (0)

}  // namespace tpl
