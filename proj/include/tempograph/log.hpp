#pragma once

#include <string_view>

namespace tempograph {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Read once from TEMPOGRAPH_LOG (error|warn|info|debug); default warn.
LogLevel log_level();
void set_log_level(LogLevel level);

// Thread-safe; writes "[level] message" to stderr when enabled.
void log(LogLevel level, std::string_view message);

}  // namespace tempograph
