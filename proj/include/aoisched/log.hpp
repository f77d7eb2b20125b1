#pragma once

#include <sstream>
#include <string>

namespace aoisched {

/// Log level, read once from AOI_SCHED_LOG (off|error|info|debug; default error).
enum class LogLevel { Off = 0, Error = 1, Info = 2, Debug = 3 };

LogLevel log_level();

void log_line(LogLevel level, const std::string& msg);

template <typename... Ts>
void log_info(const Ts&... parts) {
    if (log_level() < LogLevel::Info) return;
    std::ostringstream os;
    (os << ... << parts);
    log_line(LogLevel::Info, os.str());
}

template <typename... Ts>
void log_debug(const Ts&... parts) {
    if (log_level() < LogLevel::Debug) return;
    std::ostringstream os;
    (os << ... << parts);
    log_line(LogLevel::Debug, os.str());
}

template <typename... Ts>
void log_error(const Ts&... parts) {
    if (log_level() < LogLevel::Error) return;
    std::ostringstream os;
    (os << ... << parts);
    log_line(LogLevel::Error, os.str());
}

}  // namespace aoisched
