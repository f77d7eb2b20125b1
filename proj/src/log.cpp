#include "aoisched/log.hpp"

#include <cstdlib>
#include <iostream>

namespace aoisched {

namespace {

LogLevel parse_level() {
    const char* env = std::getenv("AOI_SCHED_LOG");
    if (!env) return LogLevel::Error;
    std::string v(env);
    if (v == "off") return LogLevel::Off;
    if (v == "error") return LogLevel::Error;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Error;
}

}  // namespace

LogLevel log_level() {
    static const LogLevel level = parse_level();
    return level;
}

void log_line(LogLevel level, const std::string& msg) {
    static const char* names[] = {"", "error", "info", "debug"};
    std::cerr << "[aoi-sched " << names[static_cast<int>(level)] << "] " << msg << "\n";
}

}  // namespace aoisched
