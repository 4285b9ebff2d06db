#include "covcal/log.hpp"

#include "covcal/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace covcal {

namespace {

LogLevel level_from_env() {
    const char* env = std::getenv("COVCAL_LOG");
    if (!env) return LogLevel::warn;
    if (std::strcmp(env, "error") == 0) return LogLevel::error;
    if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    return LogLevel::warn;
}

LogLevel& current_level() {
    static LogLevel level = level_from_env();
    return level;
}

std::mutex g_log_mutex;

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "?";
}

}  // namespace

void set_log_level(LogLevel level) { current_level() = level; }

LogLevel log_level() { return current_level(); }

void log_message(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(current_level())) return;
    std::lock_guard<std::mutex> lock(g_log_mutex);
    std::fprintf(stderr, "covcal [%s] %s\n", level_tag(level), message.c_str());
}

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
        case ErrorKind::format: return "format";
        case ErrorKind::geometry: return "geometry";
        case ErrorKind::bounds: return "bounds";
        case ErrorKind::constraint: return "constraint";
        case ErrorKind::fit: return "fit";
        case ErrorKind::input: return "input";
    }
    return "unknown";
}

}  // namespace covcal
