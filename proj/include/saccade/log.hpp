#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace saccade {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from SACCADE_LOG={error|info|debug}; default is info.
inline LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("SACCADE_LOG");
        if (env == nullptr) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        return LogLevel::Info;
    }();
    return level;
}

template <typename... Args>
void log_at(LogLevel lvl, const char* fmt, Args... args) {
    if (static_cast<int>(lvl) > static_cast<int>(log_level())) return;
    const char* prefix = lvl == LogLevel::Error ? "error" : (lvl == LogLevel::Info ? "info" : "debug");
    std::fprintf(stderr, "[saccade:%s] ", prefix);
    if constexpr (sizeof...(Args) == 0) {
        std::fputs(fmt, stderr);
    } else {
        std::fprintf(stderr, fmt, args...);
    }
    std::fputc('\n', stderr);
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
    log_at(LogLevel::Info, fmt, args...);
}
template <typename... Args>
void log_debug(const char* fmt, Args... args) {
    log_at(LogLevel::Debug, fmt, args...);
}
template <typename... Args>
void log_error(const char* fmt, Args... args) {
    log_at(LogLevel::Error, fmt, args...);
}

} // namespace saccade
