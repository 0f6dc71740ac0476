#include "pdprobe/log.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace pdprobe {

namespace {

constexpr const char* names[] = {"off", "error", "warn", "info", "debug"};

std::atomic<int>& level_slot()
{
    static std::atomic<int> slot = [] {
        const char* env = std::getenv("PDPROBE_LOG");
        return static_cast<int>(env ? parse_log_level(env) : LogLevel::warn);
    }();
    return slot;
}

}  // namespace

LogLevel parse_log_level(std::string_view text, LogLevel fallback)
{
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    for (int i = 0; i < 5; ++i)
        if (s == names[i] || s == std::string(1, static_cast<char>('0' + i)))
            return static_cast<LogLevel>(i);
    if (s == "warning")
        return LogLevel::warn;
    return fallback;
}

LogLevel log_level()
{
    return static_cast<LogLevel>(level_slot().load(std::memory_order_relaxed));
}

void set_log_level(LogLevel level)
{
    level_slot().store(static_cast<int>(level), std::memory_order_relaxed);
}

void log(LogLevel level, std::string_view msg)
{
    if (!log_enabled(level))
        return;
    static std::mutex mutex;
    const std::lock_guard lock(mutex);
    std::cerr << "pdprobe: " << names[static_cast<int>(level)] << ": " << msg << '\n';
}

}  // namespace pdprobe
