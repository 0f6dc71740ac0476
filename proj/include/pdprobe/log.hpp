#ifndef PDPROBE_LOG_HPP
#define PDPROBE_LOG_HPP

#include <string>
#include <string_view>

namespace pdprobe {

enum class LogLevel
{
    off = 0,
    error,
    warn,
    info,
    debug,
};

/// Parses off/error/warn/info/debug (case-insensitive) or 0..4. Unknown
/// values give `fallback`.
LogLevel parse_log_level(std::string_view text, LogLevel fallback = LogLevel::warn);

/// Level from PDPROBE_LOG, read once; warn when unset.
LogLevel log_level();
void set_log_level(LogLevel level);

/// Writes "pdprobe: <level>: <msg>" to stderr if `level` is enabled.
void log(LogLevel level, std::string_view msg);

inline bool log_enabled(LogLevel level)
{
    return level != LogLevel::off && static_cast<int>(level) <= static_cast<int>(log_level());
}

}  // namespace pdprobe

#endif  // PDPROBE_LOG_HPP
