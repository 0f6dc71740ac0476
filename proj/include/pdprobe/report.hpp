#ifndef PDPROBE_REPORT_HPP
#define PDPROBE_REPORT_HPP

#include "pdprobe/certifier.hpp"
#include "pdprobe/shifted_solver.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pdprobe {

using Json = nlohmann::json;

Json to_json(const Verdict& verdict);
/// Inverse of to_json. Throws Error on a malformed document.
Verdict verdict_from_json(const Json& j);

/// Result of one `check` run.
struct CheckReport
{
    std::string input;
    std::uint64_t seed = 0;
    SolveConfig solver;
    Verdict verdict;
    /// Only set when timing was requested; a report without it is a pure
    /// function of input, seed and settings.
    std::optional<double> wall_ms;
};

inline constexpr const char* check_report_schema = "pdprobe.check/1";

Json to_json(const CheckReport& report);
CheckReport check_report_from_json(const Json& j);

/// Throws Error naming the first missing or mistyped field.
void validate_check_report(const Json& j);

}  // namespace pdprobe

#endif  // PDPROBE_REPORT_HPP
