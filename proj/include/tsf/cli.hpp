#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tsf::cli {

inline constexpr const char* kToolName = "tsf";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode { kPass = 0, kMathFailure = 1, kInputError = 2 };

std::uint64_t fnv1a64(std::string_view bytes);

// Renders a run report as text; depends on nothing but the JSON.
std::string render_text(const nlohmann::json& report);

// Runs one command line (without the program name). Writes the report to
// `out` in the requested format and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsf::cli
