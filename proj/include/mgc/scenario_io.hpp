#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mgc/scenario.hpp"

namespace mgc {

/// Parses the line-oriented scenario format (see docs/scenario-format.md) and
/// validates the result. Throws ParseError with the offending line number.
[[nodiscard]] Scenario parse_scenario(std::string_view text);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Inverse of parse_scenario; doubles are written in shortest round-trip form.
[[nodiscard]] std::string serialize_scenario(const Scenario& scenario);

}  // namespace mgc
