#pragma once

#include <array>
#include <string_view>

namespace tradeshock::detail {

// Generated from data/ at configure time (builtin_data.cpp.in).
extern const std::string_view kRegionsCsv;
extern const std::string_view kSectorsCsv;
extern const std::array<std::string_view, 3> kScenarioJson;

}  // namespace tradeshock::detail
