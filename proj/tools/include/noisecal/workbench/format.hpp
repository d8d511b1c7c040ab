#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace noisecal::workbench {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict full-string parse; returns false on trailing garbage or overflow.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

std::string hex64(std::uint64_t v);

}  // namespace noisecal::workbench
