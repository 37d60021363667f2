#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sumrules::cli {

/// "3", "1..20" or "1,4,9" (ranges and lists may mix: "1..3,7").
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// Exit codes: 0 every verification passed, 1 some failed, 2 usage or I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sumrules::cli
