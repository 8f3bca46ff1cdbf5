#pragma once

#include <string>
#include <vector>

namespace dab {

// Shortest round-trip decimal form of a double ("%.17g").
std::string g17(double v);

std::vector<std::string> split(const std::string& line, char delim);
std::string trim(const std::string& s);

// Strict numeric parsing; `what` names the offending field in the error.
// Throws config_error on junk, non-numeric text, or trailing characters.
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
unsigned long long parse_u64(const std::string& text, const std::string& what);

// Whole-file helpers; throw io_error on filesystem failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dab
