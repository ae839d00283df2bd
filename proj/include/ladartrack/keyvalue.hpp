#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ladar {

/// One meaningful line of a flat key-value file: either `key = value` or a
/// `[section]` header (key holds the section name, is_section set).
struct KeyValueLine {
    std::size_t line = 0;
    std::string key;
    std::string value;
    bool is_section = false;
};

/// Blank lines and `#` comments are skipped. Throws ParseError.
std::vector<KeyValueLine> parse_key_value_lines(std::istream& in);

/// Split "key=value" as given on a command line. Throws ParseError.
KeyValueLine split_assignment(std::string_view text);

double parse_real(std::string_view text, std::string_view key);
long long parse_integer(std::string_view text, std::string_view key);
std::vector<double> parse_reals(std::string_view text, std::string_view key);

}  // namespace ladar
