#include "ladartrack/keyvalue.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "ladartrack/errors.hpp"

namespace ladar {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view text, const char* what) {
    throw ParseError("key '" + std::string(key) + "': expected " + what + ", got '" +
                     std::string(text) + "'");
}

}  // namespace

std::vector<KeyValueLine> parse_key_value_lines(std::istream& in) {
    std::vector<KeyValueLine> out;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        KeyValueLine kv;
        kv.line = line_no;
        if (line.front() == '[') {
            if (line.back() != ']' || trim(line.substr(1, line.size() - 2)).empty()) {
                throw ParseError("line " + std::to_string(line_no) + ": malformed section header");
            }
            kv.key = std::string(trim(line.substr(1, line.size() - 2)));
            kv.is_section = true;
        } else {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            kv.key = std::string(trim(line.substr(0, eq)));
            kv.value = std::string(trim(line.substr(eq + 1)));
            if (kv.key.empty()) {
                throw ParseError("line " + std::to_string(line_no) + ": empty key");
            }
        }
        out.push_back(std::move(kv));
    }
    return out;
}

KeyValueLine split_assignment(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || trim(text.substr(0, eq)).empty()) {
        throw ParseError("expected key=value, got '" + std::string(text) + "'");
    }
    KeyValueLine kv;
    kv.key = std::string(trim(text.substr(0, eq)));
    kv.value = std::string(trim(text.substr(eq + 1)));
    return kv;
}

double parse_real(std::string_view text, std::string_view key) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        bad_value(key, text, "a number");
    }
    return v;
}

long long parse_integer(std::string_view text, std::string_view key) {
    text = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        bad_value(key, text, "an integer");
    }
    return v;
}

std::vector<double> parse_reals(std::string_view text, std::string_view key) {
    std::vector<double> out;
    std::istringstream words{std::string(text)};
    std::string w;
    while (words >> w) {
        out.push_back(parse_real(w, key));
    }
    return out;
}

}  // namespace ladar
