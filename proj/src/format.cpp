#include "monohire/format.hpp"

#include "monohire/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace monohire {

std::string format_number(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", kOutputDigits, x);
    return buf;
}

double round_significant(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view text, char sep) {
    std::vector<std::string> out;
    text = trim(text);
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    // strtod accepts forms (hex, inf) that from_chars rejects; keep it strict.
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ArgumentError("invalid number for " + std::string(what) + ": '" +
                            std::string(text) + "'");
    }
    return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
    text = trim(text);
    long long value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ArgumentError("invalid integer for " + std::string(what) + ": '" +
                            std::string(text) + "'");
    }
    return value;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    for (const auto& piece : split_list(text)) out.push_back(parse_double(piece, what));
    return out;
}

}  // namespace monohire
