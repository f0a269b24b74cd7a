#include "itemcp/threshold.hpp"

#include "itemcp/error.hpp"

#include <charconv>
#include <numeric>

namespace itemcp {

namespace {

std::uint64_t parse_uint(std::string_view s, std::string_view whole) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("invalid threshold '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Threshold::Threshold(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0 || num == 0 || num > den)
        throw ConfigError("threshold must lie in (0,1], got " + std::to_string(num) + "/" +
                          std::to_string(den));
    auto g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
}

Threshold Threshold::parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw ConfigError("empty threshold");

    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return {parse_uint(text.substr(0, slash), text), parse_uint(text.substr(slash + 1), text)};

    std::uint64_t scale = 1;
    std::string_view body = text;
    if (body.back() == '%') {
        body.remove_suffix(1);
        scale = 100;
    }
    std::string_view int_part = body;
    std::string_view frac_part;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        int_part = body.substr(0, dot);
        frac_part = body.substr(dot + 1);
    }
    std::uint64_t den = scale;
    std::uint64_t num = int_part.empty() ? 0 : parse_uint(int_part, text);
    for (char c : frac_part) {
        if (c < '0' || c > '9') throw ConfigError("invalid threshold '" + std::string(text) + "'");
        num = num * 10 + static_cast<std::uint64_t>(c - '0');
        den *= 10;
    }
    return {num, den};
}

std::string Threshold::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace itemcp
