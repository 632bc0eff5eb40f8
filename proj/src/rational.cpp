#include "j2k/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace j2k {

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    num_ = g == 0 ? 0 : numerator / g;
    den_ = g == 0 ? 1 : denominator / g;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

namespace {

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw std::invalid_argument("not a number: " + std::string(whole));
    }
    return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return Rational(parse_int(text, text));

    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15 || (whole.empty() && frac.empty())) {
        throw std::invalid_argument("not a number: " + std::string(text));
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole, text);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac, text);
    if (f < 0) throw std::invalid_argument("not a number: " + std::string(text));
    const bool negative = !whole.empty() && whole.front() == '-';
    return Rational(w * scale + (negative ? -f : f), scale);
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace j2k
