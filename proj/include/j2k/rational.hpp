#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace j2k {

/// Exact non-negative-denominator fraction, always stored in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator = 1);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Parses "0.004", "1", "3/4". Throws std::invalid_argument on malformed input.
    static Rational parse(std::string_view text);

    /// "num/den", or just "num" when den is 1.
    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace j2k
