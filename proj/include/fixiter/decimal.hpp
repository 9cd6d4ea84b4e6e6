#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fixiter {

/// Decimal floating-point scalar with 10 significant digits.
///
/// Every arithmetic operation computes the exact result and rounds it back
/// to 10 significant decimal digits (round half to even), the working
/// precision used by common computer-algebra systems in their default
/// configuration. Iterating a scheme in this scalar type reproduces
/// published iteration tables digit for digit, which binary doubles cannot:
/// the two arithmetics disagree in the 10th significant digit after a few
/// dozen steps.
///
/// Representation: value = mantissa * 10^exponent with |mantissa| in
/// [10^9, 10^10) or mantissa == 0.
class Decimal {
public:
    Decimal() = default;
    Decimal(int v) { *this = from_integer(v); }
    Decimal(long long v) { *this = from_integer(v); }

    static Decimal from_integer(long long v);
    /// Correctly rounds a double to 10 significant decimal digits.
    static Decimal from_double(double v);
    /// Parses a decimal literal ("3", "-0.5", "1.25e-3").
    static Decimal from_string(std::string_view s);
    /// Builds mantissa * 10^exponent, normalizing and rounding as needed.
    static Decimal from_parts(long long mantissa, int exponent);

    double to_double() const;
    /// Scientific form with the full 10-digit mantissa.
    std::string to_string() const;
    /// Fixed-point form with the given number of fractional digits,
    /// rounding half away from zero at display when digits must be dropped.
    std::string to_fixed(int decimals) const;

    bool is_zero() const { return mantissa_ == 0; }
    long long mantissa() const { return mantissa_; }
    int exponent() const { return exponent_; }

    friend Decimal operator+(const Decimal& a, const Decimal& b);
    friend Decimal operator-(const Decimal& a, const Decimal& b);
    friend Decimal operator*(const Decimal& a, const Decimal& b);
    friend Decimal operator/(const Decimal& a, const Decimal& b);
    friend Decimal operator-(const Decimal& a);

    friend bool operator==(const Decimal& a, const Decimal& b);
    friend bool operator<(const Decimal& a, const Decimal& b);
    friend bool operator!=(const Decimal& a, const Decimal& b) { return !(a == b); }
    friend bool operator>(const Decimal& a, const Decimal& b) { return b < a; }
    friend bool operator<=(const Decimal& a, const Decimal& b) { return !(b < a); }
    friend bool operator>=(const Decimal& a, const Decimal& b) { return !(a < b); }

    /// Cube root, correctly rounded to 10 significant digits. The candidate
    /// from double arithmetic is verified against the exact integer cube of
    /// its half-ulp neighbours, so the last digit is always right.
    friend Decimal cbrt(const Decimal& a);
    /// Square root, correctly rounded via the same half-ulp verification.
    friend Decimal sqrt(const Decimal& a);
    friend Decimal abs(const Decimal& a);

private:
    long long mantissa_ = 0;
    int exponent_ = 0;
};

} // namespace fixiter
