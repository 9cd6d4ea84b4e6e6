#include "fixiter/decimal.hpp"
#include "fixiter/errors.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fixiter {

namespace {

using i128 = __int128;

constexpr long long kLo = 1000000000LL;   // 10^9
constexpr long long kHi = 10000000000LL;  // 10^10

i128 pow10_128(int n) {
    i128 p = 1;
    for (int i = 0; i < n; ++i) p *= 10;
    return p;
}

int floordiv(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Normalize an exact (mantissa, exponent) pair to 10 significant digits,
// round half to even. `sticky` marks nonzero digits already dropped.
Decimal make_decimal(i128 m, int e, bool sticky = false) {
    if (m == 0) return Decimal{};
    bool neg = m < 0;
    i128 a = neg ? -m : m;
    // Truncate down to 11 digits, collecting a sticky bit.
    while (a >= i128(kHi) * 10) {
        if (a % 10 != 0) sticky = true;
        a /= 10;
        ++e;
    }
    if (a >= kHi) {
        long long r = static_cast<long long>(a % 10);
        a /= 10;
        ++e;
        if (r > 5 || (r == 5 && (sticky || (a & 1)))) {
            ++a;
            if (a == kHi) { a /= 10; ++e; }
        }
    }
    while (a != 0 && a < kLo) {
        a *= 10;
        --e;
    }
    Decimal d = Decimal::from_parts(static_cast<long long>(neg ? -a : a), e);
    return d;
}

} // namespace

Decimal Decimal::from_parts(long long mantissa, int exponent) {
    Decimal d;
    if (mantissa == 0) return d;
    long long a = mantissa < 0 ? -mantissa : mantissa;
    if (a < kLo || a >= kHi) return make_decimal(i128(mantissa), exponent);
    d.mantissa_ = mantissa;
    d.exponent_ = exponent;
    return d;
}

Decimal Decimal::from_integer(long long v) {
    return make_decimal(i128(v), 0);
}

Decimal Decimal::from_double(double v) {
    if (!std::isfinite(v)) throw domain_error("Decimal::from_double: non-finite value");
    if (v == 0.0) return Decimal{};
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9e", v);  // correctly rounded to 10 digits
    return from_string(buf);
}

Decimal Decimal::from_string(std::string_view s) {
    std::size_t i = 0;
    auto fail = [&](const char* msg) -> Decimal { throw parse_error(msg, i); };
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    i128 m = 0;
    int e = 0;
    int digits = 0;
    bool sticky = false, any = false, frac = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            any = true;
            if (digits < 19) {
                m = m * 10 + (c - '0');
                if (m != 0) ++digits;
                if (frac) --e;
            } else {
                if (c != '0') sticky = true;
                if (!frac) ++e;
            }
        } else if (c == '.' && !frac) {
            frac = true;
        } else {
            break;
        }
    }
    if (!any) return fail("Decimal::from_string: no digits");
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            return fail("Decimal::from_string: bad exponent");
        long ex = 0;
        for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i)
            ex = ex * 10 + (s[i] - '0');
        e += static_cast<int>(eneg ? -ex : ex);
    }
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i != s.size()) return fail("Decimal::from_string: trailing characters");
    return make_decimal(neg ? -m : m, e, sticky);
}

double Decimal::to_double() const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%lldE%d", mantissa_, exponent_);
    return std::strtod(buf, nullptr);
}

std::string Decimal::to_string() const {
    if (mantissa_ == 0) return "0";
    char buf[48];
    long long a = mantissa_ < 0 ? -mantissa_ : mantissa_;
    std::snprintf(buf, sizeof buf, "%s%lld.%09llde%d", mantissa_ < 0 ? "-" : "",
                  a / kLo, a % kLo, exponent_ + 9);
    return buf;
}

std::string Decimal::to_fixed(int decimals) const {
    if (decimals < 0 || decimals > 30) throw domain_error("to_fixed: bad decimals");
    bool neg = mantissa_ < 0;
    i128 a = mantissa_ < 0 ? -i128(mantissa_) : i128(mantissa_);
    int shift = exponent_ + decimals;
    if (shift > 25) throw domain_error("to_fixed: value too large for fixed format");
    if (shift >= 0) {
        a *= pow10_128(shift);
    } else {
        i128 div = pow10_128(-shift);
        i128 r = a % div;
        a /= div;
        if (2 * r >= div) ++a;  // half away from zero at display
    }
    // a is now the value scaled by 10^decimals.
    char digits[64];
    int n = 0;
    if (a == 0) digits[n++] = '0';
    while (a > 0) {
        digits[n++] = static_cast<char>('0' + static_cast<int>(a % 10));
        a /= 10;
    }
    while (n <= decimals) digits[n++] = '0';
    std::string out;
    if (neg && !(n == 1 && digits[0] == '0')) out += '-';
    for (int k = n - 1; k >= 0; --k) {
        out += digits[k];
        if (k == decimals && k != 0) out += '.';
    }
    return out;
}

Decimal operator+(const Decimal& a, const Decimal& b) {
    if (a.mantissa_ == 0) return b;
    if (b.mantissa_ == 0) return a;
    const Decimal& big = (a.exponent_ >= b.exponent_) ? a : b;
    const Decimal& sml = (a.exponent_ >= b.exponent_) ? b : a;
    int diff = big.exponent_ - sml.exponent_;
    if (diff > 24) return big;  // addend entirely below rounding range
    i128 m = i128(big.mantissa_) * pow10_128(diff) + sml.mantissa_;
    return make_decimal(m, sml.exponent_);
}

Decimal operator-(const Decimal& a) {
    Decimal d = a;
    d.mantissa_ = -d.mantissa_;
    return d;
}

Decimal operator-(const Decimal& a, const Decimal& b) { return a + (-b); }

Decimal operator*(const Decimal& a, const Decimal& b) {
    return make_decimal(i128(a.mantissa_) * b.mantissa_, a.exponent_ + b.exponent_);
}

Decimal operator/(const Decimal& a, const Decimal& b) {
    if (b.mantissa_ == 0) throw domain_error("Decimal: division by zero");
    if (a.mantissa_ == 0) return Decimal{};
    bool neg = (a.mantissa_ < 0) != (b.mantissa_ < 0);
    i128 num = (a.mantissa_ < 0 ? -i128(a.mantissa_) : i128(a.mantissa_)) * pow10_128(12);
    i128 den = b.mantissa_ < 0 ? -i128(b.mantissa_) : i128(b.mantissa_);
    i128 q = num / den;
    bool sticky = (num % den) != 0;
    return make_decimal(neg ? -q : q, a.exponent_ - b.exponent_ - 12, sticky);
}

bool operator==(const Decimal& a, const Decimal& b) {
    return a.mantissa_ == b.mantissa_ && (a.mantissa_ == 0 || a.exponent_ == b.exponent_);
}

bool operator<(const Decimal& a, const Decimal& b) {
    return (a - b).mantissa_ < 0;
}

Decimal abs(const Decimal& a) { return a.mantissa_ < 0 ? -a : a; }

namespace {

// Correctly rounded root: given the exact radicand M * 10^(p*s) and a
// 10-digit candidate mantissa R, nudge R until the radicand lies between
// the p-th powers of the half-ulp neighbours R -/+ 1/2.
long long verify_root(i128 scaled_radicand, long long R, int p) {
    // Compare against (2R-1)^p / 2^p and (2R+1)^p / 2^p.
    i128 target = scaled_radicand;
    for (int i = 0; i < p; ++i) target *= 2;
    for (;;) {
        i128 lo = 1, hi = 1;
        for (int i = 0; i < p; ++i) {
            lo *= (2 * i128(R) - 1);
            hi *= (2 * i128(R) + 1);
        }
        if (target < lo) { --R; continue; }
        if (target > hi) { ++R; continue; }
        if (target == lo) return (R & 1) ? R - 1 : R;  // tie, round to even
        if (target == hi) return (R & 1) ? R + 1 : R;
        return R;
    }
}

} // namespace

Decimal cbrt(const Decimal& a) {
    if (a.mantissa() == 0) return Decimal{};
    bool neg = a.mantissa() < 0;
    long long m = neg ? -a.mantissa() : a.mantissa();
    int e = a.exponent();
    int k = floordiv(e, 3);
    i128 M = i128(m) * pow10_128(e - 3 * k);  // in [10^9, 10^12)
    double c = std::cbrt(static_cast<double>(M));
    int s = 6;
    long long R = std::llround(c * 1e6);
    if (R >= kHi) { R = (R + 5) / 10; s = 5; }
    if (R < kLo) { R *= 10; s = 7; }
    R = verify_root(M * pow10_128(3 * s), R, 3);
    Decimal d = Decimal::from_parts(neg ? -R : R, k - s);
    return d;
}

Decimal sqrt(const Decimal& a) {
    if (a.mantissa() == 0) return Decimal{};
    if (a.mantissa() < 0) throw domain_error("sqrt of negative Decimal");
    long long m = a.mantissa();
    int e = a.exponent();
    int k = floordiv(e, 2);
    i128 M = i128(m) * pow10_128(e - 2 * k);  // in [10^9, 10^11)
    double c = std::sqrt(static_cast<double>(M));
    int s = (c < 1e5) ? 5 : 4;
    long long R = std::llround(c * (s == 5 ? 1e5 : 1e4));
    if (R >= kHi) { R = (R + 5) / 10; --s; }
    if (R < kLo) { R *= 10; ++s; }
    R = verify_root(M * pow10_128(2 * s), R, 2);
    return Decimal::from_parts(R, k - s);
}

} // namespace fixiter
