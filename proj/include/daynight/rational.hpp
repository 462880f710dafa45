#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace daynight {

/// Exact rational number used for sensor timestamps. Multi-rate clocks
/// (20 / 10 / 6 Hz) need tick times like k/6 s that cannot be represented
/// in binary floating point without drift, so all clock arithmetic and
/// comparisons run on normalized int64 fractions.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }
    static Rational from_int(std::int64_t n) { return Rational(n, 1); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational operator+(const Rational& o) const { return Rational(num * o.den + o.num * den, den * o.den); }
    Rational operator-(const Rational& o) const { return Rational(num * o.den - o.num * den, den * o.den); }
    Rational operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    Rational abs() const { return num < 0 ? Rational(-num, den) : *this; }
};

/// Fixed 9-decimal rendering so serialized timestamps are byte-stable.
std::string format_seconds(const Rational& t);

} // namespace daynight
