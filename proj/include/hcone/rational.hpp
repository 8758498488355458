#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hcone {

using Rational = boost::multiprecision::cpp_rational;

// A rational number or +∞. Only the operations the index formulas need.
struct XRational {
    bool infinite = false;
    Rational value{0};

    XRational() = default;
    XRational(const Rational& r) : value(r) {}
    XRational(long long v) : value(v) {}
    static XRational inf() {
        XRational x;
        x.infinite = true;
        return x;
    }

    bool operator==(const XRational& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool operator<(const XRational& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
    bool operator>(const XRational& o) const { return o < *this; }
    bool operator<=(const XRational& o) const { return !(o < *this); }
    bool operator>=(const XRational& o) const { return !(*this < o); }
};

XRational xmin(const XRational& a, const XRational& b);
XRational xmax(const XRational& a, const XRational& b);
// 1/x for x ≥ 0 with 1/0 = ∞ and 1/∞ = 0.
XRational reciprocal(const XRational& x);
// a / (b)_+ for a > 0: +∞ when b ≤ 0.
XRational over_positive_part(const Rational& a, const Rational& b);
XRational operator+(const XRational& a, const Rational& b);
XRational operator*(const Rational& a, const XRational& b);

Rational rmin(const Rational& a, const Rational& b);
Rational rmax(const Rational& a, const Rational& b);

// Accepts "3", "-2", "3/2", "1.25", "1e-3"; "inf" only through parse_xrational.
Rational parse_rational(const std::string& s);
XRational parse_xrational(const std::string& s);
std::string to_string(const Rational& r);
std::string to_string(const XRational& r);
double to_double(const Rational& r);
double to_double(const XRational& r);

}  // namespace hcone
