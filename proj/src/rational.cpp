#include "hcone/rational.hpp"

#include <cctype>
#include <limits>

#include "hcone/errors.hpp"

namespace hcone {

XRational xmin(const XRational& a, const XRational& b) { return b < a ? b : a; }
XRational xmax(const XRational& a, const XRational& b) { return a < b ? b : a; }

XRational reciprocal(const XRational& x) {
    if (x.infinite) return XRational(Rational(0));
    if (x.value < 0) throw ValidationError("reciprocal of a negative extended rational");
    if (x.value == 0) return XRational::inf();
    return XRational(Rational(1) / x.value);
}

XRational over_positive_part(const Rational& a, const Rational& b) {
    if (b <= 0) return XRational::inf();
    return XRational(a / b);
}

XRational operator+(const XRational& a, const Rational& b) {
    if (a.infinite) return a;
    return XRational(a.value + b);
}

XRational operator*(const Rational& a, const XRational& b) {
    if (b.infinite) {
        if (a <= 0) throw ValidationError("non-positive multiple of infinity");
        return b;
    }
    return XRational(a * b.value);
}

Rational rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ValidationError("empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw ValidationError("zero denominator in '" + raw + "'");
        return num / den;
    }
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    boost::multiprecision::cpp_int mant = 0, scale = 1;
    bool digits = false, dot = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        char ch = s[i];
        if (ch == '.') {
            if (dot) throw ValidationError("malformed number '" + raw + "'");
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            mant = mant * 10 + (ch - '0');
            if (dot) scale *= 10;
            digits = true;
        } else {
            throw ValidationError("malformed number '" + raw + "'");
        }
    }
    if (!digits) throw ValidationError("malformed number '" + raw + "'");
    Rational r(mant, scale);
    if (i < s.size()) {
        std::string ex = s.substr(i + 1);
        if (ex.empty()) throw ValidationError("malformed exponent in '" + raw + "'");
        int e = 0;
        try {
            std::size_t used = 0;
            e = std::stoi(ex, &used);
            if (used != ex.size()) throw ValidationError("malformed exponent in '" + raw + "'");
        } catch (const std::logic_error&) {
            throw ValidationError("malformed exponent in '" + raw + "'");
        }
        if (e > 300 || e < -300) throw ValidationError("exponent out of range in '" + raw + "'");
        boost::multiprecision::cpp_int p = 1;
        for (int k = 0; k < (e < 0 ? -e : e); ++k) p *= 10;
        r = e < 0 ? r / Rational(p) : r * Rational(p);
    }
    return neg ? Rational(-r) : r;
}

XRational parse_xrational(const std::string& s) {
    if (s == "inf" || s == "+inf" || s == "infinity") return XRational::inf();
    return XRational(parse_rational(s));
}

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_string(const XRational& r) { return r.infinite ? "inf" : to_string(r.value); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

double to_double(const XRational& r) {
    return r.infinite ? std::numeric_limits<double>::infinity() : to_double(r.value);
}

}  // namespace hcone
