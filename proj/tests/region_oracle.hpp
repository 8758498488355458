#pragma once

#include "hcone/rational.hpp"

// Membership of the (1/p, 1/q) regions, written directly from the inequalities.
namespace region_oracle {

using R = hcone::Rational;

inline R pos(const R& x) { return x > 0 ? x : R(0); }
inline R rmax2(const R& a, const R& b) { return a > b ? a : b; }
inline R rmin2(const R& a, const R& b) { return a < b ? a : b; }

// Lorentz-cone notation, written out directly from the index definitions.
struct Lorentz {
    R n, nu1, nu2;
    R half() const { return n / 2 - 1; }
    R q_nu() const { return 1 + nu2 / half(); }
    R inv_p_nu() const {
        R d = pos(half() - nu2);
        return d == 0 ? R(0) : d / (d + nu2 + n / 2);
    }
    R inv_p_sharp(const R& u) const { return rmax2(u, 1 - u); }
    R inv_q_nu_p(const R& u) const { return inv_p_sharp(u) / q_nu(); }
    R inv_q_tilde(const R& u) const { return pos(n * (1 - u) / 2 - 1) / (nu2 + half()); }
    R crit() const { return (n - 2) / (2 * n); }  // 1/p at p = 2n/(n−2)
};

inline bool lorentz_branch(const Lorentz& L, int k, const R& u, const R& v) {
    const bool dual_window = v > L.inv_q_nu_p(u) && v < 1 - L.inv_q_nu_p(u);
    switch (k) {
        case 1:
            if (!(L.nu2 > 0 && L.nu2 < L.half())) return false;
            return u > (L.half() - L.nu2) / (L.n - 2) && u < (L.nu2 + L.half()) / (L.n - 2) && dual_window;
        case 2:
            return L.nu2 >= L.half() && dual_window;
        case 3:
            return u >= L.crit() && u <= R(1, 2) && u > L.inv_p_nu() && v > 1 / (2 * L.q_nu()) &&
                   v < 1 - L.inv_q_nu_p(u);
        case 4:
            if (!(L.nu2 > L.crit() && L.nu2 < L.half())) return false;
            return u > L.inv_p_nu() && u < L.crit() && v > L.inv_q_tilde(u) && v < R(1, 2);
        case 5:  // "p > 2n/(n−2)" is read as finite p, so 1/p = 0 is excluded
            return L.nu2 >= L.half() && u > 0 && u < L.crit() && v > L.inv_q_tilde(u) && v < R(1, 2);
    }
    return false;
}

inline bool ps_branch(const R& nu2, int k, const R& u, const R& v) {
    switch (k) {
        case 1: {
            R a = rmax2(u, 1 - u) / (2 * nu2);  // 1/(2 p♯ ν₂)
            return v > a && v < 1 - a;
        }
        case 2:
            return u >= R(1, 6) && u <= R(1, 2) && v > 1 / (4 * nu2) && v < 1 - (1 - u) / (2 * nu2);
        case 3:
            return u > 0 && u < R(1, 6) && v < R(1, 2) && v > (R(1, 2) - 3 * u / 2) / nu2;
    }
    return false;
}

inline bool general_region(const R& q_nu, const R& u, const R& v) {
    R a = (u <= R(1, 2) ? 1 - u : u) / q_nu;
    return v > a && v < 1 - a;
}

}  // namespace region_oracle
