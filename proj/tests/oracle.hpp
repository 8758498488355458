#pragma once

// Small stand-alone quadrature used only as an oracle in tests. Nothing here
// calls the library's integrators.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

// ∫_a^b f, composite Gauss-Legendre on `panels` equal pieces.
template <class F>
double interval(F&& f, double a, double b, int panels = 16, int order = 20) {
    static thread_local auto gl = gauss_legendre(order);
    if (static_cast<int>(gl.first.size()) != order) gl = gauss_legendre(order);
    const double h = (b - a) / panels;
    double s = 0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int i = 0; i < order; ++i) s += gl.second[i] * f(mid + 0.5 * h * gl.first[i]);
    }
    return 0.5 * h * s;
}

// ∫_0^∞ f via x = e^t over t ∈ [lo, hi].
template <class F>
double half_line(F&& f, double lo = -30, double hi = 6, int panels = 72) {
    return interval([&](double t) { double x = std::exp(t); return x * f(x); }, lo, hi, panels);
}

// ∫_{R³} |Δ(e − ix)|^{−s} dx on the Lorentz cone Λ3, Δ(y) = y1² − y2² − y3².
// With x1 = ρ sinh t, |x'| = ρ cosh t inside the light cone and x1 = ±ρ cosh t,
// |x'| = ρ sinh t outside, |Δ|² = (1 ± ρ²)² + 4ρ² sinh²t (resp. cosh²t).
inline double lorentz3_x_integral(double s) {
    const double pi = std::numbers::pi;
    double inside = half_line([&](double rho) {
        return interval(
            [&](double t) {
                double sh = std::sinh(t);
                double m2 = std::pow(1 + rho * rho, 2) + 4 * rho * rho * sh * sh;
                return 2 * pi * rho * std::cosh(t) * rho * std::pow(m2, -0.5 * s);
            },
            -15, 15, 30);
    }, -30, 16, 92);
    double outside = half_line([&](double rho) {
        return interval(
            [&](double t) {
                double ch = std::cosh(t);
                double m2 = std::pow(1 - rho * rho, 2) + 4 * rho * rho * ch * ch;
                return 4 * pi * rho * std::sinh(t) * rho * std::pow(m2, -0.5 * s);
            },
            0, 15, 15);
    }, -30, 16, 92);
    return inside + outside;
}

}  // namespace oracle
