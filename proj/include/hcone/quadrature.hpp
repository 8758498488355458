#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include "hcone/cone.hpp"
#include "hcone/errors.hpp"

namespace hcone {

enum class Scheme { Trapezoid, MonteCarlo };

struct QuadratureSpec {
    Scheme scheme = Scheme::Trapezoid;
    // Trapezoid step in the mapped (log / asinh) variables, and the grid offset
    // as a fraction of the step. Two offsets give the error estimate.
    double step = 0.25;
    double offset = 0.0;
    double tail_tol = 1e-10;
    int max_steps = 600;
    double tol = 1e-6;
    // Truncated product grids (mixed norms, U-grid operators).
    double r_x = 8.0;
    double eps_y = 1e-3;
    double r_y = 20.0;
    double r_u = 4.0;
    int nodes = 24;
    // Monte-Carlo.
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 20240917;
};

// Σ_k h·g(center + (k + offset)h) over k ∈ Z. Each direction stops once the
// geometric tail estimate drops below tail_tol·|sum|; running out of steps
// means the integral does not converge.
template <class T, class G>
T march(G&& g, double center, const QuadratureSpec& q) {
    const double h = q.step;
    T sum{};
    for (int dir : {1, -1}) {
        double prev = -1.0;
        int steps = 0;
        for (long k = dir > 0 ? 0 : -1;; k += dir) {
            T t = g(center + (static_cast<double>(k) + q.offset) * h);
            sum += t;
            double a = std::abs(t);
            if (!std::isfinite(a)) throw DivergenceError("integrand not finite");
            ++steps;
            if (steps >= 4) {
                if (a == 0.0 && prev == 0.0) break;
                if (prev > 0.0) {
                    double r = a / prev;
                    if (r < 1.0 && a * r / (1.0 - r) <= q.tail_tol * std::abs(sum)) break;
                }
            }
            if (steps > q.max_steps)
                throw DivergenceError("integral does not settle: tail does not decay");
            prev = a;
        }
    }
    return sum * h;
}

// Coordinates on the cone used by the integrators: Y11 = q1, Y12 = √q1·(w + shear·√q1),
// Y22 = |Y12|²/q1 + q2. Lebesgue measure dY = q1^{d/2} dq1 dq2 dw.
struct ConeChart {
    double s1_center = 0.0;  // log q1
    double s2_center = 0.0;  // log q2
    double w_scale = 1.0;    // w = w_scale·sinh(σ)
    std::array<double, kMaxOff> shear{};
};

namespace detail {

template <class T, class F>
struct ConeIntegrator {
    const ConeStructure& c;
    const ConeChart& chart;
    const QuadratureSpec& q;
    F& f;
    int d;

    T over_w(Sym2& y, double q1, double q2, int level, double wsq) const {
        if (level == d) {
            y.a22 = wsq / q1 + q2;
            return f(y, q1, q2);
        }
        const double rq = std::sqrt(q1);
        return march<T>(
            [&](double sig) {
                double w = chart.w_scale * std::sinh(sig);
                double jac = chart.w_scale * std::cosh(sig);
                y.a12[level] = rq * (w + chart.shear[level] * rq);
                double v = y.a12[level];
                return T(jac * over_w(y, q1, q2, level + 1, wsq + v * v));
            },
            0.0, q);
    }

    T run() const {
        Sym2 y;
        y.d = d;
        return march<T>(
            [&](double s1) {
                double q1 = std::exp(s1);
                y.a11 = q1;
                double jac1 = q1 * std::pow(q1, 0.5 * d);
                return T(jac1 * march<T>(
                                    [&](double s2) {
                                        double q2 = std::exp(s2);
                                        return T(q2 * over_w(y, q1, q2, 0, 0.0));
                                    },
                                    chart.s2_center, q));
            },
            chart.s1_center, q);
    }
};

template <class T, class F>
struct SpaceIntegrator {
    int n;
    const std::array<double, 8>& centers;
    const std::array<double, 8>& scales;
    const QuadratureSpec& q;
    F& f;

    T level(std::array<double, 8>& x, int k) const {
        if (k == n) return f(x);
        return march<T>(
            [&](double sig) {
                x[k] = centers[k] + scales[k] * std::sinh(sig);
                return T(scales[k] * std::cosh(sig) * level(x, k + 1));
            },
            0.0, q);
    }
};

}  // namespace detail

// ∫_Ω f(Y, q1, q2) dY in sym coordinates (multiply by lebesgue_factor for dy).
// The chart values q1 = Q1, q2 = Q2 are passed along to avoid cancellation in Y22 − |Y12|²/Y11.
template <class T, class F>
T integrate_cone(const ConeStructure& c, const ConeChart& chart, const QuadratureSpec& q, F&& f) {
    detail::ConeIntegrator<T, std::remove_reference_t<F>> I{c, chart, q, f, c.off_dim()};
    return I.run();
}

// ∫_{R^n} f(x) dx with per-axis sinh maps; n ≤ 8.
template <class T, class F>
T integrate_space(int n, const std::array<double, 8>& centers, const std::array<double, 8>& scales,
                  const QuadratureSpec& q, F&& f) {
    detail::SpaceIntegrator<T, std::remove_reference_t<F>> I{n, centers, scales, q, f};
    std::array<double, 8> x{};
    return I.level(x, 0);
}

template <class T>
struct Checked {
    T value{};
    double error = 0.0;
};

// Runs a trapezoid integral on two grids offset by half a step. Their errors are
// of opposite sign, so the mean is returned and half the gap is the estimate.
// The step is halved once before giving up with ConvergenceError.
template <class T, class Run>
Checked<T> checked(const QuadratureSpec& q, Run&& run) {
    QuadratureSpec a = q;
    for (int attempt = 0; attempt < 2; ++attempt) {
        a.offset = 0.0;
        T v0 = run(a);
        a.offset = 0.5;
        T v1 = run(a);
        T mean = (v0 + v1) * 0.5;
        double err = 0.5 * std::abs(v0 - v1);
        if (err <= q.tol * std::abs(mean)) return {mean, err};
        a.step *= 0.5;
    }
    throw ConvergenceError("quadrature refinements disagree beyond tolerance");
}

}  // namespace hcone
