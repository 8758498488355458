#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace hcone {

using Exponent = std::array<double, 2>;
using Vec = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

enum class ConeKind { Lorentz, Spherical3 };

// Largest off-diagonal block handled by the fixed-size kernels (n <= 8).
inline constexpr int kMaxOff = 6;

// Structural constants of a rank-2 cone. m/nn/tau/b carry the labelling used by
// the index formulas; frame_m/frame_nn give the same constants in the order of the
// implemented power functions Q1 = Δ1, Q2 = Δ2/Δ1 (see README, "Conventions").
struct ConeStructure {
    ConeKind kind = ConeKind::Lorentz;
    int n = 3;
    int rank = 2;
    std::array<int, 2> m{};
    std::array<int, 2> nn{};
    std::array<double, 2> tau{};
    std::array<int, 2> b{};
    double boundary_eps = 1e-12;

    static ConeStructure lorentz(int n);
    static ConeStructure spherical();

    int off_dim() const { return n - 2; }
    std::array<int, 2> frame_m() const { return {m[1], m[0]}; }
    std::array<int, 2> frame_nn() const { return {nn[1], nn[0]}; }
    // Copy with b = 0, i.e. the tube domain over the same cone.
    ConeStructure tube() const;
    std::string name() const;
};

// Rank-2 "matrix" coordinates: a11, a12 in R^d (or C^d), a22.
template <class T>
struct Sym2T {
    T a11{};
    std::array<T, kMaxOff> a12{};
    T a22{};
    int d = 1;

    T off_square() const {
        T s{};
        for (int k = 0; k < d; ++k) s += a12[k] * a12[k];
        return s;
    }
    T det() const { return a11 * a22 - off_square(); }
};
using Sym2 = Sym2T<double>;
using CSym2 = Sym2T<std::complex<double>>;

struct TriangularElement {
    double diag1 = 1.0;  // ρ(t11)
    double diag2 = 1.0;  // ρ(t22)
    Vec off;             // length n-2

    static TriangularElement identity(const ConeStructure& c);
};

Vec base_point(const ConeStructure& c);

Sym2 to_sym(const ConeStructure& c, std::span<const double> y);
CSym2 to_sym(const ConeStructure& c, std::span<const std::complex<double>> y);
Vec from_sym(const ConeStructure& c, const Sym2& s);

// Jacobian of the ambient-to-sym change of coordinates, dy = factor * dY.
double lebesgue_factor(const ConeStructure& c);
// (x|ξ): Euclidean for Lorentz, x11ξ11 + 2x12ξ12 + x22ξ22 for Spherical3.
double pairing(const ConeStructure& c, std::span<const double> x, std::span<const double> xi);
// Factor κ with (x|ξ) = κ·tr(XΞ) in sym coordinates.
double pairing_factor(const ConeStructure& c);

std::array<double, 2> delta(const ConeStructure& c, std::span<const double> y);
bool in_cone(const ConeStructure& c, std::span<const double> y);
std::array<double, 2> q_values(const ConeStructure& c, std::span<const double> y);
double q_power(const ConeStructure& c, std::span<const double> y, const Exponent& alpha);

TriangularElement triangular_decompose(const ConeStructure& c, std::span<const double> y);
Vec group_act(const ConeStructure& c, const TriangularElement& t, std::span<const double> y);
Vec group_act_e(const ConeStructure& c, const TriangularElement& t);
TriangularElement compose(const TriangularElement& a, const TriangularElement& b);
TriangularElement inverse(const TriangularElement& t);
// Matrix of y -> π(t)[y] in ambient coordinates, row-major n x n.
std::vector<double> group_matrix(const ConeStructure& c, const TriangularElement& t);

// Dual side: ξ -> π(t*)[ξ], Q*_j and (Q*)^α.
Vec dual_group_act(const ConeStructure& c, const TriangularElement& t, std::span<const double> xi);
Vec dual_group_act_e(const ConeStructure& c, const TriangularElement& t);
bool in_dual_cone(const ConeStructure& c, std::span<const double> xi);
std::array<double, 2> dual_q_values(const ConeStructure& c, std::span<const double> xi);
double dual_power(const ConeStructure& c, std::span<const double> xi, const Exponent& alpha);

std::array<double, 2> spectral_values(const ConeStructure& c, std::span<const double> y);
// Normalised so that d(e, λe) = kDistanceScale * |log λ|.
inline const double kDistanceScale = 1.4142135623730951;
double invariant_distance(const ConeStructure& c, std::span<const double> y1,
                          std::span<const double> y2);

}  // namespace hcone
