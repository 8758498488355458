#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcone/cone.hpp"
#include "hcone/rational.hpp"

namespace hcone {

using RExponent = std::array<Rational, 2>;

// Index values at one p. p_sharp = min(p, p'); q_nu_p = p_sharp·q_nu and
// q_nu_p_conj is its conjugate exponent q'_ν(p).
struct Indices {
    XRational p;
    XRational p_sharp;
    XRational q_nu;
    XRational p_nu;
    XRational q_nu_p;
    XRational q_nu_p_conj;
    XRational q_tilde;
};

// Lorentz tubes need ν_j > m_j/2; Siegel domains (b ≠ 0) need ν_j > (m_j+n_j+b_j)/2.
// Throws ValidationError naming the violated threshold.
void check_region_admissible(const RExponent& nu, const ConeStructure& c);
Indices indices(const RExponent& nu, const ConeStructure& c, const XRational& p);
XRational conjugate(const XRational& p);

// Exact plane geometry in (u, v) = (1/p, 1/q).
struct Point2 {
    Rational u;
    Rational v;
    bool operator==(const Point2& o) const { return u == o.u && v == o.v; }
    bool operator<(const Point2& o) const { return u < o.u || (u == o.u && v < o.v); }
};

// a·u + b·v ≤ c, strict when open.
struct HalfPlane {
    Rational a, b, c;
    bool open = false;
    bool contains(const Point2& p) const;
};

HalfPlane u_at_least(const Rational& x, bool open);
HalfPlane u_at_most(const Rational& x, bool open);
// v > alpha + beta·u and v < alpha + beta·u.
HalfPlane v_above(const Rational& alpha, const Rational& beta, bool open = true);
HalfPlane v_below(const Rational& alpha, const Rational& beta, bool open = true);

// Convex polygon, counter-clockwise; edge i runs from vertex i to vertex i+1.
struct Polygon {
    std::vector<Point2> vertices;
    std::vector<bool> edge_open;
    std::string label;
    bool derived = false;  // produced by a closure operation

    Rational twice_area() const;
    bool contains(const Point2& p) const;         // respects open edges
    bool contains_closed(const Point2& p) const;  // topological closure
};

// Clip to a half-plane; edges created along the clipping line take its openness.
Polygon clip(const Polygon& poly, const HalfPlane& h);
// The base square u ∈ [0,1], v ∈ (0,1) cut by the constraints; nullopt if the
// result has zero area.
std::optional<Polygon> make_polygon(const std::vector<HalfPlane>& constraints, const std::string& label);

struct PQRegion {
    std::string name;
    std::vector<Polygon> polygons;

    bool contains(const Point2& p) const;
    bool empty() const { return polygons.empty(); }
};

// Same vertex cycle, flags and label, starting from the smallest vertex.
Polygon canonical(const Polygon& poly);
// Equal as sets of polygons (vertices and edge flags), labels ignored.
bool same_polygons(const PQRegion& a, const PQRegion& b);

// (u, v) ↦ (1−u, 1−v) applied to every polygon.
PQRegion mirror(const PQRegion& r);
// r together with its mirror image.
PQRegion symmetrize(const PQRegion& r);
// Adds the convex hull of every connected group of polygons. A hull edge is
// closed only where closed generator edges cover it.
PQRegion hull_closure(const PQRegion& r);
PQRegion closure_ops(const PQRegion& r, bool symmetric);

// Intervals of v on the vertical line u = u0, merged across polygons.
struct VInterval {
    Rational lo, hi;
    bool lo_open = true, hi_open = true;
};
std::vector<VInterval> v_intervals(const PQRegion& r, const Rational& u0);

// Open q-interval; empty when lo >= hi.
struct QInterval {
    XRational lo;
    XRational hi;
    bool empty() const { return lo >= hi; }
};

// 1/(q_ν p♯') < 1/q < 1 − 1/(q_ν p♯') over 0 ≤ 1/p ≤ 1, split at 1/p = 1/2.
// Needs ν_j > (m_j + n_j + b_j)/2.
PQRegion region_general(const RExponent& nu, const ConeStructure& c);
// The general region for the tube over the same cone, cut to q ≥ 2.
PQRegion region_strip(const RExponent& nu, const ConeStructure& c);
// Lorentz tube, ν₁ > n/2 − 1, ν₂ > 0. Branch k = 1..5 alone (empty when its
// ν-case does not apply); the full region adds the hull of the branches.
PQRegion region_lorentz_branch(const RExponent& nu, int n, int k);
PQRegion region_lorentz(const RExponent& nu, int n, bool with_hull = true);
// Pyateckii-Shapiro domain, ν₁ > 1/2, ν₂ > 1: branches 1..3, then mirror and hull.
PQRegion region_ps_branch(const RExponent& nu, int k);
PQRegion region_ps(const RExponent& nu, bool with_closure = true);
// Region obtained from the decoupling inequality (three branches, with the
// 2(ν₁ − n/2 + 1)/(n/2 − 1 − n/p) caps).
PQRegion region_lorentz_decoupling(const RExponent& nu, int n);
// p > 2n/(n−2), 2 < q < q̃_{ν,p}, obtained by interpolation.
PQRegion region_lorentz_wedge(const RExponent& nu, int n);

// q-interval on which the positive-kernel operator P⁺_μ is bounded on L^{p,q}_ν:
// per j (ν_j − m_j/2 − b_j/2 + n_j/2)/(μ_j − m_j/2 − b_j/2) < q < 1 + (ν_j − m_j/2 − b_j/2)/(n_j/2).
struct PositiveProjectorInterval {
    std::array<QInterval, 2> per_j;
    QInterval combined;
};
PositiveProjectorInterval positive_projector_interval(const RExponent& mu, const RExponent& nu, const ConeStructure& c);

// γ_j-intervals of the two Schur equations and their intersection. The
// structure constants are passed explicitly (ConeStructure m and nn, b = 0 for tubes).
struct SchurFeasibility {
    std::array<std::pair<Rational, Rational>, 2> forward;  // from (q)
    std::array<std::pair<Rational, Rational>, 2> adjoint;  // from (q')
    std::array<std::pair<Rational, Rational>, 2> gamma;    // intersection
    std::array<bool, 2> nonempty{};
    // α_j q + ν_j > (q−1)n_j/2 + m_j/2 + b_j/2 and μ_j q − ν_j > n_j/2 + (q−1)(m_j/2 + b_j/2)
    std::array<bool, 2> conditions{};
};
SchurFeasibility schur_feasibility(const RExponent& mu, const RExponent& alpha, const RExponent& nu,
                                   const Rational& q, const std::array<Rational, 2>& m,
                                   const std::array<Rational, 2>& nn, const std::array<Rational, 2>& b);
SchurFeasibility schur_feasibility(const RExponent& mu, const RExponent& alpha, const RExponent& nu,
                                   const Rational& q, const ConeStructure& c);

struct SvgOptions {
    std::string title;
    std::vector<std::pair<Rational, std::string>> u_ticks;
    std::vector<std::pair<Rational, std::string>> v_ticks;
    std::string timestamp;  // written as a comment when non-empty
};
std::string emit_svg(const PQRegion& r, const SvgOptions& opt);
// Header branch,vertex_index,inv_p,inv_q,edge_open; edge_open is the edge leaving the vertex.
std::string emit_csv(const PQRegion& r);

RExponent parse_rexponent(const std::string& s);
Exponent to_exponent(const RExponent& r);

}  // namespace hcone
