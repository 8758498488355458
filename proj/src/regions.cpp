#include "hcone/regions.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "hcone/errors.hpp"

namespace hcone {

namespace {

const char* kSub[2] = {"₁", "₂"};

Rational half(const Rational& x) { return x / 2; }

XRational xmul(const XRational& a, const XRational& b) {
    if (a.infinite || b.infinite) {
        if ((!a.infinite && a.value <= 0) || (!b.infinite && b.value <= 0))
            throw ValidationError("non-positive multiple of infinity");
        return XRational::inf();
    }
    return XRational(a.value * b.value);
}

std::array<Rational, 2> rarr(const std::array<int, 2>& a) { return {Rational(a[0]), Rational(a[1])}; }

void require_greater(const RExponent& nu, int j, const Rational& bound) {
    if (!(nu[j] > bound))
        throw ValidationError(std::string("inadmissible ν: need ν") + kSub[j] + " > " +
                              to_string(bound) + ", got ν" + kSub[j] + " = " + to_string(nu[j]));
}

// ν_j > (m_j + n_j + b_j)/2 for every j.
void require_general(const RExponent& nu, const ConeStructure& c) {
    for (int j = 0; j < 2; ++j) require_greater(nu, j, Rational(c.m[j] + c.nn[j] + c.b[j], 2));
}

void require_lorentz(const RExponent& nu, int n) {
    if (n < 3) throw ValidationError("Lorentz cone needs n >= 3");
    require_greater(nu, 0, Rational(n - 2, 2));
    require_greater(nu, 1, Rational(0));
}

Rational cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

Rational side(const HalfPlane& h, const Point2& p) { return h.c - h.a * p.u - h.b * p.v; }

// Drop zero-length edges; merge collinear neighbours with equal flags.
Polygon tidy(Polygon p) {
    bool changed = true;
    while (changed && p.vertices.size() >= 2) {
        changed = false;
        const std::size_t k = p.vertices.size();
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = (i + 1) % k;
            if (p.vertices[i] == p.vertices[j]) {
                // Edge i is degenerate; vertex j keeps its outgoing edge.
                p.vertices.erase(p.vertices.begin() + i);
                p.edge_open.erase(p.edge_open.begin() + i);
                changed = true;
                break;
            }
        }
        if (changed || p.vertices.size() < 3) continue;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t prev = (i + k - 1) % k, next = (i + 1) % k;
            if (cross(p.vertices[prev], p.vertices[i], p.vertices[next]) == 0 &&
                p.edge_open[prev] == p.edge_open[i]) {
                p.vertices.erase(p.vertices.begin() + i);
                p.edge_open.erase(p.edge_open.begin() + i);
                changed = true;
                break;
            }
        }
    }
    return p;
}

Polygon base_square() {
    Polygon p;
    p.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    p.edge_open = {true, false, true, false};  // v = 0 and v = 1 are excluded
    return p;
}

void add_polygon(PQRegion& r, const std::vector<HalfPlane>& cs, const std::string& label) {
    if (auto p = make_polygon(cs, label)) r.polygons.push_back(*p);
}

// r1 (1−u) < v < 1 − r1 (1−u) on the left half and r1 u < v < 1 − r1 u on the
// right half, restricted to the given u-window.
void add_strip(PQRegion& r, const Rational& r1, const HalfPlane& lo, const HalfPlane& hi,
               const std::string& label) {
    add_polygon(r, {lo, hi, u_at_most(Rational(1, 2), false), v_above(r1, -r1), v_below(1 - r1, r1)},
                label + ".left");
    add_polygon(r, {lo, hi, u_at_least(Rational(1, 2), false), v_above(0, r1), v_below(1, -r1)},
                label + ".right");
}

bool polygons_touch(const Polygon& a, const Polygon& b) {
    // Separating axis test on closed convex polygons; touching counts as connected.
    for (const Polygon* p : {&a, &b}) {
        const std::size_t k = p->vertices.size();
        for (std::size_t i = 0; i < k; ++i) {
            const Point2& s = p->vertices[i];
            const Point2& t = p->vertices[(i + 1) % k];
            // Outward normal of a CCW edge is (dv, −du).
            Rational nu = t.v - s.v, nv = s.u - t.u;
            Rational amax = nu * s.u + nv * s.v;
            const Polygon* q = p == &a ? &b : &a;
            bool all_beyond = true;
            for (const Point2& x : q->vertices)
                if (nu * x.u + nv * x.v <= amax) {
                    all_beyond = false;
                    break;
                }
            if (all_beyond) return false;
        }
    }
    return true;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// True if closed generator edges lying on segment [a, b] cover all of it.
bool covered_by_closed_edges(const Point2& a, const Point2& b, const std::vector<const Polygon*>& gens) {
    const Rational du = b.u - a.u, dv = b.v - a.v;
    const Rational len2 = du * du + dv * dv;
    std::vector<std::pair<Rational, Rational>> spans;
    for (const Polygon* g : gens) {
        const std::size_t k = g->vertices.size();
        for (std::size_t i = 0; i < k; ++i) {
            if (g->edge_open[i]) continue;
            const Point2& s = g->vertices[i];
            const Point2& t = g->vertices[(i + 1) % k];
            if (cross(a, b, s) != 0 || cross(a, b, t) != 0) continue;
            Rational ts = ((s.u - a.u) * du + (s.v - a.v) * dv) / len2;
            Rational tt = ((t.u - a.u) * du + (t.v - a.v) * dv) / len2;
            if (tt < ts) std::swap(ts, tt);
            spans.emplace_back(ts, tt);
        }
    }
    std::sort(spans.begin(), spans.end());
    Rational reach(0);
    bool started = false;
    for (const auto& [lo, hi] : spans) {
        if (lo > reach) break;
        if (lo <= 0) started = true;
        if (hi > reach) reach = hi;
    }
    return started && reach >= 1;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- indices

XRational conjugate(const XRational& p) {
    if (p.infinite) return XRational(Rational(1));
    if (p.value < 1) throw ValidationError("exponent must be >= 1, got " + to_string(p.value));
    if (p.value == 1) return XRational::inf();
    return XRational(p.value / (p.value - 1));
}

void check_region_admissible(const RExponent& nu, const ConeStructure& c) {
    if (c.kind == ConeKind::Lorentz && c.b == std::array<int, 2>{0, 0}) {
        for (int j = 0; j < 2; ++j) require_greater(nu, j, Rational(c.m[j], 2));
    } else {
        require_general(nu, c);
    }
}

Indices indices(const RExponent& nu, const ConeStructure& c, const XRational& p) {
    check_region_admissible(nu, c);
    const auto m = rarr(c.m), nj = rarr(c.nn), b = rarr(c.b);
    const Rational n(c.n);
    Indices ix;
    ix.p = p;
    XRational pc = conjugate(p);
    ix.p_sharp = xmin(p, pc);

    XRational qmin = XRational::inf();
    for (int j = 0; j < 2; ++j)
        if (nj[j] != 0) qmin = xmin(qmin, XRational((nu[j] - half(m[j]) - half(b[j])) / half(nj[j])));
    ix.q_nu = qmin + Rational(1);

    // p_ν and q̃ are tube indices at the shifted weight ν − b/2.
    const RExponent shifted{nu[0] - half(b[0]), nu[1] - half(b[1])};
    XRational pmin = XRational::inf();
    for (int j = 0; j < 2; ++j)
        pmin = xmin(pmin, over_positive_part(shifted[j] + half(n), half(nj[j]) - shifted[j]));
    ix.p_nu = pmin + Rational(1);

    ix.q_nu_p = xmul(ix.p_sharp, ix.q_nu);
    ix.q_nu_p_conj = conjugate(ix.q_nu_p);

    const Rational n_over_2pc = pc.infinite ? Rational(0) : n / (2 * pc.value);
    XRational qt = XRational::inf();
    for (int j = 0; j < 2; ++j)
        qt = xmin(qt, over_positive_part(shifted[j] + half(nj[j]), n_over_2pc - 1 - half(m[j])));
    ix.q_tilde = qt;
    return ix;
}

// ---------------------------------------------------------------- geometry

bool HalfPlane::contains(const Point2& p) const {
    Rational s = side(*this, p);
    return open ? s > 0 : s >= 0;
}

HalfPlane u_at_least(const Rational& x, bool open) { return {-1, 0, -x, open}; }
HalfPlane u_at_most(const Rational& x, bool open) { return {1, 0, x, open}; }
HalfPlane v_above(const Rational& alpha, const Rational& beta, bool open) { return {beta, -1, -alpha, open}; }
HalfPlane v_below(const Rational& alpha, const Rational& beta, bool open) { return {-beta, 1, alpha, open}; }

Rational Polygon::twice_area() const {
    Rational s(0);
    const std::size_t k = vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % k];
        s += a.u * b.v - a.v * b.u;
    }
    return s;
}

bool Polygon::contains(const Point2& p) const {
    const std::size_t k = vertices.size();
    if (k < 3) return false;
    for (std::size_t i = 0; i < k; ++i) {
        Rational c = cross(vertices[i], vertices[(i + 1) % k], p);
        if (c < 0) return false;
        if (c == 0 && edge_open[i]) return false;
    }
    return true;
}

bool Polygon::contains_closed(const Point2& p) const {
    const std::size_t k = vertices.size();
    if (k < 3) return false;
    for (std::size_t i = 0; i < k; ++i)
        if (cross(vertices[i], vertices[(i + 1) % k], p) < 0) return false;
    return true;
}

Polygon clip(const Polygon& poly, const HalfPlane& h) {
    Polygon out;
    out.label = poly.label;
    out.derived = poly.derived;
    const std::size_t k = poly.vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Point2& P = poly.vertices[i];
        const Point2& Q = poly.vertices[(i + 1) % k];
        const Rational sp = side(h, P), sq = side(h, Q);
        const bool flag = poly.edge_open[i];
        auto cut = [&] {
            Rational t = sp / (sp - sq);
            return Point2{P.u + t * (Q.u - P.u), P.v + t * (Q.v - P.v)};
        };
        if (sp >= 0 && sq >= 0) {
            // An edge lying on the clipping line inherits its openness too.
            bool on_line = sp == 0 && sq == 0;
            out.vertices.push_back(P);
            out.edge_open.push_back(on_line ? (flag || h.open) : flag);
        } else if (sp >= 0 && sq < 0) {
            if (sp == 0) {
                out.vertices.push_back(P);
                out.edge_open.push_back(h.open);
            } else {
                out.vertices.push_back(P);
                out.edge_open.push_back(flag);
                out.vertices.push_back(cut());
                out.edge_open.push_back(h.open);
            }
        } else if (sp < 0 && sq > 0) {
            out.vertices.push_back(cut());
            out.edge_open.push_back(flag);
        }
    }
    return tidy(out);
}

std::optional<Polygon> make_polygon(const std::vector<HalfPlane>& constraints, const std::string& label) {
    Polygon p = base_square();
    p.label = label;
    for (const HalfPlane& h : constraints) {
        p = clip(p, h);
        if (p.vertices.size() < 3) return std::nullopt;
    }
    if (p.twice_area() <= 0) return std::nullopt;
    return p;
}

bool PQRegion::contains(const Point2& p) const {
    for (const Polygon& poly : polygons)
        if (poly.contains(p)) return true;
    return false;
}

Polygon canonical(const Polygon& poly) {
    Polygon out = poly;
    if (poly.vertices.empty()) return out;
    auto it = std::min_element(poly.vertices.begin(), poly.vertices.end());
    std::size_t s = static_cast<std::size_t>(it - poly.vertices.begin());
    std::rotate(out.vertices.begin(), out.vertices.begin() + s, out.vertices.end());
    std::rotate(out.edge_open.begin(), out.edge_open.begin() + s, out.edge_open.end());
    return out;
}

bool same_polygons(const PQRegion& a, const PQRegion& b) {
    if (a.polygons.size() != b.polygons.size()) return false;
    std::vector<Polygon> pa, pb;
    for (const auto& p : a.polygons) pa.push_back(canonical(p));
    for (const auto& p : b.polygons) pb.push_back(canonical(p));
    std::vector<bool> used(pb.size(), false);
    for (const Polygon& p : pa) {
        bool found = false;
        for (std::size_t i = 0; i < pb.size() && !found; ++i) {
            if (used[i]) continue;
            if (pb[i].vertices == p.vertices && pb[i].edge_open == p.edge_open) used[i] = found = true;
        }
        if (!found) return false;
    }
    return true;
}

PQRegion mirror(const PQRegion& r) {
    PQRegion out;
    out.name = r.name;
    for (const Polygon& p : r.polygons) {
        Polygon q = p;
        for (Point2& v : q.vertices) v = {1 - v.u, 1 - v.v};
        // A half-turn keeps the orientation; only the label changes.
        const std::string tag = ".mirror";
        if (q.label.size() >= tag.size() && q.label.compare(q.label.size() - tag.size(), tag.size(), tag) == 0)
            q.label.erase(q.label.size() - tag.size());
        else
            q.label += tag;
        out.polygons.push_back(canonical(q));
    }
    return out;
}

PQRegion symmetrize(const PQRegion& r) {
    PQRegion out = r;
    PQRegion m = mirror(r);
    for (const Polygon& q : m.polygons) {
        PQRegion probe;
        probe.polygons = {q};
        bool dup = false;
        for (const Polygon& p : out.polygons) {
            PQRegion single;
            single.polygons = {p};
            if (same_polygons(single, probe)) {
                dup = true;
                break;
            }
        }
        if (!dup) out.polygons.push_back(q);
    }
    return out;
}

PQRegion hull_closure(const PQRegion& r) {
    PQRegion out = r;
    const std::size_t k = r.polygons.size();
    if (k < 2) return out;
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (polygons_touch(r.polygons[i], r.polygons[j])) parent[find(i)] = find(j);

    int component = 0;
    for (std::size_t root = 0; root < k; ++root) {
        if (find(root) != root) continue;
        std::vector<const Polygon*> gens;
        std::vector<Point2> pts;
        for (std::size_t i = 0; i < k; ++i)
            if (find(i) == root) {
                gens.push_back(&r.polygons[i]);
                pts.insert(pts.end(), r.polygons[i].vertices.begin(), r.polygons[i].vertices.end());
            }
        if (gens.size() < 2) continue;
        Polygon h;
        h.vertices = convex_hull(pts);
        if (h.vertices.size() < 3) continue;
        for (std::size_t i = 0; i < h.vertices.size(); ++i)
            h.edge_open.push_back(
                !covered_by_closed_edges(h.vertices[i], h.vertices[(i + 1) % h.vertices.size()], gens));
        h.label = component == 0 ? "hull" : "hull." + std::to_string(component);
        h.derived = true;
        ++component;
        // Skip hulls that coincide with a generator (the union was already convex
        // and equal to one piece).
        bool redundant = false;
        for (const Polygon* g : gens) {
            PQRegion a, b;
            a.polygons = {*g};
            b.polygons = {h};
            if (same_polygons(a, b)) redundant = true;
        }
        if (!redundant) out.polygons.push_back(canonical(h));
    }
    return out;
}

PQRegion closure_ops(const PQRegion& r, bool symmetric) {
    return hull_closure(symmetric ? symmetrize(r) : r);
}

std::vector<VInterval> v_intervals(const PQRegion& r, const Rational& u0) {
    std::vector<VInterval> pieces;
    for (const Polygon& p : r.polygons) {
        const std::size_t k = p.vertices.size();
        std::vector<Rational> vs;
        for (std::size_t i = 0; i < k; ++i) {
            const Point2& a = p.vertices[i];
            const Point2& b = p.vertices[(i + 1) % k];
            if (a.u == u0) vs.push_back(a.v);
            if ((a.u < u0 && b.u > u0) || (a.u > u0 && b.u < u0))
                vs.push_back(a.v + (b.v - a.v) * (u0 - a.u) / (b.u - a.u));
        }
        if (vs.empty()) continue;
        auto [mn, mx] = std::minmax_element(vs.begin(), vs.end());
        VInterval iv{*mn, *mx, true, true};
        if (iv.lo == iv.hi) continue;
        if (!p.contains({u0, (iv.lo + iv.hi) / 2})) continue;  // along an open edge
        iv.lo_open = !p.contains({u0, iv.lo});
        iv.hi_open = !p.contains({u0, iv.hi});
        pieces.push_back(iv);
    }
    std::sort(pieces.begin(), pieces.end(), [](const VInterval& a, const VInterval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return !a.lo_open && b.lo_open;
    });
    std::vector<VInterval> merged;
    for (const VInterval& iv : pieces) {
        if (!merged.empty()) {
            VInterval& last = merged.back();
            bool joins = iv.lo < last.hi || (iv.lo == last.hi && !(iv.lo_open && last.hi_open));
            if (joins) {
                if (iv.hi > last.hi || (iv.hi == last.hi && !iv.hi_open)) {
                    if (iv.hi > last.hi) last.hi_open = iv.hi_open;
                    else last.hi_open = last.hi_open && iv.hi_open;
                    last.hi = iv.hi;
                }
                continue;
            }
        }
        merged.push_back(iv);
    }
    return merged;
}

// ---------------------------------------------------------------- theorems

PQRegion region_general(const RExponent& nu, const ConeStructure& c) {
    require_general(nu, c);
    Indices ix = indices(nu, c, XRational(Rational(2)));
    Rational r1 = reciprocal(ix.q_nu).value;
    PQRegion r;
    r.name = "general";
    add_strip(r, r1, u_at_least(0, false), u_at_most(1, false), "general");
    return r;
}

PQRegion region_strip(const RExponent& nu, const ConeStructure& c) {
    ConeStructure t = c.tube();
    PQRegion base = region_general(nu, t);
    PQRegion r;
    r.name = "strip";
    for (Polygon p : base.polygons) {
        p = clip(p, v_below(Rational(1, 2), 0, false));
        if (p.vertices.size() >= 3 && p.twice_area() > 0) {
            p.label = "strip" + p.label.substr(std::string("general").size());
            r.polygons.push_back(p);
        }
    }
    return r;
}

PQRegion region_lorentz_branch(const RExponent& nu, int n, int k) {
    require_lorentz(nu, n);
    const Rational h(n - 2, 2);
    const Rational nr(n);
    const Rational crit(n - 2, 2 * n);  // 1/p at p = 2n/(n−2)
    const Rational r1 = h / (nu[1] + h);  // 1/q_ν
    Indices ix = indices(nu, ConeStructure::lorentz(n), XRational(Rational(2)));
    const Rational inv_pnu = reciprocal(ix.p_nu).value;
    // 1/q̃ = (n(1−u)/2 − 1)/(ν₂ + h) where positive.
    const Rational l0 = (nr / 2 - 1) / (nu[1] + h), l1 = -(nr / 2) / (nu[1] + h);
    const std::string tag = "lorentz." + std::to_string(k);
    PQRegion r;
    r.name = tag;
    switch (k) {
        case 1:
            if (nu[1] < h)
                add_strip(r, r1, u_at_least((h - nu[1]) / (nr - 2), true),
                          u_at_most((nu[1] + h) / (nr - 2), true), tag);
            break;
        case 2:
            if (nu[1] >= h) add_strip(r, r1, u_at_least(0, false), u_at_most(1, false), tag);
            break;
        case 3:
            add_polygon(r,
                        {u_at_least(crit, false), u_at_most(Rational(1, 2), false), u_at_least(inv_pnu, true),
                         v_below(1 - r1, r1), v_above(r1 / 2, 0)},
                        tag);
            break;
        case 4:
            if (nu[1] > crit && nu[1] < h)
                add_polygon(r,
                            {u_at_least(inv_pnu, true), u_at_most(crit, true), v_above(l0, l1),
                             v_below(Rational(1, 2), 0)},
                            tag);
            break;
        case 5:
            if (nu[1] >= h)
                add_polygon(r,
                            {u_at_least(0, true), u_at_most(crit, true), v_above(l0, l1),
                             v_below(Rational(1, 2), 0)},
                            tag);
            break;
        default:
            throw ValidationError("branch index must be 1..5");
    }
    return r;
}

PQRegion region_lorentz(const RExponent& nu, int n, bool with_hull) {
    PQRegion r;
    r.name = "lorentz";
    for (int k = 1; k <= 5; ++k) {
        PQRegion b = region_lorentz_branch(nu, n, k);
        r.polygons.insert(r.polygons.end(), b.polygons.begin(), b.polygons.end());
    }
    return with_hull ? closure_ops(r, false) : r;
}

PQRegion region_ps_branch(const RExponent& nu, int k) {
    require_general(nu, ConeStructure::spherical());
    const Rational nu2 = nu[1];
    const std::string tag = "ps." + std::to_string(k);
    PQRegion r;
    r.name = tag;
    switch (k) {
        case 1: {
            // q_ν(p) = 2p♯ν₂
            add_strip(r, 1 / (2 * nu2), u_at_least(0, false), u_at_most(1, false), tag);
            break;
        }
        case 2:
            // 2 ≤ p ≤ 6, ν₂/(ν₂ − 1/(2p')) < q < 4ν₂
            add_polygon(r,
                        {u_at_least(Rational(1, 6), false), u_at_most(Rational(1, 2), false),
                         v_below(1 - 1 / (2 * nu2), 1 / (2 * nu2)), v_above(1 / (4 * nu2), 0)},
                        tag);
            break;
        case 3:
            // p > 6, 2 < q < ν₂/(3/(2p') − 1)
            add_polygon(r,
                        {u_at_least(0, true), u_at_most(Rational(1, 6), true), v_below(Rational(1, 2), 0),
                         v_above(Rational(1, 2) / nu2, Rational(-3, 2) / nu2)},
                        tag);
            break;
        default:
            throw ValidationError("branch index must be 1..3");
    }
    return r;
}

PQRegion region_ps(const RExponent& nu, bool with_closure) {
    PQRegion r;
    r.name = "ps";
    for (int k = 1; k <= 3; ++k) {
        PQRegion b = region_ps_branch(nu, k);
        r.polygons.insert(r.polygons.end(), b.polygons.begin(), b.polygons.end());
    }
    return with_closure ? closure_ops(r, true) : r;
}

PQRegion region_lorentz_decoupling(const RExponent& nu, int n) {
    require_lorentz(nu, n);
    PQRegion r;
    r.name = "decoupling";
    PQRegion first = region_lorentz_branch(nu, n, 3);
    for (Polygon p : first.polygons) {
        p.label = "decoupling.1";
        r.polygons.push_back(p);
    }
    const Rational h(n - 2, 2);
    const Rational nr(n);
    const Rational crit(n - 2, 2 * n);
    const Rational r1 = h / (nu[1] + h);
    Indices ix = indices(nu, ConeStructure::lorentz(n), XRational(Rational(2)));
    const Rational inv_pnu = reciprocal(ix.p_nu).value;
    const Rational l0 = (nr / 2 - 1) / (nu[1] + h), l1 = -(nr / 2) / (nu[1] + h);
    // 1/cap = (h − n u)/(2(ν₁ − h)), cap = 2(ν₁ − h)/(h − n/p).
    const Rational c0 = h / (2 * (nu[0] - h)), c1 = -nr / (2 * (nu[0] - h));
    if (nu[1] < h)
        add_polygon(r,
                    {u_at_least(inv_pnu, true), u_at_most(crit, false), v_below(1 - r1, r1), v_above(c0, c1),
                     v_above(l0, l1)},
                    "decoupling.2");
    else
        add_polygon(r,
                    {u_at_least(0, true), u_at_most(crit, true), v_below(Rational(1, 2), 0), v_above(c0, c1),
                     v_above(l0, l1)},
                    "decoupling.3");
    return r;
}

PQRegion region_lorentz_wedge(const RExponent& nu, int n) {
    require_lorentz(nu, n);
    const Rational h(n - 2, 2);
    const Rational nr(n);
    const Rational crit(n - 2, 2 * n);
    const Rational l0 = (nr / 2 - 1) / (nu[1] + h), l1 = -(nr / 2) / (nu[1] + h);
    PQRegion r;
    r.name = "wedge";
    if (nu[1] > crit && nu[1] < h)
        add_polygon(r,
                    {u_at_least((h - nu[1]) / (nr - 1), true), u_at_most(crit, true), v_above(l0, l1),
                     v_below(Rational(1, 2), 0)},
                    "wedge.1");
    else if (nu[1] >= h)
        add_polygon(r, {u_at_least(0, true), u_at_most(crit, true), v_above(l0, l1), v_below(Rational(1, 2), 0)},
                    "wedge.2");
    return r;
}

PositiveProjectorInterval positive_projector_interval(const RExponent& mu, const RExponent& nu, const ConeStructure& c) {
    const auto m = rarr(c.m), nj = rarr(c.nn), b = rarr(c.b);
    for (int j = 0; j < 2; ++j) {
        Rational need_mu = (m[j] + nj[j] + b[j]) / 2, need_nu = (m[j] + b[j]) / 2;
        if (!(mu[j] > need_mu))
            throw ValidationError(std::string("inadmissible μ: need μ") + kSub[j] + " > " +
                                  to_string(need_mu));
        if (!(nu[j] > need_nu))
            throw ValidationError(std::string("inadmissible ν: need ν") + kSub[j] + " > " +
                                  to_string(need_nu));
    }
    PositiveProjectorInterval res;
    res.combined = {XRational(Rational(0)), XRational::inf()};
    for (int j = 0; j < 2; ++j) {
        const Rational shift = half(m[j]) + half(b[j]);
        QInterval iv;
        iv.lo = XRational((nu[j] - shift + half(nj[j])) / (mu[j] - shift));
        iv.hi = nj[j] == 0 ? XRational::inf() : XRational(1 + (nu[j] - shift) / half(nj[j]));
        res.per_j[j] = iv;
        res.combined.lo = xmax(res.combined.lo, iv.lo);
        res.combined.hi = xmin(res.combined.hi, iv.hi);
    }
    return res;
}

SchurFeasibility schur_feasibility(const RExponent& mu, const RExponent& alpha, const RExponent& nu,
                                   const Rational& q, const std::array<Rational, 2>& m,
                                   const std::array<Rational, 2>& nn, const std::array<Rational, 2>& b) {
    if (!(q > 1)) throw ValidationError("Schur exponent q must exceed 1");
    const Rational qc = q / (q - 1);
    SchurFeasibility f;
    for (int j = 0; j < 2; ++j) {
        const Rational mb = half(m[j]) + half(b[j]);
        f.forward[j] = {(-nu[j] - alpha[j] + mb) / q, (mu[j] - nu[j] - half(nn[j])) / q};
        f.adjoint[j] = {(-mu[j] + mb) / qc, (alpha[j] - half(nn[j])) / qc};
        f.gamma[j] = {rmax(f.forward[j].first, f.adjoint[j].first), rmin(f.forward[j].second, f.adjoint[j].second)};
        f.nonempty[j] = f.gamma[j].first < f.gamma[j].second;
        f.conditions[j] = alpha[j] * q + nu[j] > (q - 1) * half(nn[j]) + mb &&
                          mu[j] * q - nu[j] > half(nn[j]) + (q - 1) * mb;
    }
    return f;
}

SchurFeasibility schur_feasibility(const RExponent& mu, const RExponent& alpha, const RExponent& nu,
                                   const Rational& q, const ConeStructure& c) {
    return schur_feasibility(mu, alpha, nu, q, rarr(c.m), rarr(c.nn), rarr(c.b));
}

// ---------------------------------------------------------------- emission

std::string emit_svg(const PQRegion& r, const SvgOptions& opt) {
    // Unit square drawn at 400 px with a 60 px margin; v grows upwards.
    const double size = 400, margin = 60;
    auto X = [&](const Rational& u) { return margin + size * to_double(u); };
    auto Y = [&](const Rational& v) { return margin + size * (1 - to_double(v)); };
    static const char* fills[] = {"#9ecae1", "#fdae6b", "#a1d99b", "#bcbddc", "#fc9272", "#d9d9d9"};

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!opt.timestamp.empty()) s << "<!-- generated " << xml_escape(opt.timestamp) << " -->\n";
    const double total = size + 2 * margin;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(total) << "\" height=\""
      << fmt(total + 20 * r.polygons.size()) << "\">\n";
    if (!opt.title.empty())
        s << "  <text x=\"" << fmt(margin) << "\" y=\"30\" font-size=\"16\">" << xml_escape(opt.title)
          << "</text>\n";
    s << "  <rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\"" << fmt(size) << "\" height=\""
      << fmt(size) << "\" fill=\"none\" stroke=\"black\"/>\n";

    std::vector<std::pair<Rational, std::string>> uticks = opt.u_ticks, vticks = opt.v_ticks;
    uticks.emplace_back(Rational(1, 2), "1/2");
    vticks.emplace_back(Rational(1, 2), "1/2");
    for (const auto& [u, label] : uticks) {
        s << "  <line x1=\"" << fmt(X(u)) << "\" y1=\"" << fmt(margin + size) << "\" x2=\"" << fmt(X(u))
          << "\" y2=\"" << fmt(margin + size + 6) << "\" stroke=\"black\"/>\n";
        s << "  <text x=\"" << fmt(X(u) - 10) << "\" y=\"" << fmt(margin + size + 20) << "\" font-size=\"10\">"
          << xml_escape(label) << "</text>\n";
    }
    for (const auto& [v, label] : vticks) {
        s << "  <line x1=\"" << fmt(margin - 6) << "\" y1=\"" << fmt(Y(v)) << "\" x2=\"" << fmt(margin)
          << "\" y2=\"" << fmt(Y(v)) << "\" stroke=\"black\"/>\n";
        s << "  <text x=\"" << fmt(4) << "\" y=\"" << fmt(Y(v) + 3) << "\" font-size=\"10\">" << xml_escape(label)
          << "</text>\n";
    }
    s << "  <text x=\"" << fmt(margin + size / 2) << "\" y=\"" << fmt(margin + size + 40)
      << "\" font-size=\"12\">1/p</text>\n";
    s << "  <text x=\"" << fmt(margin - 50) << "\" y=\"" << fmt(margin - 10) << "\" font-size=\"12\">1/q</text>\n";

    for (std::size_t i = 0; i < r.polygons.size(); ++i) {
        const Polygon& p = r.polygons[i];
        s << "  <g id=\"" << xml_escape(p.label) << "\">\n";
        s << "    <polygon points=\"";
        for (std::size_t k = 0; k < p.vertices.size(); ++k)
            s << (k ? " " : "") << fmt(X(p.vertices[k].u)) << "," << fmt(Y(p.vertices[k].v));
        if (p.derived)
            s << "\" fill=\"none\"/>\n";
        else
            s << "\" fill=\"" << fills[i % 6] << "\" fill-opacity=\"0.5\"/>\n";
        const std::size_t k = p.vertices.size();
        for (std::size_t e = 0; e < k; ++e) {
            const Point2& a = p.vertices[e];
            const Point2& b = p.vertices[(e + 1) % k];
            s << "    <line x1=\"" << fmt(X(a.u)) << "\" y1=\"" << fmt(Y(a.v)) << "\" x2=\"" << fmt(X(b.u))
              << "\" y2=\"" << fmt(Y(b.v)) << "\" stroke=\"" << (p.derived ? "#636363" : "black") << "\"";
            if (p.edge_open[e]) s << " stroke-dasharray=\"5,4\"";
            s << "/>\n";
        }
        s << "  </g>\n";
        s << "  <text x=\"" << fmt(margin) << "\" y=\"" << fmt(total + 20 * i) << "\" font-size=\"11\">"
          << xml_escape(p.label) << (p.derived ? " (closure)" : "") << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string emit_csv(const PQRegion& r) {
    std::ostringstream s;
    s << "branch,vertex_index,inv_p,inv_q,edge_open\n";
    for (const Polygon& p : r.polygons)
        for (std::size_t k = 0; k < p.vertices.size(); ++k)
            s << p.label << "," << k << "," << to_string(p.vertices[k].u) << "," << to_string(p.vertices[k].v)
              << "," << (p.edge_open[k] ? 1 : 0) << "\n";
    return s.str();
}

RExponent parse_rexponent(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw ValidationError("expected two comma-separated values, got '" + s + "'");
    return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

Exponent to_exponent(const RExponent& r) { return {to_double(r[0]), to_double(r[1])}; }

}  // namespace hcone
