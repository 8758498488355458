#include "hcone/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcone/errors.hpp"

namespace hcone {

namespace {

Vec random_direction(int dim, Rng& rng) {
    Vec v(dim);
    double norm = 0;
    while (norm < 1e-12) {
        norm = 0;
        for (double& x : v) {
            x = rng.normal();
            norm += x * x;
        }
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

double dist(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

void LatticeSpec::validate() const {
    if (!(separation > 0 && separation < covering))
        throw ValidationError("lattice needs 0 < separation < covering");
    if (!(shell_radius >= 0)) throw ValidationError("shell radius must be >= 0");
    if (candidates == 0) throw ValidationError("lattice needs at least one candidate");
}

Vec cone_point_from_spectral(const ConeStructure& c, double s_plus, double s_minus, const Vec& direction) {
    if (static_cast<int>(direction.size()) != c.n - 1)
        throw ValidationError("direction must have n-1 components");
    const double lp = std::exp(s_plus), lm = std::exp(s_minus);
    const double mean = 0.5 * (lp + lm), rad = 0.5 * std::abs(lp - lm);
    Sym2 s;
    s.d = c.off_dim();
    s.a11 = mean + rad * direction[0];
    s.a22 = mean - rad * direction[0];
    for (int k = 0; k < s.d; ++k) s.a12[k] = rad * direction[1 + k];
    return from_sym(c, s);
}

Vec sample_shell_point(const ConeStructure& c, double radius, Rng& rng) {
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2 * M_PI * rng.uniform();
    double a = r * std::cos(theta), b = r * std::sin(theta);
    if (a < b) std::swap(a, b);
    return cone_point_from_spectral(c, a, b, random_direction(c.n - 1, rng));
}

std::vector<LatticePoint> build_lattice(const LatticeSpec& spec) {
    spec.validate();
    const ConeStructure& c = spec.cone;
    std::vector<LatticePoint> pts;
    Vec e = base_point(c);
    pts.push_back({e, TriangularElement::identity(c), 0.0});
    Rng rng(spec.seed, "lattice-candidates");
    for (std::size_t i = 0; i < spec.candidates; ++i) {
        Vec y = sample_shell_point(c, spec.shell_radius, rng);
        double de = invariant_distance(c, e, y);
        if (de > spec.shell_radius) continue;
        bool far = true;
        for (const LatticePoint& p : pts)
            if (invariant_distance(c, p.y, y) < spec.separation) {
                far = false;
                break;
            }
        if (far) pts.push_back({y, triangular_decompose(c, y), de});
    }
    return pts;
}

CoverageAudit audit_lattice(const LatticeSpec& spec, const std::vector<LatticePoint>& pts,
                            std::size_t samples, std::uint64_t seed) {
    const ConeStructure& c = spec.cone;
    CoverageAudit a;
    a.samples = samples;
    Rng rng(seed, "lattice-audit");
    for (std::size_t i = 0; i < samples; ++i) {
        Vec y = sample_shell_point(c, spec.shell_radius, rng);
        double best = std::numeric_limits<double>::infinity();
        for (const LatticePoint& p : pts) best = std::min(best, invariant_distance(c, p.y, y));
        a.max_distance = std::max(a.max_distance, best);
        if (best > spec.covering) ++a.uncovered;
    }
    a.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            a.min_separation = std::min(a.min_separation, invariant_distance(c, pts[i].y, pts[j].y));
    // Rule of three for zero observed misses.
    a.uncovered_fraction_bound =
        samples == 0 ? 1.0 : (a.uncovered == 0 ? 3.0 / samples : double(a.uncovered) / samples);
    a.pass = a.uncovered == 0 && (pts.size() < 2 || a.min_separation >= spec.separation);
    return a;
}

bool in_dyadic_shell(int j, const Vec& xi) {
    if (xi.size() < 2) return false;
    const double x1 = xi[0];
    if (!(x1 > 0.5 && x1 < 2)) return false;
    double r2 = 0;
    for (std::size_t i = 1; i < xi.size(); ++i) r2 += xi[i] * xi[i];
    const double s = 1 - r2 / (x1 * x1);
    return s > std::ldexp(1.0, -2 * j - 2) && s < std::ldexp(1.0, -2 * j + 2);
}

bool in_whitney_cell(const WhitneyCell& cell, const Vec& xi) {
    if (!in_dyadic_shell(cell.j, xi)) return false;
    double r2 = 0;
    for (std::size_t i = 1; i < xi.size(); ++i) r2 += xi[i] * xi[i];
    if (r2 == 0) return false;
    const double r = std::sqrt(r2);
    double d2 = 0;
    for (std::size_t i = 1; i < xi.size(); ++i) {
        double t = xi[i] / r - cell.omega[i - 1];
        d2 += t * t;
    }
    return std::sqrt(d2) <= cell.delta * std::ldexp(1.0, -cell.j);
}

std::vector<Vec> separated_directions(int j, int n, std::uint64_t seed) {
    if (j < 1) throw ValidationError("scale j must be >= 1");
    if (n < 3) throw ValidationError("n must be >= 3");
    const double eps = std::ldexp(1.0, -j);
    Rng rng(seed, "whitney-directions");
    std::vector<Vec> pool;
    if (n == 3) {
        const int m = 256 << j;
        for (int i = 0; i < m; ++i) {
            double a = 2 * M_PI * i / m;
            pool.push_back({std::cos(a), std::sin(a)});
        }
    } else {
        const double want = 200.0 * std::pow(2.0, j * (n - 2));
        const std::size_t m = static_cast<std::size_t>(std::min(want, 40000.0));
        for (std::size_t i = 0; i < m; ++i) pool.push_back(random_direction(n - 1, rng));
    }
    std::vector<Vec> chosen;
    std::vector<double> gap(pool.size(), std::numeric_limits<double>::infinity());
    std::size_t next = rng.below(pool.size());
    while (true) {
        chosen.push_back(pool[next]);
        for (std::size_t i = 0; i < pool.size(); ++i) gap[i] = std::min(gap[i], dist(pool[i], pool[next]));
        std::size_t far = 0;
        for (std::size_t i = 1; i < pool.size(); ++i)
            if (gap[i] > gap[far]) far = i;
        if (gap[far] < eps) break;
        next = far;
    }
    return chosen;
}

std::vector<WhitneyCell> whitney_cells(int j, int n, double delta, std::uint64_t seed) {
    if (!(delta > 0)) throw ValidationError("delta must be > 0");
    std::vector<WhitneyCell> cells;
    int k = 1;
    for (Vec& w : separated_directions(j, n, seed)) cells.push_back({j, k++, std::move(w), delta});
    return cells;
}

Vec sample_dyadic_shell(int j, int n, Rng& rng) {
    const double x1 = rng.uniform(0.5, 2.0);
    // 1 − |ξ'|²/ξ1² log-uniform over the open dyadic range.
    const double s = std::exp2(rng.uniform(-2.0 * j - 2, -2.0 * j + 2));
    const double r = x1 * std::sqrt(1 - s);
    Vec dir = random_direction(n - 1, rng);
    Vec xi(n);
    xi[0] = x1;
    for (int i = 0; i < n - 1; ++i) xi[1 + i] = r * dir[i];
    return xi;
}

WhitneyAudit audit_whitney(const std::vector<WhitneyCell>& cells, int j, int n, std::size_t samples,
                           std::uint64_t seed) {
    WhitneyAudit a;
    a.samples = samples;
    Rng rng(seed, "whitney-audit");
    std::size_t total = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        Vec xi = sample_dyadic_shell(j, n, rng);
        if (!in_dyadic_shell(j, xi)) continue;  // endpoint rounding
        int hits = 0;
        for (const WhitneyCell& c : cells) hits += in_whitney_cell(c, xi) ? 1 : 0;
        if (hits == 0) ++a.uncovered;
        a.max_overlap = std::max(a.max_overlap, hits);
        total += hits;
    }
    a.mean_overlap = samples ? double(total) / samples : 0.0;
    return a;
}

}  // namespace hcone
