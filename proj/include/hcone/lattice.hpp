#pragma once

#include <cstdint>
#include <vector>

#include "hcone/cone.hpp"
#include "hcone/projector.hpp"
#include "hcone/rng.hpp"

namespace hcone {

struct LatticeSpec {
    ConeStructure cone = ConeStructure::lorentz(3);
    double separation = 0.5;
    double covering = 2.0;
    double shell_radius = 2.0;  // keep points with d(e, ·) ≤ shell_radius
    std::size_t candidates = 4000;
    std::uint64_t seed = 20240917;
    void validate() const;
};

struct LatticePoint {
    Vec y;
    TriangularElement g;  // y = g·e
    double distance_to_e = 0.0;
};

// Point of the cone with spectral logs (s_plus, s_minus) and a unit direction
// in R^{n−1} for the off-diagonal/half-difference part.
Vec cone_point_from_spectral(const ConeStructure& c, double s_plus, double s_minus, const Vec& direction);
// Draws a point of the shell {d(e, y) ≤ radius}.
Vec sample_shell_point(const ConeStructure& c, double radius, Rng& rng);

// Greedy maximal separated subset of a seeded candidate pool, starting at e.
std::vector<LatticePoint> build_lattice(const LatticeSpec& spec);

struct CoverageAudit {
    std::size_t samples = 0;
    std::size_t uncovered = 0;
    double max_distance = 0.0;  // max over samples of the distance to the set
    double min_separation = 0.0;
    // With zero misses, the uncovered fraction of the shell is below this at 95%.
    double uncovered_fraction_bound = 0.0;
    bool pass = false;
};
CoverageAudit audit_lattice(const LatticeSpec& spec, const std::vector<LatticePoint>& pts,
                            std::size_t samples, std::uint64_t seed);

struct WhitneyCell {
    int j = 1;
    int k = 1;
    Vec omega;  // unit vector in R^{n−1}
    double delta = 2.0;
};

// 1/2 < ξ1 < 2 and 2^{−2j−2} < 1 − |ξ'|²/ξ1² < 2^{−2j+2}.
bool in_dyadic_shell(int j, const Vec& xi);
bool in_whitney_cell(const WhitneyCell& cell, const Vec& xi);

// Farthest-point greedy 2^{−j}-separated directions on S^{n−2}.
std::vector<Vec> separated_directions(int j, int n, std::uint64_t seed);
std::vector<WhitneyCell> whitney_cells(int j, int n, double delta, std::uint64_t seed = 20240917);

struct WhitneyAudit {
    std::size_t samples = 0;
    std::size_t uncovered = 0;
    int max_overlap = 0;
    double mean_overlap = 0.0;
};
Vec sample_dyadic_shell(int j, int n, Rng& rng);
WhitneyAudit audit_whitney(const std::vector<WhitneyCell>& cells, int j, int n, std::size_t samples,
                           std::uint64_t seed);

// ‖Σ f_k‖_p / (Σ ‖f_k‖_p^s)^{1/s} on a periodic N³ grid, n = 3. Each f_k has
// random Gaussian DFT coefficients on the grid frequencies of the dyadic shell
// assigned to direction k (nearest direction), so the supports are disjoint.
struct DecouplingSpec {
    std::vector<int> scales{1, 2, 3, 4};
    double p = 6.0;
    double s = 2.0;
    int trials = 4;
    int grid = 64;
    std::uint64_t seed = 20240917;
    int only_cell = 0;  // 1-based index: keep just that cell (0 = all)
    void validate() const;
};
struct DecouplingResult {
    std::vector<int> scales;
    std::vector<int> cells;                 // k_j
    std::vector<std::vector<double>> ratio;  // [scale][trial]
    std::vector<double> max_ratio;
    double slope = 0.0;  // least-squares slope of log2(max R) against j
    double bound = 0.0;  // 2μ/s + 0.5, μ = (n−2)/2 − n/p
};
DecouplingResult decoupling_probe(const DecouplingSpec& spec);
OperatorProbeReport decoupling_report(const DecouplingSpec& spec, const DecouplingResult& r);

}  // namespace hcone
