#include <gtest/gtest.h>

#include <cmath>

#include "hcone/errors.hpp"
#include "hcone/integrals.hpp"
#include "hcone/lattice.hpp"

using namespace hcone;

TEST(Lattice, PointsAreSeparatedAndCoverTheShell) {
    LatticeSpec spec;
    spec.candidates = 1500;
    std::vector<LatticePoint> pts = build_lattice(spec);
    ASSERT_GT(pts.size(), 10u);
    const ConeStructure& c = spec.cone;
    double min_sep = HUGE_VAL;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_TRUE(in_cone(c, pts[i].y));
        EXPECT_LE(invariant_distance(c, base_point(c), pts[i].y), spec.shell_radius + 1e-9);
        Vec back = group_act_e(c, pts[i].g);
        for (int k = 0; k < c.n; ++k) EXPECT_NEAR(back[k], pts[i].y[k], 1e-10 * pts[i].y[0]);
        for (std::size_t j = 0; j < i; ++j) min_sep = std::min(min_sep, invariant_distance(c, pts[i].y, pts[j].y));
    }
    EXPECT_GE(min_sep, spec.separation);

    // Coverage against fresh shell samples, distances recomputed here.
    Rng rng(71);
    int uncovered = 0;
    for (int s = 0; s < 500; ++s) {
        Vec y = sample_shell_point(c, spec.shell_radius, rng);
        double best = HUGE_VAL;
        for (const LatticePoint& p : pts) best = std::min(best, invariant_distance(c, y, p.y));
        uncovered += best > spec.covering;
    }
    EXPECT_EQ(uncovered, 0);

    CoverageAudit a = audit_lattice(spec, pts, 500, 72);
    EXPECT_TRUE(a.pass);
    EXPECT_EQ(a.uncovered, 0u);
    EXPECT_NEAR(a.min_separation, min_sep, 1e-9);
}

TEST(Lattice, IsDeterministicForASeed) {
    LatticeSpec spec;
    spec.candidates = 400;
    std::vector<LatticePoint> a = build_lattice(spec), b = build_lattice(spec);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].y, b[i].y);
    EXPECT_THROW((LatticeSpec{ConeStructure::lorentz(3), 2.0, 1.0}).validate(), ValidationError);
}

TEST(Lattice, SpectralPointsHaveTheRequestedDistance) {
    const ConeStructure c = ConeStructure::lorentz(4);
    Vec dir{0.6, 0.0, 0.8};
    Vec y = cone_point_from_spectral(c, 0.7, -0.4, dir);
    // d(e, λe) = kDistanceScale·|log λ|, so spectral logs (s₊, s₋) sit at kDistanceScale/√2 · |(s₊, s₋)|.
    EXPECT_NEAR(invariant_distance(c, base_point(c), y), kDistanceScale / std::sqrt(2.0) * std::hypot(0.7, 0.4), 1e-9);
}

TEST(Whitney, DyadicShellDefinition) {
    // j = 1 asks for 1 − |ξ'|²/ξ1² in (1/16, 1), j = 3 for (1/256, 1/16).
    EXPECT_TRUE(in_dyadic_shell(1, {1.0, 0.9, 0.0}));
    EXPECT_TRUE(in_dyadic_shell(1, {1.0, 0.1, 0.0}));
    EXPECT_FALSE(in_dyadic_shell(3, {1.0, 0.1, 0.0}));
    EXPECT_TRUE(in_dyadic_shell(3, {1.0, 0.0, 0.99}));
    EXPECT_FALSE(in_dyadic_shell(1, {1.0, 0.0, 0.0}));
    EXPECT_FALSE(in_dyadic_shell(1, {3.0, 2.9, 0.0}));
}

TEST(Whitney, CellCountsDoubleWithScale) {
    for (int j = 1; j <= 4; ++j) EXPECT_EQ(whitney_cells(j, 3, 2.0).size(), static_cast<std::size_t>(4 << j)) << j;
    // Directions are 2^{−j}-separated on the circle.
    std::vector<Vec> d = separated_directions(3, 3, 1);
    for (std::size_t a = 0; a < d.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) EXPECT_GE(std::hypot(d[a][0] - d[b][0], d[a][1] - d[b][1]), 0.125 - 1e-12);
}

TEST(Whitney, CellsCoverTheShell) {
    for (int n : {3, 4}) {
        for (int j : {1, 2}) {
            std::vector<WhitneyCell> cells = whitney_cells(j, n, 2.0);
            WhitneyAudit a = audit_whitney(cells, j, n, 2000, 73);
            EXPECT_EQ(a.uncovered, 0u) << n << " " << j;
            EXPECT_GE(a.max_overlap, 1);
            Rng rng(74);
            for (int s = 0; s < 200; ++s) {
                Vec xi = sample_dyadic_shell(j, n, rng);
                EXPECT_TRUE(in_dyadic_shell(j, xi));
                bool hit = false;
                for (const WhitneyCell& c : cells) hit = hit || in_whitney_cell(c, xi);
                EXPECT_TRUE(hit);
            }
        }
    }
}

TEST(Decoupling, ParsevalAtPEqualsTwo) {
    DecouplingSpec spec;
    spec.scales = {1, 2};
    spec.p = 2;
    spec.s = 2;
    spec.trials = 2;
    spec.grid = 32;
    DecouplingResult r = decoupling_probe(spec);
    for (const auto& row : r.ratio)
        for (double x : row) EXPECT_NEAR(x, 1.0, 1e-10);
    EXPECT_TRUE(decoupling_report(spec, r).pass);
    EXPECT_EQ(r.cells, (std::vector<int>{8, 16}));
}

TEST(Decoupling, SingleCellAndMinkowski) {
    DecouplingSpec spec;
    spec.scales = {1, 2};
    spec.p = 6;
    spec.trials = 1;
    spec.grid = 32;
    spec.only_cell = 3;
    DecouplingResult r = decoupling_probe(spec);
    for (const auto& row : r.ratio)
        for (double x : row) EXPECT_NEAR(x, 1.0, 1e-10);
    // s = 1: ‖Σ f_k‖_p ≤ Σ ‖f_k‖_p. s = 2: at most √k_j by Cauchy-Schwarz.
    spec.only_cell = 0;
    spec.s = 1;
    for (double x : decoupling_probe(spec).max_ratio) EXPECT_LE(x, 1.0 + 1e-12);
    spec.s = 2;
    DecouplingResult r2 = decoupling_probe(spec);
    for (std::size_t i = 0; i < r2.max_ratio.size(); ++i) EXPECT_LE(r2.max_ratio[i], std::sqrt(double(r2.cells[i])));
    EXPECT_NEAR(r2.bound, 2 * (0.5 - 0.5) / 2 + 0.5, 1e-15);
}

TEST(Decoupling, CoarseGridIsRefused) {
    DecouplingSpec spec;
    spec.scales = {4};
    spec.grid = 8;
    EXPECT_THROW(decoupling_probe(spec), ValidationError);
    spec.grid = 48;
    EXPECT_THROW(spec.validate(), ValidationError);
}
