#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "hcone/errors.hpp"
#include "hcone/lattice.hpp"

namespace hcone {

namespace {

struct FftwBuffer {
    fftw_complex* data;
    fftw_plan plan;
    explicit FftwBuffer(int n) {
        data = fftw_alloc_complex(static_cast<std::size_t>(n) * n * n);
        // ESTIMATE keeps the transform algorithm, and so the output bits, fixed.
        plan = fftw_plan_dft_3d(n, n, n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftwBuffer() {
        fftw_destroy_plan(plan);
        fftw_free(data);
    }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct Frequency {
    std::size_t index;  // flat DFT index
    int cell;
};

double lp_norm(const std::vector<std::complex<double>>& f, double p) {
    double s = 0;
    for (const auto& z : f) s += std::pow(std::abs(z), p);
    return std::pow(s / f.size(), 1.0 / p);
}

}  // namespace

void DecouplingSpec::validate() const {
    if (grid < 8 || (grid & (grid - 1)) != 0) throw ValidationError("grid size must be a power of two >= 8");
    if (!(p >= 1) || !(s >= 1)) throw ValidationError("decoupling needs p, s >= 1");
    if (trials < 1) throw ValidationError("decoupling needs at least one trial");
    if (scales.empty()) throw ValidationError("decoupling needs at least one scale");
    for (int j : scales)
        if (j < 1) throw ValidationError("scale j must be >= 1");
}

DecouplingResult decoupling_probe(const DecouplingSpec& spec) {
    spec.validate();
    const int N = spec.grid;
    // ξ' = m'/L with |m'| < 2L = N/2. Along ξ1 the period is longer: m1 runs over
    // (L1/2, 2L1), fewer than N consecutive values, so residues mod N stay distinct
    // and the thin shells at large j still meet every angular cell.
    const int L = N / 4;
    const int L1 = 5 * N / 8;
    const std::size_t total = static_cast<std::size_t>(N) * N * N;
    auto wrap = [N](int m) { return static_cast<std::size_t>((m % N + N) % N); };

    DecouplingResult res;
    res.scales = spec.scales;
    FftwBuffer buf(N);
    for (int j : spec.scales) {
        std::vector<WhitneyCell> cells = whitney_cells(j, 3, 2.0, spec.seed);
        const int kj = static_cast<int>(cells.size());
        // Frequencies of the dyadic shell, each assigned to its nearest direction.
        std::vector<Frequency> freqs;
        std::vector<int> count(kj, 0);
        for (int m1 = L1 / 2 + 1; m1 < 2 * L1; ++m1)
            for (int m2 = -N / 2; m2 < N / 2; ++m2)
                for (int m3 = -N / 2; m3 < N / 2; ++m3) {
                    Vec xi{double(m1) / L1, double(m2) / L, double(m3) / L};
                    if (!in_dyadic_shell(j, xi)) continue;
                    const double r = std::hypot(xi[1], xi[2]);
                    int best = 0;
                    double best_dot = -2;
                    for (int k = 0; k < kj; ++k) {
                        double d = (xi[1] * cells[k].omega[0] + xi[2] * cells[k].omega[1]) / r;
                        if (d > best_dot) {
                            best_dot = d;
                            best = k;
                        }
                    }
                    freqs.push_back({(wrap(m1) * N + wrap(m2)) * N + wrap(m3), best});
                    ++count[best];
                }
        for (int k = 0; k < kj; ++k)
            if (count[k] == 0)
                throw ValidationError("grid " + std::to_string(N) + " too coarse to resolve the cells at scale j = " +
                                      std::to_string(j));
        res.cells.push_back(kj);

        std::vector<double> ratios;
        for (int t = 0; t < spec.trials; ++t) {
            Rng rng(spec.seed, "decoupling-j" + std::to_string(j) + "-trial" + std::to_string(t));
            std::vector<std::complex<double>> coef(freqs.size());
            for (auto& c : coef) {
                double re = rng.normal();
                double im = rng.normal();
                c = {re, im};
            }
            std::vector<std::complex<double>> sum(total, 0.0);
            double denom = 0;
            for (int k = 0; k < kj; ++k) {
                if (spec.only_cell > 0 && k + 1 != spec.only_cell) continue;
                std::fill(reinterpret_cast<double*>(buf.data), reinterpret_cast<double*>(buf.data) + 2 * total, 0.0);
                for (std::size_t i = 0; i < freqs.size(); ++i)
                    if (freqs[i].cell == k) {
                        buf.data[freqs[i].index][0] = coef[i].real();
                        buf.data[freqs[i].index][1] = coef[i].imag();
                    }
                fftw_execute(buf.plan);
                std::vector<std::complex<double>> fk(total);
                for (std::size_t i = 0; i < total; ++i) {
                    fk[i] = {buf.data[i][0], buf.data[i][1]};
                    sum[i] += fk[i];
                }
                denom += std::pow(lp_norm(fk, spec.p), spec.s);
            }
            ratios.push_back(lp_norm(sum, spec.p) / std::pow(denom, 1.0 / spec.s));
        }
        res.max_ratio.push_back(*std::max_element(ratios.begin(), ratios.end()));
        res.ratio.push_back(std::move(ratios));
    }

    const std::size_t J = res.scales.size();
    if (J >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < J; ++i) {
            mx += res.scales[i];
            my += std::log2(res.max_ratio[i]);
        }
        mx /= J;
        my /= J;
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < J; ++i) {
            double dx = res.scales[i] - mx;
            sxy += dx * (std::log2(res.max_ratio[i]) - my);
            sxx += dx * dx;
        }
        res.slope = sxx > 0 ? sxy / sxx : 0.0;
    }
    // μ = (n−2)/2 − n/p for p ≥ 2n/(n−2) and 0 below, n = 3.
    const double mu = std::max(0.0, 0.5 - 3.0 / spec.p);
    res.bound = 2 * mu / spec.s + 0.5;
    return res;
}

OperatorProbeReport decoupling_report(const DecouplingSpec& spec, const DecouplingResult& r) {
    OperatorProbeReport rep;
    rep.name = "decoupling";
    rep.params = {{"p", spec.p}, {"s", spec.s}, {"grid", double(spec.grid)}, {"trials", double(spec.trials)},
                  {"slope", r.slope}, {"bound", r.bound}};
    rep.family = "gaussian DFT coefficients on dyadic cone cells, n = 3";
    rep.ratios = r.max_ratio;
    const bool parseval = spec.p == 2 && spec.s == 2;
    if (parseval || spec.only_cell > 0) {
        double worst = 0;
        for (const auto& row : r.ratio)
            for (double x : row) worst = std::max(worst, std::abs(x - 1));
        rep.pass = worst <= 1e-10;
        char buf[64];
        std::snprintf(buf, sizeof buf, "max |R - 1| = %.3e", worst);
        rep.verdict = buf;
    } else {
        rep.pass = r.slope <= r.bound;
        char buf[96];
        std::snprintf(buf, sizeof buf, "slope %.4f %s bound %.4f", r.slope, rep.pass ? "<=" : ">", r.bound);
        rep.verdict = buf;
    }
    return rep;
}

}  // namespace hcone
