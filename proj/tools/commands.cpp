#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hcone/errors.hpp"
#include "hcone/figures.hpp"
#include "hcone/kernels.hpp"
#include "hcone/lattice.hpp"
#include "hcone/regions.hpp"
#include "hcone/rng.hpp"

namespace hcli {

using namespace hcone;

namespace {

// ---- JSON helpers ----

std::string rtext(const Rational& r) { return to_string(r); }

Json pair_json(const RExponent& e) { return Json::array({rtext(e[0]), rtext(e[1])}); }
Json pair_json(const Exponent& e) { return Json::array({e[0], e[1]}); }

Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Json cvec_json(const CVec& v) {
    Json a = Json::array();
    for (const cplx& z : v) a.push_back(Json::array({z.real(), z.imag()}));
    return a;
}

Json indices_json(const Indices& ix) {
    Json j;
    j["p"] = to_string(ix.p);
    j["p_sharp"] = to_string(ix.p_sharp);
    j["q_nu"] = to_string(ix.q_nu);
    j["p_nu"] = to_string(ix.p_nu);
    j["q_nu_p"] = to_string(ix.q_nu_p);
    j["q_nu_p_conj"] = to_string(ix.q_nu_p_conj);
    j["q_tilde"] = to_string(ix.q_tilde);
    return j;
}

Json polygon_json(const Polygon& p) {
    Json j;
    j["label"] = p.label;
    j["derived"] = p.derived;
    Json verts = Json::array();
    for (const Point2& v : p.vertices) verts.push_back(Json::array({rtext(v.u), rtext(v.v)}));
    j["vertices"] = verts;
    Json open = Json::array();
    for (bool b : p.edge_open) open.push_back(b);
    j["edge_open"] = open;
    return j;
}

Json region_json(const PQRegion& r) {
    Json j;
    j["name"] = r.name;
    Json polys = Json::array();
    for (const Polygon& p : r.polygons) polys.push_back(polygon_json(p));
    j["polygons"] = polys;
    return j;
}

// The q-intervals of the region on the line 1/p = u.
Json q_intervals_json(const PQRegion& r, const Rational& u) {
    Json a = Json::array();
    for (const VInterval& iv : v_intervals(r, u)) {
        Json j;
        j["q_lo"] = to_string(reciprocal(XRational(iv.hi)));
        j["q_hi"] = to_string(reciprocal(XRational(iv.lo)));
        j["lo_open"] = iv.hi_open;
        j["hi_open"] = iv.lo_open;
        a.push_back(j);
    }
    return a;
}

std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

// ---- regions ----

void add_region_files(CommandResult& res, const RunConfig& cfg, const std::string& stem, const PQRegion& region,
                      SvgOptions svg) {
    if (cfg.flag("svg_timestamp", false)) svg.timestamp = utc_timestamp();
    res.files.push_back({stem + ".csv", "csv", emit_csv(region)});
    res.files.push_back({stem + ".svg", "svg", emit_svg(region, svg)});
}

CommandResult regions_figure(const RunConfig& cfg, int id) {
    Figure f = make_figure(id);
    CommandResult res;
    res.stem = "regions-" + f.name;
    const ConeStructure c = f.domain == "ps" ? ConeStructure::spherical() : ConeStructure::lorentz(f.n);
    res.json["selector"] = f.name;
    res.json["domain"] = f.domain;
    res.json["n"] = f.n;
    res.json["nu"] = pair_json(f.nu);
    res.json["indices"] = indices_json(indices(f.nu, c, XRational(Rational(2))));
    res.json["region"] = region_json(f.region);
    add_region_files(res, cfg, res.stem, f.region, f.svg);
    return res;
}

}  // namespace

const std::vector<std::string>& region_selectors() {
    static const std::vector<std::string> s = {"general", "strip", "lorentz", "ps",   "decoupling", "wedge",
                                               "schur",   "positive", "fig1", "fig2", "fig3",       "fig4",
                                               "fig5",    "fig6",     "figures"};
    return s;
}

const std::vector<std::string>& verify_selectors() {
    static const std::vector<std::string> s = {"gamma", "j-mu-lambda", "j-alpha", "i-lambda", "box", "all"};
    return s;
}

const std::vector<std::string>& probe_selectors() {
    static const std::vector<std::string> s = {"decoupling", "hardy", "schur", "box-projector"};
    return s;
}

Json to_json(const IdentityReport& r) {
    Json j;
    j["name"] = r.name;
    Json samples = Json::array();
    for (const Vec& s : r.samples) samples.push_back(vec_json(s));
    j["samples"] = samples;
    j["ratios"] = vec_json(r.ratios);
    j["max_deviation"] = r.max_deviation;
    j["fitted_constant"] = r.fitted_constant;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const OperatorProbeReport& r) {
    Json j;
    j["name"] = r.name;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    j["params"] = params;
    j["family"] = r.family;
    j["ratios"] = vec_json(r.ratios);
    j["verdict"] = r.verdict;
    j["pass"] = r.pass;
    return j;
}

CommandResult cmd_regions(const RunConfig& cfg, const std::string& selector) {
    if (!contains(region_selectors(), selector)) throw ValidationError("unknown region selector '" + selector + "'");
    if (selector.rfind("fig", 0) == 0 && selector != "figures") return regions_figure(cfg, selector[3] - '0');
    if (selector == "figures") {
        CommandResult all;
        all.stem = "regions-figures";
        Json figs = Json::array();
        for (int id : figure_ids()) {
            CommandResult f = regions_figure(cfg, id);
            figs.push_back(f.json);
            for (auto& file : f.files) all.files.push_back(std::move(file));
        }
        all.json["figures"] = figs;
        return all;
    }

    const bool ps = selector == "ps" || cfg.is_ps();
    if (ps && (selector == "lorentz" || selector == "decoupling" || selector == "wedge"))
        throw ValidationError("selector '" + selector + "' needs --domain lorentz");
    const ConeStructure c = ps ? ConeStructure::spherical() : cfg.cone();
    const int n = c.n;
    const RExponent nu = cfg.pair("nu", {Rational(3, 2), Rational(3, 2)});

    CommandResult res;
    res.stem = "regions-" + selector;
    res.json["selector"] = selector;
    res.json["domain"] = ps ? "ps" : "lorentz";
    res.json["n"] = n;
    res.json["nu"] = pair_json(nu);

    if (selector == "schur") {
        const RExponent mu = cfg.pair("mu", nu);
        const RExponent alpha = cfg.pair("alpha", {0, 0});
        const Rational q = cfg.rational("q", 2);
        SchurFeasibility f = schur_feasibility(mu, alpha, nu, q, c);
        res.json["mu"] = pair_json(mu);
        res.json["alpha"] = pair_json(alpha);
        res.json["q"] = rtext(q);
        auto intervals = [](const std::array<std::pair<Rational, Rational>, 2>& a) {
            Json j = Json::array();
            for (const auto& [lo, hi] : a) j.push_back(Json::array({rtext(lo), rtext(hi)}));
            return j;
        };
        res.json["forward"] = intervals(f.forward);
        res.json["adjoint"] = intervals(f.adjoint);
        res.json["gamma"] = intervals(f.gamma);
        res.json["nonempty"] = {f.nonempty[0], f.nonempty[1]};
        res.json["conditions"] = {f.conditions[0], f.conditions[1]};
        res.pass = f.nonempty[0] && f.nonempty[1];
        return res;
    }
    if (selector == "positive") {
        const RExponent mu = cfg.pair("mu", nu);
        PositiveProjectorInterval pi = positive_projector_interval(mu, nu, c);
        res.json["mu"] = pair_json(mu);
        Json per = Json::array();
        for (const QInterval& iv : pi.per_j) per.push_back(Json::array({to_string(iv.lo), to_string(iv.hi)}));
        res.json["per_j"] = per;
        res.json["combined"] = Json::array({to_string(pi.combined.lo), to_string(pi.combined.hi)});
        res.pass = !pi.combined.empty();
        return res;
    }

    XRational p = parse_xrational(cfg.text("p", "2"));
    if (p < XRational(1)) throw ValidationError("p must be >= 1");
    PQRegion region;
    if (selector == "general") region = region_general(nu, c);
    else if (selector == "strip") region = region_strip(nu, c);
    else if (selector == "lorentz") region = region_lorentz(nu, n);
    else if (selector == "ps") region = region_ps(nu);
    else if (selector == "decoupling") region = region_lorentz_decoupling(nu, n);
    else region = region_lorentz_wedge(nu, n);

    const ConeStructure ic = selector == "general" || selector == "ps" ? c : c.tube();
    res.json["indices"] = indices_json(indices(nu, ic, p));
    res.json["q_intervals"] = q_intervals_json(region, reciprocal(p).value);
    res.json["region"] = region_json(region);

    SvgOptions svg;
    svg.title = (ps ? std::string("Pyateckii-Shapiro domain") : "Lorentz tube, n = " + std::to_string(n)) +
                ", ν = (" + rtext(nu[0]) + ", " + rtext(nu[1]) + "), " + selector;
    add_index_ticks(svg, nu, ic);
    add_region_files(res, cfg, res.stem, region, svg);
    return res;
}

// ---- verify ----

namespace {

struct Suite {
    Json json;
    bool pass = true;
    bool nonconvergence = false;
};

// Runs one suite; quadrature failures become failed reports.
Suite guarded(const std::string& name, const std::function<Suite()>& body) {
    try {
        return body();
    } catch (const ConvergenceError& e) {
        Suite s;
        s.json["name"] = name;
        s.json["error"] = e.what();
        s.json["pass"] = false;
        s.pass = false;
        s.nonconvergence = true;
        return s;
    } catch (const std::domain_error& e) {
        // DivergenceError and DomainError.
        Suite s;
        s.json["name"] = name;
        s.json["error"] = e.what();
        s.json["pass"] = false;
        s.pass = false;
        return s;
    }
}

// Expects the quadrature itself (threshold checks off) to refuse the parameters.
Json divergence_probe(const std::string& what, const std::function<void()>& run, bool& detected) {
    Json j;
    j["parameters"] = what;
    try {
        run();
        detected = false;
        j["detected"] = false;
    } catch (const DivergenceError& e) {
        detected = true;
        j["detected"] = true;
        j["message"] = e.what();
    } catch (const ConvergenceError& e) {
        detected = true;
        j["detected"] = true;
        j["message"] = e.what();
    }
    return j;
}

Suite suite_gamma(const RunConfig& cfg) {
    const ConeStructure c = cfg.cone().tube();
    const QuadratureSpec q = cfg.quadrature();
    const Exponent nu = to_exponent(cfg.pair("nu", {Rational(3, 2), Rational(3, 2)}));
    const std::size_t points = cfg.count("points", 20);
    Rng rng(cfg.seed(), "verify-gamma-xi");
    std::vector<Vec> xis;
    for (std::size_t i = 0; i < points; ++i) xis.push_back(dual_group_act_e(c, random_triangular(c, rng)));
    std::vector<CVec> zetas;
    for (int i = 0; i < 2; ++i) {
        Vec xi = dual_group_act_e(c, random_triangular(c, rng));
        CVec z(c.n);
        // Larger imaginary parts make the integrand oscillate faster than the step resolves.
        for (int k = 0; k < c.n; ++k) z[k] = cplx(xi[k], 0.1 * xi[0] * rng.uniform(-1, 1));
        zetas.push_back(z);
    }
    Suite s;
    IdentityReport r = verify_laplace_identity(c, nu, xis, zetas, q, cfg.real("tol", 5e-3));
    r.name = "gamma";
    s.json = to_json(r);
    s.json["gamma_omega"] = gamma_omega(c, nu, q);
    bool detected = false;
    const ConeStructure c3 = ConeStructure::lorentz(3);
    s.json["divergence"] = divergence_probe("lorentz(3), nu = (3/2, 1/2)", [&] {
        gamma_omega(c3, {1.5, 0.5}, q, IntegralOptions{false});
    }, detected);
    s.pass = r.pass && detected;
    return s;
}

Suite suite_j_mu_lambda(const RunConfig& cfg) {
    const ConeStructure c = cfg.cone().tube();
    const QuadratureSpec q = cfg.quadrature();
    const Exponent mu = to_exponent(cfg.pair("mu", {-3, -3}));
    const Exponent lambda = to_exponent(cfg.pair("lambda", {1, 1}));
    Rng rng(cfg.seed(), "verify-j-mu-lambda");
    std::vector<Vec> ys;
    for (std::size_t i = 0, m = cfg.count("points", 10); i < m; ++i) ys.push_back(random_cone_point(c, rng));
    Suite s;
    IdentityReport r = verify_j_mu_lambda(c, ys, mu, lambda, q, cfg.real("tol", 1e-2));
    s.json = to_json(r);
    bool detected = false;
    const ConeStructure c3 = ConeStructure::lorentz(3);
    s.json["divergence"] = divergence_probe("lorentz(3), mu = (-3, -1), lambda = (1, 1)", [&] {
        j_mu_lambda(c3, base_point(c3), {-3, -1}, {1, 1}, q, IntegralOptions{false});
    }, detected);
    s.pass = r.pass && detected;
    return s;
}

Suite suite_j_alpha(const RunConfig& cfg) {
    const ConeStructure c = cfg.cone().tube();
    const QuadratureSpec q = cfg.quadrature();
    const Exponent alpha = to_exponent(cfg.pair("alpha", {3, 3}));
    Rng rng(cfg.seed(), "verify-j-alpha");
    std::vector<Vec> ys;
    for (std::size_t i = 0, m = cfg.count("points", 10); i < m; ++i) ys.push_back(random_cone_point(c, rng));
    Suite s;
    IdentityReport r = verify_j_alpha(c, ys, alpha, q, cfg.real("tol", 1e-2));
    s.json = to_json(r);
    bool detected = false;
    const ConeStructure c3 = ConeStructure::lorentz(3);
    s.json["divergence"] = divergence_probe("lorentz(3), alpha = (2, 3)", [&] {
        j_alpha(c3, base_point(c3), {2, 3}, q, IntegralOptions{false});
    }, detected);
    s.pass = r.pass && detected;
    return s;
}

Suite suite_i_lambda(const RunConfig& cfg) {
    const ConeStructure c = ConeStructure::spherical();
    const QuadratureSpec q = cfg.quadrature();
    const Exponent lambda = to_exponent(cfg.pair("lambda", {2, 2}));
    Rng rng(cfg.seed(), "verify-i-lambda");
    std::vector<ILambdaSample> samples;
    for (std::size_t i = 0, m = cfg.count("points", 10); i < m; ++i) {
        ILambdaSample smp;
        smp.u = cplx(0.5 * rng.normal(), 0.5 * rng.normal());
        // y lies over Γ: y − F(u,u) is a cone point.
        smp.y = random_cone_point(c, rng);
        smp.y[2] += std::norm(smp.u);
        smp.t = random_cone_point(c, rng);
        samples.push_back(smp);
    }
    Suite s;
    IdentityReport r = verify_i_lambda(samples, lambda, q, cfg.real("tol", 1e-2));
    s.json = to_json(r);
    bool detected = false;
    s.json["divergence"] = divergence_probe("lambda = (2, 1)", [&] {
        const ILambdaSample& a = samples.front();
        i_lambda(a.y, a.u, a.t, {2, 1}, q, IntegralOptions{false});
    }, detected);
    s.pass = r.pass && detected;
    return s;
}

CVec random_tube_point(const ConeStructure& c, Rng& rng, double xspread) {
    Vec y = random_cone_point(c, rng, 0.3);
    CVec z(c.n);
    for (int k = 0; k < c.n; ++k) z[k] = cplx(rng.uniform(-xspread, xspread), y[k]);
    return z;
}

}  // namespace

// Plane-wave symbol, c_μ point-independence and the commutation relation.
static Json box_calculus(const RunConfig& cfg, bool& pass) {
    const ConeStructure c = cfg.cone().tube();
    const Exponent mu = to_exponent(cfg.pair("mu", {Rational(3, 2), Rational(3, 2)}));
    BoxSpec box;
    box.k = 1;
    box.validate();
    Rng rng(cfg.seed(), "verify-box");
    Json j;
    j["name"] = "box";

    // Plane waves: error of the 2nd-order stencil at h, h/2, h/4.
    Json waves = Json::array();
    double worst_order = HUGE_VAL;
    for (int i = 0; i < 3; ++i) {
        Vec xi = dual_group_act_e(c, random_triangular(c, rng, 0.3));
        const double symbol = dual_power(c, xi, {1, 1});
        TubeFunction f = [&](const CVec& z) {
            Vec x(c.n);
            for (int k = 0; k < c.n; ++k) x[k] = z[k].real();
            return std::exp(cplx(0, pairing(c, x, xi)));
        };
        CVec z = random_tube_point(c, rng, 1.0);
        std::vector<double> errors;
        for (double h : {0.2, 0.1, 0.05}) {
            cplx got = box_fd_at(c, f, z, h, 2);
            errors.push_back(std::abs(got - symbol * f(z)) / std::abs(symbol));
        }
        Json w;
        w["xi"] = vec_json(xi);
        w["symbol"] = symbol;
        w["errors"] = vec_json(errors);
        Json orders = Json::array();
        for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
            double o = std::log2(errors[k] / errors[k + 1]);
            orders.push_back(o);
            worst_order = std::min(worst_order, o);
        }
        w["orders"] = orders;
        waves.push_back(w);
    }
    j["plane_waves"] = waves;
    j["min_order"] = worst_order;

    auto [mu_next, c_mu] = box_apply_exact(c, mu, box);
    Json cm = Json::array();
    double worst_cmu = 0;
    for (int i = 0; i < 5; ++i) {
        CVec z = random_tube_point(c, rng, 1.0);
        TubeFunction f = [&](const CVec& w) { return complex_power(c, w, mu).value; };
        cplx ratio = box_fd_richardson(c, f, z, 0.05) / complex_power(c, z, mu_next).value;
        cm.push_back(Json::array({ratio.real(), ratio.imag()}));
        worst_cmu = std::max(worst_cmu, std::abs(ratio / c_mu - 1.0));
    }
    j["c_mu"] = c_mu;
    j["c_mu_ratios"] = cm;
    j["c_mu_max_deviation"] = worst_cmu;

    TriangularElement t = random_triangular(c, rng, 0.5);
    std::vector<CVec> probes;
    for (int i = 0; i < 5; ++i) probes.push_back(random_tube_point(c, rng, 1.0));
    CVec w0 = random_tube_point(c, rng, 0.3);
    const double commute = box_commutation_check(c, mu, t, box, probes, w0);
    j["commutation_deviation"] = commute;

    const double order_min = box.fd_order - 0.3;
    pass = worst_order >= order_min && worst_cmu <= 1e-6 && commute <= 1e-8;
    j["thresholds"] = {{"min_order", order_min}, {"c_mu", 1e-6}, {"commutation", 1e-8}};
    j["pass"] = pass;
    return j;
}

CommandResult cmd_verify(const RunConfig& cfg, const std::string& selector) {
    if (!contains(verify_selectors(), selector)) throw ValidationError("unknown verify selector '" + selector + "'");
    // Settings are parsed up front so that a bad value fails before any work.
    cfg.quadrature();
    cfg.cone();
    std::vector<std::pair<std::string, std::function<Suite()>>> suites = {
        {"gamma", [&] { return suite_gamma(cfg); }},
        {"j-mu-lambda", [&] { return suite_j_mu_lambda(cfg); }},
        {"j-alpha", [&] { return suite_j_alpha(cfg); }},
        {"i-lambda", [&] { return suite_i_lambda(cfg); }},
        {"box", [&] {
             Suite s;
             s.json = box_calculus(cfg, s.pass);
             return s;
         }},
    };
    CommandResult res;
    res.stem = "verify-" + selector;
    Json reports = Json::array();
    for (auto& [name, run] : suites) {
        if (selector != "all" && selector != name) continue;
        Suite s = guarded(name, run);
        res.pass = res.pass && s.pass;
        res.nonconvergence = res.nonconvergence || s.nonconvergence;
        reports.push_back(s.json);
    }
    res.json["selector"] = selector;
    res.json["reports"] = reports;
    res.json["pass"] = res.pass;
    return res;
}

// ---- probe ----

CommandResult cmd_probe(const RunConfig& cfg, const std::string& selector) {
    if (!contains(probe_selectors(), selector)) throw ValidationError("unknown probe selector '" + selector + "'");
    CommandResult res;
    res.stem = "probe-" + selector;
    res.json["selector"] = selector;

    if (selector == "decoupling") {
        DecouplingSpec spec;
        spec.scales = cfg.int_list("j", spec.scales);
        spec.p = to_double(cfg.rational("p", 6));
        spec.s = cfg.real("s", 2.0);
        spec.trials = static_cast<int>(cfg.integer("trials", spec.trials));
        spec.grid = static_cast<int>(cfg.integer("grid", spec.grid));
        spec.only_cell = static_cast<int>(cfg.integer("only_cell", 0));
        spec.seed = cfg.seed();
        spec.validate();
        DecouplingResult r = decoupling_probe(spec);
        OperatorProbeReport rep = decoupling_report(spec, r);
        res.json["report"] = to_json(rep);
        res.json["scales"] = r.scales;
        res.json["cells"] = r.cells;
        Json ratios = Json::array();
        for (const auto& row : r.ratio) ratios.push_back(vec_json(row));
        res.json["ratio"] = ratios;
        res.json["slope"] = r.slope;
        res.json["bound"] = r.bound;
        res.pass = rep.pass;
        return res;
    }

    if (selector == "hardy") {
        const ConeStructure c = cfg.cone().tube();
        QuadratureSpec base;
        base.nodes = 12;
        const QuadratureSpec q = cfg.quadrature(base);
        const Exponent nu = to_exponent(cfg.pair("nu", {Rational(3, 2), Rational(3, 2)}));
        const double p = to_double(cfg.rational("p", 2)), qq = to_double(cfg.rational("q", 2));
        BoxSpec box;
        box.k = static_cast<int>(cfg.integer("k", 1));
        box.validate();
        Rng rng(cfg.seed(), "hardy-base-points");
        std::vector<CVec> bp;
        for (std::size_t i = 0, m = cfg.count("points", 5); i < m; ++i) bp.push_back(random_tube_point(c, rng, 0.3));
        OperatorProbeReport rep = hardy_probe(c, nu, p, qq, box, bp, q);
        res.json["report"] = to_json(rep);
        res.pass = rep.pass;
        return res;
    }

    if (selector == "schur") {
        const ConeStructure c = ConeStructure::lorentz(static_cast<int>(cfg.integer("n", 4)));
        QuadratureSpec base;
        base.step = 0.6;
        base.tail_tol = 1e-5;
        base.tol = 1e-3;
        const QuadratureSpec q = cfg.quadrature(base);
        const RExponent nu_r = cfg.pair("nu", {2, 2});
        const RExponent mu_r = cfg.pair("mu", nu_r);
        const RExponent alpha_r = cfg.pair("alpha", {0, 0});
        const Rational q_r = cfg.rational("q", 2);
        SchurFeasibility f = schur_feasibility(mu_r, alpha_r, nu_r, q_r, c);
        const Exponent nu = to_exponent(nu_r), mu = to_exponent(mu_r), alpha = to_exponent(alpha_r);
        const double qd = to_double(q_r);
        auto iv = schur_gamma_intervals(c, mu, alpha, nu, qd);
        // Default γ: midpoint of each feasible interval.
        Exponent gamma{0.5 * (iv[0][0] + iv[0][1]), 0.5 * (iv[1][0] + iv[1][1])};
        if (cfg.has("gamma")) gamma = to_exponent(cfg.pair("gamma", {0, 0}));
        Json feas;
        Json gi = Json::array();
        for (const auto& [lo, hi] : f.gamma) gi.push_back(Json::array({rtext(lo), rtext(hi)}));
        feas["gamma_intervals"] = gi;
        feas["nonempty"] = {f.nonempty[0], f.nonempty[1]};
        feas["conditions"] = {f.conditions[0], f.conditions[1]};
        res.json["feasibility"] = feas;
        res.json["frame_intervals"] = {{iv[0][0], iv[0][1]}, {iv[1][0], iv[1][1]}};
        res.json["gamma"] = pair_json(gamma);
        Rng rng(cfg.seed(), "schur-probes");
        std::vector<Vec> probes;
        for (std::size_t i = 0, m = cfg.count("points", 5); i < m; ++i) probes.push_back(random_cone_point(c, rng, 0.5));
        try {
            SchurReport r = schur_eigen_check(c, gamma, mu, alpha, nu, qd, probes, q, cfg.real("tol", 0.02));
            res.json["forward"] = to_json(r.forward);
            res.json["adjoint"] = to_json(r.adjoint);
            res.json["rejected"] = false;
            res.pass = r.pass;
        } catch (const DivergenceError& e) {
            res.json["rejected"] = true;
            res.json["message"] = e.what();
            res.pass = false;
        }
        res.json["pass"] = res.pass;
        return res;
    }

    // box-projector
    const ConeStructure c = cfg.cone().tube();
    const QuadratureSpec q = cfg.quadrature();
    const Exponent nu = to_exponent(cfg.pair("nu", {Rational(3, 2), Rational(3, 2)}));
    BoxSpec box;
    box.k = static_cast<int>(cfg.integer("k", 1));
    box.h = 0.05;
    box.validate();
    Bump bump;
    bump.center = base_point(c);
    Rng rng(cfg.seed(), "box-projector-probes");
    std::vector<CVec> probes;
    for (std::size_t i = 0, m = cfg.count("points", 5); i < m; ++i) {
        CVec z = random_tube_point(c, rng, 1.0);
        z[0] += cplx(0, 1.0);
        probes.push_back(z);
    }
    OperatorProbeReport rep =
        box_projector_identity_probe(c, nu, bump, box, probes, cfg.count("mc_samples", 20000), cfg.seed(), q);
    res.json["report"] = to_json(rep);
    res.pass = rep.pass;
    return res;
}

// ---- lattice ----

CommandResult cmd_lattice(const RunConfig& cfg) {
    LatticeSpec spec;
    spec.cone = cfg.cone().tube();
    spec.separation = cfg.real("separation", spec.separation);
    spec.covering = cfg.real("covering", spec.covering);
    spec.shell_radius = cfg.real("lattice_radius", spec.shell_radius);
    spec.candidates = cfg.count("lattice_candidates", spec.candidates);
    spec.seed = cfg.seed();
    spec.validate();
    const std::vector<int> scales = cfg.int_list("j", {1, 2});
    const double delta = cfg.real("delta", 2.0);
    const std::size_t samples = cfg.count("audit_samples", 10000);
    if (spec.cone.kind != ConeKind::Lorentz) throw ValidationError("Whitney cells need --domain lorentz");

    std::vector<LatticePoint> pts = build_lattice(spec);
    CoverageAudit a = audit_lattice(spec, pts, samples, spec.seed);

    CommandResult res;
    res.stem = "lattice";
    const int n = spec.cone.n;
    std::ostringstream csv;
    csv << "index";
    for (int k = 1; k <= n; ++k) csv << ",y" << k;
    csv << ",distance_to_e\n";
    csv.precision(17);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        csv << i;
        for (double y : pts[i].y) csv << ',' << y;
        csv << ',' << pts[i].distance_to_e << '\n';
    }
    res.files.push_back({"lattice-points.csv", "csv", csv.str()});

    Json lat;
    lat["points"] = pts.size();
    lat["separation"] = spec.separation;
    lat["covering"] = spec.covering;
    lat["shell_radius"] = spec.shell_radius;
    lat["audit_samples"] = a.samples;
    lat["uncovered"] = a.uncovered;
    lat["max_distance"] = a.max_distance;
    lat["min_separation"] = a.min_separation;
    lat["uncovered_fraction_bound"] = a.uncovered_fraction_bound;
    lat["pass"] = a.pass;
    res.json["lattice"] = lat;
    res.pass = a.pass;

    std::ostringstream cells_csv;
    cells_csv << "j,k";
    for (int k = 1; k < n; ++k) cells_csv << ",omega" << k;
    cells_csv << '\n';
    cells_csv.precision(17);
    Json wj = Json::array();
    for (int j : scales) {
        std::vector<WhitneyCell> cells = whitney_cells(j, n, delta, spec.seed);
        WhitneyAudit wa = audit_whitney(cells, j, n, samples, spec.seed);
        for (const WhitneyCell& cell : cells) {
            cells_csv << cell.j << ',' << cell.k;
            for (double w : cell.omega) cells_csv << ',' << w;
            cells_csv << '\n';
        }
        Json e;
        e["j"] = j;
        e["cells"] = cells.size();
        e["delta"] = delta;
        e["samples"] = wa.samples;
        e["uncovered"] = wa.uncovered;
        e["max_overlap"] = wa.max_overlap;
        e["mean_overlap"] = wa.mean_overlap;
        wj.push_back(e);
        res.pass = res.pass && wa.uncovered == 0;
    }
    res.files.push_back({"whitney-cells.csv", "csv", cells_csv.str()});
    res.json["whitney"] = wj;
    res.json["pass"] = res.pass;
    return res;
}

// ---- kernel-eval / project ----

namespace {

CVec parse_complex_list(const std::string& s, std::size_t count) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(to_double(parse_rational(item)));
    if (v.size() != 2 * count)
        throw ValidationError("expected " + std::to_string(2 * count) + " numbers (re,im pairs), got " +
                              std::to_string(v.size()));
    CVec z(count);
    for (std::size_t k = 0; k < count; ++k) z[k] = cplx(v[2 * k], v[2 * k + 1]);
    return z;
}

}  // namespace

CommandResult cmd_kernel_eval(const RunConfig& cfg) {
    const bool ps = cfg.is_ps();
    const Domain dom = ps ? Domain::pyateckii_shapiro() : Domain::tube(cfg.cone());
    const ConeStructure& c = dom.cone;
    const RExponent nu_r = cfg.pair("nu", ps ? RExponent{2, 2} : RExponent{Rational(3, 2), Rational(3, 2)});
    const Exponent nu = to_exponent(nu_r);
    check_kernel_params(dom, nu);
    const QuadratureSpec q = cfg.quadrature();
    const std::size_t len = ps ? 4 : static_cast<std::size_t>(c.n);
    // Default point: (ie, 0).
    CVec ie(len, cplx(0, 0));
    Vec e = base_point(c);
    for (int k = 0; k < c.n && k < static_cast<int>(len); ++k) ie[k] = cplx(0, e[k]);
    const CVec z = cfg.has("z") ? parse_complex_list(cfg.text("z", ""), len) : ie;
    const CVec w = cfg.has("w") ? parse_complex_list(cfg.text("w", ""), len) : ie;

    KernelParams kp{nu, 1.0, false};
    if (cfg.flag("normalize", true)) kp = normalize(kp, dom, q);
    cplx value;
    if (ps) {
        SiegelPoint a{CVec(z.begin(), z.begin() + 3), z[3]};
        SiegelPoint b{CVec(w.begin(), w.begin() + 3), w[3]};
        if (!in_domain(dom, a) || !in_domain(dom, b)) throw DomainError("point outside the domain");
        value = bergman_kernel_ps(a, b, kp);
    } else {
        TubePoint a, b;
        for (std::size_t k = 0; k < len; ++k) {
            a.x.push_back(z[k].real());
            a.y.push_back(z[k].imag());
            b.x.push_back(w[k].real());
            b.y.push_back(w[k].imag());
        }
        if (!in_domain(dom, a) || !in_domain(dom, b)) throw DomainError("point outside the domain");
        value = bergman_kernel_tube(c, z, w, kp);
    }
    CommandResult res;
    res.stem = "kernel-eval";
    res.json["domain"] = ps ? "ps" : "lorentz";
    res.json["n"] = c.n;
    res.json["nu"] = pair_json(nu_r);
    res.json["d_nu"] = kp.d_nu;
    res.json["normalized"] = kp.normalized;
    res.json["z"] = cvec_json(z);
    res.json["w"] = cvec_json(w);
    res.json["value"] = Json::array({value.real(), value.imag()});
    return res;
}

CommandResult cmd_project(const RunConfig& cfg) {
    if (cfg.is_ps()) throw ValidationError("project runs on the tube domain; use --domain lorentz");
    const ConeStructure c = cfg.cone().tube();
    const QuadratureSpec q = cfg.quadrature();
    const Exponent nu = to_exponent(cfg.pair("nu", {Rational(3, 2), Rational(3, 2)}));
    const Domain dom = Domain::tube(c);
    check_kernel_params(dom, nu);
    const std::uint64_t samples = cfg.count("mc_samples", 1000000);
    const std::uint64_t batches = cfg.count("batches", 1);
    const double tol = cfg.real("tol", 0.1);
    if (samples == 0 || batches == 0) throw ValidationError("project needs samples and batches");

    KernelParams kp = normalize({nu, 1.0, false}, dom, q);
    MonteCarloProjector mc(c, kp, cfg.seed());
    Vec e = base_point(c);
    CVec w0(c.n);
    for (int k = 0; k < c.n; ++k) w0[k] = cplx(0, e[k]);
    Rng rng(cfg.seed(), "project-probes");
    std::vector<CVec> probes;
    for (std::size_t i = 0, m = cfg.count("points", 5); i < m; ++i) {
        CVec z(c.n);
        for (int k = 0; k < c.n; ++k) z[k] = cplx(rng.uniform(-0.3, 0.3), e[k] + rng.uniform(-0.2, 0.2));
        probes.push_back(z);
    }
    std::vector<cplx> exact;
    for (const CVec& z : probes) exact.push_back(bergman_kernel_tube(c, z, w0, kp));

    CommandResult res;
    res.stem = "project";
    Json errs = Json::array();
    double sq = 0, first_max = 0;
    for (std::uint64_t b = 0; b < batches; ++b) {
        std::vector<cplx> v = mc.apply_kernel(w0, probes, samples, b);
        Json row = Json::array();
        for (std::size_t i = 0; i < probes.size(); ++i) {
            double rel = std::abs(v[i] - exact[i]) / std::abs(exact[i]);
            row.push_back(rel);
            sq += rel * rel;
            if (b == 0) first_max = std::max(first_max, rel);
        }
        errs.push_back(row);
    }
    res.json["nu"] = pair_json(nu);
    res.json["d_nu"] = kp.d_nu;
    res.json["samples"] = samples;
    res.json["batches"] = batches;
    res.json["w0"] = cvec_json(w0);
    Json pj = Json::array();
    for (const CVec& z : probes) pj.push_back(cvec_json(z));
    res.json["probes"] = pj;
    Json ex = Json::array();
    for (const cplx& v : exact) ex.push_back(Json::array({v.real(), v.imag()}));
    res.json["exact"] = ex;
    res.json["relative_errors"] = errs;
    res.json["rms_relative_error"] = std::sqrt(sq / (batches * probes.size()));
    res.json["max_relative_error"] = first_max;
    res.json["tolerance"] = tol;
    res.pass = first_max < tol;
    res.json["pass"] = res.pass;
    return res;
}

// ---- output and driver ----

std::vector<std::string> write_outputs(const RunConfig& cfg, const CommandResult& r) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.output_dir();
    fs::create_directories(dir);
    const std::set<std::string> formats = cfg.formats();
    std::vector<std::string> written;
    auto put = [&](const std::string& name, const std::string& content) {
        fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + p.string());
        out << content;
        written.push_back(p.string());
    };
    if (formats.count("json")) put(r.stem + ".json", r.json.dump(2) + "\n");
    for (const OutputFile& f : r.files)
        if (formats.count(f.format)) put(f.name, f.content);
    return written;
}

int exit_code(const CommandResult& r) {
    if (r.nonconvergence) return 2;
    return r.pass ? 0 : 1;
}

namespace {

std::string flag_name(const std::string& key) {
    std::string s = key;
    for (char& ch : s)
        if (ch == '.' || ch == '_') ch = '-';
    return "--" + s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted Bergman projectors on tube and Siegel domains over rank-2 cones"};
    app.require_subcommand(1);
    std::string config_path;
    std::map<std::string, std::string> flags;
    std::string selector;

    auto add_keys = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value file; flags override it");
        for (const KeyInfo& k : config_keys()) {
            if (k.kind == KeyKind::Bool)
                sub->add_option(flag_name(k.name), flags[k.name], k.help)->expected(0, 1)->default_str("true");
            else
                sub->add_option(flag_name(k.name), flags[k.name], k.help);
        }
    };
    auto add_selector = [&](CLI::App* sub, const std::vector<std::string>& names) {
        sub->add_option("selector", selector, "what to run")->required()->check(CLI::IsMember(names));
    };

    CLI::App* regions = app.add_subcommand("regions", "exact (1/p, 1/q) regions: SVG, CSV and JSON indices");
    add_selector(regions, region_selectors());
    CLI::App* verify = app.add_subcommand("verify", "integral identity suites");
    add_selector(verify, verify_selectors());
    CLI::App* probe = app.add_subcommand("probe", "operator probes");
    add_selector(probe, probe_selectors());
    CLI::App* lattice = app.add_subcommand("lattice", "separated lattice and Whitney cells with audits");
    CLI::App* kernel = app.add_subcommand("kernel-eval", "evaluate the weighted Bergman kernel");
    CLI::App* project = app.add_subcommand("project", "Monte-Carlo reproducing check of the projector");
    for (CLI::App* sub : {regions, verify, probe, lattice, kernel, project}) add_keys(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        // Subcommand help requests arrive here too.
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        for (const KeyInfo& k : config_keys()) {
            auto it = flags.find(k.name);
            if (it == flags.end()) continue;
            CLI::Option* opt = app.get_subcommands().front()->get_option(flag_name(k.name));
            if (opt->count() == 0) continue;
            cfg.set(k.name, it->second.empty() && k.kind == KeyKind::Bool ? "true" : it->second);
        }
        CommandResult r;
        if (regions->parsed()) r = cmd_regions(cfg, selector);
        else if (verify->parsed()) r = cmd_verify(cfg, selector);
        else if (probe->parsed()) r = cmd_probe(cfg, selector);
        else if (lattice->parsed()) r = cmd_lattice(cfg);
        else if (kernel->parsed()) r = cmd_kernel_eval(cfg);
        else r = cmd_project(cfg);
        for (const std::string& path : write_outputs(cfg, r)) out << "wrote " << path << "\n";
        const int code = exit_code(r);
        out << r.stem << ": " << (code == 0 ? "PASS" : code == 2 ? "NON-CONVERGENCE" : "FAIL") << "\n";
        return code;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hcli
