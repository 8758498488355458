#include "hcone/figures.hpp"

#include "hcone/errors.hpp"

namespace hcone {

namespace {

void append(PQRegion& into, const PQRegion& from) {
    into.polygons.insert(into.polygons.end(), from.polygons.begin(), from.polygons.end());
}

}  // namespace

void add_index_ticks(SvgOptions& svg, const RExponent& nu, const ConeStructure& c) {
    Indices ix = indices(nu, c, XRational(Rational(2)));
    if (!ix.q_nu.infinite) {
        Rational r = 1 / ix.q_nu.value;
        svg.v_ticks.emplace_back(r, "1/qν");
        svg.v_ticks.emplace_back(r / 2, "1/2qν");
        svg.v_ticks.emplace_back(1 - r, "1-1/qν");
    }
    if (c.kind == ConeKind::Lorentz) {
        svg.u_ticks.emplace_back(Rational(c.n - 2, 2 * c.n), "(n-2)/2n");
        if (!ix.p_nu.infinite) svg.u_ticks.emplace_back(1 / ix.p_nu.value, "1/pν");
    } else {
        svg.u_ticks.emplace_back(Rational(1, 6), "1/6");
    }
}

std::vector<int> figure_ids() { return {1, 2, 3, 4, 5, 6}; }

Figure make_figure(int id) {
    Figure f;
    f.name = "fig" + std::to_string(id);
    switch (id) {
        case 1: f.n = 5; f.nu = {2, Rational(1, 5)}; break;  // ν₂ below (n−2)/(2n)
        case 2: f.n = 5; f.nu = {2, 1}; break;               // (n−2)/(2n) < ν₂ < n/2 − 1
        case 3: f.n = 5; f.nu = {2, 2}; break;               // ν₂ ≥ n/2 − 1
        case 4: f.n = 3; f.nu = {2, 2}; break;
        case 5: f.n = 3; f.nu = {1, 2}; break;
        case 6: f.n = 5; f.nu = {2, 2}; break;  // ν₁ = ν₂
        default: throw ValidationError("figure id must be 1..6");
    }
    f.domain = id == 5 ? "ps" : "lorentz";
    const ConeStructure c = id == 5 ? ConeStructure::spherical() : ConeStructure::lorentz(f.n);
    const std::string nu_text = "ν = (" + to_string(f.nu[0]) + ", " + to_string(f.nu[1]) + ")";
    if (id <= 4) {
        f.region = region_lorentz(f.nu, f.n);
        f.svg.title = "Lorentz tube, n = " + std::to_string(f.n) + ", " + nu_text;
    } else if (id == 5) {
        f.region = region_ps(f.nu);
        f.svg.title = "Pyateckii-Shapiro domain, " + nu_text;
    } else {
        f.region.name = "fig6";
        append(f.region, region_strip(f.nu, c));
        append(f.region, region_lorentz_wedge(f.nu, f.n));
        append(f.region, region_lorentz(f.nu, f.n));
        f.svg.title = "Lorentz tube, n = " + std::to_string(f.n) + ", ν₁ = ν₂, " + nu_text;
    }
    f.region.name = f.name;
    add_index_ticks(f.svg, f.nu, c);
    return f;
}

}  // namespace hcone
