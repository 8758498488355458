#pragma once

#include <string>
#include <vector>

#include "hcone/regions.hpp"

namespace hcone {

struct Figure {
    std::string name;
    std::string domain;  // "lorentz" or "ps"
    int n = 3;
    RExponent nu;
    PQRegion region;
    SvgOptions svg;
};

// Fixed parameter configurations for figures 1..6 (6 is the ν₁ = ν₂ composite).
Figure make_figure(int id);
std::vector<int> figure_ids();

// Axis ticks at 1/2, 1/q_ν, 1/(2q_ν), 1 − 1/q_ν and (n−2)/(2n), 1/p_ν where finite.
void add_index_ticks(SvgOptions& svg, const RExponent& nu, const ConeStructure& c);

}  // namespace hcone
