#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hcone/errors.hpp"

namespace hcli {

using hcone::ValidationError;

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = {
        {"domain", KeyKind::Text, "lorentz (tube over Λ_n) or ps (Pyateckii-Shapiro domain)"},
        {"n", KeyKind::Int, "dimension of the Lorentz cone, 3..8"},
        {"nu", KeyKind::RationalPair, "weight ν as a,b (rationals, e.g. 3/2,3/2)"},
        {"mu", KeyKind::RationalPair, "exponent μ"},
        {"alpha", KeyKind::RationalPair, "exponent α"},
        {"lambda", KeyKind::RationalPair, "exponent λ"},
        {"gamma", KeyKind::RationalPair, "Schur test exponent γ"},
        {"p", KeyKind::Rational, "Lebesgue exponent p (or inf in regions)"},
        {"q", KeyKind::Rational, "Lebesgue exponent q"},
        {"k", KeyKind::Int, "power of the Box operator"},
        {"s", KeyKind::Real, "decoupling exponent s"},
        {"j", KeyKind::IntList, "dyadic scales, e.g. 1,2,3,4"},
        {"seed", KeyKind::Count, "root seed of every random stream"},
        {"output_dir", KeyKind::Text, "where files are written (default $HCONE_OUTPUT_DIR or hcone-out)"},
        {"formats", KeyKind::Formats, "subset of json,csv,svg"},
        {"svg_timestamp", KeyKind::Bool, "write a timestamp comment into SVG files"},
        {"grid", KeyKind::Int, "decoupling grid size N (N³ points)"},
        {"trials", KeyKind::Int, "decoupling trials per scale"},
        {"delta", KeyKind::Real, "Whitney cell aperture factor"},
        {"only_cell", KeyKind::Int, "decoupling: keep a single cell (1-based, 0 = all)"},
        {"lattice_radius", KeyKind::Real, "lattice shell radius around e"},
        {"lattice_candidates", KeyKind::Count, "candidate pool size for the lattice"},
        {"separation", KeyKind::Real, "lattice separation δ"},
        {"covering", KeyKind::Real, "lattice covering radius"},
        {"audit_samples", KeyKind::Count, "samples of the coverage audits"},
        {"points", KeyKind::Count, "random sample points of a verifier"},
        {"mc_samples", KeyKind::Count, "Monte-Carlo samples per batch"},
        {"batches", KeyKind::Count, "independent Monte-Carlo batches"},
        {"tol", KeyKind::Real, "pass tolerance of a verifier"},
        {"z", KeyKind::Text, "kernel-eval point as re,im pairs"},
        {"w", KeyKind::Text, "kernel-eval second point as re,im pairs"},
        {"normalize", KeyKind::Bool, "kernel-eval: compute d_ν by quadrature"},
        {"quad.step", KeyKind::Real, "trapezoid step in the mapped variables"},
        {"quad.tail_tol", KeyKind::Real, "relative tail cut-off of the trapezoid sums"},
        {"quad.tol", KeyKind::Real, "agreement required between offset grids"},
        {"quad.max_steps", KeyKind::Int, "steps per direction before declaring divergence"},
        {"quad.nodes", KeyKind::Int, "nodes per axis of product grids"},
        {"quad.r_x", KeyKind::Real, "half-width of the x box of product grids"},
        {"quad.eps_y", KeyKind::Real, "inner cut of the y shell"},
        {"quad.r_y", KeyKind::Real, "outer cut of the y shell"},
        {"quad.r_u", KeyKind::Real, "radius of the u disc"},
    };
    return keys;
}

const KeyInfo* find_key(const std::string& name) {
    for (const KeyInfo& k : config_keys())
        if (k.name == name) return &k;
    return nullptr;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long to_ll(const std::string& s) {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
}

double to_real(const std::string& s) {
    if (s == "inf") return HUGE_VAL;
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
}

std::uint64_t to_count(const std::string& s) {
    // Accepts 1000000 and 1e6.
    double d = to_real(s);
    if (!(d >= 0) || d > 1.8e19 || d != std::floor(d)) throw std::invalid_argument(s);
    return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

void check_value(const KeyInfo& k, const std::string& v) {
    switch (k.kind) {
        case KeyKind::Int: to_ll(v); break;
        case KeyKind::Real: to_real(v); break;
        case KeyKind::Count: to_count(v); break;
        case KeyKind::Rational: hcone::parse_xrational(v); break;
        case KeyKind::RationalPair: parse_pair(v); break;
        case KeyKind::IntList: parse_int_list(v); break;
        case KeyKind::Bool: to_bool(v); break;
        case KeyKind::Formats:
            for (const std::string& f : split(v, ','))
                if (f != "json" && f != "csv" && f != "svg") throw std::invalid_argument(f);
            break;
        case KeyKind::Text:
            if (k.name == "domain" && v != "lorentz" && v != "ps") throw std::invalid_argument(v);
            break;
    }
}

}  // namespace

hcone::RExponent parse_pair(const std::string& s) { return hcone::parse_rexponent(s); }

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const std::string& item : split(s, ',')) out.push_back(static_cast<int>(to_ll(item)));
    if (out.empty()) throw ValidationError("empty list");
    return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const KeyInfo* k = find_key(key);
    if (!k) throw ValidationError("unknown config key '" + key + "'");
    const std::string v = trim(value);
    try {
        check_value(*k, v);
    } catch (const std::exception&) {
        throw ValidationError("bad value for " + key + ": '" + v + "'");
    }
    values_[key] = v;
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

long long RunConfig::integer(const std::string& key, long long fallback) const {
    return has(key) ? to_ll(values_.at(key)) : fallback;
}

double RunConfig::real(const std::string& key, double fallback) const {
    return has(key) ? to_real(values_.at(key)) : fallback;
}

std::uint64_t RunConfig::count(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? to_count(values_.at(key)) : fallback;
}

bool RunConfig::flag(const std::string& key, bool fallback) const {
    return has(key) ? to_bool(values_.at(key)) : fallback;
}

hcone::Rational RunConfig::rational(const std::string& key, const hcone::Rational& fallback) const {
    if (!has(key)) return fallback;
    hcone::XRational x = hcone::parse_xrational(values_.at(key));
    if (x.infinite) throw ValidationError(key + " must be finite here");
    return x.value;
}

hcone::RExponent RunConfig::pair(const std::string& key, const hcone::RExponent& fallback) const {
    return has(key) ? parse_pair(values_.at(key)) : fallback;
}

std::vector<int> RunConfig::int_list(const std::string& key, const std::vector<int>& fallback) const {
    return has(key) ? parse_int_list(values_.at(key)) : fallback;
}

std::string RunConfig::output_dir() const { return text("output_dir", default_output_dir()); }

std::set<std::string> RunConfig::formats() const {
    std::set<std::string> out;
    for (const std::string& f : split(text("formats", "json,csv,svg"), ',')) out.insert(f);
    return out;
}

bool RunConfig::is_ps() const { return text("domain", "lorentz") == "ps"; }

hcone::ConeStructure RunConfig::cone() const {
    if (is_ps()) return hcone::ConeStructure::spherical();
    long long n = integer("n", 3);
    if (n < 3 || n > 8) throw ValidationError("n must be in 3..8, got " + std::to_string(n));
    return hcone::ConeStructure::lorentz(static_cast<int>(n));
}

hcone::QuadratureSpec RunConfig::quadrature(hcone::QuadratureSpec q) const {
    q.step = real("quad.step", q.step);
    q.tail_tol = real("quad.tail_tol", q.tail_tol);
    q.tol = real("quad.tol", q.tol);
    q.max_steps = static_cast<int>(integer("quad.max_steps", q.max_steps));
    q.nodes = static_cast<int>(integer("quad.nodes", q.nodes));
    q.r_x = real("quad.r_x", q.r_x);
    q.eps_y = real("quad.eps_y", q.eps_y);
    q.r_y = real("quad.r_y", q.r_y);
    q.r_u = real("quad.r_u", q.r_u);
    q.samples = count("mc_samples", q.samples);
    q.seed = seed();
    if (!(q.step > 0) || !(q.tail_tol > 0) || !(q.tol > 0) || q.max_steps < 4 || q.nodes < 2)
        throw ValidationError("quadrature settings out of range");
    if (!(q.eps_y > 0 && q.eps_y < q.r_y) || !(q.r_x > 0) || !(q.r_u > 0))
        throw ValidationError("product grid bounds out of range");
    return q;
}

void load_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    load_config_text(cfg, ss.str(), path);
}

std::string default_output_dir() {
    const char* env = std::getenv("HCONE_OUTPUT_DIR");
    return env && *env ? env : "hcone-out";
}

}  // namespace hcli
