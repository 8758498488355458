#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hcone/cone.hpp"
#include "hcone/quadrature.hpp"
#include "hcone/rational.hpp"
#include "hcone/regions.hpp"

namespace hcli {

enum class KeyKind { Int, Real, Count, Rational, RationalPair, IntList, Text, Bool, Formats };

struct KeyInfo {
    std::string name;
    KeyKind kind;
    std::string help;
};

// Every key accepted in config files and as --flag (dots become dashes on the
// command line, e.g. quad.tail_tol ↔ --quad-tail-tol).
const std::vector<KeyInfo>& config_keys();
const KeyInfo* find_key(const std::string& name);

// Raw settings, each checked against its kind when set. Commands read them with
// per-command defaults, so the same key can default differently per suite.
class RunConfig {
public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string text(const std::string& key, const std::string& fallback) const;
    long long integer(const std::string& key, long long fallback) const;
    double real(const std::string& key, double fallback) const;
    std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    hcone::Rational rational(const std::string& key, const hcone::Rational& fallback) const;
    hcone::RExponent pair(const std::string& key, const hcone::RExponent& fallback) const;
    std::vector<int> int_list(const std::string& key, const std::vector<int>& fallback) const;

    std::uint64_t seed() const { return count("seed", 20240917); }
    std::string output_dir() const;
    std::set<std::string> formats() const;
    // "lorentz" with n, or "ps" (the spherical cone with b = (0,1)).
    bool is_ps() const;
    hcone::ConeStructure cone() const;
    // QuadratureSpec defaults overridden by quad.* keys; `base` supplies
    // command-specific defaults for keys the user did not set.
    hcone::QuadratureSpec quadrature(hcone::QuadratureSpec base = {}) const;

private:
    std::map<std::string, std::string> values_;
};

// `key = value` lines; blank lines and # comments are skipped.
void load_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);
void load_config_file(RunConfig& cfg, const std::string& path);

// $HCONE_OUTPUT_DIR, else "hcone-out".
std::string default_output_dir();

hcone::RExponent parse_pair(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

}  // namespace hcli
