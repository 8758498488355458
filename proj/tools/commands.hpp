#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "hcone/integrals.hpp"
#include "hcone/projector.hpp"
#include "json.hpp"

namespace hcli {

using Json = nlohmann::ordered_json;

struct OutputFile {
    std::string name;    // file name inside the output directory
    std::string format;  // csv or svg
    std::string content;
};

// What a command produced. `json` goes to <stem>.json; files are written only
// when their format is enabled.
struct CommandResult {
    std::string stem;
    Json json;
    std::vector<OutputFile> files;
    bool pass = true;
    bool nonconvergence = false;
};

const std::vector<std::string>& region_selectors();
const std::vector<std::string>& verify_selectors();
const std::vector<std::string>& probe_selectors();

CommandResult cmd_regions(const RunConfig& cfg, const std::string& selector);
CommandResult cmd_verify(const RunConfig& cfg, const std::string& selector);
CommandResult cmd_probe(const RunConfig& cfg, const std::string& selector);
CommandResult cmd_lattice(const RunConfig& cfg);
CommandResult cmd_kernel_eval(const RunConfig& cfg);
CommandResult cmd_project(const RunConfig& cfg);

Json to_json(const hcone::IdentityReport& r);
Json to_json(const hcone::OperatorProbeReport& r);

// Writes the enabled formats in a fixed order and returns the paths.
std::vector<std::string> write_outputs(const RunConfig& cfg, const CommandResult& r);
// 0 pass, 1 failed report, 2 non-convergence.
int exit_code(const CommandResult& r);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hcli
