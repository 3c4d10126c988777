#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gns {

// Declarative batch-run description, parsed from a JSON spec file. Every
// command reads params/resolution; corpus recipes feed the perturbation-based
// commands and default sensibly when absent.
struct RunSpec {
    std::string command;  // constants | deficit | identity | distance | probe | lemmas | alpha

    struct Item {
        int n = 2;
        double t = 2.0;
    };
    std::vector<Item> params;

    struct Recipe {
        std::string bump = "ring";  // ring | core
        std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
        double amplitude = 1.0;
        unsigned seed = 1;
        int count = 6;  // corpus size for corpus-style commands
    };
    std::vector<Recipe> corpus;

    int resolution = 64;
    std::string output_path;    // default: <command>.<format>
    std::string output_format;  // "csv" or "json"
};

// Spec-file problems carry a file/line or JSON-pointer anchor in what().
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses and validates; `command` is the CLI subcommand the spec must serve.
RunSpec parse_run_spec(const std::string& path, const std::string& command);

// Executes the run and writes the artifact file under out_dir atomically.
// Returns the process exit status: 0 on success, 1 when a gate command
// (identity) finds tolerance violations. Numerical errors on individual
// items become per-row error records and do not stop the run.
int run(const RunSpec& spec, const std::string& out_dir);

}  // namespace gns
