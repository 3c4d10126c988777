#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "gns/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gnslab: batch runs for the sharp GN / continuous-dimension Sobolev "
                 "stability toolkit"};
    app.require_subcommand(1);

    struct Options {
        std::string spec;
        std::string out = ".";
        int resolution = 0;
    };
    Options opt;

    const std::pair<const char*, const char*> commands[] = {
        {"constants", "sharp constants, exponents and measure normalizations per (n, t)"},
        {"deficit", "GN deficits of perturbed extremals"},
        {"identity", "deficit identity residuals over a corpus (gate: exit 1 on violation)"},
        {"distance", "manifold distances of perturbed profiles in all three metrics"},
        {"probe", "deficit-vs-distance stability sweep with fitted slope"},
        {"lemmas", "proximity, L1-comparison and pointwise bound checks"},
        {"alpha", "empirical stability-constant envelope and sharpness sweep"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--spec", opt.spec, "run-spec file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory (default: current)");
        sub->add_option("--resolution", opt.resolution,
                        "override the spec's quadrature resolution");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        gns::RunSpec spec = gns::parse_run_spec(opt.spec, command);
        if (opt.resolution > 0) {
            if (opt.resolution < 8) {
                std::fprintf(stderr, "gnslab: --resolution must be >= 8\n");
                return 2;
            }
            spec.resolution = opt.resolution;
        }
        return gns::run(spec, opt.out);
    } catch (const gns::SpecError& e) {
        std::fprintf(stderr, "gnslab: invalid spec: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "gnslab: %s\n", e.what());
        return 3;
    }
}
