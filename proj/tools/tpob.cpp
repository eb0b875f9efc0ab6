#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpob/cli.hpp"

namespace {

void add_common_flags(CLI::App* cmd, tpob::RunManifest& manifest) {
    cmd->add_option("--scenario", manifest.scenario_path,
                    "Scenario JSON path or builtin:<name>");
    cmd->add_option("--h", manifest.h, "Mesh size");
    cmd->add_option("--out", manifest.out_dir, "Output directory");
    cmd->add_option("--seed", manifest.seed, "RNG seed");
    cmd->add_option("--tol", manifest.tol, "Solver tolerance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-phase obstacle problem laboratory"};
    app.require_subcommand(1);

    tpob::RunManifest manifest;
    manifest.scenario_path = "builtin:homogeneous";

    struct {
        const char* name;
        const char* help;
        std::vector<std::string> diagnostics;
    } const runs[] = {
        {"solve", "Solve a scenario and export the solution and energy trace",
         {"solve"}},
        {"trace", "Export Weiss, ACF, density, and tangency radial traces",
         {"weiss", "acf", "density", "tangency"}},
        {"blowup", "Classify sup-norm blow-ups at dyadic scales", {"blowup"}},
        {"ode", "Brute-force the profile ODE for the scenario coefficients",
         {"ode"}},
        {"verify", "Check scenario catalog invariants", {"catalog-verify"}},
        {"plot", "Render the region decomposition and free boundary as SVG",
         {"plot"}},
    };
    for (const auto& r : runs) {
        CLI::App* cmd = app.add_subcommand(r.name, r.help);
        add_common_flags(cmd, manifest);
        cmd->callback([&manifest, &r] { manifest.diagnostics = r.diagnostics; });
    }

    std::vector<double> deltas = {0.05, 0.01, 0.002, 1e-5};
    std::vector<double> epsilons = {0.24, 0.20, 0.165, 0.13};
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Boundary-data family sweep (tangency counterexample)");
    add_common_flags(sweep, manifest);
    sweep->add_option("--delta", deltas, "Decreasing bump heights");
    sweep->add_option("--eps", epsilons, "Decreasing support offsets");

    CLI11_PARSE(app, argc, argv);

    if (sweep->parsed()) {
        if (deltas.size() != epsilons.size()) {
            std::cerr << "config error: --delta and --eps need equal length\n";
            return tpob::kExitConfigError;
        }
        try {
            std::vector<std::pair<double, double>> pairs;
            for (size_t k = 0; k < deltas.size(); ++k)
                pairs.emplace_back(deltas[k], epsilons[k]);
            const std::string csv =
                tpob::run_counterexample_sweep(pairs, manifest.h, {1.0, 1.0});
            std::filesystem::create_directories(manifest.out_dir);
            std::ofstream out(
                std::filesystem::path(manifest.out_dir) / "sweep.csv",
                std::ios::binary);
            out << csv;
            std::cout << csv;
        } catch (const std::exception& ex) {
            std::cerr << "config error: " << ex.what() << "\n";
            return tpob::kExitConfigError;
        }
        return tpob::kExitOk;
    }

    return tpob::run(manifest, std::cerr);
}
