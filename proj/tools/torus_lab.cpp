// SPDX-License-Identifier: Apache-2.0
//
// torus-lab: configuration-driven experiment runner.
//
//   torus-lab run <config> [overrides]
//
// Config files are flat key=value text; see README for the key list. The
// TORUS_LAB_OUT environment variable overrides the output directory.

#include "torus/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv)
{
    CLI::App app{"pseudo-spectral torus laboratory"};
    app.require_subcommand(1);

    auto* runcmd = app.add_subcommand("run", "run an experiment from a config file");
    std::string config_path;
    runcmd->add_option("config", config_path, "flat key=value config file")
        ->required();

    // optional overrides, applied on top of the file
    std::string grid, dim, eps, gamma, formulation, out, format, seed;
    runcmd->add_option("--grid", grid, "points per dimension M");
    runcmd->add_option("--dim", dim, "space dimension N (2 or 3)");
    runcmd->add_option("--eps", eps, "data amplitude");
    runcmd->add_option("--gamma", gamma, "pressure exponent");
    runcmd->add_option("--formulation", formulation, "original|effective");
    runcmd->add_option("--out", out, "output directory");
    runcmd->add_option("--format", format, "csv|json");
    runcmd->add_option("--seed", seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        torus::ExperimentConfig cfg = torus::ExperimentConfig::from_file(config_path);
        auto override_key = [&](const char* key, const std::string& v) {
            if (!v.empty())
                cfg.set(key, v);
        };
        override_key("grid", grid);
        override_key("dim", dim);
        override_key("eps", eps);
        override_key("gamma", gamma);
        override_key("formulation", formulation);
        override_key("out", out);
        override_key("format", format);
        override_key("seed", seed);
        if (const char* env = std::getenv(torus::kOutDirEnv))
            cfg.out = env;
        cfg.validate();

        torus::DiagnosticsReport rep = torus::run(cfg);
        const std::string path = torus::emit(rep, cfg.out, cfg.format);

        for (const auto& c : rep.checks)
            std::printf("%-24s lhs=%.6g rhs=%.6g ratio=%.6g grid=%d %s\n",
                        c.name.c_str(), c.lhs, c.rhs, c.ratio, c.grid,
                        c.pass ? "pass" : "FAIL");
        for (const auto& [k, v] : rep.scalars)
            std::printf("%-24s %.17g\n", k.c_str(), v);
        std::printf("report: %s\n", path.c_str());
        std::printf("hash: %016llx\n",
                    static_cast<unsigned long long>(torus::report_hash(rep)));
        return rep.all_pass() ? 0 : 1;
    } catch (const torus::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
