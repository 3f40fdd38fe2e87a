#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dislab/commands.hpp"
#include "dislab/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dislab: screw-dislocation energies, forces, and gradient flow"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::vector<std::string> suites;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--threads", threads, "worker threads (overrides config)");
    };

    CLI::App* energy = app.add_subcommand("energy", "renormalized energy breakdown");
    CLI::App* forces = app.add_subcommand("forces", "Peach-Koehler forces by both routes");
    CLI::App* flow = app.add_subcommand("flow", "gradient-flow trajectory");
    CLI::App* verify = app.add_subcommand("verify", "identity and oracle suites");
    CLI::App* dump = app.add_subcommand("dump-config", "parse and re-emit the configuration");
    for (CLI::App* sub : {energy, forces, flow, verify, dump}) add_common(sub);
    verify->add_option("--suite", suites, "suite name(s); overrides the config list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? dislab::kExitConfig : dislab::kExitOk;
    }

    dislab::RunConfig cfg;
    try {
        cfg = dislab::load_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (threads > 0) cfg.threads = threads;
        if (!suites.empty()) cfg.suites = suites;
    } catch (const dislab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dislab::kExitConfig;
    }

    if (energy->parsed()) return dislab::cmd_energy(cfg, std::cerr);
    if (forces->parsed()) return dislab::cmd_forces(cfg, std::cerr);
    if (flow->parsed()) return dislab::cmd_flow(cfg, std::cerr);
    if (verify->parsed()) return dislab::cmd_verify(cfg, std::cerr);
    if (dump->parsed()) return dislab::cmd_dump_config(cfg, std::cout);
    return dislab::kExitConfig;
}
