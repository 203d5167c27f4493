// modflow: simulate/price/asymmetry/verify driver over a key=value config.
// Exit codes: 0 ok, 1 verification failure, 2 bad config or usage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "modflow/commands.hpp"
#include "modflow/config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::int64_t seed = -1;
    bool seed_set = false;
    unsigned threads = 0;
    bool threads_set = false;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "experiment config file")->required();
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker thread count (0 = machine)")
        ->each([&args](const std::string&) { args.threads_set = true; });
    cmd->add_option("--out", args.out_path, "write output to a file instead of stdout");
}

int run(const CommonArgs& args,
        const std::function<int(const modflow::ExperimentConfig&, std::ostream&)>& body) {
    modflow::ExperimentConfig cfg;
    try {
        cfg = modflow::load_config(args.config_path);
        if (args.seed_set) cfg.seed = static_cast<std::uint64_t>(args.seed);
        if (args.threads_set) cfg.threads = args.threads;
        // MODFLOW_SEED overrides both the config and the flag
        if (const char* env = std::getenv("MODFLOW_SEED"))
            cfg.seed = std::stoull(env);
    } catch (const std::exception& e) {
        std::cerr << "modflow: " << e.what() << "\n";
        return 2;
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.out_path.empty()) {
        file.open(args.out_path, std::ios::binary);
        if (!file) {
            std::cerr << "modflow: cannot open output file " << args.out_path << "\n";
            return 2;
        }
        out = &file;
    }
    try {
        return body(cfg, *out);
    } catch (const std::exception& e) {
        std::cerr << "modflow: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conditional-law simulation, pricing and divergence toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args, price_args, asym_args, verify_args;
    CLI::App* sim = app.add_subcommand("simulate", "per-path filter and dynamics CSV");
    CLI::App* price = app.add_subcommand("price", "call decomposition and MC cross-check");
    CLI::App* asym = app.add_subcommand("asymmetry", "two-observer divergence CSV");
    CLI::App* verify = app.add_subcommand("verify", "oracle suite report");
    add_common(sim, sim_args);
    add_common(price, price_args);
    add_common(asym, asym_args);
    add_common(verify, verify_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim->parsed())
        return run(sim_args, [](const modflow::ExperimentConfig& c, std::ostream& o) {
            modflow::cmd_simulate(c, o);
            return 0;
        });
    if (price->parsed())
        return run(price_args, [](const modflow::ExperimentConfig& c, std::ostream& o) {
            modflow::cmd_price(c, o);
            return 0;
        });
    if (asym->parsed())
        return run(asym_args, [](const modflow::ExperimentConfig& c, std::ostream& o) {
            modflow::cmd_asymmetry(c, o);
            return 0;
        });
    return run(verify_args, [](const modflow::ExperimentConfig& c, std::ostream& o) {
        return modflow::cmd_verify(c, o);
    });
}
