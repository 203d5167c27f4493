#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "modflow/commands.hpp"
#include "modflow/config.hpp"

#ifndef _WIN32
#include <sys/wait.h>
#endif

using namespace modflow;

namespace {

const char* kBaseConfig = R"(
# two-source binary experiment
seed = 7
n_paths = 3
threads = 1
grid.n_steps = 20
prior.atoms = 0:0.5, 1:0.5
sources.sigmas = 1.0, 0.7
field.mode = independent
field.lambda_on = 1.5, 1.0
field.lambda_off = 1.0, 0.8
field.initial_mask = 10
)";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MODFLOW_BIN) + " " + args;
    const int status = std::system(cmd.c_str());
#ifdef _WIN32
    return status;
#else
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
}

}  // namespace

TEST_CASE("config parsing round-trips the base experiment") {
    const ExperimentConfig cfg = parse_config_text(kBaseConfig);
    CHECK(cfg.seed == 7);
    CHECK(cfg.n_paths == 3);
    CHECK(cfg.threads == 1);
    CHECK(cfg.grid.n_steps() == 20);
    CHECK(cfg.prior.atoms() == std::vector<double>{0.0, 1.0});
    CHECK(cfg.sources.sigmas == std::vector<double>{1.0, 0.7});
    CHECK(cfg.field.mode == FieldMode::IndependentOnOff);
    CHECK(cfg.field.initial_mask == 0b01);  // leftmost mask char is source 1
    CHECK(cfg.field.lambda_off == std::vector<double>{1.0, 0.8});
    CHECK(cfg.config_hash != 0);
    // the hash is over canonicalized text: reordering lines does not change it
    std::string reordered = "field.initial_mask = 10\nseed = 7\n";
    reordered += "n_paths = 3\nthreads = 1\ngrid.n_steps = 20\n";
    reordered += "prior.atoms = 0:0.5, 1:0.5\nsources.sigmas = 1.0, 0.7\n";
    reordered += "field.mode = independent\nfield.lambda_on = 1.5, 1.0\n";
    reordered += "field.lambda_off = 1.0, 0.8\n";
    CHECK(parse_config_text(reordered).config_hash == cfg.config_hash);
}

TEST_CASE("config parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_config_text("seed = 1\nbogus.key = 2\n"
                                      "sources.sigmas = 1.0\nfield.mode = monotone\n"
                                      "field.lambda_on = 1.0\nprior.atoms = 0:1\n"),
                    std::invalid_argument);  // unknown key
    CHECK_THROWS_AS(parse_config_text("seed = 1\nseed = 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("seed = 1\n"), std::invalid_argument);  // no sources
    CHECK_THROWS_AS(parse_config_text("sources.sigmas = 0.0\nfield.mode = monotone\n"
                                      "field.lambda_on = 1.0\nprior.atoms = 0:1\n"),
                    std::invalid_argument);  // zero noise level
    CHECK_THROWS_AS(parse_config_text("sources.sigmas = 1.0\nfield.mode = monotone\n"
                                      "field.lambda_on = nope\nprior.atoms = 0:1\n"),
                    std::invalid_argument);
}

TEST_CASE("simulate output is byte-identical across repeated runs") {
    const ExperimentConfig cfg = parse_config_text(kBaseConfig);
    std::ostringstream a, b;
    cmd_simulate(cfg, a);
    cmd_simulate(cfg, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("# config_hash=", 0) == 0);
}

TEST_CASE("dark system simulate keeps the filter at the prior mean") {
    const char* text =
        "seed = 3\nn_paths = 2\nthreads = 1\ngrid.n_steps = 10\n"
        "prior.atoms = 0:0.5, 1:0.5\nsources.sigmas = 1.0\n"
        "field.mode = monotone\nfield.lambda_on = 0.0\nfield.initial_mask = 0\n";
    std::ostringstream out;
    cmd_simulate(parse_config_text(text), out);
    std::stringstream lines(out.str());
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("path_id", 0) == 0) continue;
        const auto cols = split_csv(line);
        REQUIRE(cols.size() == 12);
        CHECK(cols[2] == "0");
        if (std::stod(cols[1]) < 1.0) {  // at t=1 the signal itself is revealed
            CHECK(std::stod(cols[6]) == doctest::Approx(0.5).epsilon(1e-14));  // x_mean
            CHECK(std::stod(cols[8]) == 0.0);                                  // m
        }
        ++rows;
    }
    CHECK(rows == 2 * 11);
}

TEST_CASE("zero-strike price decomposition reproduces the discounted asset") {
    const char* text =
        "seed = 5\nprior.atoms = 0:0.5, 1:0.5\nsources.sigmas = 1.0\n"
        "field.mode = monotone\nfield.lambda_on = 0.5\nfield.initial_mask = 1\n"
        "pricing.strike = 0.0\npricing.exercise_t = 0.5\npricing.rate = 0.02\n"
        "pricing.mc_paths = 1000\n";
    std::ostringstream out;
    cmd_price(parse_config_text(text), out);
    std::stringstream lines(out.str());
    std::string line;
    bool saw_total = false, saw_state = false;
    while (std::getline(lines, line)) {
        const auto cols = split_csv(line);
        if (cols.empty()) continue;
        if (cols[0] == "state") {
            saw_state = true;
            CHECK(cols[3] == "-inf");  // zero strike: always exercised
        }
        if (cols[0] == "total") {
            saw_total = true;
            CHECK(std::stod(cols[4]) ==
                  doctest::Approx(std::exp(-0.02) * 0.5).epsilon(1e-12));
        }
    }
    CHECK(saw_state);
    CHECK(saw_total);
}

TEST_CASE("unreachable strike renders the +inf sentinel and a zero price") {
    const char* text =
        "seed = 5\nprior.atoms = 0:0.5, 1:0.5\nsources.sigmas = 1.0\n"
        "field.mode = monotone\nfield.lambda_on = 0.5\nfield.initial_mask = 1\n"
        "pricing.strike = 5.0\npricing.exercise_t = 0.5\npricing.mc_paths = 1000\n";
    std::ostringstream out;
    cmd_price(parse_config_text(text), out);
    CHECK(out.str().find("+inf") != std::string::npos);
    std::stringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
        const auto cols = split_csv(line);
        if (!cols.empty() && cols[0] == "total")
            CHECK(std::stod(cols[4]) == 0.0);
    }
}

TEST_CASE("price command refuses a config without a pricing block") {
    CHECK_THROWS_AS(
        [] {
            std::ostringstream out;
            cmd_price(parse_config_text(kBaseConfig), out);
        }(),
        std::invalid_argument);
}

TEST_CASE("asymmetry of identical observers is a column of zeros") {
    const char* text =
        "seed = 11\nn_paths = 2\nthreads = 1\ngrid.n_steps = 20\n"
        "prior.atoms = 0:0.5, 1:0.5\nsources.sigmas = 1.0\n"
        "field.mode = monotone\nfield.lambda_on = 0.0\nfield.initial_mask = 1\n"
        "asymmetry.agent1.field.mode = monotone\n"
        "asymmetry.agent1.field.lambda_on = 0.0\n"
        "asymmetry.agent1.field.initial_mask = 1\n"
        "asymmetry.agent2.field.mode = monotone\n"
        "asymmetry.agent2.field.lambda_on = 0.0\n"
        "asymmetry.agent2.field.initial_mask = 1\n";
    std::ostringstream out;
    cmd_asymmetry(parse_config_text(text), out);
    std::stringstream lines(out.str());
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("path_id", 0) == 0) continue;
        const auto cols = split_csv(line);
        REQUIRE(cols.size() == 7);
        CHECK(std::stod(cols[2]) == 0.0);
        CHECK(cols[5] == cols[6]);
        ++rows;
    }
    CHECK(rows > 0);
}

TEST_CASE("binary runs end to end with documented exit codes") {
    namespace fs = std::filesystem;
    const auto cfg_path = temp_file("modflow_cli_ok.cfg", kBaseConfig);
    const auto out_a = fs::temp_directory_path() / "modflow_cli_a.csv";
    const auto out_b = fs::temp_directory_path() / "modflow_cli_b.csv";

    CHECK(run_cli("simulate " + cfg_path.string() + " --out " + out_a.string()) == 0);
    CHECK(run_cli("simulate " + cfg_path.string() + " --out " + out_b.string()) == 0);
    const std::string a = slurp(out_a);
    CHECK(a == slurp(out_b));
    CHECK(a.rfind("# config_hash=", 0) == 0);

    // --seed overrides the config seed
    CHECK(run_cli("simulate " + cfg_path.string() + " --seed 99 --out " +
                  out_b.string()) == 0);
    CHECK(a != slurp(out_b));

    // the environment seed outranks both the config and the flag
    CHECK(run_cli("simulate " + cfg_path.string() + " --seed 1 --out " + out_a.string() +
                  " >/dev/null 2>&1; MODFLOW_SEED=7 " + std::string(MODFLOW_BIN) +
                  " simulate " + cfg_path.string() + " --seed 1 --out " +
                  out_a.string()) == 0);
    std::ostringstream direct;
    cmd_simulate(parse_config_text(kBaseConfig), direct);
    CHECK(slurp(out_a) == direct.str());

    for (auto p : {out_a, out_b, fs::path(cfg_path)}) fs::remove(p);
}

TEST_CASE("binary reports bad configs and bad usage as exit code 2") {
    const auto bad = temp_file("modflow_cli_bad.cfg",
                               "sources.sigmas = 0.0\nprior.atoms = 0:1\n"
                               "field.mode = monotone\nfield.lambda_on = 1.0\n");
    CHECK(run_cli("simulate " + bad.string() + " >/dev/null 2>&1") == 2);
    CHECK(run_cli("simulate /nonexistent/path.cfg >/dev/null 2>&1") == 2);
    CHECK(run_cli(">/dev/null 2>&1") == 2);  // missing subcommand
    CHECK(run_cli("price " + bad.string() + " >/dev/null 2>&1") == 2);
    std::filesystem::remove(bad);
}

TEST_CASE("verify subcommand passes on a reduced-scale config") {
    const std::string text = std::string(kBaseConfig) +
                             "verify.cases = 50\n";
    // reuse base but with enough paths for the statistical suites
    std::string scaled = text;
    scaled.replace(scaled.find("n_paths = 3"), 11, "n_paths = 2000");
    scaled.replace(scaled.find("threads = 1"), 11, "threads = 0");
    const auto cfg_path = temp_file("modflow_cli_verify.cfg", scaled);
    CHECK(run_cli("verify " + cfg_path.string() + " >/dev/null 2>&1") == 0);
    std::filesystem::remove(cfg_path);
}
