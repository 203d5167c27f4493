#include "modflow/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "modflow/asymmetry.hpp"
#include "modflow/dynamics.hpp"
#include "modflow/parallel.hpp"
#include "modflow/pricing.hpp"
#include "modflow/verify.hpp"

namespace modflow {

namespace {

// fixed 17-significant-digit scientific format; infinities use sentinels
std::string num(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "+inf";
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string mask_str(std::uint32_t mask, int n_sources) {
    std::string s(n_sources, '0');
    for (int i = 0; i < n_sources; ++i)
        if ((mask >> i) & 1u) s[i] = '1';
    return s;
}

void hash_line(const ExperimentConfig& cfg, std::ostream& out) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash));
    out << "# config_hash=" << buf << "\n";
}

}  // namespace

void cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    const SystemSpec spec = cfg.system();
    spec.validate();
    const int n = spec.sources.n();

    hash_line(cfg, out);
    out << "path_id,t,active_mask";
    for (int i = 0; i < n; ++i) out << ",mod_" << (i + 1);
    out << ",xi_hat,sigma_hat,x_mean,x_var,m,w,c_count,n_count\n";

    std::vector<std::string> blocks(cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t p) {
        const InfoSystemPath path = simulate_path(spec, cfg.seed, p);
        const DynamicsResult dyn = build_dynamics(spec.prior, path);
        std::string block;
        for (std::size_t k = 0; k < path.n_nodes(); ++k) {
            if (path.base_index[k] < 0) continue;  // event nodes are internal
            block += std::to_string(p);
            block += ',';
            block += num(path.times[k]);
            block += ',';
            block += mask_str(path.mask[k], n);
            for (int i = 0; i < n; ++i) {
                block += ',';
                block += num(path.modulated[i][k]);
            }
            for (double v : {dyn.path.xi_hat[k], dyn.path.sigma_hat[k],
                             dyn.path.x_mean[k], dyn.path.x_var[k], dyn.path.m[k],
                             dyn.path.w[k]}) {
                block += ',';
                block += num(v);
            }
            block += ',';
            block += std::to_string(dyn.ledger.c_count[k]);
            block += ',';
            block += std::to_string(dyn.ledger.n_count[k]);
            block += '\n';
        }
        blocks[p] = std::move(block);
    });
    for (const auto& b : blocks) out << b;
}

void cmd_price(const ExperimentConfig& cfg, std::ostream& out) {
    if (!cfg.pricing) throw std::invalid_argument("cmd_price: pricing block missing");
    CallSpec spec{cfg.pricing->strike, cfg.pricing->exercise_t, cfg.prior, cfg.sources,
                  cfg.field};
    const DiscountCurve curve = DiscountCurve::flat(cfg.pricing->rate);
    const CallPriceResult res = call_price(spec, curve);
    const McPriceResult mc =
        mc_call_price(spec, curve, cfg.pricing->mc_paths, cfg.seed, cfg.threads);

    hash_line(cfg, out);
    out << "row_type,mask,probability,critical_value,price,stderr\n";
    for (const auto& st : res.states)
        out << "state," << mask_str(st.mask, cfg.sources.n()) << ','
            << num(st.probability) << ',' << num(st.critical) << ',' << num(st.price)
            << ",\n";
    out << "total,,,," << num(res.total) << ",\n";
    out << "mc,,,," << num(mc.estimate) << ',' << num(mc.stderr_) << "\n";
}

void cmd_asymmetry(const ExperimentConfig& cfg, std::ostream& out) {
    if (!cfg.asymmetry) throw std::invalid_argument("cmd_asymmetry: asymmetry block missing");
    const int n = cfg.sources.n();

    hash_line(cfg, out);
    out << "path_id,t,kl_sym,a_half,b_half,agent1_mask,agent2_mask\n";

    std::vector<std::string> blocks(cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t p) {
        auto [a1, a2] = simulate_two_agent_paths(cfg.prior, cfg.sources,
                                                 cfg.asymmetry->agent1,
                                                 cfg.asymmetry->agent2, cfg.grid,
                                                 cfg.seed, p);
        std::string block;
        for (const auto& pt : asymmetry_path(cfg.prior, a1, a2)) {
            block += std::to_string(p);
            block += ',';
            block += num(pt.t);
            block += ',';
            block += num(pt.kl_sym);
            block += ',';
            block += num(pt.a_half);
            block += ',';
            block += num(pt.b_half);
            block += ',';
            block += mask_str(pt.agent1_mask, n);
            block += ',';
            block += mask_str(pt.agent2_mask, n);
            block += '\n';
        }
        blocks[p] = std::move(block);
    });
    for (const auto& b : blocks) out << b;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
    return run_verify_suite(cfg, out) ? 0 : 1;
}

}  // namespace modflow
