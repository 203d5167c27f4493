#include "modflow/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modflow {

KlResult kl_symmetric(const PosteriorMeasure& p, const PosteriorMeasure& q) {
    if (p.shared_atoms() != q.shared_atoms() && p.atoms() != q.atoms())
        throw std::invalid_argument("kl_symmetric: posteriors live on different atoms");
    if (p.size() != q.size())
        throw std::invalid_argument("kl_symmetric: posterior sizes differ");
    KlResult res;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double pj = p.weights()[j];
        const double qj = q.weights()[j];
        if (!(pj > 0.0) || !(qj > 0.0))
            throw std::invalid_argument("kl_symmetric: weights must be strictly positive");
        const double lr = std::log(pj) - std::log(qj);
        res.a_half += pj * lr;
        res.b_half -= qj * lr;
    }
    return res;
}

std::vector<AsymmetryPoint> asymmetry_path(const SignalLaw& prior,
                                           const InfoSystemPath& agent1,
                                           const InfoSystemPath& agent2) {
    if (agent1.times != agent2.times)
        throw std::invalid_argument("asymmetry_path: agents must share the node set");
    std::vector<AsymmetryPoint> out;
    out.reserve(agent1.n_nodes());
    for (std::size_t k = 0; k < agent1.n_nodes(); ++k) {
        const double t = agent1.times[k];
        if (t >= 1.0) break;
        const PosteriorMeasure p =
            posterior(prior, effective_state(agent1, k), complementary_summary(agent1, k));
        const PosteriorMeasure q =
            posterior(prior, effective_state(agent2, k), complementary_summary(agent2, k));
        const KlResult kl = kl_symmetric(p, q);
        const bool ev1 =
            std::find(agent1.event_nodes.begin(), agent1.event_nodes.end(), k) !=
            agent1.event_nodes.end() && agent1.mask[k] != (k > 0 ? agent1.mask[k - 1]
                                                                 : agent1.sw.initial_mask);
        const bool ev2 =
            std::find(agent2.event_nodes.begin(), agent2.event_nodes.end(), k) !=
            agent2.event_nodes.end() && agent2.mask[k] != (k > 0 ? agent2.mask[k - 1]
                                                                 : agent2.sw.initial_mask);
        out.push_back({t, kl.symmetric(), kl.a_half, kl.b_half, agent1.mask[k],
                       agent2.mask[k], ev1 || ev2});
    }
    return out;
}

}  // namespace modflow
