#include "modflow/signal_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace modflow {

SignalLaw::SignalLaw(std::shared_ptr<const std::vector<double>> atoms,
                     std::vector<double> weights, std::string origin)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), origin_(std::move(origin)) {
    if (atoms_->empty()) throw std::invalid_argument("SignalLaw: no atoms");
    if (atoms_->size() != weights_.size())
        throw std::invalid_argument("SignalLaw: atom/weight size mismatch");
    for (std::size_t j = 1; j < atoms_->size(); ++j)
        if (!((*atoms_)[j] > (*atoms_)[j - 1]))
            throw std::invalid_argument("SignalLaw: atoms must be distinct and sorted");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw std::invalid_argument("SignalLaw: weights must be positive");
        total += w;
    }
    for (double& w : weights_) w /= total;
    cdf_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cdf_.begin());
    cdf_.back() = 1.0;
}

SignalLaw SignalLaw::from_atoms(std::vector<double> atoms, std::vector<double> weights) {
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    std::vector<double> xs, ws;
    xs.reserve(atoms.size());
    ws.reserve(atoms.size());
    for (std::size_t j : order) {
        xs.push_back(atoms[j]);
        ws.push_back(weights[j]);
    }
    return SignalLaw(std::make_shared<std::vector<double>>(std::move(xs)), std::move(ws),
                     "native-discrete");
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // initial guesses for the roots, largest first
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1];
        else
            z = 2.0 * z - nodes[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

SignalLaw SignalLaw::gaussian(double mean, double sd, int n_quad) {
    if (!(sd > 0.0)) throw std::invalid_argument("SignalLaw::gaussian: sd must be positive");
    std::vector<double> y, w;
    gauss_hermite(n_quad, y, w);
    std::vector<double> xs(n_quad), ws(n_quad);
    const double sqrt2 = std::sqrt(2.0);
    for (int j = 0; j < n_quad; ++j) {
        // nodes come out largest first; reverse to ascending
        xs[j] = mean + sqrt2 * sd * y[n_quad - 1 - j];
        ws[j] = w[n_quad - 1 - j];
    }
    return SignalLaw(std::make_shared<std::vector<double>>(std::move(xs)), std::move(ws),
                     "quadrature(gaussian," + std::to_string(n_quad) + ")");
}

SignalLaw SignalLaw::from_density(const std::function<double(double)>& density, double lo,
                                  double hi, int n_nodes) {
    if (!(hi > lo)) throw std::invalid_argument("SignalLaw::from_density: bad interval");
    std::vector<double> xs(n_nodes), ws(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        xs[j] = lo + (hi - lo) * (j + 0.5) / n_nodes;
        ws[j] = density(xs[j]);
    }
    return SignalLaw(std::make_shared<std::vector<double>>(std::move(xs)), std::move(ws),
                     "quadrature(uniform," + std::to_string(n_nodes) + ")");
}

double SignalLaw::moment(int k) const {
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += weights_[j] * std::pow((*atoms_)[j], k);
    return s;
}

double SignalLaw::mean() const {
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += weights_[j] * (*atoms_)[j];
    return s;
}

double SignalLaw::variance() const {
    const double m = mean();
    return moment(2) - m * m;
}

double SignalLaw::sample(RngStream& rng) const {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t j = std::min<std::size_t>(it - cdf_.begin(), size() - 1);
    return (*atoms_)[j];
}

}  // namespace modflow
