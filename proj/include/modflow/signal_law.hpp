#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "modflow/rng.hpp"

namespace modflow {

// Finite atomic law of the signal X. Continuous priors are discretized once
// at construction; all downstream conditioning is exact on the atoms.
class SignalLaw {
public:
    static SignalLaw from_atoms(std::vector<double> atoms, std::vector<double> weights);
    // Gauss-Hermite discretization of N(mean, sd^2)
    static SignalLaw gaussian(double mean, double sd, int n_quad = 129);
    // uniform-grid discretization of an unnormalized density on [lo, hi]
    static SignalLaw from_density(const std::function<double(double)>& density,
                                  double lo, double hi, int n_nodes = 129);

    const std::vector<double>& atoms() const { return *atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    std::shared_ptr<const std::vector<double>> shared_atoms() const { return atoms_; }
    std::size_t size() const { return atoms_->size(); }
    const std::string& origin() const { return origin_; }

    double mean() const;
    double moment(int k) const;
    double variance() const;
    double min_atom() const { return atoms_->front(); }
    double max_atom() const { return atoms_->back(); }

    // inverse-CDF draw
    double sample(RngStream& rng) const;

private:
    SignalLaw(std::shared_ptr<const std::vector<double>> atoms,
              std::vector<double> weights, std::string origin);

    std::shared_ptr<const std::vector<double>> atoms_;
    std::vector<double> weights_;
    std::vector<double> cdf_;
    std::string origin_;
};

// Physicists' Gauss-Hermite rule: integrates f against exp(-y^2) on R.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace modflow
