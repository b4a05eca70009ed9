#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "beinit/ansatz.hpp"
#include "beinit/distributions.hpp"

namespace beinit {

/// Parameter-space noise schedule: sigma_n^2 = eta / (1 + i)^(gamma + sigma_i^2).
struct PerturbationConfig {
    double eta = 0.01;
    double gamma = 0.55;
};

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    int iterations = 50;
    std::optional<PerturbationConfig> perturbation = PerturbationConfig{};
    /// Initialisation distribution; empty means fit a beta to the data (empirical Bayes).
    std::optional<DistributionSpec> init;
    double split_ratio = 0.8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainRecord {
    int iteration;
    double cost;
    double sigma2_i; ///< variance across the entries of the gradient at theta
    double sigma2_n; ///< variance of the perturbation applied this iteration
};

using TrainHistory = std::vector<TrainRecord>;

struct TrainResult {
    ParameterTensor<double> initial_theta;
    ParameterTensor<double> theta;
    TrainHistory history;
    DistributionSpec init_distribution;
    bool beta_fit_fallback = false;
};

double perturbation_sigma(double eta, double gamma, int iteration, double sigma2_i);

/// theta + N(0, sigma2_n) elementwise; sigma2_n == 0 returns theta unchanged.
Eigen::VectorXd perturb(const Eigen::VectorXd &theta, double sigma2_n, std::uint64_t seed);

/// Look-ahead Nesterov update:
///   v' = mu v - lr g,   theta' = theta + mu v' - lr g.
std::pair<Eigen::VectorXd, Eigen::VectorXd> nesterov_step(const Eigen::VectorXd &theta,
                                                          const Eigen::VectorXd &velocity,
                                                          const Eigen::VectorXd &grad, double lr,
                                                          double momentum);

/// Seeded shuffle, then the first floor(ratio m) rows train and the rest test.
std::pair<Dataset, Dataset> split(const Dataset &data, double ratio, std::uint64_t seed);

TrainResult beinit_train(const Dataset &data, const AnsatzConfig &ansatz, const TrainConfig &config);

/// Header `iter,cost,sigma2_i,sigma2_n`, values at round-trip precision.
void write_history_csv(std::ostream &out, const TrainHistory &history);

} // namespace beinit
