#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "beinit/random.hpp"

namespace beinit {

enum class DistributionKind { Beta, Uniform, Normal };

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
};

/**
 * A parameter-initialisation distribution.
 *
 * Beta(alpha, beta); Uniform[lo, hi); Normal(mean, variance). Note the normal
 * is parametrised by its variance, not its standard deviation.
 */
class DistributionSpec {
  public:
    static DistributionSpec beta(double alpha, double beta);
    static DistributionSpec beta(BetaParams p) { return beta(p.alpha, p.beta); }
    static DistributionSpec uniform(double lo, double hi);
    static DistributionSpec normal(double mean, double variance);

    DistributionKind kind() const noexcept { return kind_; }

    BetaParams beta_params() const;
    double lo() const;
    double hi() const;
    /// Moments of the distribution, whatever its kind.
    double mean() const;
    double variance() const;

    /// e.g. "beta(2,5)", "uniform(0,6.28)", "normal(0,1)"
    std::string describe() const;

  private:
    DistributionSpec(DistributionKind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    DistributionKind kind_;
    double a_;
    double b_;
};

std::string to_string(DistributionKind kind);

/// n i.i.d. draws. Beta draws lie in (0,1), uniform draws in [lo,hi).
Eigen::VectorXd sample(const DistributionSpec &dist, Eigen::Index n, Rng &rng);
Eigen::VectorXd sample(const DistributionSpec &dist, Eigen::Index n, std::uint64_t seed);

/// psi(x) = Gamma'(x)/Gamma(x) for x > 0.
double digamma(double x);
/// psi'(x) for x > 0.
double trigamma(double x);

struct BetaFit {
    BetaParams params;
    int iterations = 0;
    /// Newton did not converge; `params` holds the method-of-moments estimate.
    bool used_fallback = false;
};

/// Stationarity residuals of the beta log-likelihood at `p`:
/// psi(a) - psi(a+b) - mean(ln x) and psi(b) - psi(a+b) - mean(ln(1-x)).
Eigen::Vector2d beta_mle_residuals(const BetaParams &p, const Eigen::Ref<const Eigen::VectorXd> &data);

/// Method-of-moments estimate, the Newton starting point.
BetaParams beta_method_of_moments(const Eigen::Ref<const Eigen::VectorXd> &data);

BetaFit fit_beta_mle(const Eigen::Ref<const Eigen::VectorXd> &data);
DistributionSpec fit_uniform(const Eigen::Ref<const Eigen::VectorXd> &data);
DistributionSpec fit_normal(const Eigen::Ref<const Eigen::VectorXd> &data);

/// Sample variance with divisor n - 1.
double unbiased_variance(const Eigen::Ref<const Eigen::VectorXd> &values);

} // namespace beinit
