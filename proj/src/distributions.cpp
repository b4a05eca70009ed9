#include "beinit/distributions.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "beinit/errors.hpp"

namespace beinit {

DistributionSpec DistributionSpec::beta(double alpha, double beta) {
    if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("beta distribution needs finite alpha, beta > 0");
    return {DistributionKind::Beta, alpha, beta};
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("uniform distribution needs finite lo < hi");
    return {DistributionKind::Uniform, lo, hi};
}

DistributionSpec DistributionSpec::normal(double mean, double variance) {
    if (!(variance > 0) || !std::isfinite(mean) || !std::isfinite(variance))
        throw std::invalid_argument("normal distribution needs finite mean and variance > 0");
    return {DistributionKind::Normal, mean, variance};
}

BetaParams DistributionSpec::beta_params() const {
    if (kind_ != DistributionKind::Beta)
        throw std::logic_error("not a beta distribution");
    return {a_, b_};
}

double DistributionSpec::lo() const {
    if (kind_ != DistributionKind::Uniform)
        throw std::logic_error("not a uniform distribution");
    return a_;
}

double DistributionSpec::hi() const {
    if (kind_ != DistributionKind::Uniform)
        throw std::logic_error("not a uniform distribution");
    return b_;
}

double DistributionSpec::mean() const {
    switch (kind_) {
    case DistributionKind::Beta:
        return a_ / (a_ + b_);
    case DistributionKind::Uniform:
        return (a_ + b_) / 2;
    case DistributionKind::Normal:
        break;
    }
    return a_;
}

double DistributionSpec::variance() const {
    switch (kind_) {
    case DistributionKind::Beta: {
        const double s = a_ + b_;
        return a_ * b_ / (s * s * (s + 1));
    }
    case DistributionKind::Uniform:
        return (b_ - a_) * (b_ - a_) / 12;
    case DistributionKind::Normal:
        break;
    }
    return b_;
}

std::string DistributionSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_) << '(' << a_ << ',' << b_ << ')';
    return os.str();
}

std::string to_string(DistributionKind kind) {
    switch (kind) {
    case DistributionKind::Beta:
        return "beta";
    case DistributionKind::Uniform:
        return "uniform";
    case DistributionKind::Normal:
        return "normal";
    }
    return "?";
}

Eigen::VectorXd sample(const DistributionSpec &dist, Eigen::Index n, Rng &rng) {
    if (n < 1)
        throw std::invalid_argument("sample count must be >= 1");
    Eigen::VectorXd out(n);
    switch (dist.kind()) {
    case DistributionKind::Beta: {
        const auto p = dist.beta_params();
        std::gamma_distribution<double> ga(p.alpha, 1.0), gb(p.beta, 1.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            double v;
            do {
                const double x = ga(rng);
                const double y = gb(rng);
                v = x / (x + y);
            } while (!(v > 0.0 && v < 1.0));
            out(i) = v;
        }
        break;
    }
    case DistributionKind::Uniform: {
        const double lo = dist.lo(), hi = dist.hi();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            double v;
            do {
                v = lo + (hi - lo) * u(rng);
            } while (v >= hi);
            out(i) = v;
        }
        break;
    }
    case DistributionKind::Normal: {
        std::normal_distribution<double> nd(dist.mean(), std::sqrt(dist.variance()));
        for (Eigen::Index i = 0; i < n; ++i)
            out(i) = nd(rng);
        break;
    }
    }
    return out;
}

Eigen::VectorXd sample(const DistributionSpec &dist, Eigen::Index n, std::uint64_t seed) {
    Rng rng(seed);
    return sample(dist, n, rng);
}

double digamma(double x) {
    if (!(x > 0) || !std::isfinite(x))
        throw DomainError("digamma requires a finite x > 0");
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic expansion in 1/x^2 with Bernoulli-number coefficients.
    const double r = 1.0 / (x * x);
    const double series =
        r * (1.0 / 12 -
             r * (1.0 / 120 -
                  r * (1.0 / 252 -
                       r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r * (1.0 / 12)))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
    if (!(x > 0) || !std::isfinite(x))
        throw DomainError("trigamma requires a finite x > 0");
    double acc = 0.0;
    while (x < 6.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    const double series =
        1.0 / x + r / 2 +
        (1.0 / x) * r *
            (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * (7.0 / 6)))))));
    return acc + series;
}

namespace {

struct LogMeans {
    double log_x;
    double log_1mx;
};

LogMeans check_beta_data(const Eigen::Ref<const Eigen::VectorXd> &data) {
    if (data.size() < 2)
        throw std::invalid_argument("beta fit needs at least two observations");
    double lx = 0, l1x = 0;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        const double v = data(i);
        if (!(v > 0.0 && v < 1.0))
            throw DomainError("beta fit needs every value strictly inside (0,1); value " +
                              std::to_string(v) + " at index " + std::to_string(i));
        lx += std::log(v);
        l1x += std::log1p(-v);
    }
    const auto n = static_cast<double>(data.size());
    return {lx / n, l1x / n};
}

} // namespace

Eigen::Vector2d beta_mle_residuals(const BetaParams &p, const Eigen::Ref<const Eigen::VectorXd> &data) {
    const auto means = check_beta_data(data);
    const double psi_ab = digamma(p.alpha + p.beta);
    return {digamma(p.alpha) - psi_ab - means.log_x, digamma(p.beta) - psi_ab - means.log_1mx};
}

BetaParams beta_method_of_moments(const Eigen::Ref<const Eigen::VectorXd> &data) {
    check_beta_data(data);
    const double m = data.mean();
    const double v = (data.array() - m).square().mean();
    if (!(v > 0))
        throw DomainError("beta fit needs non-constant data");
    const double common = m * (1 - m) / v - 1;
    if (!(common > 0))
        throw DomainError("method-of-moments beta estimate is not positive");
    return {m * common, (1 - m) * common};
}

BetaFit fit_beta_mle(const Eigen::Ref<const Eigen::VectorXd> &data) {
    constexpr double kTol = 1e-10;
    constexpr int kMaxIter = 200;

    const auto means = check_beta_data(data);
    const BetaParams start = beta_method_of_moments(data);

    auto residual = [&](double a, double b) {
        const double psi_ab = digamma(a + b);
        return Eigen::Vector2d(digamma(a) - psi_ab - means.log_x, digamma(b) - psi_ab - means.log_1mx);
    };

    double a = start.alpha, b = start.beta;
    Eigen::Vector2d r = residual(a, b);
    for (int it = 0; it < kMaxIter; ++it) {
        if (r.cwiseAbs().maxCoeff() < kTol)
            return {{a, b}, it, false};
        const double t_ab = trigamma(a + b);
        Eigen::Matrix2d jac;
        jac << trigamma(a) - t_ab, -t_ab, -t_ab, trigamma(b) - t_ab;
        const Eigen::Vector2d step = jac.partialPivLu().solve(r);
        double scale = 1.0;
        while (!(a - scale * step(0) > 0 && b - scale * step(1) > 0) && scale > 1e-12)
            scale *= 0.5;
        a -= scale * step(0);
        b -= scale * step(1);
        if (!std::isfinite(a) || !std::isfinite(b))
            break;
        r = residual(a, b);
    }
    if (std::isfinite(a) && std::isfinite(b) && r.cwiseAbs().maxCoeff() < kTol)
        return {{a, b}, kMaxIter, false};
    return {start, kMaxIter, true};
}

DistributionSpec fit_uniform(const Eigen::Ref<const Eigen::VectorXd> &data) {
    if (data.size() < 2)
        throw std::invalid_argument("uniform fit needs at least two observations");
    const double lo = data.minCoeff(), hi = data.maxCoeff();
    if (!(lo < hi))
        throw DomainError("uniform fit of constant data is degenerate");
    return DistributionSpec::uniform(lo, hi);
}

DistributionSpec fit_normal(const Eigen::Ref<const Eigen::VectorXd> &data) {
    if (data.size() < 2)
        throw std::invalid_argument("normal fit needs at least two observations");
    const double m = data.mean();
    const double v = (data.array() - m).square().mean();
    if (!(v > 0))
        throw DomainError("normal fit of constant data has zero variance");
    return DistributionSpec::normal(m, v);
}

double unbiased_variance(const Eigen::Ref<const Eigen::VectorXd> &values) {
    if (values.size() < 2)
        throw std::invalid_argument("sample variance needs at least two values");
    const double m = values.mean();
    return (values.array() - m).square().sum() / static_cast<double>(values.size() - 1);
}

} // namespace beinit
