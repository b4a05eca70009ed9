#include "beinit/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "beinit/data.hpp"
#include "beinit/gradient.hpp"
#include "beinit/random.hpp"

namespace beinit {

namespace {

constexpr std::uint64_t kSplitStream = label_hash("split");
constexpr std::uint64_t kInitStream = label_hash("init");
constexpr std::uint64_t kPerturbStream = label_hash("perturb");

void put_double(std::ostream &out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

} // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0))
        throw std::invalid_argument("learning rate must be > 0");
    if (!(momentum >= 0 && momentum < 1))
        throw std::invalid_argument("momentum must be in [0, 1)");
    if (iterations < 0)
        throw std::invalid_argument("iterations must be >= 0");
    if (!(split_ratio > 0 && split_ratio < 1))
        throw std::invalid_argument("split ratio must be in (0, 1)");
    if (perturbation) {
        if (!(perturbation->eta > 0))
            throw std::invalid_argument("perturbation eta must be > 0");
        if (!std::isfinite(perturbation->gamma))
            throw std::invalid_argument("perturbation gamma must be finite");
    }
}

double perturbation_sigma(double eta, double gamma, int iteration, double sigma2_i) {
    if (!(eta > 0))
        throw std::invalid_argument("eta must be > 0");
    if (iteration < 0)
        throw std::invalid_argument("iteration index must be >= 0");
    return eta / std::pow(1.0 + iteration, gamma + sigma2_i);
}

Eigen::VectorXd perturb(const Eigen::VectorXd &theta, double sigma2_n, std::uint64_t seed) {
    if (!(sigma2_n >= 0))
        throw std::invalid_argument("perturbation variance must be >= 0");
    if (sigma2_n == 0)
        return theta;
    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2_n));
    Eigen::VectorXd out = theta;
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out(i) += noise(rng);
    return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> nesterov_step(const Eigen::VectorXd &theta,
                                                          const Eigen::VectorXd &velocity,
                                                          const Eigen::VectorXd &grad, double lr,
                                                          double momentum) {
    if (theta.size() != velocity.size() || theta.size() != grad.size())
        throw DimensionError("nesterov step needs theta, velocity and gradient of equal length");
    Eigen::VectorXd v = momentum * velocity - lr * grad;
    Eigen::VectorXd next = theta + momentum * v - lr * grad;
    return {std::move(next), std::move(v)};
}

std::pair<Dataset, Dataset> split(const Dataset &data, double ratio, std::uint64_t seed) {
    if (!(ratio > 0 && ratio < 1))
        throw std::invalid_argument("split ratio must be in (0, 1)");
    const auto m = data.sample_count();
    const auto n_train = static_cast<Eigen::Index>(std::floor(ratio * static_cast<double>(m)));
    if (n_train < 1 || n_train >= m)
        throw std::invalid_argument("split of " + std::to_string(m) + " samples at ratio " +
                                    std::to_string(ratio) + " leaves one side empty");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto mid = order.begin() + n_train;
    return {data.subset(std::vector<Eigen::Index>(order.begin(), mid)),
            data.subset(std::vector<Eigen::Index>(mid, order.end()))};
}

TrainResult beinit_train(const Dataset &data, const AnsatzConfig &ansatz, const TrainConfig &config) {
    config.validate();
    ansatz.validate();
    data.validate();

    // The beta fit uses all of the data, before the split.
    bool fallback = false;
    DistributionSpec init_dist = [&] {
        if (config.init)
            return *config.init;
        const auto fit = fit_beta_mle(flatten_features(data));
        fallback = fit.used_fallback;
        return DistributionSpec::beta(fit.params);
    }();

    const auto [train, test] = split(data, config.split_ratio, derive_seed(config.seed, kSplitStream));
    (void)test;

    const Circuit<double> circuit(ansatz);
    Eigen::VectorXd theta = sample(init_dist, ansatz.num_parameters(), derive_seed(config.seed, kInitStream));
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(theta.size());

    TrainResult result{ParameterTensor<double>::from_flat(ansatz, theta),
                       ParameterTensor<double>::from_flat(ansatz, theta),
                       {},
                       init_dist,
                       fallback};
    result.history.reserve(static_cast<std::size_t>(config.iterations));

    for (int i = 0; i < config.iterations; ++i) {
        const double c = circuit.cost(train, theta);
        Eigen::VectorXd grad = full_gradient(circuit, train, theta);
        const double sigma2_i = unbiased_variance(grad);
        double sigma2_n = 0.0;
        if (config.perturbation) {
            sigma2_n = perturbation_sigma(config.perturbation->eta, config.perturbation->gamma, i, sigma2_i);
            theta = perturb(theta, sigma2_n,
                            derive_seed(config.seed, {kPerturbStream, static_cast<std::uint64_t>(i)}));
            grad = full_gradient(circuit, train, theta);
        }
        std::tie(theta, velocity) =
            nesterov_step(theta, velocity, grad, config.learning_rate, config.momentum);
        result.history.push_back({i, c, sigma2_i, sigma2_n});
    }
    result.theta.values = theta;
    return result;
}

void write_history_csv(std::ostream &out, const TrainHistory &history) {
    out << "iter,cost,sigma2_i,sigma2_n\n";
    for (const auto &r : history) {
        out << r.iteration << ',';
        put_double(out, r.cost);
        out << ',';
        put_double(out, r.sigma2_i);
        out << ',';
        put_double(out, r.sigma2_n);
        out << '\n';
    }
}

} // namespace beinit
