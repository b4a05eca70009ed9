#include "beinit/gradient.hpp"

#include "beinit/parallel.hpp"
#include "beinit/random.hpp"

namespace beinit {

Eigen::VectorXd partials_over_inits(const Dataset &data, const AnsatzConfig &config,
                                    const DistributionSpec &dist, int trials, Eigen::Index k,
                                    std::uint64_t seed, int threads) {
    if (trials < 2)
        throw std::invalid_argument("gradient variance needs at least 2 trials");
    const Circuit<double> circuit(config);
    detail::check_slot(k, config);
    Eigen::VectorXd partials(trials);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const auto theta = sample(dist, config.num_parameters(), derive_seed(seed, t));
        partials(static_cast<Eigen::Index>(t)) = parameter_shift_partial(circuit, data, theta, k);
    });
    return partials;
}

double gradient_variance_over_inits(const Dataset &data, const AnsatzConfig &config,
                                    const DistributionSpec &dist, int trials, Eigen::Index k,
                                    std::uint64_t seed, int threads) {
    return unbiased_variance(partials_over_inits(data, config, dist, trials, k, seed, threads));
}

} // namespace beinit
