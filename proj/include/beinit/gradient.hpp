#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "beinit/ansatz.hpp"
#include "beinit/distributions.hpp"

namespace beinit {

template <typename Scalar> using GradientVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

inline void check_slot(Eigen::Index k, const AnsatzConfig &config) {
    if (k < 0 || k >= config.num_parameters())
        throw std::out_of_range("parameter index " + std::to_string(k) + " out of range for " +
                                std::to_string(config.num_parameters()) + " parameters");
}

} // namespace detail

/**
 * d cost / d theta_k by the parameter-shift rule.
 *
 * Each sample contributes 2 (f - y) df/dtheta_k with
 * df/dtheta_k = (f(theta_k + pi/2) - f(theta_k - pi/2)) / 2, which is exact for
 * half-angle rotation generators.
 */
template <typename Scalar>
Scalar parameter_shift_partial(const Circuit<Scalar> &circuit, const BasicDataset<Scalar> &data,
                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &theta, Eigen::Index k) {
    detail::check_slot(k, circuit.config());
    if (data.sample_count() == 0)
        throw DimensionError("gradient of an empty dataset");
    const Scalar shift = std::numbers::pi_v<Scalar> / 2;
    auto plus = theta, minus = theta;
    plus(k) += shift;
    minus(k) -= shift;
    Scalar acc = 0;
    for (Eigen::Index i = 0; i < data.sample_count(); ++i) {
        const auto x = data.features.row(i).transpose();
        const Scalar f = circuit.forward(x, theta);
        const Scalar df = (circuit.forward(x, plus) - circuit.forward(x, minus)) / 2;
        acc += 2 * (f - data.labels(i)) * df;
    }
    return acc / Scalar(data.sample_count());
}

template <typename Scalar>
Scalar parameter_shift_partial(const BasicDataset<Scalar> &data, const ParameterTensor<Scalar> &theta,
                               Eigen::Index k, const AnsatzConfig &config) {
    theta.check_matches(config);
    return parameter_shift_partial(Circuit<Scalar>(config), data, theta.values, k);
}

/// Central difference (C(theta_k + h) - C(theta_k - h)) / 2h.
template <typename Scalar>
Scalar finite_diff_partial(const BasicDataset<Scalar> &data, const ParameterTensor<Scalar> &theta,
                           Eigen::Index k, const AnsatzConfig &config, Scalar h) {
    if (!(h > 0))
        throw std::invalid_argument("finite-difference step must be > 0");
    theta.check_matches(config);
    detail::check_slot(k, config);
    const Circuit<Scalar> circuit(config);
    auto plus = theta.values, minus = theta.values;
    plus(k) += h;
    minus(k) -= h;
    return (circuit.cost(data, plus) - circuit.cost(data, minus)) / (2 * h);
}

/**
 * All L*q*3 parameter-shift partials of the cost.
 *
 * For each sample the state is propagated once; at every rotation the two
 * shifted branches fork from the shared prefix and run the remaining gates.
 */
template <typename Scalar>
GradientVector<Scalar> full_gradient(const Circuit<Scalar> &circuit, const BasicDataset<Scalar> &data,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &theta) {
    const auto &config = circuit.config();
    circuit.check_theta(theta);
    if (data.sample_count() == 0)
        throw DimensionError("gradient of an empty dataset");
    const auto &gates = circuit.schedule();
    const std::size_t prefix = circuit.product_prefix();
    const Scalar shift = std::numbers::pi_v<Scalar> / 2;
    GradientVector<Scalar> grad = GradientVector<Scalar>::Zero(theta.size());

    for (Eigen::Index i = 0; i < data.sample_count(); ++i) {
        const auto x = data.features.row(i).transpose();
        const Scalar f = circuit.forward(x, theta);
        const Scalar weight = 2 * (f - data.labels(i));

        auto spinors = circuit.encoded_spinors(x);
        for (std::size_t g = 0; g < prefix; ++g) {
            const auto &gate = gates[g];
            const Axis axis = axis_of(gate.kind);
            const Scalar angle = theta(gate.slot);
            auto &own = spinors[static_cast<std::size_t>(gate.target)];
            Scalar branch[2];
            for (int s = 0; s < 2; ++s) {
                auto fork = spinors;
                auto &t = fork[static_cast<std::size_t>(gate.target)];
                t = rotation_matrix(axis, angle + (s == 0 ? shift : -shift)) * t;
                circuit.apply_prefix(fork, theta, g + 1);
                auto state = product_state(fork);
                apply_schedule_inplace(state, gates, theta, prefix);
                branch[s] = expect_z(state, config.observable_qubit);
            }
            grad(gate.slot) += weight * (branch[0] - branch[1]) / 2;
            own = rotation_matrix(axis, angle) * own;
        }

        auto state = product_state(spinors);
        for (std::size_t g = prefix; g < gates.size(); ++g) {
            const auto &gate = gates[g];
            if (gate.kind == GateKind::CNOT) {
                apply_cnot_inplace(state, gate.control, gate.target);
                continue;
            }
            const Axis axis = axis_of(gate.kind);
            const Scalar angle = theta(gate.slot);
            Scalar branch[2];
            for (int s = 0; s < 2; ++s) {
                auto fork = state;
                apply_rotation_inplace(fork, axis, gate.target, angle + (s == 0 ? shift : -shift));
                apply_schedule_inplace(fork, gates, theta, g + 1);
                branch[s] = expect_z(fork, config.observable_qubit);
            }
            grad(gate.slot) += weight * (branch[0] - branch[1]) / 2;
            apply_rotation_inplace(state, axis, gate.target, angle);
        }
    }
    return grad / Scalar(data.sample_count());
}

template <typename Scalar>
GradientVector<Scalar> full_gradient(const BasicDataset<Scalar> &data, const ParameterTensor<Scalar> &theta,
                                     const AnsatzConfig &config) {
    theta.check_matches(config);
    return full_gradient(Circuit<Scalar>(config), data, theta.values);
}

/**
 * Unbiased sample variance of d cost / d theta_k over `trials` parameter
 * draws from `dist`.
 *
 * Trial t draws its parameters from the stream derive_seed(seed, t), so the
 * result does not depend on `threads` or on evaluation order.
 */
double gradient_variance_over_inits(const Dataset &data, const AnsatzConfig &config,
                                    const DistributionSpec &dist, int trials, Eigen::Index k,
                                    std::uint64_t seed, int threads = 1);

/// The per-trial partials behind gradient_variance_over_inits.
Eigen::VectorXd partials_over_inits(const Dataset &data, const AnsatzConfig &config,
                                    const DistributionSpec &dist, int trials, Eigen::Index k,
                                    std::uint64_t seed, int threads = 1);

} // namespace beinit
