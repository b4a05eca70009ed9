#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "beinit/dataset.hpp"
#include "beinit/statevector.hpp"

namespace beinit {

enum class Entangler {
    LinearChain, ///< CNOT(k, k+1) for k = 0..q-2
    Ring,        ///< linear chain closed by CNOT(q-1, 0)
};

inline std::string to_string(Entangler e) { return e == Entangler::Ring ? "ring" : "linear"; }

inline Entangler parse_entangler(const std::string &s) {
    if (s == "linear" || s == "linear-chain")
        return Entangler::LinearChain;
    if (s == "ring")
        return Entangler::Ring;
    throw std::invalid_argument("unknown entangler '" + s + "'");
}

/// Shape of the layered classifier circuit.
struct AnsatzConfig {
    int num_qubits = 2;
    int num_layers = 1;
    std::array<Axis, 3> rotation_axes{Axis::X, Axis::Y, Axis::Z};
    Entangler entangler = Entangler::Ring;
    int observable_qubit = 0;

    void validate() const {
        if (num_qubits < 2 || num_qubits > kMaxQubits)
            throw std::invalid_argument("ansatz needs 2 <= qubits <= " + std::to_string(kMaxQubits) +
                                        ", got " + std::to_string(num_qubits));
        if (num_layers < 1)
            throw std::invalid_argument("ansatz needs at least one layer, got " +
                                        std::to_string(num_layers));
        if (observable_qubit < 0 || observable_qubit >= num_qubits)
            throw std::out_of_range("observable qubit " + std::to_string(observable_qubit) +
                                    " out of range");
    }

    Eigen::Index num_parameters() const {
        return Eigen::Index{num_layers} * num_qubits * 3;
    }
};

/// L x q x 3 rotation angles, flattened layer-major, then qubit, then slot.
template <typename Scalar> struct ParameterTensor {
    int layers = 0;
    int qubits = 0;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;

    static ParameterTensor zeros(const AnsatzConfig &config) {
        config.validate();
        return {config.num_layers, config.num_qubits,
                Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(config.num_parameters())};
    }

    static ParameterTensor from_flat(const AnsatzConfig &config,
                                     Eigen::Matrix<Scalar, Eigen::Dynamic, 1> flat) {
        auto t = zeros(config);
        if (flat.size() != t.values.size())
            throw DimensionError("expected " + std::to_string(t.values.size()) +
                                 " parameters, got " + std::to_string(flat.size()));
        t.values = std::move(flat);
        return t;
    }

    Eigen::Index size() const noexcept { return values.size(); }

    Eigen::Index flat_index(int layer, int qubit, int slot) const {
        return (Eigen::Index{layer} * qubits + qubit) * 3 + slot;
    }

    Scalar &operator()(int layer, int qubit, int slot) { return values(flat_index(layer, qubit, slot)); }
    Scalar operator()(int layer, int qubit, int slot) const {
        return values(flat_index(layer, qubit, slot));
    }

    void check_matches(const AnsatzConfig &config) const {
        if (layers != config.num_layers || qubits != config.num_qubits ||
            values.size() != config.num_parameters())
            throw DimensionError("parameter tensor shape " + std::to_string(layers) + "x" +
                                 std::to_string(qubits) + "x3 does not match ansatz " +
                                 std::to_string(config.num_layers) + "x" +
                                 std::to_string(config.num_qubits) + "x3");
    }
};

/// One gate of the trainable block. `slot` is the flat parameter index, -1 for CNOT.
struct ScheduledGate {
    GateKind kind;
    int target;
    int control = -1;
    Eigen::Index slot = -1;
};

inline std::vector<ScheduledGate> build_layer_schedule(const AnsatzConfig &config) {
    config.validate();
    const int q = config.num_qubits;
    std::vector<ScheduledGate> gates;
    gates.reserve(static_cast<std::size_t>(config.num_layers) * (4 * q));
    for (int l = 0; l < config.num_layers; ++l) {
        for (int k = 0; k < q; ++k)
            for (int s = 0; s < 3; ++s)
                gates.push_back({rotation_kind(config.rotation_axes[s]), k, -1,
                                 (Eigen::Index{l} * q + k) * 3 + s});
        for (int k = 0; k + 1 < q; ++k)
            gates.push_back({GateKind::CNOT, k + 1, k, -1});
        if (config.entangler == Entangler::Ring)
            gates.push_back({GateKind::CNOT, 0, q - 1, -1});
    }
    return gates;
}

/// Angle-encodes `x`: qubit k gets exp(-i x_{k mod d} sigma_x), i.e. RX(2 x_{k mod d}).
template <typename Scalar, typename Derived>
StateVector<Scalar> encode_input(const Eigen::MatrixBase<Derived> &x, int num_qubits) {
    if (x.size() == 0)
        throw DimensionError("cannot encode an empty feature vector");
    StateVector<Scalar> state(num_qubits);
    for (int k = 0; k < num_qubits; ++k) {
        const Scalar angle = 2 * Scalar(x(k % x.size()));
        if (angle != Scalar(0))
            apply_rotation_inplace(state, Axis::X, k, angle);
    }
    return state;
}

template <typename Scalar>
void apply_schedule_inplace(StateVector<Scalar> &state, const std::vector<ScheduledGate> &gates,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &theta,
                            std::size_t first = 0) {
    for (std::size_t g = first; g < gates.size(); ++g) {
        const auto &gate = gates[g];
        if (gate.kind == GateKind::CNOT)
            apply_cnot_inplace(state, gate.control, gate.target);
        else
            apply_rotation_inplace(state, axis_of(gate.kind), gate.target, theta(gate.slot));
    }
}

template <typename Scalar> using Spinor = Eigen::Matrix<Complex<Scalar>, 2, 1>;

/// Tensor product of per-qubit states, qubit 0 most significant.
template <typename Scalar> StateVector<Scalar> product_state(const std::vector<Spinor<Scalar>> &qubits) {
    StateVector<Scalar> state(static_cast<int>(qubits.size()));
    auto &amp = state.amplitudes();
    Eigen::Index len = 1;
    for (const auto &sp : qubits) {
        // expand in place from the back so unread entries are not overwritten
        for (Eigen::Index i = len - 1; i >= 0; --i) {
            const auto v = amp(i);
            amp(2 * i) = v * sp(0);
            amp(2 * i + 1) = v * sp(1);
        }
        len *= 2;
    }
    return state;
}

/**
 * Reusable evaluator: the gate schedule is built once per config.
 *
 * The encoding and every rotation before the first CNOT act on a product
 * state, so they are applied to per-qubit spinors and expanded once.
 */
template <typename Scalar> class Circuit {
  public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit Circuit(AnsatzConfig config) : config_(config), schedule_(build_layer_schedule(config_)) {
        while (product_prefix_ < schedule_.size() && schedule_[product_prefix_].kind != GateKind::CNOT)
            ++product_prefix_;
    }

    const AnsatzConfig &config() const noexcept { return config_; }
    const std::vector<ScheduledGate> &schedule() const noexcept { return schedule_; }
    /// Number of leading schedule entries that act on a product state.
    std::size_t product_prefix() const noexcept { return product_prefix_; }

    /// Per-qubit encoded states: RX(2 x_{k mod d})|0> = (cos x, -i sin x).
    template <typename Derived>
    std::vector<Spinor<Scalar>> encoded_spinors(const Eigen::MatrixBase<Derived> &x) const {
        if (x.size() == 0)
            throw DimensionError("cannot encode an empty feature vector");
        std::vector<Spinor<Scalar>> sp(static_cast<std::size_t>(config_.num_qubits));
        for (int k = 0; k < config_.num_qubits; ++k) {
            const Scalar v = Scalar(x(k % x.size()));
            sp[static_cast<std::size_t>(k)] << Complex<Scalar>(std::cos(v), 0), Complex<Scalar>(0, -std::sin(v));
        }
        return sp;
    }

    /// Applies schedule entries [first, product_prefix()) to the spinors.
    void apply_prefix(std::vector<Spinor<Scalar>> &sp, const Vector &theta, std::size_t first = 0) const {
        for (std::size_t g = first; g < product_prefix_; ++g) {
            const auto &gate = schedule_[g];
            auto &s = sp[static_cast<std::size_t>(gate.target)];
            s = rotation_matrix(axis_of(gate.kind), theta(gate.slot)) * s;
        }
    }

    template <typename Derived>
    Scalar forward(const Eigen::MatrixBase<Derived> &x, const Vector &theta) const {
        check_theta(theta);
        auto sp = encoded_spinors(x);
        apply_prefix(sp, theta);
        auto state = product_state(sp);
        apply_schedule_inplace(state, schedule_, theta, product_prefix_);
        return expect_z(state, config_.observable_qubit);
    }

    /// Mean squared error (y - f(x))^2 over the samples.
    Scalar cost(const BasicDataset<Scalar> &data, const Vector &theta) const {
        if (data.sample_count() == 0)
            throw DimensionError("cost of an empty dataset");
        Scalar acc = 0;
        for (Eigen::Index i = 0; i < data.sample_count(); ++i) {
            const Scalar r = data.labels(i) - forward(data.features.row(i).transpose(), theta);
            acc += r * r;
        }
        return acc / Scalar(data.sample_count());
    }

    void check_theta(const Vector &theta) const {
        if (theta.size() != config_.num_parameters())
            throw DimensionError("expected " + std::to_string(config_.num_parameters()) +
                                 " parameters, got " + std::to_string(theta.size()));
    }

  private:
    AnsatzConfig config_;
    std::vector<ScheduledGate> schedule_;
    std::size_t product_prefix_ = 0;
};

template <typename Scalar, typename Derived>
Scalar forward(const Eigen::MatrixBase<Derived> &x, const ParameterTensor<Scalar> &theta,
               const AnsatzConfig &config) {
    theta.check_matches(config);
    return Circuit<Scalar>(config).forward(x, theta.values);
}

template <typename Scalar>
Scalar cost(const BasicDataset<Scalar> &data, const ParameterTensor<Scalar> &theta,
            const AnsatzConfig &config) {
    theta.check_matches(config);
    return Circuit<Scalar>(config).cost(data, theta.values);
}

} // namespace beinit
