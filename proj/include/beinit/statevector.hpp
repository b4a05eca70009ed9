#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "beinit/errors.hpp"

namespace beinit {

inline constexpr int kMaxQubits = 24;

enum class Axis { X, Y, Z };

template <typename Scalar> using Complex = std::complex<Scalar>;
template <typename Scalar> using Amplitudes = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar> using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

/**
 * Dense register of `num_qubits` qubits holding 2^q complex amplitudes.
 *
 * Qubit 0 is the most significant bit of the basis index, so qubit k
 * corresponds to bit (q - 1 - k).
 */
template <typename Scalar> class StateVector {
  public:
    using Complex = beinit::Complex<Scalar>;

    explicit StateVector(int num_qubits) : num_qubits_(checked_qubits(num_qubits)) {
        amplitudes_ = Amplitudes<Scalar>::Zero(Eigen::Index{1} << num_qubits_);
        amplitudes_(0) = Complex(1, 0);
    }

    /// Wraps an existing amplitude vector; the length must be a power of two.
    static StateVector from_amplitudes(Amplitudes<Scalar> amps) {
        const auto n = amps.size();
        if (n < 2 || (n & (n - 1)) != 0)
            throw DimensionError("amplitude count must be a power of two >= 2, got " +
                                 std::to_string(n));
        int q = 0;
        while ((Eigen::Index{1} << q) < n)
            ++q;
        StateVector s(q);
        s.amplitudes_ = std::move(amps);
        return s;
    }

    int num_qubits() const noexcept { return num_qubits_; }
    Eigen::Index dim() const noexcept { return amplitudes_.size(); }

    const Amplitudes<Scalar> &amplitudes() const noexcept { return amplitudes_; }
    Amplitudes<Scalar> &amplitudes() noexcept { return amplitudes_; }

    Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

    Scalar norm() const { return amplitudes_.norm(); }

    /// Bit mask selecting `qubit` in a basis index.
    std::uint64_t mask(int qubit) const {
        check_qubit(qubit);
        return std::uint64_t{1} << (num_qubits_ - 1 - qubit);
    }

    void check_qubit(int qubit) const {
        if (qubit < 0 || qubit >= num_qubits_)
            throw std::out_of_range("qubit index " + std::to_string(qubit) +
                                    " out of range for " + std::to_string(num_qubits_) +
                                    " qubits");
    }

  private:
    static int checked_qubits(int q) {
        if (q < 1 || q > kMaxQubits)
            throw CapacityError("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                                "], got " + std::to_string(q));
        return q;
    }

    int num_qubits_;
    Amplitudes<Scalar> amplitudes_;
};

template <typename Scalar> StateVector<Scalar> init_zero_state(int num_qubits) {
    return StateVector<Scalar>(num_qubits);
}

/// R_A(theta) = exp(-i theta A / 2) for Pauli A.
template <typename Scalar> Matrix2c<Scalar> rotation_matrix(Axis axis, Scalar angle) {
    using C = Complex<Scalar>;
    const Scalar c = std::cos(angle / 2);
    const Scalar s = std::sin(angle / 2);
    Matrix2c<Scalar> m;
    switch (axis) {
    case Axis::X:
        m << C(c, 0), C(0, -s), C(0, -s), C(c, 0);
        break;
    case Axis::Y:
        m << C(c, 0), C(-s, 0), C(s, 0), C(c, 0);
        break;
    case Axis::Z:
        m << C(c, -s), C(0, 0), C(0, 0), C(c, s);
        break;
    }
    return m;
}

/// Applies an arbitrary 2x2 matrix to `qubit` in place.
template <typename Scalar>
void apply_single_qubit_inplace(StateVector<Scalar> &state, int qubit, const Matrix2c<Scalar> &m) {
    const auto stride = static_cast<Eigen::Index>(state.mask(qubit));
    const auto n = state.dim();
    auto *a = state.amplitudes().data();
    // explicit real arithmetic: std::complex operator* carries NaN/Inf recovery
    const Scalar ar = m(0, 0).real(), ai = m(0, 0).imag(), br = m(0, 1).real(), bi = m(0, 1).imag();
    const Scalar cr = m(1, 0).real(), ci = m(1, 0).imag(), dr = m(1, 1).real(), di = m(1, 1).imag();
    for (Eigen::Index base = 0; base < n; base += 2 * stride) {
        for (Eigen::Index i = base; i < base + stride; ++i) {
            const Scalar lr = a[i].real(), li = a[i].imag();
            const Scalar hr = a[i + stride].real(), hi = a[i + stride].imag();
            a[i] = {ar * lr - ai * li + br * hr - bi * hi, ar * li + ai * lr + br * hi + bi * hr};
            a[i + stride] = {cr * lr - ci * li + dr * hr - di * hi, cr * li + ci * lr + dr * hi + di * hr};
        }
    }
}

template <typename Scalar>
void apply_rotation_inplace(StateVector<Scalar> &state, Axis axis, int qubit, Scalar angle) {
    if (axis != Axis::Z) {
        apply_single_qubit_inplace(state, qubit, rotation_matrix(axis, angle));
        return;
    }
    // diagonal: phase the two halves
    const auto stride = static_cast<Eigen::Index>(state.mask(qubit));
    const auto n = state.dim();
    auto *a = state.amplitudes().data();
    const Scalar c = std::cos(angle / 2), s = std::sin(angle / 2);
    for (Eigen::Index base = 0; base < n; base += 2 * stride) {
        for (Eigen::Index i = base; i < base + stride; ++i) {
            const Scalar lr = a[i].real(), li = a[i].imag();
            const Scalar hr = a[i + stride].real(), hi = a[i + stride].imag();
            a[i] = {c * lr + s * li, c * li - s * lr};
            a[i + stride] = {c * hr - s * hi, c * hi + s * hr};
        }
    }
}

template <typename Scalar>
StateVector<Scalar> apply_rotation(StateVector<Scalar> state, Axis axis, int qubit, Scalar angle) {
    apply_rotation_inplace(state, axis, qubit, angle);
    return state;
}

template <typename Scalar> void apply_cnot_inplace(StateVector<Scalar> &state, int control, int target) {
    if (control == target)
        throw std::invalid_argument("CNOT control and target must differ");
    const auto cmask = state.mask(control);
    const auto tmask = state.mask(target);
    auto *a = state.amplitudes().data();
    const auto n = static_cast<std::uint64_t>(state.dim());
    for (std::uint64_t i = 0; i < n; ++i) {
        // visit each (control=1, target=0) index once and swap with its partner
        if ((i & cmask) && !(i & tmask))
            std::swap(a[i], a[i | tmask]);
    }
}

template <typename Scalar>
StateVector<Scalar> apply_cnot(StateVector<Scalar> state, int control, int target) {
    apply_cnot_inplace(state, control, target);
    return state;
}

/// <Z> on `qubit`: sum of |amp_b|^2 signed by the qubit's bit.
template <typename Scalar> Scalar expect_z(const StateVector<Scalar> &state, int qubit) {
    const auto m = state.mask(qubit);
    const auto *a = state.amplitudes().data();
    Scalar acc = 0;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(state.dim()); ++i) {
        const Scalar p = std::norm(a[i]);
        acc += (i & m) ? -p : p;
    }
    return acc;
}

template <typename Scalar>
Amplitudes<Scalar> apply_dense_unitary(const Amplitudes<Scalar> &v, const ComplexMatrix<Scalar> &u) {
    if (v.size() == 0 || u.cols() != v.size() || u.rows() != v.size())
        throw DimensionError("dense unitary is " + std::to_string(u.rows()) + "x" +
                             std::to_string(u.cols()) + " but vector has length " +
                             std::to_string(v.size()));
    return u * v;
}

enum class GateKind { RX, RY, RZ, CNOT };

inline Axis axis_of(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return Axis::X;
    case GateKind::RY:
        return Axis::Y;
    case GateKind::RZ:
        return Axis::Z;
    case GateKind::CNOT:
        break;
    }
    throw std::invalid_argument("CNOT has no rotation axis");
}

inline GateKind rotation_kind(Axis axis) {
    switch (axis) {
    case Axis::X:
        return GateKind::RX;
    case Axis::Y:
        return GateKind::RY;
    case Axis::Z:
        break;
    }
    return GateKind::RZ;
}

template <typename Scalar> struct GateOp {
    GateKind kind;
    int target;
    std::optional<int> control;
    std::optional<Scalar> angle;

    static GateOp rotation(Axis axis, int target, Scalar angle) {
        return {rotation_kind(axis), target, std::nullopt, angle};
    }
    static GateOp cnot(int control, int target) {
        if (control == target)
            throw std::invalid_argument("CNOT control and target must differ");
        return {GateKind::CNOT, target, control, std::nullopt};
    }

    bool is_rotation() const noexcept { return kind != GateKind::CNOT; }
};

template <typename Scalar> void apply_gate_inplace(StateVector<Scalar> &state, const GateOp<Scalar> &op) {
    if (op.is_rotation()) {
        if (!op.angle || op.control)
            throw std::invalid_argument("rotation gate needs an angle and no control");
        apply_rotation_inplace(state, axis_of(op.kind), op.target, *op.angle);
    } else {
        if (!op.control || op.angle)
            throw std::invalid_argument("CNOT needs a control and no angle");
        apply_cnot_inplace(state, *op.control, op.target);
    }
}

} // namespace beinit
