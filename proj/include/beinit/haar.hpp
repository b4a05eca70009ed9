#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "beinit/random.hpp"
#include "beinit/statevector.hpp"

namespace beinit {

template <typename Scalar> using UnitaryMatrix = ComplexMatrix<Scalar>;

/**
 * Haar-distributed element of U(d).
 *
 * QR of a complex Ginibre matrix, with the phases of diag(R) moved into Q so
 * the decomposition is unique and the result exactly Haar.
 */
template <typename Scalar> UnitaryMatrix<Scalar> sample_haar_unitary(int d, Rng &rng) {
    if (d < 1)
        throw std::invalid_argument("unitary dimension must be >= 1");
    std::normal_distribution<Scalar> gauss(0, 1);
    const Scalar s = 1 / std::sqrt(Scalar(2));
    UnitaryMatrix<Scalar> z(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            const Scalar re = gauss(rng);
            const Scalar im = gauss(rng);
            z(r, c) = Complex<Scalar>(re * s, im * s);
        }
    Eigen::HouseholderQR<UnitaryMatrix<Scalar>> qr(z);
    UnitaryMatrix<Scalar> q = qr.householderQ();
    const auto &packed = qr.matrixQR();
    for (int j = 0; j < d; ++j) {
        const auto rjj = packed(j, j);
        const Scalar mag = std::abs(rjj);
        if (mag > 0)
            q.col(j) *= rjj / mag;
    }
    return q;
}

template <typename Scalar> UnitaryMatrix<Scalar> sample_haar_unitary(int d, std::uint64_t seed) {
    Rng rng(seed);
    return sample_haar_unitary<Scalar>(d, rng);
}

/// Empirical moment next to its Haar closed form.
struct MomentEstimate {
    int dim = 0;
    /// (i1, j1, i1', j1') for first moments, (i1, j1, i2, j2, i1', j1', i2', j2') for second.
    std::vector<int> indices;
    long sample_count = 0;
    std::complex<double> empirical;
    double reference = 0;

    double abs_error() const { return std::abs(empirical - reference); }
};

/// E[U_{i1 j1} conj(U_{i1' j1'})] = delta_{i1 i1'} delta_{j1 j1'} / d.
inline double haar_m1_reference(int d, int i1, int j1, int i1p, int j1p) {
    return (i1 == i1p && j1 == j1p) ? 1.0 / d : 0.0;
}

/// Second Haar moment E[U_{i1 j1} U_{i2 j2} conj(U_{i1' j1'}) conj(U_{i2' j2'})]
/// from the two-permutation Weingarten sum (d >= 2).
inline double haar_m2_reference(int d, const std::array<int, 8> &ix) {
    const auto [i1, j1, i2, j2, i1p, j1p, i2p, j2p] = ix;
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    const double dd = d;
    const double rows_id = delta(i1, i1p) * delta(i2, i2p);
    const double rows_sw = delta(i1, i2p) * delta(i2, i1p);
    const double cols_id = delta(j1, j1p) * delta(j2, j2p);
    const double cols_sw = delta(j1, j2p) * delta(j2, j1p);
    return (rows_id * cols_id + rows_sw * cols_sw) / (dd * dd - 1) -
           (rows_id * cols_sw + rows_sw * cols_id) / (dd * (dd * dd - 1));
}

namespace detail {

inline void check_moment_indices(int d, const int *ix, int n) {
    for (int k = 0; k < n; ++k)
        if (ix[k] < 0 || ix[k] >= d)
            throw std::out_of_range("moment index " + std::to_string(ix[k]) + " out of range for d=" +
                                    std::to_string(d));
}

} // namespace detail

/// Sample s uses the stream derive_seed(seed, s).
inline MomentEstimate estimate_m1(int d, int i1, int j1, int i1p, int j1p, long samples, std::uint64_t seed) {
    const int ix[4] = {i1, j1, i1p, j1p};
    detail::check_moment_indices(d, ix, 4);
    if (samples < 1)
        throw std::invalid_argument("need at least one sample");
    std::complex<double> acc = 0;
    for (long s = 0; s < samples; ++s) {
        const auto u = sample_haar_unitary<double>(d, derive_seed(seed, static_cast<std::uint64_t>(s)));
        acc += u(i1, j1) * std::conj(u(i1p, j1p));
    }
    return {d, {i1, j1, i1p, j1p}, samples, acc / static_cast<double>(samples),
            haar_m1_reference(d, i1, j1, i1p, j1p)};
}

inline MomentEstimate estimate_m2(int d, const std::array<int, 8> &ix, long samples, std::uint64_t seed) {
    detail::check_moment_indices(d, ix.data(), 8);
    if (d < 2)
        throw std::invalid_argument("second-moment closed form needs d >= 2");
    if (samples < 1)
        throw std::invalid_argument("need at least one sample");
    const auto [i1, j1, i2, j2, i1p, j1p, i2p, j2p] = ix;
    std::complex<double> acc = 0;
    for (long s = 0; s < samples; ++s) {
        const auto u = sample_haar_unitary<double>(d, derive_seed(seed, static_cast<std::uint64_t>(s)));
        acc += u(i1, j1) * u(i2, j2) * std::conj(u(i1p, j1p)) * std::conj(u(i2p, j2p));
    }
    return {d, std::vector<int>(ix.begin(), ix.end()), samples, acc / static_cast<double>(samples),
            haar_m2_reference(d, ix)};
}

} // namespace beinit
