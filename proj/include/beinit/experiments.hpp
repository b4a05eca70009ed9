#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beinit/ansatz.hpp"
#include "beinit/data.hpp"
#include "beinit/distributions.hpp"
#include "beinit/trainer.hpp"

namespace beinit {

/// How a CSV becomes a normalised two-class dataset.
struct PreprocessOptions {
    int label_column = -1;
    bool has_header = true;
    /// Defaults to the first two classes in file order.
    std::optional<std::string> class_a;
    std::optional<std::string> class_b;
    /// Project to this many principal components before normalising; 0 disables.
    int pca_dim = 0;
    double epsilon = kNormalizeEpsilon;
};

/// Normalised data with the distributions fitted to its pooled feature values.
struct PreparedData {
    Dataset data;
    std::string class_a;
    std::string class_b;
    BetaFit beta;
    DistributionSpec uniform;
    DistributionSpec normal;
};

PreparedData prepare_dataset(const std::filesystem::path &path, const PreprocessOptions &options);
PreparedData prepare_dataset(const RawTable &table, const PreprocessOptions &options);

enum class Scenario { UniformNoPerturb, UniformPerturb, BetaPerturb };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string &s);

inline const std::vector<Scenario> &all_scenarios() {
    static const std::vector<Scenario> v{Scenario::UniformNoPerturb, Scenario::UniformPerturb,
                                         Scenario::BetaPerturb};
    return v;
}

enum class SweepAxis { Qubits, Layers };

struct SweepSpec {
    SweepAxis axis = SweepAxis::Qubits;
    std::vector<int> axis_values;
    std::vector<Scenario> scenarios = all_scenarios();
    int trials = 200;
    int fixed_layers = 2; ///< used by the qubit sweep
    int fixed_qubits = 4; ///< used by the layer sweep
    PerturbationConfig perturbation{0.3, 0.55};
    Entangler entangler = Entangler::Ring;
    std::uint64_t seed = 0;
    int threads = 1;

    static SweepSpec qubit_sweep();
    static SweepSpec layer_sweep();

    void validate() const;
};

struct ExperimentRow {
    int axis_value;
    std::string scenario;
    double variance;
    int trials;
    std::uint64_t seed;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;

    /// Variance of the row with this (axis_value, scenario); throws if absent.
    double variance(int axis_value, const std::string &scenario) const;
};

/**
 * Variance of d cost / d theta_0 across `trials` initialisations for every
 * (axis value, scenario).
 *
 * Uniform scenarios draw from the uniform fitted to the normalised data; the
 * beta scenario from the empirical-Bayes beta fit. Perturbed scenarios add
 * one perturbation at iteration 0 before the gradient is measured. Scenario s
 * at axis value a draws from derive_seed(seed, {hash(s), a}), so adding or
 * removing scenarios leaves the other rows untouched.
 */
ExperimentResult run_sweep(const SweepSpec &spec, const PreparedData &prepared);
ExperimentResult run_qubit_sweep(const SweepSpec &spec, const PreparedData &prepared);
ExperimentResult run_layer_sweep(const SweepSpec &spec, const PreparedData &prepared);

/// Distributions of the data-free comparison: Unif(0, 2pi), Beta(1, 2pi), Normal(0, 2pi).
std::vector<std::pair<std::string, DistributionSpec>> init_comparison_distributions();

/// Data-free variance comparison. The input is |0...0> (no encoding) with
/// target label -1, so theta = 0 is not a stationary point of the cost.
ExperimentResult run_init_comparison(const std::vector<int> &qubits, int layers, int trials,
                                     std::uint64_t seed, Entangler entangler = Entangler::Ring,
                                     int threads = 1);

struct HistogramRow {
    std::string dist;
    double bin_lo;
    double bin_hi;
    long count_data;
    long count_sampled;
};

struct FitHistogram {
    std::vector<HistogramRow> rows;
    std::vector<std::pair<std::string, DistributionSpec>> fits;
};

/// For beta, uniform and normal fits of the pooled normalised values: histogram
/// of the data next to an equal-size sample of the fit. Bins span both sets.
FitHistogram run_fit_histograms(const PreparedData &prepared, int bins, std::uint64_t seed);

void write_result_csv(std::ostream &out, const ExperimentResult &result);
void write_histogram_csv(std::ostream &out, const FitHistogram &hist);

/// Shortest round-trip decimal form.
std::string format_double(double v);

} // namespace beinit
