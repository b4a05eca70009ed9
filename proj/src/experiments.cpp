#include "beinit/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <numbers>
#include <ostream>

#include "beinit/gradient.hpp"
#include "beinit/parallel.hpp"
#include "beinit/random.hpp"

namespace beinit {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

PreparedData prepare_dataset(const RawTable &table, const PreprocessOptions &options) {
    const auto classes = table.classes();
    if (classes.size() < 2 && !(options.class_a && options.class_b))
        throw std::invalid_argument("dataset needs at least two classes");
    const std::string a = options.class_a.value_or(classes.at(0));
    const std::string b = options.class_b.value_or(classes.at(a == classes.at(0) ? 1 : 0));

    Dataset data = select_two_classes_binarize(table, a, b);
    // project first: PCA output is unbounded, the beta fit needs (0,1)
    if (options.pca_dim > 0)
        data = pca_reduce(data, options.pca_dim);
    data = minmax_normalize(data, options.epsilon);

    const Eigen::VectorXd pooled = flatten_features(data);
    auto beta = fit_beta_mle(pooled);
    auto uniform = fit_uniform(pooled);
    auto normal = fit_normal(pooled);
    return {std::move(data), a, b, beta, uniform, normal};
}

PreparedData prepare_dataset(const std::filesystem::path &path, const PreprocessOptions &options) {
    return prepare_dataset(load_csv(path, options.label_column, options.has_header), options);
}

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::UniformNoPerturb:
        return "uniform-no-perturb";
    case Scenario::UniformPerturb:
        return "uniform-perturb";
    case Scenario::BetaPerturb:
        return "beta-perturb";
    }
    return "?";
}

Scenario parse_scenario(const std::string &s) {
    for (auto sc : all_scenarios())
        if (to_string(sc) == s)
            return sc;
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

SweepSpec SweepSpec::qubit_sweep() {
    SweepSpec s;
    s.axis = SweepAxis::Qubits;
    s.axis_values = {4, 5, 6, 7, 8, 9, 10};
    return s;
}

SweepSpec SweepSpec::layer_sweep() {
    SweepSpec s;
    s.axis = SweepAxis::Layers;
    s.axis_values = {2, 4, 6, 8, 10, 15, 20, 25, 30};
    return s;
}

void SweepSpec::validate() const {
    if (axis_values.empty())
        throw std::invalid_argument("sweep needs at least one axis value");
    for (std::size_t i = 0; i < axis_values.size(); ++i) {
        if (axis_values[i] < 1)
            throw std::invalid_argument("sweep axis values must be positive");
        if (i > 0 && axis_values[i] <= axis_values[i - 1])
            throw std::invalid_argument("sweep axis values must be strictly increasing");
    }
    if (scenarios.empty())
        throw std::invalid_argument("sweep needs at least one scenario");
    if (trials < 2)
        throw std::invalid_argument("sweep needs at least 2 trials");
    if (!(perturbation.eta > 0))
        throw std::invalid_argument("perturbation eta must be > 0");
}

double ExperimentResult::variance(int axis_value, const std::string &scenario) const {
    for (const auto &r : rows)
        if (r.axis_value == axis_value && r.scenario == scenario)
            return r.variance;
    throw std::out_of_range("no row for (" + std::to_string(axis_value) + ", " + scenario + ")");
}

namespace {

constexpr std::uint64_t kPerturbStream = label_hash("perturb");

struct SweepPoint {
    int axis_value;
    Scenario scenario;
};

/// Variance of the first-parameter partial for one (config, scenario).
double scenario_variance(const Dataset &data, const AnsatzConfig &config, const DistributionSpec &dist,
                         bool perturbed, const PerturbationConfig &pc, int trials, std::uint64_t stream,
                         int threads) {
    const Circuit<double> circuit(config);
    Eigen::VectorXd partials(trials);
    // At iteration 0 the schedule is (1 + 0)^(gamma + sigma_i^2) = 1, so the
    // perturbation variance is eta whatever the initial gradient variance.
    const double sigma2_n = perturbed ? perturbation_sigma(pc.eta, pc.gamma, 0, 0.0) : 0.0;
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const auto trial = static_cast<std::uint64_t>(t);
        Eigen::VectorXd theta = sample(dist, config.num_parameters(), derive_seed(stream, trial));
        if (perturbed)
            theta = perturb(theta, sigma2_n, derive_seed(stream, {kPerturbStream, trial}));
        partials(static_cast<Eigen::Index>(t)) = parameter_shift_partial(circuit, data, theta, 0);
    });
    return unbiased_variance(partials);
}

} // namespace

ExperimentResult run_sweep(const SweepSpec &spec, const PreparedData &prepared) {
    spec.validate();
    const auto beta = DistributionSpec::beta(prepared.beta.params);

    std::vector<SweepPoint> points;
    for (int v : spec.axis_values)
        for (auto sc : spec.scenarios)
            points.push_back({v, sc});

    ExperimentResult result;
    result.rows.resize(points.size());
    // Trials parallelise inside each point; points run in order.
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto [value, sc] = points[p];
        AnsatzConfig config;
        config.num_qubits = spec.axis == SweepAxis::Qubits ? value : spec.fixed_qubits;
        config.num_layers = spec.axis == SweepAxis::Layers ? value : spec.fixed_layers;
        config.entangler = spec.entangler;
        const std::string name = to_string(sc);
        const auto stream =
            derive_seed(spec.seed, {label_hash(name.c_str()), static_cast<std::uint64_t>(value)});
        const auto &dist = sc == Scenario::BetaPerturb ? beta : prepared.uniform;
        const bool perturbed = sc != Scenario::UniformNoPerturb;
        result.rows[p] = {value, name,
                          scenario_variance(prepared.data, config, dist, perturbed, spec.perturbation,
                                            spec.trials, stream, spec.threads),
                          spec.trials, spec.seed};
    }
    return result;
}

ExperimentResult run_qubit_sweep(const SweepSpec &spec, const PreparedData &prepared) {
    if (spec.axis != SweepAxis::Qubits)
        throw std::invalid_argument("qubit sweep needs the qubit axis");
    return run_sweep(spec, prepared);
}

ExperimentResult run_layer_sweep(const SweepSpec &spec, const PreparedData &prepared) {
    if (spec.axis != SweepAxis::Layers)
        throw std::invalid_argument("layer sweep needs the layer axis");
    return run_sweep(spec, prepared);
}

std::vector<std::pair<std::string, DistributionSpec>> init_comparison_distributions() {
    constexpr double two_pi = 2 * std::numbers::pi;
    return {{"uniform", DistributionSpec::uniform(0.0, two_pi)},
            {"beta", DistributionSpec::beta(1.0, two_pi)},
            {"normal", DistributionSpec::normal(0.0, two_pi)}};
}

ExperimentResult run_init_comparison(const std::vector<int> &qubits, int layers, int trials,
                                     std::uint64_t seed, Entangler entangler, int threads) {
    if (qubits.empty())
        throw std::invalid_argument("init comparison needs at least one qubit count");
    if (trials < 2)
        throw std::invalid_argument("init comparison needs at least 2 trials");
    Dataset fixed;
    fixed.features = Eigen::MatrixXd::Zero(1, 1);
    fixed.labels = Eigen::VectorXd::Constant(1, -1.0);

    ExperimentResult result;
    for (int q : qubits) {
        AnsatzConfig config;
        config.num_qubits = q;
        config.num_layers = layers;
        config.entangler = entangler;
        for (const auto &[name, dist] : init_comparison_distributions()) {
            const auto stream = derive_seed(seed, {label_hash(name.c_str()), static_cast<std::uint64_t>(q)});
            result.rows.push_back(
                {q, name, scenario_variance(fixed, config, dist, false, {}, trials, stream, threads), trials,
                 seed});
        }
    }
    return result;
}

FitHistogram run_fit_histograms(const PreparedData &prepared, int bins, std::uint64_t seed) {
    if (bins < 1)
        throw std::invalid_argument("histogram needs at least one bin");
    const Eigen::VectorXd values = flatten_features(prepared.data);
    const auto n = values.size();

    FitHistogram hist;
    hist.fits = {{"beta", DistributionSpec::beta(prepared.beta.params)},
                 {"uniform", prepared.uniform},
                 {"normal", prepared.normal}};

    for (const auto &[name, dist] : hist.fits) {
        const Eigen::VectorXd drawn = sample(dist, n, derive_seed(seed, label_hash(name.c_str())));
        const double lo = std::min(values.minCoeff(), drawn.minCoeff());
        const double hi = std::max(values.maxCoeff(), drawn.maxCoeff());
        const double width = (hi - lo) / bins;
        auto bin_of = [&](double v) {
            const auto b = static_cast<int>((v - lo) / width);
            return std::clamp(b, 0, bins - 1);
        };
        std::vector<long> cd(static_cast<std::size_t>(bins), 0), cs(static_cast<std::size_t>(bins), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            ++cd[static_cast<std::size_t>(bin_of(values(i)))];
            ++cs[static_cast<std::size_t>(bin_of(drawn(i)))];
        }
        for (int b = 0; b < bins; ++b)
            hist.rows.push_back({name, lo + b * width, b + 1 == bins ? hi : lo + (b + 1) * width,
                                 cd[static_cast<std::size_t>(b)], cs[static_cast<std::size_t>(b)]});
    }
    return hist;
}

void write_result_csv(std::ostream &out, const ExperimentResult &result) {
    out << "axis_value,scenario,variance,trials,seed\n";
    for (const auto &r : result.rows)
        out << r.axis_value << ',' << r.scenario << ',' << format_double(r.variance) << ',' << r.trials << ','
            << r.seed << '\n';
}

void write_histogram_csv(std::ostream &out, const FitHistogram &hist) {
    out << "dist,bin_lo,bin_hi,count_data,count_sampled\n";
    for (const auto &r : hist.rows)
        out << r.dist << ',' << format_double(r.bin_lo) << ',' << format_double(r.bin_hi) << ','
            << r.count_data << ',' << r.count_sampled << '\n';
}

} // namespace beinit
