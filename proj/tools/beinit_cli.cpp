// beinit: gradient-variance experiments and BEINIT training from the command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "beinit/experiments.hpp"
#include "beinit/haar.hpp"
#include "beinit/trainer.hpp"

namespace {

using beinit::format_double;
using nlohmann::ordered_json;

struct Options {
    std::string dataset = "data/iris.csv";
    int label_column = -1;
    bool no_header = false;
    std::string class_a;
    std::string class_b;
    int pca = 0;
    double epsilon = beinit::kNormalizeEpsilon;

    int trials = 200;
    std::uint64_t seed = 0;
    std::string out;
    std::optional<double> eta;
    double gamma = 0.55;
    std::vector<int> layers;
    std::vector<int> qubits;
    std::vector<std::string> scenarios;
    std::string entangler = "ring";
    int threads = 1;

    int bins = 20;

    int iterations = 50;
    double learning_rate = 0.1;
    double momentum = 0.9;
    double split = 0.8;
    std::string init = "eb-beta";

    int dim = 2;
    long samples = 10000;
};

constexpr double kSweepEta = 0.3;

beinit::PreprocessOptions preprocess(const Options &o) {
    beinit::PreprocessOptions p;
    p.label_column = o.label_column;
    p.has_header = !o.no_header;
    if (!o.class_a.empty())
        p.class_a = o.class_a;
    if (!o.class_b.empty())
        p.class_b = o.class_b;
    p.pca_dim = o.pca;
    p.epsilon = o.epsilon;
    return p;
}

ordered_json dist_json(const beinit::DistributionSpec &d) {
    ordered_json j;
    j["kind"] = beinit::to_string(d.kind());
    switch (d.kind()) {
    case beinit::DistributionKind::Beta:
        j["alpha"] = d.beta_params().alpha;
        j["beta"] = d.beta_params().beta;
        break;
    case beinit::DistributionKind::Uniform:
        j["lo"] = d.lo();
        j["hi"] = d.hi();
        break;
    case beinit::DistributionKind::Normal:
        j["mean"] = d.mean();
        j["variance"] = d.variance();
        break;
    }
    return j;
}

void add_dataset_fields(ordered_json &j, const Options &o, const beinit::PreparedData &p) {
    j["dataset"] = o.dataset;
    j["label_column"] = o.label_column;
    j["has_header"] = !o.no_header;
    j["class_a"] = p.class_a;
    j["class_b"] = p.class_b;
    j["pca"] = o.pca;
    j["epsilon"] = o.epsilon;
    j["samples"] = p.data.sample_count();
    j["feature_dim"] = p.data.feature_dim();
    j["beta_fit"] = dist_json(beinit::DistributionSpec::beta(p.beta.params));
    j["beta_fit_fallback"] = p.beta.used_fallback;
    j["uniform_fit"] = dist_json(p.uniform);
    j["normal_fit"] = dist_json(p.normal);
}

/// Writes `body` to --out (plus the JSON sidecar) or to stdout.
void emit(const Options &o, const std::string &body, const ordered_json &sidecar) {
    if (o.out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream csv(o.out, std::ios::binary);
    if (!csv)
        throw beinit::IoError("cannot write '" + o.out + "'");
    csv << body;
    std::ofstream js(o.out + ".json", std::ios::binary);
    if (!js)
        throw beinit::IoError("cannot write '" + o.out + ".json'");
    js << sidecar.dump(2) << '\n';
}

int single_value(const std::vector<int> &v, int fallback, const char *flag) {
    if (v.empty())
        return fallback;
    if (v.size() != 1)
        throw std::invalid_argument(std::string(flag) + " takes a single value for this subcommand");
    return v.front();
}

void run_sweep_command(const Options &o, beinit::SweepAxis axis) {
    const bool qubit_axis = axis == beinit::SweepAxis::Qubits;
    auto spec = qubit_axis ? beinit::SweepSpec::qubit_sweep() : beinit::SweepSpec::layer_sweep();
    if (qubit_axis) {
        if (!o.qubits.empty())
            spec.axis_values = o.qubits;
        spec.fixed_layers = single_value(o.layers, spec.fixed_layers, "--layers");
    } else {
        if (!o.layers.empty())
            spec.axis_values = o.layers;
        spec.fixed_qubits = single_value(o.qubits, spec.fixed_qubits, "--qubits");
    }
    if (!o.scenarios.empty()) {
        spec.scenarios.clear();
        for (const auto &s : o.scenarios)
            spec.scenarios.push_back(beinit::parse_scenario(s));
    }
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.threads = o.threads;
    spec.entangler = beinit::parse_entangler(o.entangler);
    spec.perturbation = {o.eta.value_or(kSweepEta), o.gamma};

    const auto prepared = beinit::prepare_dataset(o.dataset, preprocess(o));
    const auto result = qubit_axis ? beinit::run_qubit_sweep(spec, prepared) : beinit::run_layer_sweep(spec, prepared);

    std::ostringstream csv;
    beinit::write_result_csv(csv, result);

    ordered_json j;
    j["command"] = qubit_axis ? "qubit-sweep" : "layer-sweep";
    add_dataset_fields(j, o, prepared);
    j["axis"] = qubit_axis ? "qubits" : "layers";
    j["axis_values"] = spec.axis_values;
    if (qubit_axis)
        j["layers"] = spec.fixed_layers;
    else
        j["qubits"] = spec.fixed_qubits;
    std::vector<std::string> names;
    for (auto s : spec.scenarios)
        names.push_back(beinit::to_string(s));
    j["scenarios"] = names;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["eta"] = spec.perturbation.eta;
    j["gamma"] = spec.perturbation.gamma;
    j["entangler"] = beinit::to_string(spec.entangler);
    j["gradient_index"] = 0;
    emit(o, csv.str(), j);
}

void run_init_compare(const Options &o) {
    const std::vector<int> qubits = o.qubits.empty() ? std::vector<int>{4, 5, 6, 7, 8, 9, 10} : o.qubits;
    const int layers = single_value(o.layers, 2, "--layers");
    const auto entangler = beinit::parse_entangler(o.entangler);
    const auto result = beinit::run_init_comparison(qubits, layers, o.trials, o.seed, entangler, o.threads);

    std::ostringstream csv;
    beinit::write_result_csv(csv, result);
    ordered_json j;
    j["command"] = "init-compare";
    j["qubits"] = qubits;
    j["layers"] = layers;
    j["trials"] = o.trials;
    j["seed"] = o.seed;
    j["entangler"] = beinit::to_string(entangler);
    j["input_state"] = "zero";
    j["label"] = -1;
    ordered_json dists = ordered_json::object();
    for (const auto &[name, d] : beinit::init_comparison_distributions())
        dists[name] = dist_json(d);
    j["distributions"] = dists;
    emit(o, csv.str(), j);
}

void run_fit_hist(const Options &o) {
    const auto prepared = beinit::prepare_dataset(o.dataset, preprocess(o));
    const auto hist = beinit::run_fit_histograms(prepared, o.bins, o.seed);
    std::ostringstream csv;
    beinit::write_histogram_csv(csv, hist);
    ordered_json j;
    j["command"] = "fit-hist";
    add_dataset_fields(j, o, prepared);
    j["bins"] = o.bins;
    j["seed"] = o.seed;
    emit(o, csv.str(), j);
}

beinit::DistributionSpec parse_init(const std::string &s) {
    // kind:a:b
    std::vector<double> args;
    std::string kind = s;
    if (const auto colon = s.find(':'); colon != std::string::npos) {
        kind = s.substr(0, colon);
        std::istringstream rest(s.substr(colon + 1));
        std::string part;
        while (std::getline(rest, part, ':'))
            args.push_back(std::stod(part));
    }
    if (args.size() != 2)
        throw std::invalid_argument("--init expects eb-beta or kind:a:b, got '" + s + "'");
    if (kind == "beta")
        return beinit::DistributionSpec::beta(args[0], args[1]);
    if (kind == "uniform")
        return beinit::DistributionSpec::uniform(args[0], args[1]);
    if (kind == "normal")
        return beinit::DistributionSpec::normal(args[0], args[1]);
    throw std::invalid_argument("unknown distribution '" + kind + "'");
}

void run_train(const Options &o) {
    beinit::AnsatzConfig ansatz;
    ansatz.num_qubits = single_value(o.qubits, 4, "--qubits");
    ansatz.num_layers = single_value(o.layers, 2, "--layers");
    ansatz.entangler = beinit::parse_entangler(o.entangler);

    beinit::TrainConfig tc;
    tc.learning_rate = o.learning_rate;
    tc.momentum = o.momentum;
    tc.iterations = o.iterations;
    tc.split_ratio = o.split;
    tc.seed = o.seed;
    tc.perturbation = o.eta ? std::optional<beinit::PerturbationConfig>({*o.eta, o.gamma}) : std::nullopt;
    if (o.init != "eb-beta")
        tc.init = parse_init(o.init);

    const auto prepared = beinit::prepare_dataset(o.dataset, preprocess(o));
    const auto result = beinit::beinit_train(prepared.data, ansatz, tc);

    std::ostringstream csv;
    beinit::write_history_csv(csv, result.history);
    ordered_json j;
    j["command"] = "train";
    add_dataset_fields(j, o, prepared);
    j["qubits"] = ansatz.num_qubits;
    j["layers"] = ansatz.num_layers;
    j["entangler"] = beinit::to_string(ansatz.entangler);
    j["learning_rate"] = tc.learning_rate;
    j["momentum"] = tc.momentum;
    j["iterations"] = tc.iterations;
    j["split_ratio"] = tc.split_ratio;
    j["seed"] = tc.seed;
    j["perturbation"] = tc.perturbation ? ordered_json{{"eta", tc.perturbation->eta}, {"gamma", tc.perturbation->gamma}}
                                        : ordered_json(nullptr);
    j["init"] = dist_json(result.init_distribution);
    j["init_fallback"] = result.beta_fit_fallback;
    std::vector<double> theta(result.theta.values.data(), result.theta.values.data() + result.theta.values.size());
    j["final_theta"] = theta;
    emit(o, csv.str(), j);
}

std::string join_indices(const std::vector<int> &ix) {
    std::string s;
    for (std::size_t i = 0; i < ix.size(); ++i)
        s += (i ? ";" : "") + std::to_string(ix[i]);
    return s;
}

void run_haar_check(const Options &o) {
    const int d = o.dim;
    if (d < 2)
        throw std::invalid_argument("haar-check needs --dim >= 2");
    std::vector<beinit::MomentEstimate> est;
    std::uint64_t k = 0;
    auto next_seed = [&] { return beinit::derive_seed(o.seed, k++); };
    est.push_back(beinit::estimate_m1(d, 0, 0, 0, 0, o.samples, next_seed()));
    est.push_back(beinit::estimate_m1(d, 0, 0, 1, 1, o.samples, next_seed()));
    est.push_back(beinit::estimate_m1(d, 1, 0, 1, 0, o.samples, next_seed()));
    est.push_back(beinit::estimate_m2(d, {0, 0, 0, 0, 0, 0, 0, 0}, o.samples, next_seed()));
    est.push_back(beinit::estimate_m2(d, {0, 0, 1, 1, 0, 0, 1, 1}, o.samples, next_seed()));
    est.push_back(beinit::estimate_m2(d, {0, 0, 0, 1, 0, 0, 0, 1}, o.samples, next_seed()));
    est.push_back(beinit::estimate_m2(d, {0, 0, 1, 1, 0, 1, 1, 0}, o.samples, next_seed()));
    est.push_back(beinit::estimate_m2(d, {0, 0, 0, 0, 1, 1, 1, 1}, o.samples, next_seed()));

    std::ostringstream csv;
    csv << "d,indices,empirical_re,empirical_im,reference,abs_err,samples\n";
    for (const auto &e : est)
        csv << e.dim << ',' << join_indices(e.indices) << ',' << format_double(e.empirical.real()) << ','
            << format_double(e.empirical.imag()) << ',' << format_double(e.reference) << ','
            << format_double(e.abs_error()) << ',' << e.sample_count << '\n';
    ordered_json j;
    j["command"] = "haar-check";
    j["d"] = d;
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    emit(o, csv.str(), j);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Barren-plateau gradient-variance experiments and BEINIT training"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--dataset", o.dataset, "CSV file")->capture_default_str();
    app.add_option("--label-column", o.label_column, "label column index, negative counts from the end")
        ->capture_default_str();
    app.add_flag("--no-header", o.no_header, "first CSV line is data");
    app.add_option("--class-a", o.class_a, "class mapped to +1 (default: first class in file)");
    app.add_option("--class-b", o.class_b, "class mapped to -1 (default: second class in file)");
    app.add_option("--pca", o.pca, "project to this many principal components before normalising (0 = off)");
    app.add_option("--epsilon", o.epsilon, "normalisation margin")->capture_default_str();
    app.add_option("--trials", o.trials, "initialisations per variance point")->capture_default_str();
    app.add_option("--seed", o.seed, "master seed")->envname("BEINIT_SEED")->capture_default_str();
    app.add_option("--out", o.out, "output CSV path; a .json sidecar is written next to it");
    app.add_option("--eta", o.eta, "perturbation scale (train: enables perturbation)");
    app.add_option("--gamma", o.gamma, "perturbation decay bias")->capture_default_str();
    app.add_option("--layers", o.layers, "layer count(s)")->delimiter(',');
    app.add_option("--qubits", o.qubits, "qubit count(s)")->delimiter(',');
    app.add_option("--scenarios", o.scenarios, "uniform-no-perturb,uniform-perturb,beta-perturb")->delimiter(',');
    app.add_option("--entangler", o.entangler, "linear or ring")->capture_default_str();
    app.add_option("--threads", o.threads, "worker threads")->capture_default_str();
    app.add_option("--bins", o.bins, "histogram bins")->capture_default_str();
    app.add_option("--iterations", o.iterations, "training iterations")->capture_default_str();
    app.add_option("--lr", o.learning_rate, "learning rate")->capture_default_str();
    app.add_option("--momentum", o.momentum, "Nesterov momentum")->capture_default_str();
    app.add_option("--split", o.split, "train fraction")->capture_default_str();
    app.add_option("--init", o.init, "eb-beta, or beta:a:b / uniform:lo:hi / normal:mean:var")->capture_default_str();
    app.add_option("--dim", o.dim, "unitary dimension for haar-check")->capture_default_str();
    app.add_option("--samples", o.samples, "Haar samples per moment")->capture_default_str();

    auto *qubit_sweep = app.add_subcommand("qubit-sweep", "gradient variance across qubit counts");
    auto *layer_sweep = app.add_subcommand("layer-sweep", "gradient variance across layer counts");
    auto *init_compare = app.add_subcommand("init-compare", "data-free comparison of init distributions");
    auto *fit_hist = app.add_subcommand("fit-hist", "histograms of data vs fitted distributions");
    auto *train = app.add_subcommand("train", "BEINIT training run");
    auto *haar = app.add_subcommand("haar-check", "Monte-Carlo check of Haar moments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*qubit_sweep)
            run_sweep_command(o, beinit::SweepAxis::Qubits);
        else if (*layer_sweep)
            run_sweep_command(o, beinit::SweepAxis::Layers);
        else if (*init_compare)
            run_init_compare(o);
        else if (*fit_hist)
            run_fit_hist(o);
        else if (*train)
            run_train(o);
        else if (*haar)
            run_haar_check(o);
    } catch (const std::exception &e) {
        std::cerr << "beinit: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
