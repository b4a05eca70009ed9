#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>

#include "beinit/experiments.hpp"

using namespace beinit;

namespace {

const std::string iris = std::string(BEINIT_DATA_DIR) + "/iris.csv";

const PreparedData &prepared_iris() {
    static const PreparedData p = prepare_dataset(iris, PreprocessOptions{});
    return p;
}

std::string csv(const ExperimentResult &r) {
    std::ostringstream out;
    write_result_csv(out, r);
    return out.str();
}

} // namespace

TEST_CASE("prepared iris") {
    const auto &p = prepared_iris();
    CHECK(p.class_a == "Iris-setosa");
    CHECK(p.class_b == "Iris-versicolor");
    CHECK(p.data.sample_count() == 100);
    CHECK(p.data.features.minCoeff() > 0);
    CHECK(p.data.features.maxCoeff() < 1);
    CHECK(p.uniform.lo() == p.data.features.minCoeff());
    CHECK(p.uniform.hi() == p.data.features.maxCoeff());
    CHECK(p.beta.params.alpha > 0);
    CHECK_FALSE(p.beta.used_fallback);

    PreprocessOptions wine;
    wine.pca_dim = 2;
    const auto w = prepare_dataset(std::string(BEINIT_DATA_DIR) + "/wine.csv", wine);
    CHECK(w.data.feature_dim() == 2);
    CHECK(w.data.features.minCoeff() > 0);
}

TEST_CASE("sweep row counts and validation") {
    auto spec = SweepSpec::qubit_sweep();
    CHECK(spec.axis_values.size() == 7);
    spec.trials = 2;
    spec.axis_values = {2, 3, 4, 5, 6, 7, 8};
    const auto r = run_qubit_sweep(spec, prepared_iris());
    CHECK(r.rows.size() == 21);
    for (const auto &row : r.rows) {
        CHECK(std::isfinite(row.variance));
        CHECK(row.variance >= 0);
    }

    auto layers = SweepSpec::layer_sweep();
    CHECK(layers.axis_values == std::vector<int>{2, 4, 6, 8, 10, 15, 20, 25, 30});
    layers.trials = 2;
    layers.fixed_qubits = 2;
    const auto l = run_layer_sweep(layers, prepared_iris());
    CHECK(l.rows.size() == 27);
    CHECK_THROWS(run_qubit_sweep(layers, prepared_iris()));

    auto bad = spec;
    bad.axis_values = {4, 4};
    CHECK_THROWS(bad.validate());
    bad = spec;
    bad.trials = 1;
    CHECK_THROWS(bad.validate());
    CHECK(parse_scenario("beta-perturb") == Scenario::BetaPerturb);
    CHECK_THROWS(parse_scenario("gaussian"));
}

TEST_CASE("sweeps are deterministic and scenario-independent") {
    auto spec = SweepSpec::qubit_sweep();
    spec.axis_values = {3, 4};
    spec.trials = 12;
    spec.seed = 42;
    const auto full = run_sweep(spec, prepared_iris());
    CHECK(csv(full) == csv(run_sweep(spec, prepared_iris())));

    auto threaded = spec;
    threaded.threads = 3;
    CHECK(csv(full) == csv(run_sweep(threaded, prepared_iris())));

    auto only_beta = spec;
    only_beta.scenarios = {Scenario::BetaPerturb};
    const auto part = run_sweep(only_beta, prepared_iris());
    for (int q : {3, 4})
        CHECK(part.variance(q, "beta-perturb") == full.variance(q, "beta-perturb"));
    CHECK_THROWS_AS(part.variance(3, "uniform-perturb"), std::out_of_range);
}

TEST_CASE("init comparison") {
    const auto r = run_init_comparison({2, 3}, 1, 8, 5);
    CHECK(r.rows.size() == 6);
    std::map<std::string, int> seen;
    for (const auto &row : r.rows)
        ++seen[row.scenario];
    CHECK(seen == std::map<std::string, int>{{"beta", 2}, {"normal", 2}, {"uniform", 2}});
    const auto dists = init_comparison_distributions();
    const auto beta = sample(dists[1].second, 5000, 1);
    CHECK(beta.minCoeff() > 0);
    CHECK(beta.maxCoeff() < 1);
    CHECK(csv(r) == csv(run_init_comparison({2, 3}, 1, 8, 5, Entangler::Ring, 2)));
}

TEST_CASE("fit histograms") {
    const auto &p = prepared_iris();
    const auto h = run_fit_histograms(p, 15, 3);
    CHECK(h.rows.size() == 45);
    std::map<std::string, std::pair<long, long>> totals;
    for (const auto &r : h.rows) {
        totals[r.dist].first += r.count_data;
        totals[r.dist].second += r.count_sampled;
        CHECK(r.bin_lo < r.bin_hi);
    }
    for (const auto &[name, t] : totals) {
        CAPTURE(name);
        CHECK(t.first == 400);
        CHECK(t.first == t.second);
    }
    const auto &uniform = h.fits[1].second;
    CHECK(uniform.lo() == flatten_features(p.data).minCoeff());
    CHECK(uniform.hi() == flatten_features(p.data).maxCoeff());

    const Eigen::VectorXd values = flatten_features(p.data);
    const Eigen::VectorXd drawn = sample(p.normal, values.size(), 99);
    const double se = std::sqrt(p.normal.variance() / double(values.size()));
    CHECK(std::abs(drawn.mean() - values.mean()) <= 3 * se);

    std::ostringstream out;
    write_histogram_csv(out, h);
    CHECK(out.str().rfind("dist,bin_lo,bin_hi,count_data,count_sampled\n", 0) == 0);
    CHECK_THROWS(run_fit_histograms(p, 0, 1));
}

TEST_CASE("csv formatting round-trips") {
    for (double v : {0.1, 1.0 / 3, 2.5e-17, 12345.678})
        CHECK(std::stod(format_double(v)) == v);
}
