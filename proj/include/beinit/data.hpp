#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

#include "beinit/dataset.hpp"

namespace beinit {

/// Parsed CSV before label binarisation: numeric features plus raw class labels.
struct RawTable {
    Eigen::MatrixXd features;
    std::vector<std::string> labels;
    std::vector<std::string> feature_names; ///< empty when the file has no header

    /// Distinct labels in order of first appearance.
    std::vector<std::string> classes() const;
};

/// Comma-separated, optional header row. A negative `label_column` counts
/// from the end (-1 is the last column).
RawTable load_csv(const std::filesystem::path &path, int label_column, bool has_header);
RawTable parse_csv(const std::string &text, int label_column, bool has_header);

/// Keeps rows of the two classes, `class_a` -> +1 and `class_b` -> -1, in file order.
Dataset select_two_classes_binarize(const RawTable &table, const std::string &class_a,
                                    const std::string &class_b);

inline constexpr double kNormalizeEpsilon = 1e-6;

/// Per-column x -> eps + (1 - 2 eps)(x - min)/(max - min), so values land in [eps, 1 - eps].
Dataset minmax_normalize(const Dataset &data, double epsilon = kNormalizeEpsilon);

struct PcaProjection {
    Eigen::VectorXd mean;       ///< column means of the fitted data
    Eigen::MatrixXd components; ///< d x k, orthonormal columns, descending variance
    Eigen::VectorXd variances;  ///< eigenvalues of the sample covariance for each component
};

/// Eigen-decomposes the sample covariance (divisor m - 1). Each component is
/// signed so its largest-magnitude entry is positive.
PcaProjection pca_fit(const Eigen::Ref<const Eigen::MatrixXd> &features, int target_dim);

Dataset pca_reduce(const Dataset &data, int target_dim);

/// All feature values as one column, row-major.
Eigen::VectorXd flatten_features(const Dataset &data);

} // namespace beinit
