#pragma once

#include <Eigen/Dense>

#include <string>

#include "beinit/errors.hpp"

namespace beinit {

/// Labelled samples: one feature row per sample, labels in {-1, +1}.
template <typename Scalar> struct BasicDataset {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> features;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> labels;

    Eigen::Index sample_count() const noexcept { return features.rows(); }
    Eigen::Index feature_dim() const noexcept { return features.cols(); }

    void validate() const {
        if (labels.size() != features.rows())
            throw DimensionError("dataset has " + std::to_string(features.rows()) +
                                 " feature rows but " + std::to_string(labels.size()) + " labels");
        for (Eigen::Index i = 0; i < labels.size(); ++i)
            if (labels(i) != Scalar(1) && labels(i) != Scalar(-1))
                throw DomainError("label at row " + std::to_string(i) + " is not +1 or -1");
    }

    /// Rows `idx` in the given order.
    template <typename IndexRange> BasicDataset subset(const IndexRange &idx) const {
        BasicDataset out;
        out.features.resize(static_cast<Eigen::Index>(idx.size()), features.cols());
        out.labels.resize(static_cast<Eigen::Index>(idx.size()));
        Eigen::Index r = 0;
        for (auto i : idx) {
            out.features.row(r) = features.row(static_cast<Eigen::Index>(i));
            out.labels(r) = labels(static_cast<Eigen::Index>(i));
            ++r;
        }
        return out;
    }
};

using Dataset = BasicDataset<double>;

} // namespace beinit
