#include "beinit/data.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "beinit/errors.hpp"

namespace beinit {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(const std::string &line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

double parse_number(const std::string &cell, std::size_t line_no) {
    double v = 0;
    const auto *end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc() || ptr != end)
        throw ParseError(line_no, "non-numeric feature value '" + cell + "'");
    return v;
}

} // namespace

std::vector<std::string> RawTable::classes() const {
    std::vector<std::string> out;
    for (const auto &l : labels)
        if (std::find(out.begin(), out.end(), l) == out.end())
            out.push_back(l);
    return out;
}

RawTable parse_csv(const std::string &text, int label_column, bool has_header) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::size_t arity = 0;
    std::size_t label_idx = 0;
    std::vector<std::vector<double>> rows;
    RawTable table;

    auto resolve_label = [&](std::size_t n, std::size_t at) {
        const long idx = label_column < 0 ? static_cast<long>(n) + label_column : label_column;
        if (idx < 0 || idx >= static_cast<long>(n))
            throw ParseError(at, "label column " + std::to_string(label_column) + " out of range for " +
                                     std::to_string(n) + " columns");
        return static_cast<std::size_t>(idx);
    };

    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        auto cells = split_cells(line);
        if (arity == 0) {
            arity = cells.size();
            if (arity < 2)
                throw ParseError(line_no, "need at least one feature column and a label column");
            label_idx = resolve_label(arity, line_no);
        } else if (cells.size() != arity) {
            throw ParseError(line_no, "expected " + std::to_string(arity) + " cells, found " +
                                          std::to_string(cells.size()));
        }
        if (header_pending) {
            header_pending = false;
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (c != label_idx)
                    table.feature_names.push_back(cells[c]);
            continue;
        }
        std::vector<double> row;
        row.reserve(arity - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx)
                table.labels.push_back(cells[c]);
            else
                row.push_back(parse_number(cells[c], line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ParseError(line_no, "no data rows");

    table.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(arity - 1));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return table;
}

RawTable load_csv(const std::filesystem::path &path, int label_column, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), label_column, has_header);
}

Dataset select_two_classes_binarize(const RawTable &table, const std::string &class_a,
                                    const std::string &class_b) {
    if (class_a == class_b)
        throw std::invalid_argument("the two classes must differ");
    std::vector<Eigen::Index> keep;
    bool seen_a = false, seen_b = false;
    for (std::size_t i = 0; i < table.labels.size(); ++i) {
        const auto &l = table.labels[i];
        seen_a |= l == class_a;
        seen_b |= l == class_b;
        if (l == class_a || l == class_b)
            keep.push_back(static_cast<Eigen::Index>(i));
    }
    if (!seen_a)
        throw std::invalid_argument("class '" + class_a + "' not present");
    if (!seen_b)
        throw std::invalid_argument("class '" + class_b + "' not present");

    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(keep.size()), table.features.cols());
    out.labels.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const auto src = keep[r];
        out.features.row(static_cast<Eigen::Index>(r)) = table.features.row(src);
        out.labels(static_cast<Eigen::Index>(r)) =
            table.labels[static_cast<std::size_t>(src)] == class_a ? 1.0 : -1.0;
    }
    return out;
}

Dataset minmax_normalize(const Dataset &data, double epsilon) {
    if (!(epsilon >= 0 && epsilon < 0.5))
        throw std::invalid_argument("normalisation epsilon must be in [0, 0.5)");
    Dataset out = data;
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
        const auto col = data.features.col(c);
        const double lo = col.minCoeff(), hi = col.maxCoeff();
        if (!(hi > lo))
            throw DomainError("feature column " + std::to_string(c) + " is constant");
        const double scale = (1 - 2 * epsilon) / (hi - lo);
        out.features.col(c) = ((col.array() - lo) * scale + epsilon).matrix();
    }
    return out;
}

PcaProjection pca_fit(const Eigen::Ref<const Eigen::MatrixXd> &features, int target_dim) {
    const auto m = features.rows();
    const auto d = features.cols();
    if (target_dim < 1 || target_dim > d)
        throw std::invalid_argument("PCA target dimension " + std::to_string(target_dim) +
                                    " must be in [1, " + std::to_string(d) + "]");
    if (m <= target_dim)
        throw std::invalid_argument("PCA needs more samples than the target dimension");

    PcaProjection p;
    p.mean = features.colwise().mean().transpose();
    const Eigen::MatrixXd centered = features.rowwise() - p.mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(m - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
        throw DomainError("covariance eigendecomposition failed");
    if (!(es.eigenvalues()(d - 1) > 0))
        throw DomainError("covariance has rank 0; nothing to project");

    p.components.resize(d, target_dim);
    p.variances.resize(target_dim);
    for (int j = 0; j < target_dim; ++j) {
        // eigenvalues come back ascending
        Eigen::VectorXd v = es.eigenvectors().col(d - 1 - j);
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0)
            v = -v;
        p.components.col(j) = v;
        p.variances(j) = std::max(0.0, es.eigenvalues()(d - 1 - j));
    }
    return p;
}

Dataset pca_reduce(const Dataset &data, int target_dim) {
    const auto p = pca_fit(data.features, target_dim);
    Dataset out;
    out.features = (data.features.rowwise() - p.mean.transpose()) * p.components;
    out.labels = data.labels;
    return out;
}

Eigen::VectorXd flatten_features(const Dataset &data) {
    Eigen::VectorXd out(data.features.size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < data.features.rows(); ++r)
        for (Eigen::Index c = 0; c < data.features.cols(); ++c)
            out(k++) = data.features(r, c);
    return out;
}

} // namespace beinit
