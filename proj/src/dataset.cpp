#include "da/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace da {

static_assert(std::endian::native == std::endian::little,
              "rawbinary I/O assumes a little-endian host");

namespace {

void check_labels_in_range(const IntVector& labels, int C, const std::string& context) {
    for (int i = 0; i < labels.size(); ++i) {
        if (labels[i] < 1 || labels[i] > C) {
            throw ValidationError(context + ": label " + std::to_string(labels[i]) +
                                  " at sample " + std::to_string(i + 1) + " outside 1.." +
                                  std::to_string(C));
        }
    }
}

}  // namespace

DomainDataset::DomainDataset(Matrix features, std::optional<IntVector> labels, Role role,
                             std::string name)
    : features_(std::move(features)), labels_(std::move(labels)), role_(role),
      name_(std::move(name)) {
    if (!features_.allFinite()) {
        throw ValidationError("dataset '" + name_ + "': non-finite feature values");
    }
    if (role_ == Role::source) {
        if (!labels_.has_value()) {
            throw ValidationError("dataset '" + name_ + "': a source dataset must be labeled");
        }
    }
    if (labels_.has_value()) {
        if (labels_->size() != features_.cols()) {
            throw ValidationError("dataset '" + name_ + "': " + std::to_string(labels_->size()) +
                                  " labels for " + std::to_string(features_.cols()) + " samples");
        }
        if (labels_->size() > 0 && labels_->minCoeff() < 1) {
            throw ValidationError("dataset '" + name_ + "': labels must be positive (1..C)");
        }
    }
}

const IntVector& DomainDataset::training_labels() const {
    if (!has_training_labels()) {
        throw ValidationError("dataset '" + name_ +
                              "': training labels requested from a non-source dataset");
    }
    return *labels_;
}

const IntVector& DomainDataset::evaluation_labels() const {
    if (!has_evaluation_labels()) {
        throw ValidationError("dataset '" + name_ + "': no evaluation labels available");
    }
    return *labels_;
}

int DomainDataset::max_label() const {
    if (!labels_.has_value() || labels_->size() == 0) return 0;
    return labels_->maxCoeff();
}

DomainDataset DomainDataset::standardized() const {
    return DomainDataset(zscore_standardize(features_), labels_, role_, name_);
}

JointData JointData::from(const DomainDataset& source, const DomainDataset& target) {
    if (source.feature_count() != target.feature_count()) {
        throw ValidationError("joint data: feature dimensions differ (" +
                              std::to_string(source.feature_count()) + " vs " +
                              std::to_string(target.feature_count()) + ")");
    }
    JointData joint;
    joint.n_s = source.sample_count();
    joint.n_t = target.sample_count();
    joint.C = source.max_label();
    joint.X.resize(source.feature_count(), joint.n_s + joint.n_t);
    joint.X.leftCols(joint.n_s) = source.features();
    joint.X.rightCols(joint.n_t) = target.features();
    return joint;
}

SubdomainIndex SubdomainIndex::build(const IntVector& source_labels, const IntVector& target_pseudo,
                                     int C) {
    if (C < 1) throw ValidationError("subdomain index: class count must be >= 1");
    check_labels_in_range(source_labels, C, "subdomain index (source)");
    check_labels_in_range(target_pseudo, C, "subdomain index (target pseudo)");

    SubdomainIndex idx;
    idx.C = C;
    idx.n_s = static_cast<int>(source_labels.size());
    idx.n_t = static_cast<int>(target_pseudo.size());
    idx.source_by_class.resize(C);
    idx.target_by_class.resize(C);
    // labels are 1-based externally; this is the one 0-based conversion point
    for (int i = 0; i < source_labels.size(); ++i) {
        idx.source_by_class[source_labels[i] - 1].push_back(i);
    }
    for (int j = 0; j < target_pseudo.size(); ++j) {
        idx.target_by_class[target_pseudo[j] - 1].push_back(idx.n_s + j);
    }
    return idx;
}

Matrix zscore_standardize(const Matrix& X) {
    if (!X.allFinite()) throw ValidationError("zscore: non-finite input");
    const auto n = X.cols();
    Matrix out(X.rows(), n);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        const double mean = X.row(r).mean();
        Eigen::RowVectorXd centered = X.row(r).array() - mean;
        const double var = centered.squaredNorm() / static_cast<double>(n);
        if (var > 0.0) {
            out.row(r) = centered / std::sqrt(var);
        } else {
            out.row(r).setZero();
        }
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double_field(const std::string& raw, int row, int col) {
    const std::string s = trim(raw);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("csv row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": cannot parse '" + s + "' as a real number");
    }
    if (!std::isfinite(value)) {
        throw ValidationError("csv row " + std::to_string(row) + ", column " +
                              std::to_string(col) + ": non-finite value '" + s + "'");
    }
    return value;
}

DomainDataset load_csv(const std::string& path, Role role, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string header;
    if (!std::getline(in, header)) throw ParseError("'" + path + "': empty file");
    auto columns = split_csv_line(header);
    if (columns.empty()) throw ParseError("'" + path + "': empty header");
    bool has_label_column = trim(columns.back()) == "label";
    const int m = static_cast<int>(columns.size()) - (has_label_column ? 1 : 0);
    if (m < 1) throw ParseError("'" + path + "': no feature columns in header");

    std::vector<double> values;
    std::vector<int> labels;
    std::string line;
    int row = 0;  // data rows, 1-based in messages
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != static_cast<int>(columns.size())) {
            throw ParseError("'" + path + "' row " + std::to_string(row) + ": expected " +
                             std::to_string(columns.size()) + " fields, found " +
                             std::to_string(fields.size()));
        }
        for (int c = 0; c < m; ++c) {
            values.push_back(parse_double_field(fields[c], row, c + 1));
        }
        if (has_label_column) {
            const std::string s = trim(fields.back());
            int label = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), label);
            if (ec != std::errc() || ptr != s.data() + s.size()) {
                throw ParseError("'" + path + "' row " + std::to_string(row) +
                                 ": cannot parse label '" + s + "'");
            }
            labels.push_back(label);
        }
    }
    if (row == 0) throw ParseError("'" + path + "': no data rows");

    // rows are samples on disk; transpose into the m x n layout
    Matrix features(m, row);
    for (int j = 0; j < row; ++j) {
        for (int i = 0; i < m; ++i) features(i, j) = values[static_cast<size_t>(j) * m + i];
    }
    std::optional<IntVector> label_vec;
    if (has_label_column) {
        label_vec = Eigen::Map<IntVector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
    }
    return DomainDataset(std::move(features), std::move(label_vec), role,
                         name.empty() ? path : name);
}

constexpr char kRawMagic[4] = {'D', 'A', 'M', 'X'};

}  // namespace

Matrix load_rawbinary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kRawMagic, 4) != 0) {
        throw ParseError("'" + path + "': missing DAMX magic");
    }
    std::uint32_t m = 0, n = 0;
    in.read(reinterpret_cast<char*>(&m), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in) throw ParseError("'" + path + "': truncated header");
    Matrix X(m, n);
    in.read(reinterpret_cast<char*>(X.data()),
            static_cast<std::streamsize>(sizeof(double)) * m * n);
    if (!in) throw ParseError("'" + path + "': truncated payload (expected " +
                              std::to_string(static_cast<std::uint64_t>(m) * n) + " values)");
    return X;
}

DomainDataset load_dataset(const std::string& path, FileFormat format, Role role,
                           const std::string& name) {
    if (format == FileFormat::csv) {
        return load_csv(path, role, name);
    }
    if (role == Role::source) {
        throw ValidationError("'" + path +
                              "': rawbinary carries no labels; a source dataset needs a labeled "
                              "csv");
    }
    return DomainDataset(load_rawbinary(path), std::nullopt, role, name.empty() ? path : name);
}

void save_csv(const Matrix& X, const std::optional<IntVector>& labels, const std::string& path) {
    if (labels.has_value() && labels->size() != X.cols()) {
        throw ValidationError("save_csv: label count does not match sample count");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        out << (i ? "," : "") << "f" << (i + 1);
    }
    if (labels.has_value()) out << ",label";
    out << "\n";
    char buf[64];
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", X(i, j));
            out << (i ? "," : "") << buf;
        }
        if (labels.has_value()) out << "," << (*labels)[j];
        out << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

void save_rawbinary(const Matrix& X, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out.write(kRawMagic, 4);
    const std::uint32_t m = static_cast<std::uint32_t>(X.rows());
    const std::uint32_t n = static_cast<std::uint32_t>(X.cols());
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(X.data()),
              static_cast<std::streamsize>(sizeof(double)) * m * n);
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace da
