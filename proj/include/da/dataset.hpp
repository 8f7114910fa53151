#pragma once

#include <optional>
#include <string>
#include <vector>

#include "da/types.hpp"

namespace da {

enum class Role { source, target };
enum class FileFormat { csv, rawbinary };

/// One domain's samples: features are stored m x n (one column per sample).
/// A source dataset must carry labels in 1..C. A target dataset may carry
/// ground-truth labels, but those are reachable only through the
/// evaluation-only accessor so no adaptation code path can read them.
class DomainDataset {
public:
    DomainDataset(Matrix features, std::optional<IntVector> labels, Role role,
                  std::string name = "");

    const Matrix& features() const { return features_; }
    int feature_count() const { return static_cast<int>(features_.rows()); }
    int sample_count() const { return static_cast<int>(features_.cols()); }
    Role role() const { return role_; }
    const std::string& name() const { return name_; }

    /// Labels usable for training. Only a source dataset has them.
    bool has_training_labels() const { return role_ == Role::source && labels_.has_value(); }
    const IntVector& training_labels() const;

    /// Ground-truth labels of a target dataset. Evaluation only; adaptation
    /// operations must never call this.
    bool has_evaluation_labels() const { return role_ == Role::target && labels_.has_value(); }
    const IntVector& evaluation_labels() const;

    /// Largest label value present (0 when unlabeled).
    int max_label() const;

    /// Same samples with per-feature z-score applied.
    DomainDataset standardized() const;

private:
    Matrix features_;
    std::optional<IntVector> labels_;
    Role role_;
    std::string name_;
};

/// Joint data matrix X = [X_S, X_T]. Columns 1..n_s are the source samples
/// in order, columns n_s+1..n_s+n_t the target samples; every MMD matrix
/// index depends on this ordering.
struct JointData {
    Matrix X;
    int n_s = 0;
    int n_t = 0;
    int C = 0;

    static JointData from(const DomainDataset& source, const DomainDataset& target);
};

/// Per-class column indices into the joint matrix, built from source labels
/// and target pseudo-labels. Class c occupies slot c-1.
struct SubdomainIndex {
    int C = 0;
    int n_s = 0;
    int n_t = 0;
    std::vector<std::vector<int>> source_by_class;
    std::vector<std::vector<int>> target_by_class;

    static SubdomainIndex build(const IntVector& source_labels, const IntVector& target_pseudo,
                                int C);

    int source_count(int c) const { return static_cast<int>(source_by_class.at(c - 1).size()); }
    int target_count(int c) const { return static_cast<int>(target_by_class.at(c - 1).size()); }
};

/// Per-feature z-score: each row gets mean 0 and unit population (1/n)
/// standard deviation. Zero-variance rows are left all-zero after mean
/// removal.
Matrix zscore_standardize(const Matrix& X);

/// CSV: UTF-8, header "f1,...,fm[,label]", one sample per row.
/// rawbinary: magic "DAMX", little-endian u32 m, u32 n, then m*n f64
/// values in column-major (sample-major) order; carries no labels.
DomainDataset load_dataset(const std::string& path, FileFormat format, Role role,
                           const std::string& name = "");

void save_csv(const Matrix& X, const std::optional<IntVector>& labels, const std::string& path);
void save_rawbinary(const Matrix& X, const std::string& path);
Matrix load_rawbinary(const std::string& path);

}  // namespace da
