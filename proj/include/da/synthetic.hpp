#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "da/dataset.hpp"

namespace da {

/// Generator for one synthetic class: either a 2-D Gaussian blob or a noisy
/// moon arc. The target domain draws from the same generator shifted by
/// target_offset.
struct ClassGeneratorSpec {
    enum class Kind { blob, moon };
    Kind kind = Kind::blob;

    // blob
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();

    // moon
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius = 1.0;
    double arc_start_rad = 0.0;
    double arc_span_rad = 3.141592653589793;
    double noise = 0.1;

    Eigen::Vector2d target_offset = Eigen::Vector2d::Zero();
};

struct SyntheticSpec {
    std::vector<ClassGeneratorSpec> classes;
    int samples_per_class = 100;

    /// Four classes: two blobs with a small source/target shift, one blob
    /// with a wide shift, one moon-shaped class.
    static SyntheticSpec four_class_default();
};

/// Deterministic for a fixed seed. The source dataset is labeled; the target
/// carries ground truth for evaluation only.
std::pair<DomainDataset, DomainDataset> make_synthetic_pair(const SyntheticSpec& spec,
                                                            std::uint64_t seed);

/// Parse a synthetic spec from the flat key-value format with [class.N]
/// sections (see configs/synthetic4.spec).
SyntheticSpec parse_synthetic_spec(const std::string& path);

}  // namespace da
