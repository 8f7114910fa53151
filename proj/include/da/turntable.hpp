#pragma once

#include <cstdint>
#include <utility>

#include "da/dataset.hpp"

namespace da {

/// Procedurally rendered rotating-object image benchmark. Each class is a
/// distinct object imaged at evenly spaced azimuths on a virtual turntable;
/// images are image_size x image_size grayscale rasters flattened to one
/// column per pose. Appearance varies smoothly and periodically with the
/// azimuth, so each object's poses trace a closed loop in pixel space.
struct TurntableSpec {
    int classes = 20;
    int poses = 72;          // 5-degree steps
    int image_size = 32;     // 1024 raw-pixel features
    std::uint64_t seed = 9041;  // object universe; fixed so the benchmark is stable
};

/// Pose subsets that split the turntable into two domains:
/// quad13 covers azimuths [0,85] U [180,265] degrees,
/// quad24 covers [90,175] U [270,355].
enum class PoseHalf { quad13, quad24 };

/// Render one half of the pose circle for every object. All samples are
/// labeled by object class; as a target dataset the labels are ground truth
/// for evaluation only.
DomainDataset render_turntable_half(const TurntableSpec& spec, PoseHalf half, Role role);

/// Convenience: (source, target) with source drawn from `source_half`.
std::pair<DomainDataset, DomainDataset> make_turntable_pair(const TurntableSpec& spec,
                                                            PoseHalf source_half);

}  // namespace da
