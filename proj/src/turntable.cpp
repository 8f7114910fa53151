#include "da/turntable.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace da {

namespace {

constexpr double kPi = 3.141592653589793;

/// Shape, shading and texture parameters of one object on the turntable.
/// All pose dependence is smooth and 2*pi-periodic (swing terms, not linear
/// drift), so an object's images trace a closed one-dimensional loop in
/// pixel space with no seam at the zero azimuth.
struct ObjectParams {
    double a0;          // base half-width
    double aspect;      // height/width ratio
    double pexp;        // superellipse exponent
    int lobes;          // silhouette lobe count
    double lobe_amp;    // silhouette lobe amplitude
    double lobe_phase;
    double lobe_swing;  // amplitude of the periodic lobe rotation
    double lobe_swing_phase;
    double wobble1, wphase1;  // azimuth modulation of the half-width (period 2*pi)
    double wobble2, wphase2;  // second harmonic
    double g0;          // base brightness
    double shade_amp;   // lighting gradient strength
    double shade_phase;
    double tex_fx, tex_fy;  // texture spatial frequencies
    double tex_phase;
    double tex_contrast;
    double tex_swing;   // amplitude of the periodic texture shift
    double tex_swing_phase;
};

ObjectParams draw_object(std::mt19937_64& rng) {
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    ObjectParams p;
    p.a0 = uni(0.52, 0.78);
    p.aspect = uni(0.55, 0.95);
    p.pexp = uni(1.6, 3.4);
    p.lobes = std::uniform_int_distribution<int>(2, 6)(rng);
    p.lobe_amp = uni(0.04, 0.20);
    p.lobe_phase = uni(0.0, 2.0 * kPi);
    p.lobe_swing = uni(0.20, 0.50);
    p.lobe_swing_phase = uni(0.0, 2.0 * kPi);
    p.wobble1 = uni(0.05, 0.11);
    p.wphase1 = uni(0.0, 2.0 * kPi);
    p.wobble2 = uni(0.02, 0.05);
    p.wphase2 = uni(0.0, 2.0 * kPi);
    p.g0 = uni(0.50, 0.92);
    p.shade_amp = uni(0.10, 0.22);
    p.shade_phase = uni(0.0, 2.0 * kPi);
    p.tex_fx = uni(2.5, 7.0);
    p.tex_fy = uni(2.5, 7.0);
    p.tex_phase = uni(0.0, 2.0 * kPi);
    p.tex_contrast = uni(0.22, 0.42);
    p.tex_swing = uni(0.40, 1.00);
    p.tex_swing_phase = uni(0.0, 2.0 * kPi);
    return p;
}

/// Draw the whole object set, then spread texture frequencies over a shuffled
/// grid so no two objects share a surface pattern. Random frequency draws
/// collide easily, and colliding textures turn one object into a nearest
/// neighbour attractor for half the target set.
std::vector<ObjectParams> draw_objects(std::mt19937_64& rng, int count) {
    std::vector<ObjectParams> objects;
    objects.reserve(count);
    for (int c = 0; c < count; ++c) objects.push_back(draw_object(rng));

    int gx = 1;
    while (gx * gx < count) ++gx;
    const int gy = (count + gx - 1) / gx;
    std::vector<int> cells(gx * gy);
    for (int i = 0; i < gx * gy; ++i) cells[i] = i;
    std::shuffle(cells.begin(), cells.end(), rng);

    const double lo = 2.5, hi = 7.0;
    const double wx = (hi - lo) / gx;
    const double wy = (hi - lo) / gy;
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    for (int c = 0; c < count; ++c) {
        const int cell = cells[c];
        objects[c].tex_fx = lo + (cell % gx + 0.5 + jitter(rng)) * wx;
        objects[c].tex_fy = lo + (cell / gx + 0.5 + jitter(rng)) * wy;
    }
    return objects;
}

/// Raster one pose of one object into a column of `out`.
void render_pose(const ObjectParams& p, double theta, int size, Matrix& out, int col) {
    // Azimuth-modulated extents: an elongated object seen side-on vs end-on.
    const double mod = 1.0 + p.wobble1 * std::cos(theta + p.wphase1) +
                       p.wobble2 * std::cos(2.0 * theta + p.wphase2);
    const double ax = p.a0 * mod;
    const double by = p.a0 * p.aspect * (2.0 - mod);
    const double edge = 0.08;  // soft silhouette edge, keeps the pose loop smooth

    int idx = 0;
    for (int j = 0; j < size; ++j) {      // pixel column -> x
        const double x = (j + 0.5) / size * 2.0 - 1.0;
        for (int i = 0; i < size; ++i) {  // pixel row -> y
            const double y = (i + 0.5) / size * 2.0 - 1.0;
            const double u = x / ax;
            const double v = y / by;
            const double rho =
                std::pow(std::pow(std::abs(u), p.pexp) + std::pow(std::abs(v), p.pexp),
                         1.0 / p.pexp);
            const double psi = std::atan2(v, u);
            const double boundary =
                1.0 + p.lobe_amp * std::cos(p.lobes * psi + p.lobe_phase +
                                            p.lobe_swing * std::sin(theta + p.lobe_swing_phase));
            double value = 0.0;
            const double margin = boundary - rho;
            if (margin > -edge) {
                // Lighting stays fixed while the object turns, so the shaded
                // side sweeps across the silhouette with the azimuth.
                const double shade =
                    1.0 + p.shade_amp * std::cos(psi - p.shade_phase - theta);
                const double tex =
                    std::sin(p.tex_fx * x + p.tex_fy * y + p.tex_phase +
                             p.tex_swing * std::sin(theta + p.tex_swing_phase));
                double cover = margin >= edge ? 1.0 : (margin + edge) / (2.0 * edge);
                cover = cover * cover * (3.0 - 2.0 * cover);
                value = p.g0 * shade * (1.0 + p.tex_contrast * tex) * cover;
                value = std::min(1.0, std::max(0.0, value));
            }
            out(idx++, col) = value;
        }
    }
}

std::vector<int> half_poses(const TurntableSpec& spec, PoseHalf half) {
    std::vector<int> poses;
    for (int t = 0; t < spec.poses; ++t) {
        const double deg = 360.0 * t / spec.poses;
        const bool q13 = (deg < 90.0) || (deg >= 180.0 && deg < 270.0);
        if ((half == PoseHalf::quad13) == q13) poses.push_back(t);
    }
    return poses;
}

}  // namespace

DomainDataset render_turntable_half(const TurntableSpec& spec, PoseHalf half, Role role) {
    if (spec.classes < 1 || spec.poses < 4 || spec.image_size < 4) {
        throw ValidationError("turntable: spec below minimum size");
    }
    std::mt19937_64 rng(spec.seed);
    std::vector<ObjectParams> objects = draw_objects(rng, spec.classes);

    const std::vector<int> poses = half_poses(spec, half);
    const int m = spec.image_size * spec.image_size;
    const int n = spec.classes * static_cast<int>(poses.size());
    Matrix X(m, n);
    IntVector y(n);
    int col = 0;
    for (int c = 0; c < spec.classes; ++c) {
        for (int t : poses) {
            const double theta = 2.0 * kPi * t / spec.poses;
            render_pose(objects[c], theta, spec.image_size, X, col);
            y(col) = c + 1;
            ++col;
        }
    }
    const char* tag = half == PoseHalf::quad13 ? "turntable-quad13" : "turntable-quad24";
    return DomainDataset(std::move(X), y, role, tag);
}

std::pair<DomainDataset, DomainDataset> make_turntable_pair(const TurntableSpec& spec,
                                                            PoseHalf source_half) {
    const PoseHalf target_half =
        source_half == PoseHalf::quad13 ? PoseHalf::quad24 : PoseHalf::quad13;
    DomainDataset source = render_turntable_half(spec, source_half, Role::source);
    DomainDataset target = render_turntable_half(spec, target_half, Role::target);
    return {std::move(source), std::move(target)};
}

}  // namespace da
