#include "da/synthetic.hpp"

#include <cmath>
#include <random>

#include "da/config.hpp"

namespace da {

namespace {

constexpr double kPi = 3.141592653589793;

Eigen::Vector2d draw_blob(std::mt19937_64& rng, const ClassGeneratorSpec& g) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::LLT<Eigen::Matrix2d> llt(g.covariance);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("synthetic: blob covariance is not positive definite");
    }
    Eigen::Vector2d u(normal(rng), normal(rng));
    return g.mean + Eigen::Matrix2d(llt.matrixL()) * u;
}

Eigen::Vector2d draw_moon(std::mt19937_64& rng, const ClassGeneratorSpec& g) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double phi = g.arc_start_rad + unit(rng) * g.arc_span_rad;
    Eigen::Vector2d p = g.center + g.radius * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    p += g.noise * Eigen::Vector2d(normal(rng), normal(rng));
    return p;
}

}  // namespace

SyntheticSpec SyntheticSpec::four_class_default() {
    SyntheticSpec spec;
    spec.samples_per_class = 50;
    spec.classes.resize(4);

    // Two compact blobs with a mild, shared domain shift.
    spec.classes[0].kind = ClassGeneratorSpec::Kind::blob;
    spec.classes[0].mean = {0.0, 0.0};
    spec.classes[0].covariance = (Eigen::Matrix2d() << 0.22, 0.04, 0.04, 0.20).finished();
    spec.classes[0].target_offset = {0.7, 0.25};

    spec.classes[1].kind = ClassGeneratorSpec::Kind::blob;
    spec.classes[1].mean = {5.0, 0.0};
    spec.classes[1].covariance = (Eigen::Matrix2d() << 0.25, -0.04, -0.04, 0.22).finished();
    spec.classes[1].target_offset = {0.7, -0.25};

    // Wide-shift class: its target cluster drifts toward the middle of the
    // layout, so marginal-only alignment mislabels part of it.
    spec.classes[2].kind = ClassGeneratorSpec::Kind::blob;
    spec.classes[2].mean = {0.0, 5.0};
    spec.classes[2].covariance = (Eigen::Matrix2d() << 0.22, 0.0, 0.0, 0.22).finished();
    spec.classes[2].target_offset = {2.0, -0.9};

    // Moon class: nonlinear shape whose arc wraps toward the wide-shift class.
    spec.classes[3].kind = ClassGeneratorSpec::Kind::moon;
    spec.classes[3].center = {5.0, 5.0};
    spec.classes[3].radius = 2.0;
    spec.classes[3].arc_start_rad = -10.0 * kPi / 180.0;
    spec.classes[3].arc_span_rad = 200.0 * kPi / 180.0;
    spec.classes[3].noise = 0.12;
    spec.classes[3].target_offset = {0.7, 0.3};

    return spec;
}

std::pair<DomainDataset, DomainDataset> make_synthetic_pair(const SyntheticSpec& spec,
                                                            std::uint64_t seed) {
    if (spec.classes.empty()) throw ValidationError("synthetic: no classes in spec");
    if (spec.samples_per_class < 1) {
        throw ValidationError("synthetic: samples_per_class must be positive");
    }
    const int C = static_cast<int>(spec.classes.size());
    const int per = spec.samples_per_class;
    const int n = C * per;

    std::mt19937_64 rng(seed);
    Matrix Xs(2, n), Xt(2, n);
    IntVector ys(n), yt(n);
    // Fixed draw order (domain, class, sample) keeps generation deterministic.
    for (int domain = 0; domain < 2; ++domain) {
        Matrix& X = domain == 0 ? Xs : Xt;
        IntVector& y = domain == 0 ? ys : yt;
        for (int c = 0; c < C; ++c) {
            const ClassGeneratorSpec& g = spec.classes[c];
            for (int s = 0; s < per; ++s) {
                Eigen::Vector2d p = g.kind == ClassGeneratorSpec::Kind::blob ? draw_blob(rng, g)
                                                                             : draw_moon(rng, g);
                if (domain == 1) p += g.target_offset;
                const int col = c * per + s;
                X.col(col) = p;
                y(col) = c + 1;
            }
        }
    }

    DomainDataset source(std::move(Xs), ys, Role::source, "synthetic-source");
    DomainDataset target(std::move(Xt), yt, Role::target, "synthetic-target");
    return {std::move(source), std::move(target)};
}

SyntheticSpec parse_synthetic_spec(const std::string& path) {
    ConfigFile cfg = parse_config_file(path);
    SyntheticSpec spec;
    spec.classes.clear();

    for (const auto& section : cfg.sections) {
        if (section.name.empty()) {
            if (section.has("samples_per_class")) {
                spec.samples_per_class = to_int(section.get("samples_per_class"),
                                                "samples_per_class");
            }
            continue;
        }
        if (section.name.rfind("class.", 0) != 0) {
            throw ParseError(path + ": unknown section [" + section.name + "]");
        }
        ClassGeneratorSpec g;
        const std::string kind = section.get_or("kind", "blob");
        auto vec2 = [&](const std::string& key, Eigen::Vector2d fallback) {
            if (!section.has(key)) return fallback;
            auto v = to_double_list(section.get(key), key);
            if (v.size() != 2) {
                throw ParseError(path + ": key '" + key + "' needs two comma-separated values");
            }
            return Eigen::Vector2d(v[0], v[1]);
        };
        if (kind == "blob") {
            g.kind = ClassGeneratorSpec::Kind::blob;
            g.mean = vec2("mean", g.mean);
            if (section.has("covariance")) {
                auto v = to_double_list(section.get("covariance"), "covariance");
                if (v.size() != 4) {
                    throw ParseError(path + ": 'covariance' needs four values (row-major 2x2)");
                }
                g.covariance << v[0], v[1], v[2], v[3];
            }
        } else if (kind == "moon") {
            g.kind = ClassGeneratorSpec::Kind::moon;
            g.center = vec2("center", g.center);
            if (section.has("radius")) g.radius = to_double(section.get("radius"), "radius");
            if (section.has("arc_start_deg")) {
                g.arc_start_rad = to_double(section.get("arc_start_deg"), "arc_start_deg") *
                                  kPi / 180.0;
            }
            if (section.has("arc_span_deg")) {
                g.arc_span_rad = to_double(section.get("arc_span_deg"), "arc_span_deg") *
                                 kPi / 180.0;
            }
            if (section.has("noise")) g.noise = to_double(section.get("noise"), "noise");
        } else {
            throw ParseError(path + ": unknown class kind '" + kind + "'");
        }
        g.target_offset = vec2("target_offset", g.target_offset);
        spec.classes.push_back(g);
    }

    if (spec.classes.empty()) {
        throw ParseError(path + ": synthetic spec has no [class.N] sections");
    }
    return spec;
}

}  // namespace da
