#include "covcal/synthdata.hpp"

#include "covcal/error.hpp"
#include "covcal/rng.hpp"

#include <algorithm>
#include <cmath>

namespace covcal {

namespace {

// Lattice value in [0, 1) for one noise octave; position-hashed so the
// surface is a pure function of (spec, pixel).
double lattice_value(std::uint64_t seed, int octave, std::int64_t cx, std::int64_t cy) {
    const std::uint64_t h =
        mix_seed({seed, static_cast<std::uint64_t>(octave) + 0x6f637461ull,
                  static_cast<std::uint64_t>(cx), static_cast<std::uint64_t>(cy)});
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Bilinearly interpolated value noise at one octave.
double value_noise(std::uint64_t seed, int octave, double x, double y, double spacing) {
    const double gx = x / spacing;
    const double gy = y / spacing;
    const std::int64_t cx = static_cast<std::int64_t>(std::floor(gx));
    const std::int64_t cy = static_cast<std::int64_t>(std::floor(gy));
    const double tx = gx - cx;
    const double ty = gy - cy;
    const double v00 = lattice_value(seed, octave, cx, cy);
    const double v10 = lattice_value(seed, octave, cx + 1, cy);
    const double v01 = lattice_value(seed, octave, cx, cy + 1);
    const double v11 = lattice_value(seed, octave, cx + 1, cy + 1);
    const double top = v00 + (v10 - v00) * tx;
    const double bot = v01 + (v11 - v01) * tx;
    return top + (bot - top) * ty;
}

constexpr int kOctaves = 4;

double octave_noise(std::uint64_t seed, double x, double y, int texture_scale) {
    double value = 0.0;
    double amplitude = 1.0;
    double total = 0.0;
    double spacing = std::max(1, texture_scale);
    for (int o = 0; o < kOctaves; ++o) {
        value += amplitude * value_noise(seed, o, x, y, spacing);
        total += amplitude;
        amplitude *= 0.5;
        spacing = std::max(1.0, spacing * 0.5);
    }
    return value / total;
}

}  // namespace

int motif_side(const SurfaceSpec& spec) {
    return std::max(2, 2 * spec.texture_scale);
}

GrayImage generate_surface(const SurfaceSpec& spec) {
    if (spec.width < 64 || spec.height < 64)
        throw Error(ErrorKind::input, "generate_surface: dimensions must be >= 64");
    if (spec.texture_scale < 1)
        throw Error(ErrorKind::input, "generate_surface: texture_scale must be >= 1");
    if (spec.uniqueness < 0.0 || spec.uniqueness > 1.0)
        throw Error(ErrorKind::input, "generate_surface: uniqueness must be in [0, 1]");

    GrayImage img(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
        double* row = img.row(y);
        for (int x = 0; x < spec.width; ++x)
            row[x] = octave_noise(spec.seed, x, y, spec.texture_scale);
    }

    // The leading (1 - uniqueness) fraction of the width repeats one motif.
    const int tiled_cols =
        static_cast<int>(std::lround((1.0 - spec.uniqueness) * spec.width));
    if (tiled_cols > 0) {
        const int m = motif_side(spec);
        GrayImage motif(m, m);
        const std::uint64_t motif_seed = mix_seed({spec.seed, 0x6d6f746966ull});
        for (int y = 0; y < m; ++y)
            for (int x = 0; x < m; ++x)
                motif.at(x, y) = octave_noise(motif_seed, x, y, spec.texture_scale);
        for (int y = 0; y < spec.height; ++y) {
            double* row = img.row(y);
            const double* mrow = motif.row(y % m);
            for (int x = 0; x < tiled_cols; ++x) row[x] = mrow[x % m];
        }
    }
    return img;
}

AlignedPair make_aligned_pair(const GrayImage& surface, const PerturbSpec& perturb) {
    if (perturb.noise_sigma < 0.0)
        throw Error(ErrorKind::input, "make_aligned_pair: noise_sigma must be >= 0");
    if (perturb.occlusion_count < 0 || perturb.occlusion_size < 0)
        throw Error(ErrorKind::input, "make_aligned_pair: occlusion fields must be >= 0");

    AlignedPair pair;
    pair.name = "synthetic";
    pair.reference = surface;
    pair.query = GrayImage(surface.width, surface.height);

    Rng rng(mix_seed({perturb.seed, 0x70657274ull}));
    for (std::size_t i = 0; i < surface.pixels.size(); ++i) {
        double v = perturb.contrast_gain * surface.pixels[i] + perturb.brightness_shift;
        if (perturb.noise_sigma > 0.0) v += rng.normal(0.0, perturb.noise_sigma);
        pair.query.pixels[i] = std::clamp(v, 0.0, 1.0);
    }

    for (int k = 0; k < perturb.occlusion_count; ++k) {
        const int size = std::min({perturb.occlusion_size, surface.width, surface.height});
        if (size < 1) break;
        const int x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(
            surface.width - size + 1)));
        const int y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(
            surface.height - size + 1)));
        const double fill = rng.unit();
        for (int y = y0; y < y0 + size; ++y) {
            double* row = pair.query.row(y);
            for (int x = x0; x < x0 + size; ++x) row[x] = fill;
        }
    }
    return pair;
}

}  // namespace covcal
