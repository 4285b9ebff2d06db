#pragma once

#include "covcal/datasets.hpp"
#include "covcal/image.hpp"

#include <cstdint>

namespace covcal {

// Seeded synthetic ground surface. uniqueness controls how much of the image
// is non-repeating: 1 is pure multi-octave value noise, 0 tiles the whole
// image with one repeated motif (perceptual aliasing everywhere). The motif
// side is 2 * texture_scale.
struct SurfaceSpec {
    int width = 256;
    int height = 256;
    int texture_scale = 8;
    double uniqueness = 1.0;
    std::uint64_t seed = 1;
};

// Appearance perturbation applied to the query copy of a surface.
struct PerturbSpec {
    double noise_sigma = 0.0;
    double brightness_shift = 0.0;
    double contrast_gain = 1.0;
    int occlusion_count = 0;
    int occlusion_size = 0;
    std::uint64_t seed = 1;
};

int motif_side(const SurfaceSpec& spec);

GrayImage generate_surface(const SurfaceSpec& spec);

// reference = surface; query = clip(gain * v + shift + noise) with
// occlusion_count constant-fill squares. Ground truth is the identity map.
AlignedPair make_aligned_pair(const GrayImage& surface, const PerturbSpec& perturb);

}  // namespace covcal
