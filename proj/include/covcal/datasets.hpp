#pragma once

#include "covcal/image.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace covcal {

// A reference map plus a query map of identical size with exact pixel
// correspondence. Pairs loaded with a nonzero manifest offset are cropped to
// the overlap region, so alignment is always the identity here.
struct AlignedPair {
    GrayImage reference;
    GrayImage query;
    std::string name;
    std::string provenance;
    std::array<int, 2> source_offset{0, 0};  // manifest offset before cropping
};

enum class SamplePurpose { calibration, validation };

struct SamplePlan {
    std::vector<PixelPos> centers;
    std::uint64_t seed = 0;
    SamplePurpose purpose = SamplePurpose::calibration;
};

// Loads a JSON pair manifest:
//   { "name": ..., "reference": path, "query": path,
//     "offset": [dx, dy]?,            // query shifted (dx, dy) vs reference
//     "preprocess": { "target_width": int, "patchnorm_radius": int? },
//     "notes": ...? }
// Image paths resolve relative to the manifest file. Both images are cropped
// to the aligned overlap and then preprocessed.
AlignedPair load_pair(const std::filesystem::path& manifest_path);

// Draws n distinct query centers admitting the given patch radius in both
// maps, uniformly without replacement. Centers sit on the grid
// x = radius + k * grid_step (same for y). Calibration draws from the front
// of a seeded permutation and validation from the back, so plans for the two
// purposes never intersect while n_cal + n_val fits the admissible set.
SamplePlan plan_samples(const AlignedPair& pair, int radius, std::size_t n,
                        std::uint64_t seed, SamplePurpose purpose, int grid_step = 1);

// Number of admissible centers for the given geometry.
std::size_t admissible_center_count(const AlignedPair& pair, int radius,
                                    int grid_step = 1);

}  // namespace covcal
