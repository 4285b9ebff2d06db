#pragma once

#include <cassert>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace covcal {

struct PixelPos {
    int x = 0;
    int y = 0;

    bool operator==(const PixelPos&) const = default;
};

// Chebyshev (chessboard) distance; patch windows are square so this is the
// natural match-distance metric throughout.
inline int chebyshev(PixelPos a, PixelPos b) {
    const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return dx > dy ? dx : dy;
}

// Row-major single-channel image with intensities in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int x, int y) {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    double at(int x, int y) const {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    const double* row(int y) const { return pixels.data() + static_cast<std::size_t>(y) * width; }
    double* row(int y) { return pixels.data() + static_cast<std::size_t>(y) * width; }

    std::size_t size() const { return pixels.size(); }
    bool in_bounds(PixelPos p) const {
        return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
    }

    bool operator==(const GrayImage&) const = default;
};

struct PreprocessConfig {
    int target_width = 200;
    std::optional<int> patchnorm_radius;  // no patch normalization when absent
    bool convert_grayscale = true;        // reject multi-channel input when false
};

// Reads an 8-bit binary PGM (P5) or 8-bit PNG (grayscale or RGB). RGB is
// reduced to luminance 0.299 R + 0.587 G + 0.114 B; samples map to [0,1]
// as v / 255.
GrayImage load_image(const std::filesystem::path& path,
                     bool convert_grayscale = true);

// Writes an 8-bit binary PGM; intensities are quantized as
// round(clamp(v, 0, 1) * 255).
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

// Quantization applied by save_pgm followed by the load mapping. Useful for
// predicting an exact write/read round trip.
GrayImage quantize_u8(const GrayImage& img);

// Resizes to target_width, keeping the aspect ratio; output height is
// round(height * target_width / width), at least 1. Shrinking uses exact
// area averaging, enlarging bilinear interpolation. Returns the input
// unchanged when the width already matches.
GrayImage downsample_to_width(const GrayImage& img, int target_width);

// SeqSLAM-style local patch normalization: each pixel becomes
// clamp(0.5 + (v - mean) / (6 sigma), 0, 1) with mean/sigma taken over the
// (2 radius + 1)^2 window around it, clipped at the borders. Windows with
// sigma < 1e-9 produce 0.5.
GrayImage patch_normalize(const GrayImage& img, int radius);

// Applies the configured downsample and optional patch normalization.
GrayImage preprocess(const GrayImage& img, const PreprocessConfig& cfg);

}  // namespace covcal
