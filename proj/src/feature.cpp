#include "covcal/error.hpp"
#include "covcal/frontend.hpp"
#include "covcal/rng.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <vector>

namespace covcal {

namespace {

constexpr int kDescriptorBits = 128;
constexpr int kDescriptorMargin = 4;  // comparison offsets live in [-4, 4]^2

struct PairOffsets {
    std::array<std::int8_t, kDescriptorBits> ax, ay, bx, by;
};

// Fixed comparison pattern; generated once from a pinned seed so descriptors
// are stable across runs and builds.
const PairOffsets& descriptor_pattern() {
    static const PairOffsets pattern = [] {
        PairOffsets p{};
        Rng rng(0x9d2c5680u);
        for (int i = 0; i < kDescriptorBits; ++i) {
            const int span = 2 * kDescriptorMargin + 1;
            p.ax[i] = static_cast<std::int8_t>(rng.below(span)) - kDescriptorMargin;
            p.ay[i] = static_cast<std::int8_t>(rng.below(span)) - kDescriptorMargin;
            p.bx[i] = static_cast<std::int8_t>(rng.below(span)) - kDescriptorMargin;
            p.by[i] = static_cast<std::int8_t>(rng.below(span)) - kDescriptorMargin;
        }
        return p;
    }();
    return pattern;
}

double laplacian_response(const GrayImage& img, int x, int y) {
    const double v = img.at(x, y);
    return std::abs(4.0 * v - img.at(x - 1, y) - img.at(x + 1, y) - img.at(x, y - 1) -
                    img.at(x, y + 1));
}

}  // namespace

int hamming_distance(const BinaryDescriptor& a, const BinaryDescriptor& b) {
    return std::popcount(a.bits[0] ^ b.bits[0]) + std::popcount(a.bits[1] ^ b.bits[1]);
}

std::vector<Keypoint> detect_keypoints(const GrayImage& img, int x0, int y0, int w,
                                       int h, const FeatureConfig& cfg) {
    // Keep a keypoint only where its descriptor window fits inside the region.
    const int margin = kDescriptorMargin;
    std::vector<Keypoint> found;
    if (w <= 2 * margin || h <= 2 * margin) return found;

    std::vector<double> response(static_cast<std::size_t>(w) * h, 0.0);
    for (int y = 1; y < h - 1; ++y)
        for (int x = 1; x < w - 1; ++x)
            response[static_cast<std::size_t>(y) * w + x] =
                laplacian_response(img, x0 + x, y0 + y);

    auto resp = [&](int x, int y) { return response[static_cast<std::size_t>(y) * w + x]; };
    for (int y = margin; y < h - margin; ++y) {
        for (int x = margin; x < w - margin; ++x) {
            const double r = resp(x, y);
            if (r <= cfg.detector_threshold) continue;
            if (r < resp(x - 1, y - 1) || r < resp(x, y - 1) || r < resp(x + 1, y - 1) ||
                r < resp(x - 1, y) || r < resp(x + 1, y) || r < resp(x - 1, y + 1) ||
                r < resp(x, y + 1) || r < resp(x + 1, y + 1))
                continue;
            found.push_back({x, y, r});
        }
    }

    std::sort(found.begin(), found.end(), [](const Keypoint& a, const Keypoint& b) {
        if (a.response != b.response) return a.response > b.response;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    if (static_cast<int>(found.size()) > cfg.max_keypoints)
        found.resize(static_cast<std::size_t>(cfg.max_keypoints));
    return found;
}

BinaryDescriptor describe_keypoint(const GrayImage& img, int x0, int y0,
                                   const Keypoint& kp) {
    const PairOffsets& p = descriptor_pattern();
    BinaryDescriptor d;
    for (int i = 0; i < kDescriptorBits; ++i) {
        const double a = img.at(x0 + kp.x + p.ax[i], y0 + kp.y + p.ay[i]);
        const double b = img.at(x0 + kp.x + p.bx[i], y0 + kp.y + p.by[i]);
        if (a < b) d.bits[i >> 6] |= 1ull << (i & 63);
    }
    return d;
}

namespace {

struct TileFeatures {
    std::vector<Keypoint> keypoints;
    std::vector<BinaryDescriptor> descriptors;
};

TileFeatures tile_features(const GrayImage& img, int x0, int y0, int side,
                           const FeatureConfig& cfg) {
    TileFeatures f;
    f.keypoints = detect_keypoints(img, x0, y0, side, side, cfg);
    f.descriptors.reserve(f.keypoints.size());
    for (const Keypoint& kp : f.keypoints)
        f.descriptors.push_back(describe_keypoint(img, x0, y0, kp));
    return f;
}

// Inlier ratio of nearest-neighbour descriptor matches between the query
// tile and the identically-placed map tile.
double tile_score(const TileFeatures& query, const TileFeatures& ref, double inlier_tol) {
    if (query.keypoints.empty() || ref.keypoints.empty()) return 0.0;
    int matches = 0, inliers = 0;
    for (std::size_t qi = 0; qi < query.keypoints.size(); ++qi) {
        int best = kDescriptorBits + 1;
        std::size_t best_ri = 0;
        for (std::size_t ri = 0; ri < ref.descriptors.size(); ++ri) {
            const int d = hamming_distance(query.descriptors[qi], ref.descriptors[ri]);
            if (d < best) {
                best = d;
                best_ri = ri;
            }
        }
        ++matches;
        const double dx = ref.keypoints[best_ri].x - query.keypoints[qi].x;
        const double dy = ref.keypoints[best_ri].y - query.keypoints[qi].y;
        if (std::sqrt(dx * dx + dy * dy) <= inlier_tol) ++inliers;
    }
    return static_cast<double>(inliers) / std::max(1, matches);
}

}  // namespace

ScoreField feature_score_field(const Patch& patch, const GrayImage& map,
                               const FeatureConfig& cfg) {
    const int side = patch.pixels.width;
    if (patch.pixels.height != side)
        throw Error(ErrorKind::input, "feature_score_field: patch not square");
    if (cfg.subpatch_size < 2 * kDescriptorMargin + 2)
        throw Error(ErrorKind::config, "feature_score_field: subpatch_size too small");
    if (cfg.stride < 1)
        throw Error(ErrorKind::config, "feature_score_field: stride must be >= 1");

    // A patch of odd side 2r + 1 tiles its leading 2r x 2r square; an exact
    // multiple tiles the whole patch.
    int tile_span;
    if (side % cfg.subpatch_size == 0) {
        tile_span = side;
    } else if ((side - 1) % cfg.subpatch_size == 0 && side > 1) {
        tile_span = side - 1;
    } else {
        throw Error(ErrorKind::constraint,
                    "feature_score_field: patch side " + std::to_string(side) +
                        " is not a multiple of subpatch_size " +
                        std::to_string(cfg.subpatch_size));
    }
    if (side > map.width || side > map.height)
        throw Error(ErrorKind::geometry, "feature_score_field: patch larger than map");

    const int tiles = tile_span / cfg.subpatch_size;
    const int out_w = map.width - side + 1;
    const int out_h = map.height - side + 1;
    const int half = side / 2;
    ScoreField field(out_w, out_h, {half, half});

    // Query-tile features are placement-independent.
    std::vector<TileFeatures> query_tiles;
    query_tiles.reserve(static_cast<std::size_t>(tiles) * tiles);
    for (int ty = 0; ty < tiles; ++ty)
        for (int tx = 0; tx < tiles; ++tx)
            query_tiles.push_back(tile_features(patch.pixels, tx * cfg.subpatch_size,
                                                ty * cfg.subpatch_size, cfg.subpatch_size,
                                                cfg));

    auto placement_score = [&](int i, int j) {
        double acc = 0.0;
        for (int ty = 0; ty < tiles; ++ty) {
            for (int tx = 0; tx < tiles; ++tx) {
                const TileFeatures ref =
                    tile_features(map, i + tx * cfg.subpatch_size,
                                  j + ty * cfg.subpatch_size, cfg.subpatch_size, cfg);
                acc += tile_score(query_tiles[static_cast<std::size_t>(ty) * tiles + tx],
                                  ref, cfg.inlier_tol);
            }
        }
        return acc / (tiles * tiles);
    };

    // Score the stride grid, then densify by nearest stride sample.
    for (int j = 0; j < out_h; j += cfg.stride)
        for (int i = 0; i < out_w; i += cfg.stride)
            field.at(i, j) = placement_score(i, j);

    auto nearest_sample = [&](int idx, int limit) {
        const int last = ((limit - 1) / cfg.stride) * cfg.stride;
        const int snapped =
            static_cast<int>(std::lround(static_cast<double>(idx) / cfg.stride)) *
            cfg.stride;
        return std::clamp(snapped, 0, last);
    };
    for (int j = 0; j < out_h; ++j) {
        const int sj = nearest_sample(j, out_h);
        for (int i = 0; i < out_w; ++i) {
            if (i % cfg.stride == 0 && j % cfg.stride == 0) continue;
            field.at(i, j) = field.at(nearest_sample(i, out_w), sj);
        }
    }
    return field;
}

FeatureFrontEnd::FeatureFrontEnd(FeatureConfig cfg) : cfg_(cfg) {
    if (cfg_.subpatch_size < 2 * kDescriptorMargin + 2)
        throw Error(ErrorKind::config, "FeatureFrontEnd: subpatch_size too small");
    if (cfg_.stride < 1) throw Error(ErrorKind::config, "FeatureFrontEnd: stride must be >= 1");
    if (cfg_.inlier_tol < 0)
        throw Error(ErrorKind::config, "FeatureFrontEnd: inlier_tol must be >= 0");
    if (cfg_.max_keypoints < 1)
        throw Error(ErrorKind::config, "FeatureFrontEnd: max_keypoints must be >= 1");
}

bool FeatureFrontEnd::radius_admissible(int radius) const {
    return radius >= 1 && (2 * radius) % cfg_.subpatch_size == 0;
}

int FeatureFrontEnd::snap_radius(double radius) const {
    // Admissible radii are multiples of subpatch/2 (even subpatch) or of
    // subpatch (odd subpatch).
    const int step = cfg_.subpatch_size % 2 == 0 ? cfg_.subpatch_size / 2 : cfg_.subpatch_size;
    const int k = std::max<int>(1, static_cast<int>(std::lround(radius / step)));
    return k * step;
}

ScoreField FeatureFrontEnd::score_field(const Patch& patch, const GrayImage& map) const {
    return feature_score_field(patch, map, cfg_);
}

}  // namespace covcal
