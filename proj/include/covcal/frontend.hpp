#pragma once

#include "covcal/image.hpp"

#include <memory>
#include <string>
#include <vector>

namespace covcal {

// Square query window of side 2 * radius + 1 centered on `center` in the
// coordinates of the map it was cut from.
struct Patch {
    GrayImage pixels;
    PixelPos center;
    int radius = 0;

    int side() const { return 2 * radius + 1; }
};

Patch extract_patch(const GrayImage& map, PixelPos center, int radius);

// Dense per-placement scores. Grid index (i, j) scores the window whose
// center sits at map position origin + (i, j); the grid spans every
// placement where the patch fits, so it is (W - 2r) x (H - 2r).
struct ScoreField {
    int width = 0;
    int height = 0;
    PixelPos origin;  // map coords of the grid (0, 0) center
    std::vector<double> scores;

    ScoreField() = default;
    ScoreField(int w, int h, PixelPos o)
        : width(w), height(h), origin(o), scores(static_cast<std::size_t>(w) * h, 0.0) {}

    double& at(int i, int j) { return scores[static_cast<std::size_t>(j) * width + i]; }
    double at(int i, int j) const { return scores[static_cast<std::size_t>(j) * width + i]; }
    PixelPos center_of(int i, int j) const { return {origin.x + i, origin.y + j}; }
};

struct ScoreBounds {
    double lo = -1.0;
    double hi = 1.0;
};

// A localization technique that scores a query patch against every placement
// in a reference map. Implementations are stateless and reentrant.
class FrontEnd {
public:
    virtual ~FrontEnd() = default;

    virtual std::string name() const = 0;
    virtual ScoreBounds bounds() const = 0;
    virtual bool radius_admissible(int radius) const = 0;
    // Nearest admissible radius for a possibly fractional request.
    virtual int snap_radius(double radius) const = 0;
    // Query centers are sampled on this step so every sampled placement is
    // natively scored (not densified) by the front-end.
    virtual int sample_grid_step() const { return 1; }
    virtual ScoreField score_field(const Patch& patch, const GrayImage& map) const = 0;
};

struct LocalizeResult {
    PixelPos best;
    double best_score = 0.0;
    ScoreField field;
};

// Argmax of the score field; ties break to the smallest y, then smallest x.
LocalizeResult localize(const FrontEnd& front_end, const Patch& patch,
                        const GrayImage& ref_map);

// Zero-normalized cross-correlation in [-1, 1]. Window statistics come from
// summed-area tables; placements whose patch or window variance is
// degenerate (sigma < 1e-12) score 0.
class NccFrontEnd final : public FrontEnd {
public:
    std::string name() const override { return "ncc"; }
    ScoreBounds bounds() const override { return {-1.0, 1.0}; }
    bool radius_admissible(int radius) const override { return radius >= 1; }
    int snap_radius(double radius) const override;
    ScoreField score_field(const Patch& patch, const GrayImage& map) const override;
};

ScoreField ncc_score_field(const Patch& patch, const GrayImage& map);

struct FeatureConfig {
    int subpatch_size = 40;          // side of one sub-patch tile
    int stride = 20;                 // placement sampling step
    double inlier_tol = 5.0;         // max displacement error of an inlier match
    double detector_threshold = 0.04;
    int max_keypoints = 128;         // strongest keypoints kept per sub-patch
};

// Local-feature front-end: tiles the patch into sub-patches, matches binary
// intensity-comparison descriptors per tile, and scores a placement by the
// mean inlier ratio over tiles. Scores live in [0, 1]. Placements are
// evaluated on the stride grid and densified by nearest stride sample.
class FeatureFrontEnd final : public FrontEnd {
public:
    explicit FeatureFrontEnd(FeatureConfig cfg);

    std::string name() const override { return "feature"; }
    ScoreBounds bounds() const override { return {0.0, 1.0}; }
    // The tiled region is the leading 2r x 2r square of the (2r + 1)-sided
    // patch, so 2r must be a positive multiple of the sub-patch size.
    bool radius_admissible(int radius) const override;
    int snap_radius(double radius) const override;
    int sample_grid_step() const override { return cfg_.stride; }
    ScoreField score_field(const Patch& patch, const GrayImage& map) const override;

    const FeatureConfig& config() const { return cfg_; }

private:
    FeatureConfig cfg_;
};

ScoreField feature_score_field(const Patch& patch, const GrayImage& map,
                               const FeatureConfig& cfg);

// Detector/descriptor surface used by the feature front-end; exposed so the
// scoring layer stays independent of the concrete detector.
struct Keypoint {
    int x = 0;
    int y = 0;
    double response = 0.0;
};

struct BinaryDescriptor {
    std::uint64_t bits[2] = {0, 0};
};

int hamming_distance(const BinaryDescriptor& a, const BinaryDescriptor& b);

// Laplacian-magnitude local extrema, strongest first, capped at
// max_keypoints. Positions are local to the given region of `img`.
std::vector<Keypoint> detect_keypoints(const GrayImage& img, int x0, int y0, int w,
                                       int h, const FeatureConfig& cfg);

BinaryDescriptor describe_keypoint(const GrayImage& img, int x0, int y0,
                                   const Keypoint& kp);

}  // namespace covcal
