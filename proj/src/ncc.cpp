#include "covcal/error.hpp"
#include "covcal/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace covcal {

Patch extract_patch(const GrayImage& map, PixelPos center, int radius) {
    if (radius < 0) throw Error(ErrorKind::input, "extract_patch: negative radius");
    if (center.x < radius || center.y < radius || center.x + radius >= map.width ||
        center.y + radius >= map.height) {
        throw Error(ErrorKind::bounds, "extract_patch: center (" + std::to_string(center.x) +
                                           "," + std::to_string(center.y) +
                                           ") with radius " + std::to_string(radius) +
                                           " leaves the map");
    }
    const int side = 2 * radius + 1;
    Patch patch{GrayImage(side, side), center, radius};
    for (int y = 0; y < side; ++y) {
        const double* src = map.row(center.y - radius + y) + (center.x - radius);
        std::copy(src, src + side, patch.pixels.row(y));
    }
    return patch;
}

namespace {

constexpr double kDegenerateSigma = 1e-12;

// Summed-area tables of v and v*v with a zero border row/column.
struct WindowStats {
    int width = 0;
    std::vector<double> sum;
    std::vector<double> sumsq;

    explicit WindowStats(const GrayImage& img)
        : width(img.width + 1),
          sum(static_cast<std::size_t>(img.width + 1) * (img.height + 1), 0.0),
          sumsq(sum.size(), 0.0) {
        for (int y = 0; y < img.height; ++y) {
            const double* src = img.row(y);
            double row_s = 0.0, row_q = 0.0;
            double* s = &sum[static_cast<std::size_t>(y + 1) * width];
            double* q = &sumsq[static_cast<std::size_t>(y + 1) * width];
            const double* s_up = s - width;
            const double* q_up = q - width;
            for (int x = 0; x < img.width; ++x) {
                row_s += src[x];
                row_q += src[x] * src[x];
                s[x + 1] = s_up[x + 1] + row_s;
                q[x + 1] = q_up[x + 1] + row_q;
            }
        }
    }

    // Sum and sum of squares over [x0, x0+w) x [y0, y0+h).
    void window(int x0, int y0, int w, int h, double& out_sum, double& out_sumsq) const {
        const std::size_t a = static_cast<std::size_t>(y0) * width + x0;
        const std::size_t b = static_cast<std::size_t>(y0 + h) * width + x0;
        out_sum = sum[b + w] - sum[b] - sum[a + w] + sum[a];
        out_sumsq = sumsq[b + w] - sumsq[b] - sumsq[a + w] + sumsq[a];
    }
};

}  // namespace

ScoreField ncc_score_field(const Patch& patch, const GrayImage& map) {
    const int side = patch.side();
    if (patch.pixels.width != side || patch.pixels.height != side)
        throw Error(ErrorKind::input, "ncc_score_field: patch pixels do not match radius");
    if (side > map.width || side > map.height)
        throw Error(ErrorKind::geometry, "ncc_score_field: patch larger than map");

    const int n = side * side;
    const int out_w = map.width - 2 * patch.radius;
    const int out_h = map.height - 2 * patch.radius;
    ScoreField field(out_w, out_h, {patch.radius, patch.radius});

    // Patch statistics and zero-mean template.
    double p_sum = 0.0;
    for (double v : patch.pixels.pixels) p_sum += v;
    const double p_mean = p_sum / n;
    std::vector<double> centered(patch.pixels.pixels.size());
    double p_ssq = 0.0;
    for (std::size_t i = 0; i < centered.size(); ++i) {
        centered[i] = patch.pixels.pixels[i] - p_mean;
        p_ssq += centered[i] * centered[i];
    }
    const double p_sigma = std::sqrt(p_ssq / n);
    if (p_sigma < kDegenerateSigma) return field;  // all zeros

    const WindowStats stats(map);
    for (int j = 0; j < out_h; ++j) {
        double* out = &field.at(0, j);
        for (int i = 0; i < out_w; ++i) {
            double w_sum, w_sumsq;
            stats.window(i, j, side, side, w_sum, w_sumsq);
            const double w_mean = w_sum / n;
            const double w_var = std::max(0.0, w_sumsq / n - w_mean * w_mean);
            const double w_sigma = std::sqrt(w_var);
            if (w_sigma < kDegenerateSigma) {
                out[i] = 0.0;
                continue;
            }
            // Sum of centered-template * window; the template has zero mean,
            // so the window mean drops out of the cross term.
            double cross = 0.0;
            for (int y = 0; y < side; ++y) {
                const double* t = &centered[static_cast<std::size_t>(y) * side];
                const double* w = map.row(j + y) + i;
                double row_acc = 0.0;
                for (int x = 0; x < side; ++x) row_acc += t[x] * w[x];
                cross += row_acc;
            }
            out[i] = std::clamp(cross / (n * p_sigma * w_sigma), -1.0, 1.0);
        }
    }
    return field;
}

int NccFrontEnd::snap_radius(double radius) const {
    const int r = static_cast<int>(std::floor(radius + 0.5));
    return std::max(1, r);
}

ScoreField NccFrontEnd::score_field(const Patch& patch, const GrayImage& map) const {
    return ncc_score_field(patch, map);
}

LocalizeResult localize(const FrontEnd& front_end, const Patch& patch,
                        const GrayImage& ref_map) {
    if (!front_end.radius_admissible(patch.radius))
        throw Error(ErrorKind::constraint, "localize: radius " + std::to_string(patch.radius) +
                                               " not admissible for " + front_end.name());

    LocalizeResult result;
    result.field = front_end.score_field(patch, ref_map);

    const ScoreField& f = result.field;
    int best_i = 0, best_j = 0;
    double best = f.at(0, 0);
    for (int j = 0; j < f.height; ++j) {
        for (int i = 0; i < f.width; ++i) {
            if (f.at(i, j) > best) {  // strict: first (smallest y, then x) wins ties
                best = f.at(i, j);
                best_i = i;
                best_j = j;
            }
        }
    }
    result.best = f.center_of(best_i, best_j);
    result.best_score = best;
    return result;
}

}  // namespace covcal
