#include "covcal/image.hpp"

#include "covcal/error.hpp"

#include <algorithm>
#include <cmath>

namespace covcal {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Per-axis area-averaging weights: output cell o covers the source interval
// [o * scale, (o + 1) * scale).
struct AxisBin {
    int first = 0;
    std::vector<double> weights;
};

std::vector<AxisBin> box_bins(int src, int dst) {
    const double scale = static_cast<double>(src) / dst;
    std::vector<AxisBin> bins(static_cast<std::size_t>(dst));
    for (int o = 0; o < dst; ++o) {
        const double lo = o * scale;
        const double hi = (o + 1) * scale;
        int first = static_cast<int>(std::floor(lo));
        int last = static_cast<int>(std::ceil(hi)) - 1;
        first = std::clamp(first, 0, src - 1);
        last = std::clamp(last, first, src - 1);
        AxisBin bin;
        bin.first = first;
        bin.weights.resize(static_cast<std::size_t>(last - first + 1));
        for (int i = first; i <= last; ++i) {
            const double cover = std::min<double>(i + 1, hi) - std::max<double>(i, lo);
            bin.weights[static_cast<std::size_t>(i - first)] = std::max(cover, 0.0);
        }
        bins[static_cast<std::size_t>(o)] = std::move(bin);
    }
    return bins;
}

GrayImage box_resize(const GrayImage& img, int out_w, int out_h) {
    const auto xbins = box_bins(img.width, out_w);
    const auto ybins = box_bins(img.height, out_h);

    // Horizontal pass, then vertical.
    GrayImage hpass(out_w, img.height);
    for (int y = 0; y < img.height; ++y) {
        const double* src = img.row(y);
        double* dst = hpass.row(y);
        for (int x = 0; x < out_w; ++x) {
            const AxisBin& bin = xbins[static_cast<std::size_t>(x)];
            double acc = 0.0, wsum = 0.0;
            for (std::size_t k = 0; k < bin.weights.size(); ++k) {
                acc += bin.weights[k] * src[bin.first + static_cast<int>(k)];
                wsum += bin.weights[k];
            }
            dst[x] = acc / wsum;
        }
    }

    GrayImage out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        const AxisBin& bin = ybins[static_cast<std::size_t>(y)];
        double* dst = out.row(y);
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0, wsum = 0.0;
            for (std::size_t k = 0; k < bin.weights.size(); ++k) {
                acc += bin.weights[k] * hpass.at(x, bin.first + static_cast<int>(k));
                wsum += bin.weights[k];
            }
            dst[x] = clamp01(acc / wsum);
        }
    }
    return out;
}

GrayImage bilinear_resize(const GrayImage& img, int out_w, int out_h) {
    GrayImage out(out_w, out_h);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double ty = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double tx = fx - x0;
            const double top = img.at(x0, y0) * (1.0 - tx) + img.at(x1, y0) * tx;
            const double bot = img.at(x0, y1) * (1.0 - tx) + img.at(x1, y1) * tx;
            out.at(x, y) = clamp01(top * (1.0 - ty) + bot * ty);
        }
    }
    return out;
}

}  // namespace

GrayImage downsample_to_width(const GrayImage& img, int target_width) {
    if (img.width < 1 || img.height < 1)
        throw Error(ErrorKind::input, "downsample_to_width: empty image");
    if (target_width < 1)
        throw Error(ErrorKind::input, "downsample_to_width: target width must be >= 1");
    if (target_width == img.width) return img;

    const double scale = static_cast<double>(target_width) / img.width;
    const int out_h = std::max(1, static_cast<int>(std::lround(img.height * scale)));
    if (target_width < img.width) return box_resize(img, target_width, out_h);
    return bilinear_resize(img, target_width, out_h);
}

GrayImage patch_normalize(const GrayImage& img, int radius) {
    if (radius < 1)
        throw Error(ErrorKind::input, "patch_normalize: radius must be >= 1");

    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(img.height - 1, y + radius);
        for (int x = 0; x < img.width; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(img.width - 1, x + radius);
            const int n = (x1 - x0 + 1) * (y1 - y0 + 1);

            double sum = 0.0;
            for (int wy = y0; wy <= y1; ++wy) {
                const double* row = img.row(wy);
                for (int wx = x0; wx <= x1; ++wx) sum += row[wx];
            }
            const double mean = sum / n;

            double ssq = 0.0;
            for (int wy = y0; wy <= y1; ++wy) {
                const double* row = img.row(wy);
                for (int wx = x0; wx <= x1; ++wx) {
                    const double d = row[wx] - mean;
                    ssq += d * d;
                }
            }
            const double sigma = std::sqrt(ssq / n);
            out.at(x, y) = sigma < 1e-9
                               ? 0.5
                               : clamp01(0.5 + (img.at(x, y) - mean) / (6.0 * sigma));
        }
    }
    return out;
}

GrayImage preprocess(const GrayImage& img, const PreprocessConfig& cfg) {
    if (cfg.target_width < 1)
        throw Error(ErrorKind::config, "preprocess: target_width must be >= 1");
    if (cfg.patchnorm_radius && *cfg.patchnorm_radius < 1)
        throw Error(ErrorKind::config, "preprocess: patchnorm_radius must be >= 1");

    GrayImage out = downsample_to_width(img, cfg.target_width);
    if (cfg.patchnorm_radius) out = patch_normalize(out, *cfg.patchnorm_radius);
    return out;
}

GrayImage quantize_u8(const GrayImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const int q = static_cast<int>(std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0));
        out.pixels[i] = q / 255.0;
    }
    return out;
}

}  // namespace covcal
