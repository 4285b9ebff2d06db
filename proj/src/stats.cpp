#include "covcal/stats.hpp"

#include "covcal/error.hpp"

#include <algorithm>
#include <cmath>

namespace covcal {

namespace {
constexpr double kDegenerateStd = 1e-9;
constexpr int kSimpsonPoints = 4097;  // even interval count
}  // namespace

double normal_pdf(double x, double mean, double sigma) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    const double z = (x - mean) / sigma;
    return inv_sqrt_2pi / sigma * std::exp(-0.5 * z * z);
}

double normal_cdf(double x, double mean, double sigma) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    return 0.5 * std::erfc(-(x - mean) / sigma * inv_sqrt2);
}

NormalFit fit_normal(std::span<const double> samples) {
    if (samples.size() < 2)
        throw Error(ErrorKind::fit, "fit_normal: need at least 2 samples");
    for (double v : samples) {
        if (!std::isfinite(v))
            throw Error(ErrorKind::fit, "fit_normal: non-finite sample");
    }

    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mean = sum / static_cast<double>(samples.size());

    double ssq = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        ssq += d * d;
    }
    return NormalFit{mean, std::sqrt(ssq / static_cast<double>(samples.size())),
                     samples.size()};
}

double ovl_weitzman(const NormalFit& p, const NormalFit& q, double k0, double k1) {
    if (!(k0 < k1))
        throw Error(ErrorKind::bounds, "ovl_weitzman: require k0 < k1");

    const bool p_point = p.std < kDegenerateStd;
    const bool q_point = q.std < kDegenerateStd;
    if (p_point && q_point)
        return std::abs(p.mean - q.mean) <= kDegenerateStd ? 1.0 : 0.0;
    if (p_point || q_point) {
        const NormalFit& point = p_point ? p : q;
        const NormalFit& other = p_point ? q : p;
        const double mass = normal_cdf(point.mean + kDegenerateStd, other.mean, other.std) -
                            normal_cdf(point.mean - kDegenerateStd, other.mean, other.std);
        return std::clamp(mass, 0.0, 1.0);
    }

    const double h = (k1 - k0) / (kSimpsonPoints - 1);
    auto integrand = [&](int i) {
        const double x = k0 + h * i;
        return std::min(normal_pdf(x, p.mean, p.std), normal_pdf(x, q.mean, q.std));
    };

    double acc = integrand(0) + integrand(kSimpsonPoints - 1);
    for (int i = 1; i < kSimpsonPoints - 1; ++i)
        acc += integrand(i) * (i % 2 == 1 ? 4.0 : 2.0);
    return std::clamp(acc * h / 3.0, 0.0, 1.0);
}

}  // namespace covcal
