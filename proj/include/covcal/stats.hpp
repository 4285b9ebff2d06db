#pragma once

#include <cstddef>
#include <span>

namespace covcal {

// Normal distribution fitted to a score population (population sigma).
struct NormalFit {
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

double normal_pdf(double x, double mean, double sigma);
double normal_cdf(double x, double mean, double sigma);

// Requires >= 2 finite samples. std may legitimately come out 0; degenerate
// handling belongs to the consumer.
NormalFit fit_normal(std::span<const double> samples);

// Weitzman's overlapping coefficient between two fitted normals, integrated
// over the score bounds [k0, k1] with composite Simpson on 4097 grid points.
// A fit with std < 1e-9 is treated as a point mass: the result is the other
// distribution's mass within 1e-9 of that mean (1.0 when both are point
// masses at the same location). Result clamped to [0, 1].
double ovl_weitzman(const NormalFit& p, const NormalFit& q, double k0, double k1);

}  // namespace covcal
