#pragma once

// Reference computations that share no code path with the library: series
// summed in 50-digit arithmetic, geometry from explicit vector algebra and
// closed-form Gaussian integrals.

#include "fso/beam.hpp"
#include "fso/geometry.hpp"

namespace fso::oracles {

// 2/sqrt(pi) sum_{n<2000} (-1)^n x^(2n+1) / (n! (2n+1)).
double erf_series(double x);

// sum_{k<2000} (x/2)^(2k) / (k!)^2.
double bessel_i0_series(double x);

// Intersection of the beam line r + t d with the plane x = 0.
geometry::FootprintCenter footprint_by_intersection(const geometry::Pose& p);

// sin(psi) * Iorth(||r||, l) with l the point-to-line distance from a cross product.
double intensity_by_cross_product(double y, double z, const geometry::Pose& p,
                                  const beam::BeamParams& b);

// Centered circular Gaussian of 1/e^2 radius w captured by a disk of radius a.
double centered_disk_capture(double a, double w);

}  // namespace fso::oracles
