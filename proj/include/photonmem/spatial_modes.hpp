#pragma once

#include <complex>
#include <span>
#include <vector>

#include "photonmem/grid.hpp"

namespace photonmem {

// Laguerre-Gauss mode with radial index 0 and azimuthal index l, sampled on
// the grid and normalized to unit total power. The intensity of the l != 0
// modes peaks on a ring of radius waist * sqrt(|l|/2).
SpatialField lg_mode(int l, double waist_mm, const TransverseGrid& grid);

// Pointwise multiplication by the winding phase e^{i l phi}; phase-only, so
// the intensity pattern and total power are untouched. Increments the mode's
// oam_label by l when one is set.
SpatialField apply_spiral_phase(const SpatialField& field, int l);

IntensityImage intensity(const SpatialField& field);

// 1-D cut through an image along a pixel row; models a fiber tip scanned
// across the beam at fixed height.
std::vector<double> transverse_scan(const IntensityImage& image, int row);

// (max - min) / (max + min) of a non-negative profile.
double visibility(std::span<const double> profile);

// Normalized inner product (cosine) of two gray-scale images:
// sum(A.*B) / sqrt(sum(A.^2) sum(B.^2)), in [0, 1].
double similarity(const IntensityImage& a, const IntensityImage& b);

// Same cosine metric for 1-D profiles.
double similarity(std::span<const double> a, std::span<const double> b);

// Discrete inner product <a|b> = sum conj(a) * b; used for mode
// orthogonality checks.
std::complex<double> mode_overlap(const SpatialField& a, const SpatialField& b);

} // namespace photonmem
