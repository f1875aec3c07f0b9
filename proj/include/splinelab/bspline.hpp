#ifndef SPLINELAB_BSPLINE_HPP
#define SPLINELAB_BSPLINE_HPP

#include "splinelab/piecewise_polynomial.hpp"

namespace splinelab {

// Unit box 1_{[0,1]} on the integer knot grid.
PiecewisePolynomial unit_box();

// Degree-n cardinal B-spline: n-fold convolution of the unit box with itself,
// support [0, n+1], unit mass, C^{n-1}.
PiecewisePolynomial cardinal_bspline(int n, int order_cap = 8);

// Closed-form Haar pieces on the half-integer grid.
PiecewisePolynomial haar_wavelet_pp();
PiecewisePolynomial haar_scaling_pp();

}  // namespace splinelab

#endif
