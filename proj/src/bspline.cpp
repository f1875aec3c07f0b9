#include "splinelab/bspline.hpp"

#include <stdexcept>
#include <string>

namespace splinelab {

PiecewisePolynomial unit_box() {
    return PiecewisePolynomial(0, -1, 0, {{1.0}});
}

PiecewisePolynomial cardinal_bspline(int n, int order_cap) {
    if (n < 0) throw std::invalid_argument("cardinal_bspline: negative order");
    if (n > order_cap)
        throw std::invalid_argument("cardinal_bspline: order " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(order_cap));
    PiecewisePolynomial result = unit_box();
    const PiecewisePolynomial box = unit_box();
    for (int i = 0; i < n; ++i) result = convolve(result, box, 2 * order_cap + 2);
    return result;
}

PiecewisePolynomial haar_wavelet_pp() {
    return PiecewisePolynomial(0, 0, 0, {{1.0}, {-1.0}});
}

PiecewisePolynomial haar_scaling_pp() {
    return PiecewisePolynomial(0, 0, 0, {{1.0}, {1.0}});
}

}  // namespace splinelab
