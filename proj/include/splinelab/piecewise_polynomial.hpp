#ifndef SPLINELAB_PIECEWISE_POLYNOMIAL_HPP
#define SPLINELAB_PIECEWISE_POLYNOMIAL_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace splinelab {

// Dyadic rational num / 2^log2_den. Used for shifts that must land on a
// refinable knot grid.
struct DyadicRational {
    std::int64_t num = 0;
    int log2_den = 0;
    double value() const;
    static DyadicRational integer(std::int64_t n) { return {n, 0}; }
};

struct MomentValue {
    double value = 0.0;
    double tail_bound = 0.0;  // certified bound on the discarded tail's contribution
};

// A function that is a polynomial of degree <= degree_bound on each interval
// [theta*h, (theta+1)*h], h = 2^{-(grid_scale+1)}, and zero outside the piece
// window [theta_min, theta_max]. Piece theta stores coefficients of the local
// expansion about its RIGHT knot (theta+1)*h:
//
//   p_theta(x) = sum_j coeff[j] * (x - (theta+1)*h)^j
//
// so the coefficients attached to the piece left of a knot are exactly the
// one-sided derivative data at that knot. trunc_tol is a certified sup-norm
// bound for whatever exponentially decaying tail was discarded when the
// window was chosen; tail_decay_rate is the certified (or default ln 2) rate
// used to turn it into moment/inner-product tail bounds.
class PiecewisePolynomial {
public:
    PiecewisePolynomial(int degree_bound, int grid_scale, std::int64_t theta_min,
                        std::vector<std::vector<double>> pieces, double trunc_tol = 0.0,
                        double tail_decay_rate = 0.0);

    static PiecewisePolynomial zero(int degree_bound = 0, int grid_scale = 0);

    int degree_bound() const { return degree_; }
    int grid_scale() const { return grid_scale_; }
    std::int64_t theta_min() const { return theta_min_; }
    std::int64_t theta_max() const { return theta_min_ + static_cast<std::int64_t>(pieces_.size()) - 1; }
    std::size_t piece_count() const { return pieces_.size(); }
    double knot_spacing() const;
    double support_left() const { return theta_min() * knot_spacing(); }
    double support_right() const { return (theta_max() + 1) * knot_spacing(); }
    double trunc_tol() const { return trunc_tol_; }
    double tail_decay_rate() const { return tail_rate_; }
    void set_tail_decay_rate(double r) { tail_rate_ = r; }

    std::span<const double> piece(std::int64_t theta) const;
    bool has_piece(std::int64_t theta) const {
        return theta >= theta_min() && theta <= theta_max();
    }

    double evaluate(double x) const;
    double operator()(double x) const { return evaluate(x); }

    // One-sided derivative of given order at x, taken from the piece on that side.
    double derivative_at(double x, int order, bool from_left) const;

    // Coefficients of the piece ending (from_left) or starting at knot
    // theta_knot * h, re-expanded about that knot. The left side is the stored
    // array verbatim; the right side is an exact Taylor shift.
    std::vector<double> expansion_at_knot(std::int64_t theta_knot, bool from_left) const;

    // Leading (degree_bound-th) coefficient of piece theta; 0 outside the window.
    double leading_coefficient(std::int64_t theta) const;

    double max_abs_coefficient() const;
    // Upper bound on the L1 norm over the window.
    double l1_bound() const;
    // Sup of |p| over piece theta (exact endpoints + dense sampling; report use).
    double piece_sup(std::int64_t theta, int samples = 9) const;

    PiecewisePolynomial translated(std::int64_t knot_steps) const;
    PiecewisePolynomial refined_to(int new_grid_scale) const;
    // x -> p(2^m x - s); s must land on the (possibly refined) knot grid.
    PiecewisePolynomial composed_dyadic(int dilation_log2, DyadicRational shift) const;

    // Largest over interior knots and derivative orders 0..order of the jump in
    // one-sided derivative values (absolute).
    double max_junction_defect(int max_order) const;
    // Averages one-sided derivative data at every interior knot for orders
    // 0..order, removing rounding-level jumps introduced by assembly.
    void enforce_continuity(int max_order);

private:
    int degree_;
    int grid_scale_;
    std::int64_t theta_min_;
    std::vector<std::vector<double>> pieces_;
    double trunc_tol_;
    double tail_rate_;
};

struct CombineTerm {
    double coefficient = 1.0;
    const PiecewisePolynomial* pp = nullptr;
    std::int64_t integer_shift = 0;  // x -> pp(2^d x - shift)
    int dyadic_dilation = 0;         // d, log2 of the dilation factor
};

// Exact coefficient-level sum of coefficient * pp_i(2^{d_i} x - s_i) on the
// finest common grid. Compensated summation; trunc_tol accumulates.
PiecewisePolynomial linear_combine(std::span<const CombineTerm> terms);

// Exact piecewise-polynomial convolution. Result degree is deg f + deg g + 1;
// throws if that exceeds degree_cap.
PiecewisePolynomial convolve(const PiecewisePolynomial& f, const PiecewisePolynomial& g,
                             int degree_cap = 24);

// Exact integral x^M * pp(x) dx over the window, with tail certificate.
MomentValue moment_with_tail(const PiecewisePolynomial& pp, int M);
double moment(const PiecewisePolynomial& pp, int M);

// Exact integral f(x) * g(2^dilation x - shift) dx, with tail certificate.
MomentValue inner_product_with_tail(const PiecewisePolynomial& f, const PiecewisePolynomial& g,
                                    DyadicRational shift = {}, int dilation_log2 = 0);
double inner_product(const PiecewisePolynomial& f, const PiecewisePolynomial& g,
                     DyadicRational shift = {}, int dilation_log2 = 0);

PiecewisePolynomial derivative(const PiecewisePolynomial& pp);
// Antiderivative pinned to 0 at the left window edge; window unchanged
// (the constant carried past the right edge is folded into trunc_tol).
PiecewisePolynomial antiderivative(const PiecewisePolynomial& pp);

// p(x) = sum c[j] (x - a)^j  ->  coefficients about a + dr.
std::vector<double> shift_expansion(std::span<const double> c, double dr);

double binomial(int n, int k);

}  // namespace splinelab

#endif
