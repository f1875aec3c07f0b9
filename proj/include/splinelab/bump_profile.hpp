#ifndef SPLINELAB_BUMP_PROFILE_HPP
#define SPLINELAB_BUMP_PROFILE_HPP

#include <string>
#include <vector>

#include "splinelab/piecewise_polynomial.hpp"

namespace splinelab {

enum class Parity { even, odd, none };

// j-th derivative of the reference bump rho(u) = exp(-1/(1-u^2)) on (-1,1).
double reference_bump_derivative(int j, double u);

// amplitude * rho^{(derivative_order)}(x / radius), supported in (-radius, radius).
// Every profile in the pipeline is of this closed form, so evaluation, parity
// and moment certificates are analytic; `samples` is a fixed-resolution render
// kept for serialization and grid work.
class BumpProfile {
public:
    BumpProfile() = default;
    BumpProfile(int derivative_order, double radius, double amplitude,
                int sample_count = (1 << 12) + 1);

    double value(double x) const;
    double operator()(double x) const { return value(x); }

    int derivative_order() const { return derivative_order_; }
    double radius() const { return radius_; }
    double amplitude() const { return amplitude_; }
    double support_left() const { return -radius_; }
    double support_right() const { return radius_; }
    Parity parity() const;  // (-1)^derivative_order
    int vanishing_moments() const { return vanishing_moments_; }
    const std::vector<double>& samples() const { return samples_; }

    // Exact j-fold primitive: each integration lowers the derivative order by
    // one and multiplies the amplitude by the radius.
    BumpProfile primitive(int times = 1) const;

    // Trapezoid moment on the sample grid (spectrally accurate here).
    double grid_moment(int M) const;
    double l1_norm() const;
    double sup_norm() const;
    // int_0^{1/2} x^n value(x) dx
    double half_line_weighted_integral(int n) const;
    // Fourier transform modulus |int value(x) e^{-i xi x} dx|
    double fourier_abs(double xi) const;

    void rescale(double factor) { amplitude_ *= factor; resample(); }

    std::string descriptor() const;  // reconstructible id
    static BumpProfile from_descriptor(const std::string& id);

private:
    void resample();
    int derivative_order_ = 0;
    double radius_ = 1.0;
    double amplitude_ = 1.0;
    int vanishing_moments_ = -1;  // certified in constructor
    int sample_count_ = (1 << 12) + 1;
    std::vector<double> samples_;
};

struct MollifierPair {
    BumpProfile phi0;  // positive, even, unit mass
    BumpProfile phi;   // (n+2)-th derivative bump, moments 0..n+1 vanish, L1 <= 1
};

// phi supported in (-support_radius, support_radius), support_radius <= 2^-4.
// Fourier nonvanishing is checked on |xi| <= 1 for phi0 and 1/4 <= |xi| <= 1
// for phi; a failed check shrinks the reference width and retries.
MollifierPair make_mollifier_pair(int n, DyadicRational support_radius);

enum class ParityRule { standard, endpoint_opposite, endpoint_same };

struct EtaProfile {
    BumpProfile eta;
    int sign = +1;  // sign of int_0^{1/2} x^n eta before rescale
};

// Test bump supported in (-2^-5, 2^-5): moments 0..n+2 vanish; under
// `standard` x^n eta(x) is odd; the endpoint rules pick the parity of x^n eta
// directly. Rescaled so |int_0^{1/2} x^n eta| = 1.
EtaProfile make_eta(int n, ParityRule rule = ParityRule::standard);

}  // namespace splinelab

#endif
