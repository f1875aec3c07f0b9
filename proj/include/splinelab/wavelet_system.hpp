#ifndef SPLINELAB_WAVELET_SYSTEM_HPP
#define SPLINELAB_WAVELET_SYSTEM_HPP

#include <string>
#include <vector>

#include "splinelab/piecewise_polynomial.hpp"

namespace splinelab {

// Integer-indexed coefficient sequence c_k, k in [k_min, k_min + size).
struct CoefficientSequence {
    std::int64_t k_min = 0;
    std::vector<double> values;
    double discarded_abs_sum = 0.0;  // certified sup bound for the dropped tail
    double decay_rate = 0.0;         // fitted |c_{k+1}/c_k| rate, as -log

    std::int64_t k_max() const { return k_min + static_cast<std::int64_t>(values.size()) - 1; }
    double at(std::int64_t k) const {
        return (k < k_min || k > k_max()) ? 0.0 : values[static_cast<std::size_t>(k - k_min)];
    }
};

struct ExponentialDecayFit {
    double C = 0.0;      // sup of |f(x)| e^{gamma |x|} over the window
    double gamma = 0.0;  // fitted decay rate (> 0), or +inf for compact support
    double residual = 0.0;
    bool compact_support = false;
};

struct PropertyReport {
    int order = 0;
    bool smoothness_pass = false;       // derivatives 0..n-1 continuous
    double junction_defect = 0.0;
    bool degree_pass = false;           // degree <= n per piece
    ExponentialDecayFit decay;          // joint fit for psi, Psi and derivatives
    bool decay_pass = false;
    std::vector<double> moment_defects; // |int x^M psi|, M = 0..n
    bool moments_pass = false;
    double lemma_coeff_equality_defect = 0.0;  // lower-order coefficient match at knots
    bool lemma_coeff_equality_pass = false;
    double leading_decay_slope = 0.0;   // regression slope of log|A^n_theta| vs |theta|
    bool leading_decay_pass = false;
    bool leading_bound_pass = false;    // |A^n_theta| <= 4 C e^{gamma/2} e^{-gamma|theta/2|}
    double gram_defect = 0.0;           // entrywise distance from identity
    bool gram_pass = false;
    bool all_pass() const {
        return smoothness_pass && degree_pass && decay_pass && moments_pass &&
               lemma_coeff_equality_pass && leading_decay_pass && gram_pass;
    }
};

struct GramSweep {
    int k_max = 3;      // wavelet levels 0..k_max
    int mu_range = 8;   // |mu| <= mu_range
    bool include_scaling_level = true;
};

struct WaveletSystem {
    int order = 0;
    PiecewisePolynomial psi;      // knots in Z/2 (grid scale 0)
    PiecewisePolynomial scaling;  // knots in Z (grid scale -1)
    CoefficientSequence scaling_coeffs;  // Psi_n = sum c_k N_n(. - k)
    CoefficientSequence wavelet_coeffs;  // psi_n = sum d_j N_n(2. - j)
    double decay_C = 0.0;
    double decay_gamma = 0.0;     // +inf for Haar
    double A_tilde = 0.0;         // A^n_1 - A^n_0 after normalization
    std::int64_t translation_offset = 0;

    WaveletSystem() : psi(PiecewisePolynomial::zero()), scaling(PiecewisePolynomial::zero()) {}

    // Leading coefficient of psi on [theta/2, (theta+1)/2].
    double leading_coefficient(std::int64_t theta) const { return psi.leading_coefficient(theta); }
    bool compactly_supported() const;
};

// a_j = int N_n(x) N_n(x - j) dx, j = -n..n (exact).
CoefficientSequence autocorrelation_coeffs(int n);

// Fourier coefficients of Phi(xi)^{-1/2}, Phi the autocorrelation symbol.
// Dense sampling with >= 2^14 points; truncated when |c_k| < tol. Exact
// closed form when the symbol is identically constant.
CoefficientSequence orthonormal_coeffs(int n, double tol, int sample_count = 1 << 14);

PiecewisePolynomial scaling_function(int n, double tol);
PiecewisePolynomial wavelet(int n, double tol);

WaveletSystem haar_system();
// Full pipeline: B-spline, orthonormalization, wavelet, decay fit,
// normalize_translation. tol controls coefficient truncation.
WaveletSystem build_wavelet_system(int n, double tol, int order_cap = 8);

// Translate so |A^n_1 - A^n_0| is maximal over scanned integer shifts.
WaveletSystem normalize_translation(WaveletSystem sys);

ExponentialDecayFit fit_exponential_decay(const std::vector<std::pair<double, double>>& abs_samples);

PropertyReport verify_properties(const WaveletSystem& sys, double tol,
                                 const GramSweep& sweep = {}, int threads = 0);

// Gram matrix of {Psi(.-mu)} u {2^{k/2} psi(2^k . - mu)}; returns max |G - I|.
double gram_defect(const WaveletSystem& sys, const GramSweep& sweep, int threads = 0);

std::string property_report_json(const PropertyReport& r, const WaveletSystem& sys);

}  // namespace splinelab

#endif
