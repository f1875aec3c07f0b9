#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splinelab/bspline.hpp"
#include "splinelab/wavelet_system.hpp"

using namespace splinelab;

namespace {

// Quadrature cross-check for <f, g(. - s)> on a dyadic-aligned midpoint grid.
double pairing_quadrature(const PiecewisePolynomial& f, const PiecewisePolynomial& g, double s,
                          int n = 1 << 15) {
    const double a = std::min(f.support_left(), g.support_left() + s) - 0.5;
    const double b = std::max(f.support_right(), g.support_right() + s) + 0.5;
    const double dx = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a + (i + 0.5) * dx;
        acc += f(x) * g(x - s);
    }
    return acc * dx;
}

}  // namespace

TEST_CASE("cardinal_bspline: values and smoothness") {
    CHECK(cardinal_bspline(0)(0.5) == 1.0);
    CHECK(cardinal_bspline(1)(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cardinal_bspline(3)(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK_THROWS_AS(cardinal_bspline(99), std::invalid_argument);
    CHECK(cardinal_bspline(4).max_junction_defect(3) <= 1e-12);
}

TEST_CASE("autocorrelation: box and hat") {
    auto a0 = autocorrelation_coeffs(0);
    CHECK(a0.at(0) == 1.0);
    CHECK(a0.at(1) == 0.0);

    auto a1 = autocorrelation_coeffs(1);
    CHECK(a1.at(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(a1.at(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(a1.at(-1) == a1.at(1));

    for (int n = 0; n <= 4; ++n) {
        auto a = autocorrelation_coeffs(n);
        double s = 0;
        for (auto k = a.k_min; k <= a.k_max(); ++k) s += a.at(k);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("orthonormal_coeffs: box is already orthonormal") {
    auto c = orthonormal_coeffs(0, 1e-9);
    CHECK(c.k_min == 0);
    CHECK(c.values.size() == 1);
    CHECK(c.values[0] == 1.0);
}

TEST_CASE("orthonormal_coeffs: hat case") {
    auto c = orthonormal_coeffs(1, 1e-10);
    // real, even, sums to Phi(0)^{-1/2} = 1
    double sum = 0.0;
    for (auto k = c.k_min; k <= c.k_max(); ++k) {
        sum += c.at(k);
        CHECK(c.at(k) == doctest::Approx(c.at(-k)).epsilon(1e-10));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    // geometric decay with stabilizing ratio: known rate 2 - sqrt(3)
    CHECK(c.decay_rate > 0.5);
    const double r1 = std::abs(c.at(6) / c.at(5));
    const double r2 = std::abs(c.at(7) / c.at(6));
    CHECK(r1 == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(0.02));
    CHECK(r2 == doctest::Approx(r1).epsilon(0.02));
}

TEST_CASE("scaling_function: orthonormal translates") {
    auto p1 = scaling_function(1, 1e-8);
    CHECK(inner_product(p1, p1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(inner_product(p1, p1, DyadicRational::integer(3), 0)) <= 1e-6);
    CHECK(scaling_function(0, 1e-8)(0.5) == 1.0);
    // brute-force quadrature oracle agrees
    CHECK(pairing_quadrature(p1, p1, 0.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("wavelet: haar recovered exactly at order zero") {
    auto w = wavelet(0, 1e-8);
    auto h = haar_wavelet_pp();
    REQUIRE(w.theta_min() == h.theta_min());
    REQUIRE(w.theta_max() == h.theta_max());
    for (auto th = h.theta_min(); th <= h.theta_max(); ++th) {
        CHECK(w.piece(th)[0] == h.piece(th)[0]);
    }
}

TEST_CASE("wavelet: order one moments and orthonormality") {
    auto w = wavelet(1, 1e-8);
    CHECK(std::abs(moment(w, 0)) <= 1e-7);
    CHECK(std::abs(moment(w, 1)) <= 1e-7);
    CHECK(inner_product(w, w) == doctest::Approx(1.0).epsilon(1e-6));
    for (int m = 1; m <= 3; ++m)
        CHECK(std::abs(inner_product(w, w, DyadicRational::integer(m), 0)) <= 1e-6);
    CHECK(pairing_quadrature(w, w, 1.0) == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("haar_system: closed form") {
    auto sys = haar_system();
    CHECK(sys.psi(0.25) == 1.0);
    CHECK(sys.psi.leading_coefficient(0) == 1.0);
    CHECK(sys.psi.leading_coefficient(1) == -1.0);
    CHECK(sys.A_tilde == -2.0);
    CHECK(moment(sys.psi, 0) == 0.0);
    CHECK(sys.compactly_supported());
}

TEST_CASE("build_wavelet_system: order zero equals the haar oracle bit for bit") {
    auto sys = build_wavelet_system(0, 1e-8);
    auto oracle = haar_system();
    CHECK(sys.A_tilde == oracle.A_tilde);
    CHECK(sys.translation_offset == 0);
    REQUIRE(sys.psi.theta_min() == oracle.psi.theta_min());
    REQUIRE(sys.psi.theta_max() == oracle.psi.theta_max());
    for (auto th = oracle.psi.theta_min(); th <= oracle.psi.theta_max(); ++th)
        CHECK(sys.psi.piece(th)[0] == oracle.psi.piece(th)[0]);
    REQUIRE(sys.scaling.piece_count() == oracle.scaling.piece_count());
    CHECK(sys.scaling.piece(0)[0] == oracle.scaling.piece(0)[0]);
    CHECK(sys.wavelet_coeffs.values == oracle.wavelet_coeffs.values);
    CHECK(sys.scaling_coeffs.values == oracle.scaling_coeffs.values);
}

TEST_CASE("verify_properties: haar all pass") {
    auto r = verify_properties(haar_system(), 1e-8, GramSweep{2, 4, true});
    CHECK(r.all_pass());
    CHECK(r.gram_defect <= 1e-12);
}

TEST_CASE("build + verify: order one") {
    auto sys = build_wavelet_system(1, 1e-8);
    CHECK(std::abs(sys.A_tilde) > 0);
    CHECK(sys.decay_gamma > 0);
    auto r = verify_properties(sys, 1e-8, GramSweep{2, 5, true});
    CHECK(r.smoothness_pass);
    CHECK(r.lemma_coeff_equality_defect <= 1e-7);
    CHECK(r.moments_pass);
    CHECK(r.gram_defect <= 1e-6);
    CHECK(r.leading_decay_slope < -0.1);
}

TEST_CASE("build + verify: order two leading decay") {
    auto sys = build_wavelet_system(2, 1e-8);
    auto r = verify_properties(sys, 1e-8, GramSweep{1, 4, true});
    CHECK(r.leading_decay_slope < 0.0);
    CHECK(r.lemma_coeff_equality_defect <= 1e-7);
    CHECK(r.moments_pass);
}

TEST_CASE("normalize_translation: idempotent and property-preserving") {
    auto sys = build_wavelet_system(1, 1e-8);
    auto again = normalize_translation(sys);
    CHECK(again.A_tilde == sys.A_tilde);
    CHECK(again.translation_offset == sys.translation_offset);
    CHECK(std::abs(moment(again.psi, 0)) <= 1e-7);
}
