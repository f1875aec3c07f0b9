#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splinelab/bspline.hpp"
#include "splinelab/local_means.hpp"
#include "splinelab/norms.hpp"

using namespace splinelab;

namespace {

LocalMeansContext make_ctx(int n) {
    return LocalMeansContext(n, make_mollifier_pair(n, DyadicRational{1, 4}));
}

}  // namespace

TEST_CASE("mollifier pair: moments, mass, Fourier nonvanishing") {
    for (int n = 0; n <= 2; ++n) {
        auto pair = make_mollifier_pair(n, DyadicRational{1, 4});
        CHECK(pair.phi0.grid_moment(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(pair.phi.l1_norm() <= 1.0 + 1e-12);
        for (int M = 0; M <= n + 1; ++M) CHECK(std::abs(pair.phi.grid_moment(M)) <= 1e-10);
        CHECK(pair.phi.fourier_abs(0.5) > 0);
        // primitives stay supported and are not identically zero
        auto prim = pair.phi.primitive(n + 1);
        CHECK(prim.sup_norm() > 0);
        CHECK(prim.support_right() == pair.phi.support_right());
        CHECK(prim.value(pair.phi.support_right() + 1e-6) == 0.0);
    }
}

TEST_CASE("eta: parity, moments, normalization") {
    for (int n = 0; n <= 2; ++n) {
        auto ep = make_eta(n);
        // x^n eta odd: moments of even total parity vanish; check via samples
        const double r = ep.eta.radius();
        for (double x : {r * 0.3, r * 0.62, r * 0.9}) {
            const double lhs = std::pow(-x, n) * ep.eta.value(-x);
            const double rhs = -std::pow(x, n) * ep.eta.value(x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
        for (int M = 0; M <= n + 2; ++M)
            CHECK(std::abs(ep.eta.grid_moment(M)) <= 1e-10 * std::max(1.0, ep.eta.sup_norm()));
        CHECK(std::abs(ep.eta.half_line_weighted_integral(n)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // endpoint-same rule flips the parity of x^n eta to even
    auto same = make_eta(1, ParityRule::endpoint_same);
    const double r = same.eta.radius();
    const double x = 0.4 * r;
    CHECK(std::pow(-x, 1) * same.eta.value(-x) ==
          doctest::Approx(std::pow(x, 1) * same.eta.value(x)).epsilon(1e-12));
}

TEST_CASE("convolve_profile: vanishing-mean kernel kills constants") {
    auto ctx = make_ctx(0);
    // wide constant-1 region around 0
    std::vector<std::vector<double>> pieces(16, std::vector<double>{1.0});
    auto wide = PiecewisePolynomial(0, -3, -8, pieces);
    int id = ctx.register_pp("wide", wide);
    const auto& R = convolve_profile(ctx, id, 0);
    // deep inside the constant region the response vanishes
    CHECK(std::abs(R.eval(0.0)) <= 1e-10);
    CHECK(std::abs(R.eval(1.0)) <= 1e-10);
}

TEST_CASE("convolve_profile: mass kernel preserves mass") {
    auto ctx = make_ctx(0);
    int id = ctx.register_pp("box", unit_box());
    ProfileHandle kern;
    auto pair = make_mollifier_pair(0, DyadicRational{1, 4});
    kern.bump = &pair.phi0;
    ProfileHandle unit;
    auto boxpp = unit_box();
    unit.pp = &boxpp;
    auto R = build_response_table(kern, unit, 0);
    // integral of phi0 * box equals mass(phi0) * mass(box) = 1
    double mass = 0.0;
    for (double v : R.f.v) mass += v;
    mass *= R.f.dx;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    (void)id;
}

TEST_CASE("haar local lower bound: phi * psi equals 2 Phi_1(x - 1/2) on [1/4, 3/4]") {
    auto pair = make_mollifier_pair(0, DyadicRational{1, 4});
    auto psi = haar_wavelet_pp();
    ProfileHandle kern, unit;
    kern.bump = &pair.phi;
    unit.pp = &psi;
    auto pm = std::make_shared<const PartialMoments>(build_partial_moments(pair.phi, 9));
    auto R = build_response(kern, unit, 0, pm);
    auto Phi1 = pair.phi.primitive(1);
    for (double x : {0.31, 0.44, 0.5, 0.52, 0.69}) {
        const double expect = -2.0 * Phi1.value(x - 0.5);
        CHECK(R.eval(x) == doctest::Approx(expect).epsilon(1e-4));
        CHECK(std::abs(R.eval(x) - expect) <= 2e-5 * Phi1.sup_norm());
    }
}

TEST_CASE("lattice sums match direct window sums") {
    auto ctx = make_ctx(0);
    auto ep = make_eta(0);
    int id = ctx.register_bump("eta", ep.eta);
    const auto& R = ctx.kernel_response(id, 3);
    REQUIRE(R.table != nullptr);
    const double spacing = R.extent / 7.3;
    const auto& lat = ctx.lattice(*R.table, spacing);
    for (double z : {-1.0, -0.1, 0.05, 0.4, 2.0}) {
        for (std::int64_t count : {1, 5, 40}) {
            double direct = 0.0;
            for (std::int64_t i = 0; i < count; ++i)
                direct += R.eval(z - spacing * static_cast<double>(i));
            CHECK(lat.window_sum(z, count) == doctest::Approx(direct).epsilon(1e-4));
        }
    }
}

TEST_CASE("fspq_norm: zero input, homogeneity, single-atom dilation covariance") {
    auto ctx = make_ctx(0);
    auto ep = make_eta(0);
    int id = ctx.register_bump("eta", ep.eta);

    QuadratureConfig quad;
    quad.domain_lo = -1.0;
    quad.domain_hi = 1.0;

    CHECK(fspq_norm({}, {}, -0.6, 4.0, 1.5, 0, 4, ctx, quad).value == 0.0);

    TermGroup g;
    g.scale = 3;
    g.center0 = 0.5;
    g.stride = 0;
    g.count = 1;
    g.amplitude = 1.0;
    g.profile_id = id;
    const double s = -0.6, p = 4.0, q = 1.5;
    auto n1 = fspq_norm({g}, {}, s, p, q, 0, 9, ctx, quad);
    TermGroup g3 = g;
    g3.amplitude = -3.5;
    auto n3 = fspq_norm({g3}, {}, s, p, q, 0, 9, ctx, quad);
    CHECK(n3.value == doctest::Approx(3.5 * n1.value).epsilon(1e-10));

    // dilation covariance: scale l atom with k-range tracking l scales by
    // 2^{l(s - 1/p)} modulo the discretized band edges
    TermGroup gd = g;
    gd.scale = 5;
    auto nd = fspq_norm({gd}, {}, s, p, q, 2, 11, ctx, quad);
    const double predicted = n1.value * std::pow(2.0, 2.0 * (s - 1.0 / p + 1.0));
    // amplitude of the atom is fixed, so the covariance factor is 2^{l(s-1/p)}
    // times 2^l from the kernel normalization cancelling; compare measured
    const double ratio = nd.value / n1.value;
    CHECK(ratio == doctest::Approx(std::pow(2.0, 2.0 * (s - 1.0 / p))).epsilon(0.02));
    (void)predicted;
}

TEST_CASE("fspq_norm: k-range extension changes little") {
    auto ctx = make_ctx(0);
    auto ep = make_eta(0);
    int id = ctx.register_bump("eta", ep.eta);
    TermGroup g{4, 0.25, 0.125, 4, 1.0, id};
    QuadratureConfig quad;
    auto base = fspq_norm({g}, {}, -0.6, 4.0, 1.5, 0, 10, ctx, quad);
    auto ext = fspq_norm({g}, {}, -0.6, 4.0, 1.5, 0, 14, ctx, quad);
    CHECK(std::abs(ext.value - base.value) / base.value < 0.01);
}

TEST_CASE("littlewood-paley: zero and smooth-bump sanity") {
    auto ctx = make_ctx(0);
    BumpProfile wide(0, 1.0, 1.0);
    int id = ctx.register_bump("wide", wide);
    LittlewoodPaleyConfig cfg;
    cfg.grid_lo = -8.0;
    cfg.grid_hi = 8.0;
    cfg.log2_points = 16;
    cfg.k_max = 12;
    CHECK(littlewood_paley_norm({}, {}, 0.0, 2.0, 2.0, ctx, cfg) == 0.0);

    TermGroup g{0, 0.0, 0.0, 1, 1.0, id};
    const double lp = littlewood_paley_norm({g}, {}, 0.0, 2.0, 2.0, ctx, cfg);
    // s=0, p=q=2: comparable to the plain L2 norm
    double l2 = 0.0;
    for (int i = 0; i < 4096; ++i) {
        const double x = -1.0 + 2.0 * i / 4095.0;
        l2 += wide.value(x) * wide.value(x);
    }
    l2 = std::sqrt(l2 * (2.0 / 4095.0));
    CHECK(lp / l2 > 0.8);
    CHECK(lp / l2 < 1.2);
}

TEST_CASE("estimator ratio: local means vs littlewood-paley stays in a band") {
    auto ctx = make_ctx(0);
    auto ep = make_eta(0);
    int id = ctx.register_bump("eta", ep.eta);
    const double s = -0.6, p = 4.0, q = 1.5;
    QuadratureConfig quad;
    LittlewoodPaleyConfig cfg;
    cfg.grid_lo = -4.0;
    cfg.grid_hi = 4.0;
    cfg.log2_points = 18;
    cfg.k_max = 14;
    double rmin = 1e300, rmax = 0.0;
    for (int l : {2, 3, 4}) {
        TermGroup g{l, 0.5, 0.25, 2, 1.0, id};
        auto lm = fspq_norm({g}, {}, s, p, q, 0, l + 6, ctx, quad);
        auto lp = littlewood_paley_norm({g}, {}, s, p, q, ctx, cfg);
        const double r = lm.value / lp;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    CHECK(rmax / rmin <= 10.0);
}
