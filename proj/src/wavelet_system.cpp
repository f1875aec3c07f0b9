#include "splinelab/wavelet_system.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "splinelab/bspline.hpp"
#include "splinelab/parallel.hpp"

namespace splinelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Least-squares line through (x_i, y_i); returns {slope, intercept, rms residual}.
struct LineFit {
    double slope = 0.0, intercept = 0.0, residual = 0.0;
};

LineFit fit_line(const std::vector<std::pair<double, double>>& pts) {
    LineFit f;
    const std::size_t n = pts.size();
    if (n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    if (det == 0) return f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    double rss = 0;
    for (auto [x, y] : pts) {
        const double e = y - (f.slope * x + f.intercept);
        rss += e * e;
    }
    f.residual = std::sqrt(rss / n);
    return f;
}

struct SymbolData {
    CoefficientSequence a;  // autocorrelation
    bool constant = false;  // symbol identically a_0
    double evaluate(double xi) const {
        double v = a.at(0);
        for (std::int64_t j = 1; j <= a.k_max(); ++j) v += 2.0 * a.at(j) * std::cos(j * xi);
        return v;
    }
};

SymbolData make_symbol(int n) {
    SymbolData s;
    s.a = autocorrelation_coeffs(n);
    s.constant = true;
    for (std::int64_t j = 1; j <= s.a.k_max(); ++j)
        if (s.a.at(j) != 0.0) s.constant = false;
    return s;
}

// Full two-sided Fourier inversion of a sampled 2pi-periodic function given as
// complex samples at xi_m = 2 pi m / M; returns coefficients for |k| <= k_cap
// with |coef| >= floor (trailing), plus discarded-mass estimate.
CoefficientSequence invert_samples(const std::vector<std::complex<double>>& samples, double floor,
                                   int k_cap, double* max_imag = nullptr) {
    const std::int64_t M = static_cast<std::int64_t>(samples.size());
    std::vector<double> cs(M), sn(M);
    for (std::int64_t m = 0; m < M; ++m) {
        const double xi = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(M);
        cs[m] = std::cos(xi);
        sn[m] = std::sin(xi);
    }
    // angle k*xi_m reduced by exact integer arithmetic: (k*m) mod M
    auto coeff_at = [&](std::int64_t k) {
        std::complex<double> acc = 0.0;
        for (std::int64_t m = 0; m < M; ++m) {
            std::int64_t idx = (k * m) % M;
            if (idx < 0) idx += M;
            acc += samples[static_cast<std::size_t>(m)] * std::complex<double>(cs[idx], sn[idx]);
        }
        return acc / static_cast<double>(M);
    };
    std::vector<double> pos, neg;
    double imag_max = 0.0;
    double discarded = 0.0;
    int run = 0;
    for (std::int64_t k = 0; k <= k_cap; ++k) {
        const auto v = coeff_at(k);
        imag_max = std::max(imag_max, std::abs(v.imag()));
        pos.push_back(v.real());
        if (std::abs(v.real()) < floor) {
            discarded += std::abs(v.real());
            if (++run >= 6) break;
        } else
            run = 0;
    }
    run = 0;
    for (std::int64_t k = 1; k <= k_cap; ++k) {
        const auto v = coeff_at(-k);
        imag_max = std::max(imag_max, std::abs(v.imag()));
        neg.push_back(v.real());
        if (std::abs(v.real()) < floor) {
            discarded += std::abs(v.real());
            if (++run >= 6) break;
        } else
            run = 0;
    }
    if (max_imag) *max_imag = imag_max;
    CoefficientSequence out;
    out.k_min = -static_cast<std::int64_t>(neg.size());
    out.values.resize(neg.size() + pos.size());
    for (std::size_t i = 0; i < neg.size(); ++i) out.values[neg.size() - 1 - i] = neg[i];
    for (std::size_t i = 0; i < pos.size(); ++i) out.values[neg.size() + i] = pos[i];
    out.discarded_abs_sum = discarded + 10.0 * floor;
    return out;
}

// Trim a sequence: drop edge coefficients while each is below sup_cut AND the
// accumulated weighted drop stays within the budget. weight(k) should bound
// the sensitivity of whatever certificate the caller cares about (moments) to
// dropping coefficient k.
CoefficientSequence trim(const CoefficientSequence& c, double sup_cut,
                         const std::function<double(std::int64_t)>& weight,
                         double weighted_budget = std::numeric_limits<double>::infinity()) {
    std::int64_t lo = c.k_min, hi = c.k_max();
    double dropped = c.discarded_abs_sum;
    double spent = 0.0;
    while (lo < hi) {
        const double vlo = std::abs(c.at(lo)), vhi = std::abs(c.at(hi));
        if (vlo <= vhi) {
            if (vlo >= sup_cut || spent + vlo * weight(lo) > weighted_budget) break;
            spent += vlo * weight(lo);
            dropped += vlo;
            ++lo;
        } else {
            if (vhi >= sup_cut || spent + vhi * weight(hi) > weighted_budget) break;
            spent += vhi * weight(hi);
            dropped += vhi;
            --hi;
        }
    }
    CoefficientSequence out;
    out.k_min = lo;
    for (std::int64_t k = lo; k <= hi; ++k) out.values.push_back(c.at(k));
    out.discarded_abs_sum = dropped;
    std::vector<std::pair<double, double>> pts;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const double v = std::abs(c.at(k));
        if (v > 0 && std::abs(k) >= 2) pts.emplace_back(static_cast<double>(std::abs(k)), std::log(v));
    }
    auto f = fit_line(pts);
    out.decay_rate = pts.size() >= 4 ? -f.slope : 0.0;
    return out;
}

CoefficientSequence highpass_from_symbol(const SymbolData& sym, int n, double floor, int M) {
    // dhat(xi) = -2 e^{-i xi} conj(m0(xi+pi)) Phi(xi)^{-1/2}
    std::vector<std::complex<double>> dhat(M);
    for (int m = 0; m < M; ++m) {
        const double xi = 2.0 * std::numbers::pi * m / M;
        const double xs = xi + std::numbers::pi;
        const double phi1 = sym.evaluate(xs);
        const double phi2 = sym.evaluate(2.0 * xs);
        const double phix = sym.evaluate(xi);
        if (phi1 <= 0.0 || phi2 <= 0.0 || phix <= 0.0)
            throw std::runtime_error("orthonormalization symbol is not strictly positive");
        const double mag = int_pow(std::cos(xs / 2.0), n + 1) * std::sqrt(phi1 / phi2);
        const double ang = -(n + 1) * xs / 2.0;
        const std::complex<double> m0s = mag * std::complex<double>(std::cos(ang), std::sin(ang));
        const std::complex<double> e(std::cos(xi), -std::sin(xi));
        dhat[m] = -2.0 * e * std::conj(m0s) / std::sqrt(phix);
    }
    double imag_max = 0.0;
    auto d = invert_samples(dhat, floor, 4096, &imag_max);
    if (imag_max > 1e-9)
        throw std::runtime_error("high-pass inversion produced non-real coefficients");
    return d;
}

CoefficientSequence highpass_constant_symbol(const SymbolData& sym, int n) {
    // Symbol identically a0: m0 = ((1+e^{-i xi})/2)^{n+1}, all values dyadic.
    // d_j = -2 (-1)^{1-j} C(n+1, 1-j) / 2^{n+1} / sqrt(a0),  j = -n..1
    const double root = std::sqrt(sym.a.at(0));
    CoefficientSequence d;
    d.k_min = -n;
    d.values.resize(n + 2);
    for (std::int64_t j = -n; j <= 1; ++j) {
        const int k = static_cast<int>(1 - j);
        const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // -(-1)^k
        d.values[static_cast<std::size_t>(j + n)] =
            sign * 2.0 * binomial(n + 1, k) / std::ldexp(1.0, n + 1) / root;
    }
    d.decay_rate = kInf;
    return d;
}

double weighted_center(const PiecewisePolynomial& pp) {
    const double h = pp.knot_spacing();
    double mass = 0.0, cm = 0.0;
    for (std::int64_t th = pp.theta_min(); th <= pp.theta_max(); ++th) {
        const double s = pp.piece_sup(th, 4);
        const double mid = (th + 0.5) * h;
        mass += s * s;
        cm += s * s * mid;
    }
    return mass > 0 ? cm / mass : 0.0;
}

}  // namespace

bool WaveletSystem::compactly_supported() const { return std::isinf(decay_gamma); }

CoefficientSequence autocorrelation_coeffs(int n) {
    const auto spline = cardinal_bspline(n);
    CoefficientSequence a;
    a.k_min = -n;
    a.values.resize(2 * n + 1);
    for (int j = 0; j <= n; ++j) {
        const double v = inner_product(spline, spline, DyadicRational::integer(j), 0);
        a.values[static_cast<std::size_t>(n + j)] = v;
        a.values[static_cast<std::size_t>(n - j)] = v;
    }
    a.decay_rate = kInf;
    return a;
}

CoefficientSequence orthonormal_coeffs(int n, double tol, int sample_count) {
    if (tol <= 0) throw std::invalid_argument("orthonormal_coeffs: tol must be positive");
    const SymbolData sym = make_symbol(n);
    if (sym.constant) {
        CoefficientSequence c;
        c.k_min = 0;
        c.values = {1.0 / std::sqrt(sym.a.at(0))};
        c.decay_rate = kInf;
        return c;
    }
    std::vector<std::complex<double>> w(sample_count);
    for (int m = 0; m < sample_count; ++m) {
        const double xi = 2.0 * std::numbers::pi * m / sample_count;
        const double phi = sym.evaluate(xi);
        if (phi <= 0.0)
            throw std::runtime_error("orthonormalization symbol is not strictly positive");
        w[m] = 1.0 / std::sqrt(phi);
    }
    auto full = invert_samples(w, tol * 1e-6, 4096);
    return trim(full, tol, [](std::int64_t) { return 1.0; });
}

PiecewisePolynomial scaling_function(int n, double tol) {
    const auto c = orthonormal_coeffs(n, tol);
    const auto spline = cardinal_bspline(n);
    std::vector<CombineTerm> terms;
    for (std::int64_t k = c.k_min; k <= c.k_max(); ++k)
        terms.push_back({c.at(k), &spline, k, 0});
    auto psi0 = linear_combine(terms);
    auto out = PiecewisePolynomial(psi0.degree_bound(), psi0.grid_scale(), psi0.theta_min(),
                                   [&] {
                                       std::vector<std::vector<double>> p;
                                       for (auto th = psi0.theta_min(); th <= psi0.theta_max(); ++th)
                                           p.emplace_back(psi0.piece(th).begin(), psi0.piece(th).end());
                                       return p;
                                   }(),
                                   c.discarded_abs_sum, c.decay_rate);
    return out;
}

namespace {

PiecewisePolynomial assemble_wavelet(const CoefficientSequence& d, int n) {
    const auto spline = cardinal_bspline(n);
    std::vector<CombineTerm> terms;
    for (std::int64_t j = d.k_min; j <= d.k_max(); ++j) terms.push_back({d.at(j), &spline, j, 1});
    auto psi = linear_combine(terms);
    return PiecewisePolynomial(psi.degree_bound(), psi.grid_scale(), psi.theta_min(),
                               [&] {
                                   std::vector<std::vector<double>> p;
                                   for (auto th = psi.theta_min(); th <= psi.theta_max(); ++th)
                                       p.emplace_back(psi.piece(th).begin(), psi.piece(th).end());
                                   return p;
                               }(),
                               d.discarded_abs_sum, d.decay_rate);
}

}  // namespace

PiecewisePolynomial wavelet(int n, double tol) {
    const SymbolData sym = make_symbol(n);
    CoefficientSequence d = sym.constant
                                ? highpass_constant_symbol(sym, n)
                                : trim(highpass_from_symbol(sym, n, tol * 1e-6, 1 << 14), tol,
                                       [](std::int64_t) { return 1.0; });
    return assemble_wavelet(d, n);
}

WaveletSystem haar_system() {
    WaveletSystem sys;
    sys.order = 0;
    sys.psi = haar_wavelet_pp();
    sys.scaling = unit_box();
    sys.scaling_coeffs.k_min = 0;
    sys.scaling_coeffs.values = {1.0};
    sys.scaling_coeffs.decay_rate = kInf;
    sys.wavelet_coeffs.k_min = 0;
    sys.wavelet_coeffs.values = {1.0, -1.0};
    sys.wavelet_coeffs.decay_rate = kInf;
    sys.decay_C = 1.0;
    sys.decay_gamma = kInf;
    sys.A_tilde = -2.0;
    sys.translation_offset = 0;
    return sys;
}

ExponentialDecayFit fit_exponential_decay(
    const std::vector<std::pair<double, double>>& abs_samples) {
    ExponentialDecayFit fit;
    double vmax = 0.0;
    for (auto [x, v] : abs_samples) vmax = std::max(vmax, v);
    if (vmax == 0.0) return fit;
    std::vector<std::pair<double, double>> pts;
    for (auto [x, v] : abs_samples)
        if (v > vmax * 1e-9) pts.emplace_back(x, std::log(v));
    const auto line = fit_line(pts);
    fit.gamma = -line.slope;
    fit.residual = line.residual;
    if (fit.gamma <= 0) {
        fit.gamma = 0;
        return fit;
    }
    for (auto [x, v] : abs_samples) fit.C = std::max(fit.C, v * std::exp(fit.gamma * x));
    return fit;
}

WaveletSystem normalize_translation(WaveletSystem sys) {
    const auto& psi = sys.psi;
    std::int64_t best_sigma = 0;
    double best = -1.0;
    const std::int64_t span = (psi.theta_max() - psi.theta_min()) / 2 + 2;
    for (std::int64_t sigma = -span; sigma <= span; ++sigma) {
        const double score =
            std::abs(psi.leading_coefficient(1 - 2 * sigma) - psi.leading_coefficient(-2 * sigma));
        if (score > best + 1e-15) {
            best = score;
            best_sigma = sigma;
        }
    }
    if (best <= 1e-12)
        throw std::runtime_error(
            "normalize_translation: all scanned knots have equal leading coefficients "
            "(degenerate wavelet)");
    sys.psi = sys.psi.translated(2 * best_sigma);
    sys.wavelet_coeffs.k_min += 2 * best_sigma;
    sys.translation_offset += best_sigma;
    sys.A_tilde = sys.psi.leading_coefficient(1) - sys.psi.leading_coefficient(0);
    return sys;
}

WaveletSystem build_wavelet_system(int n, double tol, int order_cap) {
    if (n < 0 || n > order_cap)
        throw std::invalid_argument("build_wavelet_system: order out of range");
    WaveletSystem sys;
    sys.order = n;

    const SymbolData sym = make_symbol(n);
    const auto spline = cardinal_bspline(n, order_cap);

    // scaling coefficients: plain sup-norm cut
    if (sym.constant) {
        sys.scaling_coeffs.k_min = 0;
        sys.scaling_coeffs.values = {1.0 / std::sqrt(sym.a.at(0))};
        sys.scaling_coeffs.decay_rate = kInf;
    } else {
        std::vector<std::complex<double>> w(1 << 14);
        for (std::size_t m = 0; m < w.size(); ++m) {
            const double xi = 2.0 * std::numbers::pi * m / w.size();
            const double phi = sym.evaluate(xi);
            if (phi <= 0.0)
                throw std::runtime_error("orthonormalization symbol is not strictly positive");
            w[m] = 1.0 / std::sqrt(phi);
        }
        sys.scaling_coeffs =
            trim(invert_samples(w, tol * 1e-8, 4096), tol * 1e-2, [](std::int64_t) { return 1.0; });
    }
    {
        std::vector<CombineTerm> terms;
        for (std::int64_t k = sys.scaling_coeffs.k_min; k <= sys.scaling_coeffs.k_max(); ++k)
            terms.push_back({sys.scaling_coeffs.at(k), &spline, k, 0});
        auto p = linear_combine(terms);
        sys.scaling = PiecewisePolynomial(
            p.degree_bound(), p.grid_scale(), p.theta_min(),
            [&] {
                std::vector<std::vector<double>> q;
                for (auto th = p.theta_min(); th <= p.theta_max(); ++th)
                    q.emplace_back(p.piece(th).begin(), p.piece(th).end());
                return q;
            }(),
            sys.scaling_coeffs.discarded_abs_sum, sys.scaling_coeffs.decay_rate);
    }

    // wavelet coefficients: tail-moment budget keeps vanishing-moment defects
    // well under 1e-7 even for M = n
    if (sym.constant) {
        sys.wavelet_coeffs = highpass_constant_symbol(sym, n);
    } else {
        auto full = highpass_from_symbol(sym, n, 1e-13, 1 << 14);
        sys.wavelet_coeffs = trim(
            full, tol * 1e-2,
            [n](std::int64_t j) {
                const double x = std::abs((static_cast<double>(j) + (n + 1) * 0.5) / 2.0);
                return int_pow(1.0 + x, n);
            },
            3e-9);
    }
    sys.psi = assemble_wavelet(sys.wavelet_coeffs, n);

    // centre the window near [0,1]
    const double cm = weighted_center(sys.psi);
    const std::int64_t recenter = llround(cm - 0.5);
    if (recenter != 0) {
        sys.psi = sys.psi.translated(-2 * recenter);
        sys.wavelet_coeffs.k_min -= 2 * recenter;
        sys.translation_offset -= recenter;
    }
    if (n >= 1) sys.psi.enforce_continuity(n - 1);

    // decay constants for the function family (functions + derivatives < n)
    if (n == 0 && sym.constant) {
        sys.decay_C = 1.0;
        sys.decay_gamma = kInf;
    } else {
        std::vector<std::pair<double, double>> samples;
        auto add = [&](const PiecewisePolynomial& f) {
            for (std::int64_t th = f.theta_min(); th <= f.theta_max(); ++th)
                samples.emplace_back(std::abs((th + 0.5) * f.knot_spacing()), f.piece_sup(th));
        };
        PiecewisePolynomial ps = sys.psi, sc = sys.scaling;
        for (int a = 0; a < std::max(1, n); ++a) {
            add(ps);
            add(sc);
            if (a + 1 < std::max(1, n)) {
                ps = derivative(ps);
                sc = derivative(sc);
            }
        }
        auto fit = fit_exponential_decay(samples);
        sys.decay_C = fit.C;
        sys.decay_gamma = fit.gamma;
    }
    sys.psi.set_tail_decay_rate(std::isinf(sys.decay_gamma) ? 0.0 : sys.decay_gamma);
    sys.scaling.set_tail_decay_rate(sys.psi.tail_decay_rate());

    return normalize_translation(sys);
}

double gram_defect(const WaveletSystem& sys, const GramSweep& sweep, int threads) {
    struct Element {
        PiecewisePolynomial pp;
        double norm_factor;
    };
    std::vector<Element> elems;
    if (sweep.include_scaling_level)
        for (int mu = -sweep.mu_range; mu <= sweep.mu_range; ++mu)
            elems.push_back({sys.scaling.composed_dyadic(0, DyadicRational::integer(mu)), 1.0});
    for (int k = 0; k <= sweep.k_max; ++k)
        for (int mu = -sweep.mu_range; mu <= sweep.mu_range; ++mu)
            elems.push_back(
                {sys.psi.composed_dyadic(k, DyadicRational::integer(mu)), std::pow(2.0, k / 2.0)});
    const std::size_t n = elems.size();
    std::vector<double> defects(n, 0.0);
    parallel_for(
        n,
        [&](std::size_t i) {
            double d = 0.0;
            for (std::size_t j = i; j < n; ++j) {
                const double g =
                    elems[i].norm_factor * elems[j].norm_factor *
                    inner_product(elems[i].pp, elems[j].pp);
                d = std::max(d, std::abs(g - (i == j ? 1.0 : 0.0)));
            }
            defects[i] = d;
        },
        threads);
    double m = 0.0;
    for (double d : defects) m = std::max(m, d);
    return m;
}

PropertyReport verify_properties(const WaveletSystem& sys, double tol, const GramSweep& sweep,
                                 int threads) {
    PropertyReport r;
    const int n = sys.order;
    r.order = n;

    // (A) smoothness: derivatives 0..n-1 match across knots
    if (n == 0) {
        r.junction_defect = 0.0;
        r.smoothness_pass = true;
    } else {
        r.junction_defect =
            std::max(sys.psi.max_junction_defect(n - 1), sys.scaling.max_junction_defect(n - 1));
        r.smoothness_pass = r.junction_defect <= tol * 10 + 1e-7;
    }

    // (B) degree bound is structural; confirm the stored bound
    r.degree_pass = sys.psi.degree_bound() <= n && sys.scaling.degree_bound() <= n;

    // (C) exponential decay with the fitted constants
    if (sys.compactly_supported()) {
        r.decay.compact_support = true;
        r.decay.C = sys.decay_C;
        r.decay.gamma = kInf;
        r.decay_pass = true;
    } else {
        r.decay.C = sys.decay_C;
        r.decay.gamma = sys.decay_gamma;
        r.decay_pass = sys.decay_gamma > 0;
        PiecewisePolynomial ps = sys.psi, sc = sys.scaling;
        auto check = [&](const PiecewisePolynomial& f) {
            for (std::int64_t th = f.theta_min(); th <= f.theta_max(); ++th) {
                const double x = std::abs((th + 0.5) * f.knot_spacing());
                if (f.piece_sup(th) > sys.decay_C * std::exp(-sys.decay_gamma * x) * (1 + 1e-9))
                    r.decay_pass = false;
            }
        };
        for (int a = 0; a < std::max(1, n) && r.decay_pass; ++a) {
            check(ps);
            check(sc);
            if (a + 1 < std::max(1, n)) {
                ps = derivative(ps);
                sc = derivative(sc);
            }
        }
    }

    // (D) vanishing moments 0..n
    r.moments_pass = true;
    for (int M = 0; M <= n; ++M) {
        const double v = std::abs(moment(sys.psi, M));
        r.moment_defects.push_back(v);
        if (v > 1e-7) r.moments_pass = false;
    }

    // lower-order coefficient equality at knots (junction coefficients agree)
    if (n == 0) {
        r.lemma_coeff_equality_defect = 0.0;
        r.lemma_coeff_equality_pass = true;
    } else {
        double d = 0.0;
        const std::int64_t lo = std::max<std::int64_t>(sys.psi.theta_min() + 1, -20);
        const std::int64_t hi = std::min<std::int64_t>(sys.psi.theta_max(), 20);
        for (std::int64_t knot = lo; knot <= hi; ++knot) {
            auto left = sys.psi.expansion_at_knot(knot, true);
            auto right = sys.psi.expansion_at_knot(knot, false);
            for (int j = 0; j <= n - 1; ++j) d = std::max(d, std::abs(left[j] - right[j]));
        }
        r.lemma_coeff_equality_defect = d;
        r.lemma_coeff_equality_pass = d <= 1e-7;
    }

    // leading-coefficient decay: regression and the 4 C e^{gamma/2} bound
    {
        std::vector<std::pair<double, double>> pts;
        double worst_ratio = 0.0;
        for (std::int64_t th = sys.psi.theta_min(); th <= sys.psi.theta_max(); ++th) {
            const double v = std::abs(sys.psi.leading_coefficient(th));
            if (v > sys.psi.max_abs_coefficient() * 1e-9)
                pts.emplace_back(std::abs(static_cast<double>(th)), std::log(v));
            if (!sys.compactly_supported() && v > 0) {
                const double bound = 4.0 * sys.decay_C * std::exp(sys.decay_gamma / 2.0) *
                                     std::exp(-sys.decay_gamma * std::abs(th / 2.0));
                worst_ratio = std::max(worst_ratio, v / bound);
            }
        }
        const auto line = fit_line(pts);
        r.leading_decay_slope = line.slope;
        r.leading_decay_pass = sys.compactly_supported() || line.slope <= -0.1;
        r.leading_bound_pass = sys.compactly_supported() || worst_ratio <= 1.0 + 1e-9;
    }

    r.gram_defect = gram_defect(sys, sweep, threads);
    r.gram_pass = r.gram_defect <= (n == 0 ? 1e-12 : 1e-6);
    return r;
}

std::string property_report_json(const PropertyReport& r, const WaveletSystem& sys) {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"order\": " << r.order << ",\n  \"C\": " << sys.decay_C
       << ",\n  \"gamma\": " << (std::isinf(sys.decay_gamma) ? -1.0 : sys.decay_gamma)
       << ",\n  \"compact_support\": " << (sys.compactly_supported() ? "true" : "false")
       << ",\n  \"A_tilde\": " << sys.A_tilde
       << ",\n  \"translation_offset\": " << sys.translation_offset
       << ",\n  \"gram_defect\": " << r.gram_defect << ",\n  \"moment_defects\": [";
    for (std::size_t i = 0; i < r.moment_defects.size(); ++i)
        os << (i ? ", " : "") << r.moment_defects[i];
    os << "],\n  \"lemma31_defect\": " << r.lemma_coeff_equality_defect
       << ",\n  \"junction_defect\": " << r.junction_defect
       << ",\n  \"leading_decay_slope\": " << r.leading_decay_slope
       << ",\n  \"all_pass\": " << (r.all_pass() ? "true" : "false") << "\n}\n";
    return os.str();
}

}  // namespace splinelab
