#include "splinelab/bump_profile.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace splinelab {

namespace {

// rho^{(j)}(u) = P_j(u) (1-u^2)^{-2j} exp(-1/(1-u^2)) with
// P_{j+1} = P_j' (1-u^2)^2 + (4 j u (1-u^2) - 2u) P_j.
const std::vector<std::vector<double>>& bump_poly_table(int j_max) {
    static std::vector<std::vector<double>> table = {{1.0}};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= j_max) {
        const int j = static_cast<int>(table.size()) - 1;
        const auto& P = table.back();
        const int deg = static_cast<int>(P.size()) - 1;
        std::vector<double> next(deg + 4, 0.0);
        // P' (1 - u^2)^2 = P' (1 - 2u^2 + u^4)
        for (int i = 1; i <= deg; ++i) {
            const double d = i * P[i];
            next[i - 1] += d;
            next[i + 1] -= 2.0 * d;
            next[i + 3] += d;
        }
        // (4 j u (1-u^2) - 2u) P = (4j u - 4j u^3 - 2u) P
        for (int i = 0; i <= deg; ++i) {
            next[i + 1] += (4.0 * j - 2.0) * P[i];
            next[i + 3] -= 4.0 * j * P[i];
        }
        while (next.size() > 1 && next.back() == 0.0) next.pop_back();
        table.push_back(std::move(next));
    }
    return table;
}

double eval_poly(const std::vector<double>& p, double u) {
    double v = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * u + p[i];
    return v;
}

}  // namespace

double reference_bump_derivative(int j, double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double om = (1.0 - u) * (1.0 + u);
    const double g = -1.0 / om;
    // exp(g - 2j log(om)) avoids overflow of om^{-2j} near the edge
    const double expo = g - 2.0 * j * std::log(om);
    if (expo < -740.0) return 0.0;
    const auto& table = bump_poly_table(j);
    return eval_poly(table[static_cast<std::size_t>(j)], u) * std::exp(expo);
}

BumpProfile::BumpProfile(int derivative_order, double radius, double amplitude, int sample_count)
    : derivative_order_(derivative_order),
      radius_(radius),
      amplitude_(amplitude),
      sample_count_(sample_count) {
    if (radius <= 0) throw std::invalid_argument("BumpProfile: radius must be positive");
    vanishing_moments_ = derivative_order_ - 1;  // moments 0..order-1 vanish structurally
    resample();
}

void BumpProfile::resample() {
    samples_.resize(static_cast<std::size_t>(sample_count_));
    for (int i = 0; i < sample_count_; ++i) {
        const double x = -radius_ + 2.0 * radius_ * i / (sample_count_ - 1);
        samples_[static_cast<std::size_t>(i)] = value(x);
    }
}

double BumpProfile::value(double x) const {
    return amplitude_ * reference_bump_derivative(derivative_order_, x / radius_);
}

Parity BumpProfile::parity() const { return derivative_order_ % 2 == 0 ? Parity::even : Parity::odd; }

BumpProfile BumpProfile::primitive(int times) const {
    if (times < 0 || times > derivative_order_)
        throw std::invalid_argument("BumpProfile::primitive: order exhausted");
    BumpProfile out = *this;
    out.derivative_order_ -= times;
    for (int i = 0; i < times; ++i) out.amplitude_ *= radius_;
    out.vanishing_moments_ = out.derivative_order_ - 1;
    out.resample();
    return out;
}

double BumpProfile::grid_moment(int M) const {
    const double dx = 2.0 * radius_ / (sample_count_ - 1);
    double s = 0.0;
    for (int i = 0; i < sample_count_; ++i) {
        const double x = -radius_ + i * dx;
        const double w = (i == 0 || i == sample_count_ - 1) ? 0.5 : 1.0;
        s += w * std::pow(x, M) * samples_[static_cast<std::size_t>(i)];
    }
    return s * dx;
}

double BumpProfile::l1_norm() const {
    const double dx = 2.0 * radius_ / (sample_count_ - 1);
    double s = 0.0;
    for (int i = 0; i < sample_count_; ++i) {
        const double w = (i == 0 || i == sample_count_ - 1) ? 0.5 : 1.0;
        s += w * std::abs(samples_[static_cast<std::size_t>(i)]);
    }
    return s * dx;
}

double BumpProfile::sup_norm() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

double BumpProfile::half_line_weighted_integral(int n) const {
    // integrand vanishes beyond the support; 0.5 >= radius always holds here
    const int N = sample_count_;
    const double hi = std::min(0.5, radius_);
    const double dx = hi / (N - 1);
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = i * dx;
        const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;
        s += w * std::pow(x, n) * value(x);
    }
    return s * dx;
}

double BumpProfile::fourier_abs(double xi) const {
    const double dx = 2.0 * radius_ / (sample_count_ - 1);
    double re = 0.0, im = 0.0;
    for (int i = 0; i < sample_count_; ++i) {
        const double x = -radius_ + i * dx;
        const double w = (i == 0 || i == sample_count_ - 1) ? 0.5 : 1.0;
        const double v = w * samples_[static_cast<std::size_t>(i)];
        re += v * std::cos(xi * x);
        im -= v * std::sin(xi * x);
    }
    return std::hypot(re, im) * dx;
}

std::string BumpProfile::descriptor() const {
    std::ostringstream os;
    os.precision(17);
    os << "bump:d=" << derivative_order_ << ":r=" << radius_ << ":a=" << amplitude_;
    return os.str();
}

BumpProfile BumpProfile::from_descriptor(const std::string& id) {
    int d = 0;
    double r = 0, a = 0;
    if (std::sscanf(id.c_str(), "bump:d=%d:r=%lf:a=%lf", &d, &r, &a) != 3)
        throw std::invalid_argument("BumpProfile: bad descriptor '" + id + "'");
    return BumpProfile(d, r, a);
}

MollifierPair make_mollifier_pair(int n, DyadicRational support_radius) {
    double r = support_radius.value();
    if (r <= 0 || r > std::ldexp(1.0, -4))
        throw std::invalid_argument("make_mollifier_pair: support radius must be in (0, 2^-4]");
    for (int attempt = 0; attempt < 5; ++attempt) {
        BumpProfile phi0(0, r, 1.0);
        phi0.rescale(1.0 / phi0.grid_moment(0));
        BumpProfile phi(n + 2, r, 1.0);
        phi.rescale(1.0 / std::max(phi.l1_norm(), 1e-300));

        bool ok = true;
        for (double xi = 0.0; xi <= 1.0 + 1e-12; xi += 1.0 / 64)
            if (phi0.fourier_abs(xi) <= 1e-6) ok = false;
        for (double xi = 0.25; xi <= 1.0 + 1e-12; xi += 1.0 / 128)
            if (phi.fourier_abs(xi) <= 1e-12) ok = false;
        if (ok) return {phi0, phi};
        r *= 0.75;
    }
    throw std::runtime_error("make_mollifier_pair: Fourier nonvanishing check kept failing");
}

EtaProfile make_eta(int n, ParityRule rule) {
    const double r = std::ldexp(1.0, -5);
    // standard: order n+3 => x^n eta odd and moments 0..n+2 vanish. The
    // even-x^n-eta variant cannot keep the n-th moment zero (evenness would
    // force the normalizing half-line integral to vanish identically), so it
    // uses the n-th derivative: parity (-1)^n and moments 0..n-1.
    int order = n + 3;
    if (rule == ParityRule::endpoint_same) order = n;
    for (int attempt = 0; attempt < 4; ++attempt, order += 2) {
        BumpProfile eta(order, r, 1.0);
        const double I = eta.half_line_weighted_integral(n);
        if (std::abs(I) < 1e-6 * eta.sup_norm() * std::pow(r, n + 1)) continue;  // degenerate
        EtaProfile out;
        out.sign = I >= 0 ? +1 : -1;
        eta.rescale(1.0 / std::abs(I));
        out.eta = eta;
        return out;
    }
    throw std::runtime_error("make_eta: normalizing integral degenerate for all candidates");
}

}  // namespace splinelab
