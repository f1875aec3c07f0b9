#include "splinelab/piecewise_polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace splinelab {

namespace {

constexpr int kMaxBinomial = 70;

const double* binomial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kMaxBinomial * kMaxBinomial, 0.0);
        for (int n = 0; n < kMaxBinomial; ++n) {
            t[n * kMaxBinomial] = 1.0;
            for (int k = 1; k <= n; ++k)
                t[n * kMaxBinomial + k] =
                    t[(n - 1) * kMaxBinomial + k - 1] + (k < n ? t[(n - 1) * kMaxBinomial + k] : 0.0);
        }
        return t;
    }();
    return table.data();
}

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

// integral of xi^t over [-h, 0]
double power_integral(int t, double h) {
    double p = std::pow(h, t + 1) / (t + 1);
    return (t % 2 == 0) ? p : -p;
}

// Bound on the x^M-weighted mass of a tail that is <= tol in sup norm beyond
// |x| = edge and decays at rate gamma: tol * int_0^inf (edge+u)^M e^{-gamma u} du,
// bounded via (edge+u)^M <= 2^M (edge^M + u^M).
double tail_moment_bound(double tol, double edge, int M, double gamma) {
    if (tol == 0.0) return 0.0;
    if (gamma <= 0.0) gamma = std::log(2.0);
    double fact = 1.0;
    for (int i = 2; i <= M; ++i) fact *= i;
    double e = std::max(1.0, std::abs(edge));
    return tol * std::pow(2.0, M) *
           (std::pow(e, M) / gamma + fact / std::pow(gamma, M + 1)) * 2.0;
}

}  // namespace

double binomial(int n, int k) {
    assert(n >= 0 && n < kMaxBinomial && k >= 0 && k <= n);
    return binomial_table()[n * kMaxBinomial + k];
}

double DyadicRational::value() const { return std::ldexp(static_cast<double>(num), -log2_den); }

std::vector<double> shift_expansion(std::span<const double> c, double dr) {
    // p(x) = sum c_j (x-a)^j; about a' = a + dr:  (x-a) = (x-a') + dr
    std::vector<double> out(c.size(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        double pw = 1.0;
        for (std::size_t m = 0; m <= j; ++m) {
            // contribution to out[j-m]: c_j * C(j, j-m) * dr^m
            out[j - m] += c[j] * binomial(static_cast<int>(j), static_cast<int>(m)) * pw;
            pw *= dr;
        }
    }
    return out;
}

PiecewisePolynomial::PiecewisePolynomial(int degree_bound, int grid_scale, std::int64_t theta_min,
                                         std::vector<std::vector<double>> pieces, double trunc_tol,
                                         double tail_decay_rate)
    : degree_(degree_bound),
      grid_scale_(grid_scale),
      theta_min_(theta_min),
      pieces_(std::move(pieces)),
      trunc_tol_(trunc_tol),
      tail_rate_(tail_decay_rate) {
    if (degree_ < 0) throw std::invalid_argument("PiecewisePolynomial: negative degree bound");
    if (pieces_.empty()) pieces_.push_back(std::vector<double>(degree_ + 1, 0.0));
    for (auto& p : pieces_)
        if (static_cast<int>(p.size()) != degree_ + 1)
            throw std::invalid_argument("PiecewisePolynomial: piece length != degree_bound + 1");
}

PiecewisePolynomial PiecewisePolynomial::zero(int degree_bound, int grid_scale) {
    return PiecewisePolynomial(degree_bound, grid_scale, 0,
                               {std::vector<double>(degree_bound + 1, 0.0)});
}

double PiecewisePolynomial::knot_spacing() const { return std::ldexp(1.0, -(grid_scale_ + 1)); }

std::span<const double> PiecewisePolynomial::piece(std::int64_t theta) const {
    static const std::vector<double> empty;
    if (!has_piece(theta)) return {empty.data(), 0};
    const auto& p = pieces_[static_cast<std::size_t>(theta - theta_min_)];
    return {p.data(), p.size()};
}

double PiecewisePolynomial::evaluate(double x) const {
    const double h = knot_spacing();
    const double t = std::floor(x / h);
    if (t < static_cast<double>(theta_min()) || t > static_cast<double>(theta_max())) return 0.0;
    const std::int64_t theta = static_cast<std::int64_t>(t);
    const auto& c = pieces_[static_cast<std::size_t>(theta - theta_min_)];
    const double xi = x - (theta + 1) * h;
    double v = 0.0;
    for (int j = degree_; j >= 0; --j) v = v * xi + c[j];
    return v;
}

double PiecewisePolynomial::derivative_at(double x, int order, bool from_left) const {
    const double h = knot_spacing();
    double t = std::floor(x / h);
    // on a knot, from_left selects the piece ending there
    if (from_left && x == t * h) t -= 1.0;
    if (t < static_cast<double>(theta_min()) || t > static_cast<double>(theta_max())) return 0.0;
    const std::int64_t theta = static_cast<std::int64_t>(t);
    const auto& c = pieces_[static_cast<std::size_t>(theta - theta_min_)];
    const double xi = x - (theta + 1) * h;
    double v = 0.0;
    for (int j = order; j <= degree_; ++j) {
        double fall = 1.0;
        for (int i = 0; i < order; ++i) fall *= (j - i);
        v += fall * c[j] * std::pow(xi, j - order);
    }
    return v;
}

std::vector<double> PiecewisePolynomial::expansion_at_knot(std::int64_t theta_knot,
                                                           bool from_left) const {
    const double h = knot_spacing();
    const std::int64_t theta = from_left ? theta_knot - 1 : theta_knot;
    if (!has_piece(theta)) return std::vector<double>(degree_ + 1, 0.0);
    const auto& c = pieces_[static_cast<std::size_t>(theta - theta_min_)];
    if (from_left) return c;                      // stored about its right knot already
    return shift_expansion(c, -h);                // right piece: shift from (theta+1)h to theta*h
}

double PiecewisePolynomial::leading_coefficient(std::int64_t theta) const {
    if (!has_piece(theta)) return 0.0;
    return pieces_[static_cast<std::size_t>(theta - theta_min_)][degree_];
}

double PiecewisePolynomial::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& p : pieces_)
        for (double c : p) m = std::max(m, std::abs(c));
    return m;
}

double PiecewisePolynomial::l1_bound() const {
    const double h = knot_spacing();
    double total = 0.0;
    for (const auto& p : pieces_) {
        double b = 0.0, pw = 1.0;
        for (double c : p) {
            b += std::abs(c) * pw;
            pw *= h;
        }
        total += b * h;
    }
    return total;
}

double PiecewisePolynomial::piece_sup(std::int64_t theta, int samples) const {
    if (!has_piece(theta)) return 0.0;
    const double h = knot_spacing();
    const auto& c = pieces_[static_cast<std::size_t>(theta - theta_min_)];
    double m = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double xi = -h + h * i / samples;
        double v = 0.0;
        for (int j = degree_; j >= 0; --j) v = v * xi + c[j];
        m = std::max(m, std::abs(v));
    }
    return m;
}

PiecewisePolynomial PiecewisePolynomial::translated(std::int64_t knot_steps) const {
    PiecewisePolynomial out = *this;
    out.theta_min_ += knot_steps;
    return out;
}

PiecewisePolynomial PiecewisePolynomial::refined_to(int new_grid_scale) const {
    if (new_grid_scale < grid_scale_)
        throw std::invalid_argument("refined_to: requested grid is coarser");
    if (new_grid_scale == grid_scale_) return *this;
    PiecewisePolynomial cur = *this;
    for (int s = grid_scale_; s < new_grid_scale; ++s) {
        const double h2 = std::ldexp(1.0, -(s + 2));  // spacing after this halving
        std::vector<std::vector<double>> np;
        np.reserve(cur.pieces_.size() * 2);
        for (const auto& c : cur.pieces_) {
            np.push_back(shift_expansion(c, -h2));  // left half, about old right knot - h2
            np.push_back(c);                        // right half keeps the expansion point
        }
        cur = PiecewisePolynomial(degree_, s + 1, cur.theta_min_ * 2, std::move(np), trunc_tol_,
                                  tail_rate_);
    }
    return cur;
}

PiecewisePolynomial PiecewisePolynomial::composed_dyadic(int dilation_log2,
                                                         DyadicRational shift) const {
    // x -> p(2^d x - s): first make the grid fine enough that s is a knot step.
    PiecewisePolynomial g = *this;
    std::int64_t steps = 0;
    if (shift.num != 0) {
        const int need = shift.log2_den - 1;  // s * 2^{k+1} integral  <=>  k >= log2_den - 1
        if (need > g.grid_scale_) g = g.refined_to(need);
        steps = shift.num << (g.grid_scale_ + 1 - shift.log2_den);
    }
    const int d = dilation_log2;
    std::vector<std::vector<double>> np;
    np.reserve(g.pieces_.size());
    for (const auto& c : g.pieces_) {
        std::vector<double> nc(c.size());
        for (std::size_t j = 0; j < c.size(); ++j) nc[j] = std::ldexp(c[j], d * static_cast<int>(j));
        np.push_back(std::move(nc));
    }
    return PiecewisePolynomial(degree_, g.grid_scale_ + d, g.theta_min_ + steps, std::move(np),
                               trunc_tol_, tail_rate_);
}

double PiecewisePolynomial::max_junction_defect(int max_order) const {
    double defect = 0.0;
    for (std::int64_t knot = theta_min() + 1; knot <= theta_max(); ++knot) {
        auto left = expansion_at_knot(knot, true);
        auto right = expansion_at_knot(knot, false);
        for (int j = 0; j <= std::min(max_order, degree_); ++j)
            defect = std::max(defect, std::abs(left[j] - right[j]));
    }
    return defect;
}

void PiecewisePolynomial::enforce_continuity(int max_order) {
    const double h = knot_spacing();
    for (std::int64_t knot = theta_min() + 1; knot <= theta_max(); ++knot) {
        auto left = expansion_at_knot(knot, true);
        auto right = expansion_at_knot(knot, false);
        std::vector<double> target(degree_ + 1);
        for (int j = 0; j <= degree_; ++j)
            target[j] = (j <= max_order) ? 0.5 * (left[j] + right[j]) : right[j];
        // write back: left piece is stored in this basis; right piece shifts back
        auto& lp = pieces_[static_cast<std::size_t>(knot - 1 - theta_min_)];
        for (int j = 0; j <= std::min(max_order, degree_); ++j) lp[j] = target[j];
        auto back = shift_expansion(target, h);
        auto& rp = pieces_[static_cast<std::size_t>(knot - theta_min_)];
        rp = std::move(back);
    }
}

PiecewisePolynomial linear_combine(std::span<const CombineTerm> terms) {
    if (terms.empty()) throw std::invalid_argument("linear_combine: no terms");
    std::vector<PiecewisePolynomial> transformed;
    transformed.reserve(terms.size());
    int degree = 0, finest = std::numeric_limits<int>::min();
    for (const auto& t : terms) {
        if (!t.pp) throw std::invalid_argument("linear_combine: null term");
        transformed.push_back(
            t.pp->composed_dyadic(t.dyadic_dilation, DyadicRational::integer(t.integer_shift)));
        degree = std::max(degree, t.pp->degree_bound());
        finest = std::max(finest, transformed.back().grid_scale());
    }
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (auto& g : transformed) {
        g = g.refined_to(finest);
        lo = std::min(lo, g.theta_min());
        hi = std::max(hi, g.theta_max());
    }
    const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    std::vector<KahanSum> acc(count * (degree + 1));
    double tol = 0.0, rate = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& g = transformed[i];
        const double w = terms[i].coefficient;
        tol += std::abs(w) * g.trunc_tol();
        rate = std::max(rate, g.tail_decay_rate());
        for (std::int64_t th = g.theta_min(); th <= g.theta_max(); ++th) {
            auto c = g.piece(th);
            auto* row = &acc[static_cast<std::size_t>(th - lo) * (degree + 1)];
            for (std::size_t j = 0; j < c.size(); ++j) row[j].add(w * c[j]);
        }
    }
    std::vector<std::vector<double>> pieces(count, std::vector<double>(degree + 1, 0.0));
    for (std::size_t i = 0; i < count; ++i)
        for (int j = 0; j <= degree; ++j) pieces[i][j] = acc[i * (degree + 1) + j].s;
    return PiecewisePolynomial(degree, finest, lo, std::move(pieces), tol, rate);
}

PiecewisePolynomial convolve(const PiecewisePolynomial& f, const PiecewisePolynomial& g,
                             int degree_cap) {
    const int d1 = f.degree_bound(), d2 = g.degree_bound();
    const int dr = d1 + d2 + 1;
    if (dr > degree_cap)
        throw std::invalid_argument("convolve: result degree " + std::to_string(dr) +
                                    " exceeds cap " + std::to_string(degree_cap));
    const int k = std::max(f.grid_scale(), g.grid_scale());
    const PiecewisePolynomial a = f.refined_to(k);
    const PiecewisePolynomial b = g.refined_to(k);
    const double h = a.knot_spacing();

    const std::int64_t lo = a.theta_min() + b.theta_min();
    const std::int64_t hi = a.theta_max() + b.theta_max() + 1;
    const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::vector<double>> pieces(count, std::vector<double>(dr + 1, 0.0));

    std::vector<double> A((d1 + d2 + 2) * (d2 + 1));  // A[s][r]: u^s w^r
    for (std::int64_t ta = a.theta_min(); ta <= a.theta_max(); ++ta) {
        auto P = a.piece(ta);
        bool pz = true;
        for (double v : P)
            if (v != 0.0) pz = false;
        if (pz) continue;
        for (std::int64_t tb = b.theta_min(); tb <= b.theta_max(); ++tb) {
            auto Q = b.piece(tb);
            bool qz = true;
            for (double v : Q)
                if (v != 0.0) qz = false;
            if (qz) continue;

            // A(u,w) = antiderivative_u of P(u) Q(w-u)
            std::fill(A.begin(), A.end(), 0.0);
            for (int i = 0; i <= d1; ++i) {
                if (P[i] == 0.0) continue;
                for (int j = 0; j <= d2; ++j) {
                    if (Q[j] == 0.0) continue;
                    for (int r = 0; r <= j; ++r) {
                        const int s = i + j - r + 1;
                        const double sign = ((j - r) % 2 == 0) ? 1.0 : -1.0;
                        A[s * (d2 + 1) + r] += P[i] * Q[j] * binomial(j, r) * sign / s;
                    }
                }
            }

            // falling result piece: theta_r = ta+tb+1, xi = w; I = -A(w, w)
            {
                auto& out = pieces[static_cast<std::size_t>(ta + tb + 1 - lo)];
                for (int s = 0; s <= d1 + d2 + 1; ++s)
                    for (int r = 0; r <= d2; ++r) {
                        const double v = A[s * (d2 + 1) + r];
                        if (v != 0.0) out[s + r] -= v;
                    }
            }
            // rising result piece: theta_r = ta+tb, xi = w + h;
            // I = A(xi, xi - h) - A(-h, xi - h)
            {
                auto& out = pieces[static_cast<std::size_t>(ta + tb - lo)];
                for (int s = 0; s <= d1 + d2 + 1; ++s)
                    for (int r = 0; r <= d2; ++r) {
                        const double v = A[s * (d2 + 1) + r];
                        if (v == 0.0) continue;
                        // v * xi^s * (xi-h)^r
                        for (int m = 0; m <= r; ++m) {
                            const double hb = binomial(r, m) * std::pow(-h, r - m);
                            out[s + m] += v * hb;
                        }
                        // minus v * (-h)^s * (xi-h)^r
                        const double hs = std::pow(-h, s);
                        for (int m = 0; m <= r; ++m) {
                            const double hb = binomial(r, m) * std::pow(-h, r - m);
                            out[m] -= v * hs * hb;
                        }
                    }
            }
        }
    }
    const double tol = f.trunc_tol() * g.l1_bound() + g.trunc_tol() * f.l1_bound() +
                       f.trunc_tol() * g.trunc_tol();
    return PiecewisePolynomial(dr, k, lo, std::move(pieces), tol,
                               std::max(f.tail_decay_rate(), g.tail_decay_rate()));
}

MomentValue moment_with_tail(const PiecewisePolynomial& pp, int M) {
    if (M < 0) throw std::invalid_argument("moment: M must be >= 0");
    const double h = pp.knot_spacing();
    KahanSum sum;
    for (std::int64_t th = pp.theta_min(); th <= pp.theta_max(); ++th) {
        auto c = pp.piece(th);
        const double xr = (th + 1) * h;
        // int (xr + xi)^M p(xi) dxi over [-h, 0]
        for (int m = M; m >= 0; --m) {
            double inner = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j)
                if (c[j] != 0.0) inner += c[j] * power_integral(static_cast<int>(j) + m, h);
            if (inner != 0.0) sum.add(binomial(M, m) * std::pow(xr, M - m) * inner);
        }
    }
    const double edge = std::max(std::abs(pp.support_left()), std::abs(pp.support_right()));
    return {sum.s, tail_moment_bound(pp.trunc_tol(), edge, M, pp.tail_decay_rate())};
}

double moment(const PiecewisePolynomial& pp, int M) { return moment_with_tail(pp, M).value; }

MomentValue inner_product_with_tail(const PiecewisePolynomial& f, const PiecewisePolynomial& g,
                                    DyadicRational shift, int dilation_log2) {
    PiecewisePolynomial gt = g.composed_dyadic(dilation_log2, shift);
    const int k = std::max(f.grid_scale(), gt.grid_scale());
    const PiecewisePolynomial a = f.refined_to(k);
    const PiecewisePolynomial b = gt.refined_to(k);
    const double h = a.knot_spacing();
    const std::int64_t lo = std::max(a.theta_min(), b.theta_min());
    const std::int64_t hi = std::min(a.theta_max(), b.theta_max());
    KahanSum sum;
    for (std::int64_t th = lo; th <= hi; ++th) {
        auto P = a.piece(th);
        auto Q = b.piece(th);
        for (std::size_t i = 0; i < P.size(); ++i) {
            if (P[i] == 0.0) continue;
            for (std::size_t j = 0; j < Q.size(); ++j) {
                if (Q[j] == 0.0) continue;
                sum.add(P[i] * Q[j] * power_integral(static_cast<int>(i + j), h));
            }
        }
    }
    const double tail = f.trunc_tol() * b.l1_bound() + b.trunc_tol() * a.l1_bound() +
                        f.trunc_tol() * b.trunc_tol();
    return {sum.s, tail};
}

double inner_product(const PiecewisePolynomial& f, const PiecewisePolynomial& g,
                     DyadicRational shift, int dilation_log2) {
    return inner_product_with_tail(f, g, shift, dilation_log2).value;
}

PiecewisePolynomial derivative(const PiecewisePolynomial& pp) {
    const int d = std::max(pp.degree_bound() - 1, 0);
    std::vector<std::vector<double>> pieces;
    pieces.reserve(pp.piece_count());
    for (std::int64_t th = pp.theta_min(); th <= pp.theta_max(); ++th) {
        auto c = pp.piece(th);
        std::vector<double> nc(d + 1, 0.0);
        for (int j = 1; j <= pp.degree_bound(); ++j) nc[j - 1] = j * c[j];
        pieces.push_back(std::move(nc));
    }
    return PiecewisePolynomial(d, pp.grid_scale(), pp.theta_min(), std::move(pieces),
                               pp.trunc_tol(), pp.tail_decay_rate());
}

PiecewisePolynomial antiderivative(const PiecewisePolynomial& pp) {
    const int d = pp.degree_bound() + 1;
    const double h = pp.knot_spacing();
    std::vector<std::vector<double>> pieces;
    pieces.reserve(pp.piece_count());
    double running = 0.0;  // value at the left edge of the current piece
    for (std::int64_t th = pp.theta_min(); th <= pp.theta_max(); ++th) {
        auto c = pp.piece(th);
        std::vector<double> nc(d + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) nc[j + 1] = c[j] / (j + 1);
        // value at xi = -h must equal running; nc[0] adjusts
        double at_left = 0.0;
        for (int j = d; j >= 1; --j) at_left = at_left * (-h) + nc[j];
        at_left *= -h;
        nc[0] = running - at_left;
        running = nc[0];  // value at xi = 0
        pieces.push_back(std::move(nc));
    }
    return PiecewisePolynomial(d, pp.grid_scale(), pp.theta_min(), std::move(pieces),
                               pp.trunc_tol() + std::abs(running), pp.tail_decay_rate());
}

}  // namespace splinelab
