#include "splinelab/local_means.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

namespace splinelab {

namespace {

// 10-point Gauss-Legendre on [-1, 1]
constexpr int kGauss = 10;
constexpr double kGx[kGauss] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                                -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                                0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                                0.9739065285171717};
constexpr double kGw[kGauss] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
                                0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
                                0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                0.0666713443086881};

}  // namespace

double SampledFunction::eval(double x) const {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    if (n < 4) return 0.0;
    const double t = (x - x0) / dx;
    if (t <= 0.0 || t >= static_cast<double>(n - 1)) return 0.0;
    const std::ptrdiff_t i =
        std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(t), 1, n - 3);
    const double u = t - static_cast<double>(i);
    // Catmull-Rom through v[i-1..i+2]
    const double p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
    const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    const double c = -0.5 * p0 + 0.5 * p2;
    return ((a * u + b) * u + c) * u + p1;
}

double SampledFunction::sup() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double ProfileHandle::feature_scale() const {
    if (is_pp()) return pp->knot_spacing() * 0.5;
    return bump->radius() / (3.0 + 2.0 * bump->derivative_order());
}

namespace {

// Composite Gauss over [lo, hi] with cuts at the given knots and panels no
// longer than panel_max.
double panel_integrate(double lo, double hi, const std::vector<double>& knots, double panel_max,
                       const std::function<double(double)>& f) {
    if (hi <= lo) return 0.0;
    std::vector<double> cuts{lo, hi};
    for (double k : knots)
        if (k > lo && k < hi) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c], b = cuts[c + 1];
        if (b - a < 1e-300) continue;
        const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / panel_max)));
        for (int s = 0; s < sub; ++s) {
            const double pa = a + (b - a) * s / sub;
            const double pb = a + (b - a) * (s + 1) / sub;
            const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
            double g = 0.0;
            for (int q = 0; q < kGauss; ++q) g += kGw[q] * f(mid + half * kGx[q]);
            acc += g * half;
        }
    }
    return acc;
}

std::vector<double> pp_knots_in(const PiecewisePolynomial& pp, double lo, double hi, double scale,
                                double offset) {
    // positions offset + scale * (knot) for knots of pp inside [lo, hi]
    std::vector<double> out;
    const double h = pp.knot_spacing();
    for (std::int64_t th = pp.theta_min(); th <= pp.theta_max() + 1; ++th) {
        const double x = offset + scale * (static_cast<double>(th) * h);
        if (x > lo && x < hi) out.push_back(x);
    }
    return out;
}

}  // namespace

ResponseTable build_response_table(const ProfileHandle& kernel, const ProfileHandle& unit,
                                   int delta, int points_per_feature) {
    const double sc = std::ldexp(1.0, delta);  // unit argument scale
    const double unit_ext = std::max(std::abs(unit.support_left()), std::abs(unit.support_right()));
    const double kern_lo = kernel.support_left(), kern_hi = kernel.support_right();
    const double kern_ext = std::max(std::abs(kern_lo), std::abs(kern_hi));

    // z-features of the response: a smooth kernel blurs a finer unit up to the
    // kernel's own scale; a pp kernel keeps features down to the unit width.
    const double unit_feat_z = unit.feature_scale() / sc;
    // two smooth bumps blur each other up to the coarser scale; a pp on either
    // side keeps (mollified) knot features at the finer scale
    const double feat = (!kernel.is_pp() && !unit.is_pp())
                            ? std::max(kernel.feature_scale(), unit_feat_z)
                            : std::min(kernel.feature_scale(), unit_feat_z);
    const double extent = kern_ext + unit_ext / sc;

    const double arg_scale = std::min(1.0, sc);
    const double w_extent = extent * arg_scale;
    const double dw = std::max(feat * arg_scale / points_per_feature, 1e-300);
    const std::size_t npts = static_cast<std::size_t>(std::ceil(2.0 * w_extent / dw)) + 3;
    if (npts > (1u << 24))
        throw std::runtime_error("build_response_table: table would be too large");

    ResponseTable out;
    out.arg_scale = arg_scale;
    out.extent = extent;
    out.f.x0 = -w_extent;
    out.f.dx = dw;
    out.f.v.resize(npts);

    // integrate over whichever side is finer
    const bool unit_side = unit_feat_z < kernel.feature_scale();
    for (std::size_t ip = 0; ip < npts; ++ip) {
        const double z = (out.f.x0 + dw * static_cast<double>(ip)) / arg_scale;
        if (unit_side) {
            // R(z) = 2^-d int U(u) K(z - 2^-d u) du over the unit's support
            const double lo = std::max(unit.support_left(), sc * (z - kern_hi));
            const double hi = std::min(unit.support_right(), sc * (z - kern_lo));
            std::vector<double> knots;
            if (unit.is_pp()) knots = pp_knots_in(*unit.pp, lo, hi, 1.0, 0.0);
            const double panel_max =
                std::min(unit.feature_scale(), kernel.feature_scale() * sc) * 0.75;
            out.f.v[ip] = panel_integrate(lo, hi, knots, panel_max, [&](double u) {
                              return unit.eval(u) * kernel.eval(z - u / sc);
                          }) /
                          sc;
        } else {
            // R(z) = int K(t) U(2^d (z - t)) dt over the kernel's support
            const double lo = std::max(kern_lo, z - unit.support_right() / sc);
            const double hi = std::min(kern_hi, z - unit.support_left() / sc);
            std::vector<double> knots;
            if (kernel.is_pp()) knots = pp_knots_in(*kernel.pp, lo, hi, 1.0, 0.0);
            if (unit.is_pp()) {
                auto uk = pp_knots_in(*unit.pp, sc * z - sc * hi, sc * z - sc * lo, 1.0, 0.0);
                for (double k : uk) knots.push_back(z - k / sc);
            }
            const double panel_max = std::min(kernel.feature_scale(), unit_feat_z) * 0.75;
            out.f.v[ip] = panel_integrate(lo, hi, knots, panel_max, [&](double t) {
                return kernel.eval(t) * unit.eval(sc * (z - t));
            });
        }
    }
    out.sup = out.f.sup();
    return out;
}

double PartialMoments::q_less(int j, double y) const {
    if (y <= -radius) return 0.0;
    if (y >= radius) return centered_full(j, y);
    return q_lt[static_cast<std::size_t>(j)].eval(y);
}

double PartialMoments::centered_full(int j, double y) const {
    // int p(v) (v-y)^j dv = sum_m C(j,m) (-y)^{j-m} raw_moment[m]
    double acc = 0.0;
    for (int m = 0; m <= j; ++m)
        acc += binomial(j, m) * std::pow(-y, j - m) * raw_moment[static_cast<std::size_t>(m)];
    return acc;
}

bool PartialMoments::has_bulk(int degree) const {
    double scale = 0.0;
    for (double s : q_sup) scale = std::max(scale, s);
    for (int m = 0; m <= std::min(degree, jmax); ++m)
        if (std::abs(raw_moment[static_cast<std::size_t>(m)]) > 1e-12 * std::max(1.0, scale))
            return true;
    return false;
}

PartialMoments build_partial_moments(const BumpProfile& p, int jmax) {
    PartialMoments out;
    out.radius = p.radius();
    out.jmax = jmax;
    const auto& s = p.samples();
    const std::size_t n = s.size();
    const double dv = 2.0 * p.radius() / static_cast<double>(n - 1);
    // cumulative raw moments Cum_m(y_i) = int_{v<y_i} p(v) v^m dv (trapezoid)
    std::vector<std::vector<double>> cum(static_cast<std::size_t>(jmax) + 1,
                                         std::vector<double>(n, 0.0));
    for (int m = 0; m <= jmax; ++m) {
        double acc = 0.0;
        double prev = 0.0;  // p(v0) v0^m with v0 = -radius (zero at the edge)
        for (std::size_t i = 1; i < n; ++i) {
            const double v = -p.radius() + dv * static_cast<double>(i);
            const double cur = s[i] * std::pow(v, m);
            acc += 0.5 * (prev + cur) * dv;
            cum[static_cast<std::size_t>(m)][i] = acc;
            prev = cur;
        }
    }
    out.raw_moment.resize(static_cast<std::size_t>(jmax) + 1);
    for (int m = 0; m <= jmax; ++m) out.raw_moment[static_cast<std::size_t>(m)] = cum[m].back();
    out.q_lt.resize(static_cast<std::size_t>(jmax) + 1);
    out.q_sup.resize(static_cast<std::size_t>(jmax) + 1, 0.0);
    for (int j = 0; j <= jmax; ++j) {
        auto& table = out.q_lt[static_cast<std::size_t>(j)];
        table.x0 = -p.radius();
        table.dx = dv;
        table.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = -p.radius() + dv * static_cast<double>(i);
            double acc = 0.0;
            for (int m = 0; m <= j; ++m)
                acc += binomial(j, m) * std::pow(-y, j - m) * cum[static_cast<std::size_t>(m)][i];
            table.v[i] = acc;
            out.q_sup[static_cast<std::size_t>(j)] =
                std::max(out.q_sup[static_cast<std::size_t>(j)], std::abs(acc));
        }
    }
    return out;
}

KnotLocalResponse::KnotLocalResponse(const PiecewisePolynomial& pp,
                                     std::shared_ptr<const PartialMoments> pm, int delta,
                                     bool pp_is_unit)
    : pp_is_unit_(pp_is_unit),
      sc_(std::ldexp(1.0, delta)),
      h_(pp.knot_spacing()),
      degree_(pp.degree_bound()),
      pm_(std::move(pm)) {
    theta_lo_ = pp.theta_min();
    const std::int64_t nknots = pp.theta_max() + 2 - theta_lo_;
    left_.assign(static_cast<std::size_t>(nknots) * (degree_ + 1), 0.0);
    right_.assign(static_cast<std::size_t>(nknots) * (degree_ + 1), 0.0);
    for (std::int64_t knot = theta_lo_; knot <= pp.theta_max() + 1; ++knot) {
        auto l = pp.expansion_at_knot(knot, true);
        auto r = pp.expansion_at_knot(knot, false);
        const std::size_t base = static_cast<std::size_t>(knot - theta_lo_) * (degree_ + 1);
        for (int j = 0; j <= degree_; ++j) {
            left_[base + j] = l[static_cast<std::size_t>(j)];
            right_[base + j] = r[static_cast<std::size_t>(j)];
        }
    }
    has_bulk_ = pm_->has_bulk(degree_);
    if (has_bulk_) {
        piece_coeffs_.reserve(static_cast<std::size_t>(pp.piece_count()) * (degree_ + 1));
        for (std::int64_t th = pp.theta_min(); th <= pp.theta_max(); ++th) {
            auto c = pp.piece(th);
            for (int j = 0; j <= degree_; ++j) piece_coeffs_.push_back(c[static_cast<std::size_t>(j)]);
        }
    }

    // geometry: pp knot position kappa*h maps to evaluation coordinate
    // kappa*h/sc (pp_is_unit) or kappa*h (pairing); the bump reaches
    // pm radius (pp_is_unit) or pm radius / sc (pairing) around it
    reach_ = pp_is_unit_ ? pm_->radius : pm_->radius / sc_;
    const double pos_scale = pp_is_unit_ ? h_ / sc_ : h_;
    extent_ = std::max(std::abs(static_cast<double>(theta_lo_)),
                       std::abs(static_cast<double>(pp.theta_max() + 1))) *
                  pos_scale +
              reach_;
    sup_ = 0.0;
    for (std::int64_t knot = theta_lo_; knot <= pp.theta_max() + 1; ++knot) {
        const double zc = static_cast<double>(knot) * pos_scale;
        double local = 0.0;
        for (int i = -4; i <= 4; ++i) {
            const double v = std::abs(eval(zc + reach_ * i / 4.0));
            local = std::max(local, v);
        }
        sup_ = std::max(sup_, local);
        if (local > 0.0) centers_.push_back({zc, local});
    }
}

double KnotLocalResponse::knot_term(std::size_t idx, double split) const {
    // split: position inside the bump where the pp switches pieces
    const std::size_t base = idx * (degree_ + 1);
    double acc = 0.0;
    if (pp_is_unit_) {
        // R(z) = int K(v) P(2^d (z-v)) dv; v < split puts the argument right of
        // the knot
        double scj = 1.0;  // (-sc)^j
        for (int j = 0; j <= degree_; ++j) {
            const double qa = pm_->q_less(j, split);
            const double qb = pm_->q_greater(j, split);
            acc += scj * (right_[base + j] * qa + left_[base + j] * qb);
            scj *= -sc_;
        }
    } else {
        // W(tau) = int P(y) U(2^d (y - tau)) dy; u < split is left of the knot
        double scj = 1.0 / sc_;  // 2^{-d (j+1)}
        for (int j = 0; j <= degree_; ++j) {
            const double qa = pm_->q_less(j, split);
            const double qb = pm_->q_greater(j, split);
            acc += scj * (left_[base + j] * qa + right_[base + j] * qb);
            scj /= sc_;
        }
    }
    return acc;
}

double KnotLocalResponse::bulk_term(double z) const {
    // full-moment contribution of the piece containing the bump window
    const double y = pp_is_unit_ ? sc_ * z : z;  // pp coordinate
    const double th = std::floor(y / h_);
    const std::int64_t theta = static_cast<std::int64_t>(th);
    const std::int64_t idx = theta - theta_lo_;
    const std::int64_t npieces =
        static_cast<std::int64_t>(piece_coeffs_.size()) / (degree_ + 1);
    if (idx < 0 || idx >= npieces) return 0.0;
    const double* c = &piece_coeffs_[static_cast<std::size_t>(idx) * (degree_ + 1)];
    const double xi0 = y - (theta + 1) * h_;  // offset of the window center
    // int K(v) P(...) dv = sum_j c_j sum_m C(j,m) xi0^{j-m} s^m M_m
    // with s = -sc (pp_is_unit) or 2^{-d} with an overall 1/sc (pairing)
    const double s = pp_is_unit_ ? -sc_ : 1.0 / sc_;
    const double outer = pp_is_unit_ ? 1.0 : 1.0 / sc_;
    double acc = 0.0;
    for (int j = 0; j <= degree_; ++j) {
        if (c[j] == 0.0) continue;
        double term = 0.0;
        for (int m = 0; m <= j; ++m)
            term += binomial(j, m) * std::pow(xi0, j - m) * std::pow(s, m) *
                    pm_->raw_moment[static_cast<std::size_t>(m)];
        acc += c[j] * term;
    }
    return outer * acc;
}

double KnotLocalResponse::eval(double z) const {
    const double pos_scale = pp_is_unit_ ? h_ / sc_ : h_;
    const double kf = z / pos_scale;
    const std::int64_t k0 = static_cast<std::int64_t>(std::floor(kf));
    const std::int64_t nknots =
        static_cast<std::int64_t>(left_.size()) / (degree_ + 1) + theta_lo_ - 1;
    double acc = 0.0;
    bool near_knot = false;
    for (std::int64_t knot = k0; knot <= k0 + 1; ++knot) {
        if (knot < theta_lo_ || knot > nknots) continue;
        const double zc = static_cast<double>(knot) * pos_scale;
        if (std::abs(z - zc) > reach_) continue;
        near_knot = true;
        // split coordinate inside the bump window
        double split;
        if (pp_is_unit_) {
            split = z - zc;  // v* = z - kappa/sc
        } else {
            split = sc_ * (zc - z);  // u* = sc (kappa - tau)
        }
        acc += knot_term(static_cast<std::size_t>(knot - theta_lo_), split);
    }
    if (has_bulk_ && !near_knot) acc += bulk_term(z);
    return acc;
}

LatticeSumTable::LatticeSumTable(const ResponseTable& R, double spacing) {
    arg_scale_ = R.arg_scale;
    spacing_int_ = spacing * R.arg_scale;
    const double E = R.extent * R.arg_scale;
    // commensurate grid: step divides the spacing exactly
    const std::int64_t J = std::max<std::int64_t>(
        8, static_cast<std::int64_t>(std::ceil(spacing_int_ / R.f.dx)));
    const double step = spacing_int_ / static_cast<double>(J);
    const double lo = -E - 2.0 * spacing_int_;
    const double hi = E + 2.0 * spacing_int_;
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
    if (n > (1u << 27)) throw std::runtime_error("LatticeSumTable: grid too large");
    t_.x0 = lo;
    t_.dx = step;
    t_.v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = lo + step * static_cast<double>(i);
        const double r = R.f.eval(z);
        const double prev = (static_cast<std::int64_t>(i) - J >= 0)
                                ? t_.v[i - static_cast<std::size_t>(J)]
                                : 0.0;
        t_.v[i] = r + prev;
    }
    zmax_ = hi - spacing_int_;
}

double LatticeSumTable::one_sided(double z) const {
    double w = z * 1.0;  // already internal
    if (w <= t_.x0) return 0.0;
    if (w > zmax_) {
        const double per = spacing_int_;
        const double over = std::ceil((w - zmax_) / per);
        w -= over * per;  // T is periodic past the support
    }
    return t_.eval(w);
}

double LatticeSumTable::window_sum(double z, std::int64_t count) const {
    if (count <= 0) return 0.0;
    const double w = z * arg_scale_;
    return one_sided(w) - one_sided(w - static_cast<double>(count) * spacing_int_);
}

Response build_response(const ProfileHandle& kernel, const ProfileHandle& unit, int delta,
                        std::shared_ptr<const PartialMoments> bump_pm, int points_per_feature) {
    const double sc = std::ldexp(1.0, delta);
    Response out;
    if (unit.is_pp() && !kernel.is_pp() &&
        unit.pp->knot_spacing() / sc >= 8.0 * kernel.bump->radius()) {
        out.knot = std::make_unique<KnotLocalResponse>(*unit.pp, std::move(bump_pm), delta, true);
        out.extent = out.knot->extent();
        out.sup = out.knot->sup();
        return out;
    }
    if (kernel.is_pp() && !unit.is_pp() &&
        kernel.pp->knot_spacing() >= 8.0 * unit.bump->radius() / sc) {
        out.knot = std::make_unique<KnotLocalResponse>(*kernel.pp, std::move(bump_pm), delta, false);
        out.extent = out.knot->extent();
        out.sup = out.knot->sup();
        return out;
    }
    out.table =
        std::make_unique<ResponseTable>(build_response_table(kernel, unit, delta, points_per_feature));
    out.extent = out.table->extent;
    out.sup = out.table->sup;
    return out;
}

LocalMeansContext::LocalMeansContext(int order, MollifierPair moll)
    : order_(order), moll_(std::move(moll)) {
    phi_pm_ = std::make_shared<const PartialMoments>(build_partial_moments(moll_.phi, 9));
}

int LocalMeansContext::register_bump(const std::string& name, BumpProfile profile) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto e = std::make_unique<Entry>();
    e->name = name;
    e->bump = std::move(profile);
    profiles_.push_back(std::move(e));
    return static_cast<int>(profiles_.size()) - 1;
}

int LocalMeansContext::register_pp(const std::string& name, PiecewisePolynomial pp) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto e = std::make_unique<Entry>();
    e->name = name;
    e->pp = std::move(pp);
    profiles_.push_back(std::move(e));
    return static_cast<int>(profiles_.size()) - 1;
}

int LocalMeansContext::profile_id(const std::string& name) const {
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t i = 0; i < profiles_.size(); ++i)
        if (profiles_[i]->name == name) return static_cast<int>(i);
    throw std::invalid_argument("LocalMeansContext: unknown profile '" + name + "'");
}

bool LocalMeansContext::has_profile(const std::string& name) const {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& e : profiles_)
        if (e->name == name) return true;
    return false;
}

std::string LocalMeansContext::profile_name(int id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return profiles_.at(static_cast<std::size_t>(id))->name;
}

ProfileHandle LocalMeansContext::handle(int id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto& e = *profiles_.at(static_cast<std::size_t>(id));
    ProfileHandle h;
    if (e.bump) h.bump = &*e.bump;
    if (e.pp) h.pp = &*e.pp;
    return h;
}

std::shared_ptr<const PartialMoments> LocalMeansContext::bump_moments(int id) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& e = *profiles_.at(static_cast<std::size_t>(id));
        if (!e.bump) throw std::invalid_argument("bump_moments: profile is not a bump");
        if (e.pm) return e.pm;
    }
    auto pm = std::make_shared<const PartialMoments>(
        build_partial_moments(*profiles_.at(static_cast<std::size_t>(id))->bump, 9));
    std::lock_guard<std::mutex> lock(mutex_);
    auto& e = *profiles_.at(static_cast<std::size_t>(id));
    if (!e.pm) e.pm = pm;
    return e.pm;
}

const Response& LocalMeansContext::kernel_response(int unit_id, int delta) const {
    if (std::abs(delta) > scale_offset_cap_)
        throw std::invalid_argument("kernel_response: scale offset exceeds cap");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = kernel_cache_.find({unit_id, delta});
        if (it != kernel_cache_.end()) return *it->second;
    }
    ProfileHandle kern;
    kern.bump = &moll_.phi;
    auto resp = std::make_unique<Response>(build_response(kern, handle(unit_id), delta, phi_pm_));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = kernel_cache_.try_emplace({unit_id, delta}, std::move(resp));
    return *it->second;
}

const Response& LocalMeansContext::pairing_response(int pp_id, int unit_id, int delta) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = pairing_cache_.find({pp_id, unit_id, delta});
        if (it != pairing_cache_.end()) return *it->second;
    }
    auto pm = bump_moments(unit_id);
    auto resp = std::make_unique<Response>(
        build_response(handle(pp_id), handle(unit_id), delta, std::move(pm)));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = pairing_cache_.try_emplace({pp_id, unit_id, delta}, std::move(resp));
    return *it->second;
}

const LatticeSumTable& LocalMeansContext::lattice(const ResponseTable& R, double spacing) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = lattice_cache_.find({&R, spacing});
        if (it != lattice_cache_.end()) return *it->second;
    }
    auto table = std::make_unique<LatticeSumTable>(R, spacing);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = lattice_cache_.try_emplace({&R, spacing}, std::move(table));
    return *it->second;
}

const Response& convolve_profile(LocalMeansContext& ctx, int target_id, int scale_offset) {
    return ctx.kernel_response(target_id, scale_offset);
}

}  // namespace splinelab
