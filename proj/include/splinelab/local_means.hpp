#ifndef SPLINELAB_LOCAL_MEANS_HPP
#define SPLINELAB_LOCAL_MEANS_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "splinelab/bump_profile.hpp"
#include "splinelab/piecewise_polynomial.hpp"

namespace splinelab {

// Uniformly sampled function with cubic interpolation; zero outside the grid.
struct SampledFunction {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> v;

    double x1() const { return x0 + dx * (static_cast<double>(v.size()) - 1); }
    double eval(double x) const;
    double sup() const;
};

// R_delta(z) = int K(t) U(2^delta (z - t)) dt, tabulated. arg_scale maps the
// caller's z to the stored coordinate (z * arg_scale), so coarse-unit tables
// stay small.
struct ResponseTable {
    SampledFunction f;
    double arg_scale = 1.0;
    double extent = 0.0;  // |z| beyond which the table is zero (caller coords)
    double sup = 0.0;

    double eval(double z) const { return f.eval(z * arg_scale); }
};

// One-sided lattice sum T(z) = sum_{i>=0} R(z - i*spacing), periodic in z once
// z clears the support; finite sums come from two lookups.
class LatticeSumTable {
public:
    LatticeSumTable(const ResponseTable& R, double spacing);
    // sum_{i=0}^{count-1} R(z - i*spacing)
    double window_sum(double z, std::int64_t count) const;

private:
    double one_sided(double z) const;
    SampledFunction t_;   // stored in R's internal coordinate
    double arg_scale_;
    double spacing_int_;  // spacing in internal coordinate
    double zmax_;         // internal coord beyond which T is periodic
};

// Either a smooth bump or a piecewise polynomial can sit on each side of a
// response integral.
struct ProfileHandle {
    const BumpProfile* bump = nullptr;
    const PiecewisePolynomial* pp = nullptr;
    bool is_pp() const { return pp != nullptr; }
    double support_left() const { return is_pp() ? pp->support_left() : bump->support_left(); }
    double support_right() const { return is_pp() ? pp->support_right() : bump->support_right(); }
    double feature_scale() const;
    double eval(double x) const { return is_pp() ? pp->evaluate(x) : bump->value(x); }
};

// Builds int K(t) U(2^delta (z - t)) dt on a grid sized by both feature scales.
ResponseTable build_response_table(const ProfileHandle& kernel, const ProfileHandle& unit,
                                   int delta, int points_per_feature = 32);

// Partial moments of a bump: Q_j^<(y) = int_{v<y} p(v) (v-y)^j dv, plus the
// raw moments, so one-sided pieces of any polynomial pairing come out in
// closed form.
struct PartialMoments {
    double radius = 0.0;
    int jmax = 0;
    std::vector<SampledFunction> q_lt;
    std::vector<double> raw_moment;  // int p(v) v^m dv
    std::vector<double> q_sup;

    double q_less(int j, double y) const;
    double centered_full(int j, double y) const;  // int p(v) (v-y)^j dv
    double q_greater(int j, double y) const { return centered_full(j, y) - q_less(j, y); }
    bool has_bulk(int degree) const;  // any raw moment 0..degree above noise
};

PartialMoments build_partial_moments(const BumpProfile& p, int jmax);

// Response of a bump against a piecewise polynomial when the pp's knot
// spacing dwarfs the bump window: a sum of knot-localized terms given by the
// pp's one-sided expansions and the bump's partial moments. Covers both
// orientations:
//   pp_is_unit:  R(z) = int K(v) P(2^d (z - v)) dv      (norm responses)
//   !pp_is_unit: R(z) = int P(y) U(2^d (y - z)) dy      (pairing responses)
class KnotLocalResponse {
public:
    KnotLocalResponse(const PiecewisePolynomial& pp, std::shared_ptr<const PartialMoments> pm,
                      int delta, bool pp_is_unit);
    double eval(double z) const;
    double extent() const { return extent_; }
    double sup() const { return sup_; }
    // significant knots, z-positions where the response lives, for window walks
    const std::vector<std::pair<double, double>>& knot_centers() const { return centers_; }
    double bump_reach() const { return reach_; }

private:
    double knot_term(std::size_t idx, double split) const;
    double bulk_term(double z) const;
    bool pp_is_unit_;
    double sc_;      // 2^delta
    double h_;       // pp knot spacing
    std::int64_t theta_lo_ = 0;
    int degree_ = 0;
    std::vector<double> left_, right_;  // (deg+1) per knot, expansions about the knot
    std::vector<double> piece_coeffs_;  // bulk terms picked up from raw moments
    std::vector<std::pair<double, double>> centers_;  // (z position, local sup)
    std::shared_ptr<const PartialMoments> pm_;
    bool has_bulk_ = false;
    double reach_ = 0.0;  // half-width of each knot-local piece in z
    double extent_ = 0.0, sup_ = 0.0;
};

// A response is either tabulated or knot-localized.
struct Response {
    std::unique_ptr<ResponseTable> table;
    std::unique_ptr<KnotLocalResponse> knot;
    double extent = 0.0;
    double sup = 0.0;
    double eval(double z) const { return table ? table->eval(z) : knot->eval(z); }
};

Response build_response(const ProfileHandle& kernel, const ProfileHandle& unit, int delta,
                        std::shared_ptr<const PartialMoments> bump_pm, int points_per_feature = 32);

// Profile registry + response/lattice caches shared by the norm estimator and
// the coefficient pipeline. Read-mostly; inserts take the writer lock.
class LocalMeansContext {
public:
    LocalMeansContext(int order, MollifierPair moll);

    int order() const { return order_; }
    const BumpProfile& phi() const { return moll_.phi; }
    const BumpProfile& phi0() const { return moll_.phi0; }

    int register_bump(const std::string& name, BumpProfile profile);
    int register_pp(const std::string& name, PiecewisePolynomial pp);
    int profile_id(const std::string& name) const;
    bool has_profile(const std::string& name) const;
    std::string profile_name(int id) const;
    ProfileHandle handle(int id) const;

    // phi * U(2^delta .) responses, cached by (unit id, delta).
    const Response& kernel_response(int unit_id, int delta) const;
    // int U(2^delta (y - tau)) P(y) dy pairing responses, cached; P is a
    // registered pp (the wavelet).
    const Response& pairing_response(int pp_id, int unit_id, int delta) const;
    const LatticeSumTable& lattice(const ResponseTable& R, double spacing) const;

    int scale_offset_cap() const { return scale_offset_cap_; }
    void set_scale_offset_cap(int cap) { scale_offset_cap_ = cap; }

private:
    int order_;
    MollifierPair moll_;
    struct Entry {
        std::string name;
        std::optional<BumpProfile> bump;
        std::optional<PiecewisePolynomial> pp;
        std::shared_ptr<const PartialMoments> pm;  // built lazily for bumps
    };
    std::shared_ptr<const PartialMoments> bump_moments(int id) const;
    std::vector<std::unique_ptr<Entry>> profiles_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<Response>> kernel_cache_;
    mutable std::map<std::tuple<int, int, int>, std::unique_ptr<Response>> pairing_cache_;
    mutable std::map<std::pair<const ResponseTable*, double>, std::unique_ptr<LatticeSumTable>>
        lattice_cache_;
    std::shared_ptr<const PartialMoments> phi_pm_;
    int scale_offset_cap_ = 24;
};

// phi * target(2^{scale_offset} .) on a reference grid (the cached response).
const Response& convolve_profile(LocalMeansContext& ctx, int target_id, int scale_offset);

}  // namespace splinelab

#endif
