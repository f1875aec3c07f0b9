#include "splinelab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "splinelab/fft.hpp"
#include "splinelab/parallel.hpp"

namespace splinelab {

namespace {

double abs_pow(double u, double q) {
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;
    if (q == 2.0) return a * a;
    if (q == 1.5) return a * std::sqrt(a);
    return std::pow(a, q);
}

struct Interval {
    double lo, hi;
};

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
    if (v.empty()) return v;
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out{v.front()};
    for (const auto& iv : v) {
        if (iv.lo <= out.back().hi + 1e-12)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

// One (group, k) pair prepared for evaluation.
struct ActivePair {
    const Response* R = nullptr;
    const LatticeSumTable* lattice = nullptr;  // set when the window is dense
    // plain groups
    double center0 = 0.0, stride = 0.0;
    std::int64_t count = 0;
    double amplitude = 0.0;
    // varying groups, with positions mapped to the z = 2^k x coordinate
    const VaryingTermGroup* varying = nullptr;
    double pos0z = 0.0, stepz = 0.0;
};

struct ScalePlan {
    int k;
    double weight;                   // 2^{ksq}
    std::vector<ActivePair> pairs;
    std::vector<Interval> active;    // x-intervals where u_k can be nonzero
};

double eval_pair(const ActivePair& pr, double zk /* = 2^k x */) {
    if (pr.varying) {
        const auto& g = *pr.varying;
        const double E = pr.R->extent;
        const double lo = (zk - E - pr.pos0z) / pr.stepz;
        const double hi = (zk + E - pr.pos0z) / pr.stepz;
        std::int64_t i0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(lo)));
        std::int64_t i1 = std::min<std::int64_t>(static_cast<std::int64_t>(g.amps.size()) - 1,
                                                 static_cast<std::int64_t>(std::floor(hi)));
        double acc = 0.0;
        for (std::int64_t i = i0; i <= i1; ++i)
            acc += g.amps[static_cast<std::size_t>(i)] *
                   pr.R->eval(zk - (pr.pos0z + static_cast<double>(i) * pr.stepz));
        return acc;
    }
    const double z = zk;  // z relative to center0 handled by caller offset
    if (pr.count == 1) return pr.amplitude * pr.R->eval(z);
    if (pr.lattice) return pr.amplitude * pr.lattice->window_sum(z, pr.count);
    const double E = pr.R->extent;
    const double lo = (z - E) / pr.stride;
    const double hi = (z + E) / pr.stride;
    std::int64_t i0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(lo)));
    std::int64_t i1 = std::min<std::int64_t>(pr.count - 1, static_cast<std::int64_t>(std::floor(hi)));
    double acc = 0.0;
    for (std::int64_t i = i0; i <= i1; ++i)
        acc += pr.R->eval(z - static_cast<double>(i) * pr.stride);
    return pr.amplitude * acc;
}

// u_k(x): zk offsets differ per pair (group centers), so shift per pair.
double eval_scale(const ScalePlan& plan, double x, double two_k) {
    double u = 0.0;
    for (const auto& pr : plan.pairs)
        u += pr.varying ? eval_pair(pr, two_k * x) : eval_pair(pr, two_k * (x - pr.center0));
    return u;
}

}  // namespace

NormResult fspq_norm(const std::vector<TermGroup>& groups,
                     const std::vector<VaryingTermGroup>& varying, double s, double p, double q,
                     int k_min, int k_max, const LocalMeansContext& ctx,
                     const QuadratureConfig& quad, int threads) {
    if (k_max < k_min) throw std::invalid_argument("fspq_norm: empty k range");
    if (p <= 1.0 || q <= 1.0 || !std::isfinite(p) || !std::isfinite(q))
        throw std::invalid_argument("fspq_norm: need 1 < p, q < infinity");

    NormResult res;
    res.k_min = k_min;
    res.k_max = k_max;

    // plan: per scale, active pairs and their x-intervals (per-atom when sparse)
    std::vector<ScalePlan> plans;
    double dropped = 0.0;
    double max_pair_sup = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        ScalePlan plan;
        plan.k = k;
        plan.weight = std::pow(2.0, k * s * q);
        const double two_k = std::ldexp(1.0, k);
        std::vector<Interval> act;
        for (const auto& g : groups) {
            const int delta = g.scale - k;
            if (std::abs(delta) > ctx.scale_offset_cap()) {
                dropped += std::abs(g.amplitude);
                continue;
            }
            const Response& R = ctx.kernel_response(g.profile_id, delta);
            const double pair_sup = std::abs(g.amplitude) * R.sup;
            max_pair_sup = std::max(max_pair_sup, pair_sup);
            if (pair_sup < quad.activation_cutoff) {
                dropped += pair_sup;
                continue;
            }
            ActivePair pr;
            pr.R = &R;
            pr.center0 = g.center0;
            pr.count = g.count;
            pr.amplitude = g.amplitude;
            const double strideZ = two_k * g.stride;
            if (g.count >= 32 && strideZ < R.extent && R.table)
                pr.lattice = &ctx.lattice(*R.table, strideZ);
            pr.stride = strideZ;
            plan.pairs.push_back(pr);
            const double reach = R.extent / two_k;
            if (g.count > 1 && g.stride > 4.0 * reach && g.count <= (std::int64_t(1) << 17)) {
                for (std::int64_t i = 0; i < g.count; ++i) {
                    const double c = g.center0 + g.stride * static_cast<double>(i);
                    act.push_back({c - reach, c + reach});
                }
            } else {
                act.push_back({g.center0 - reach,
                               g.center0 + g.stride * static_cast<double>(g.count - 1) + reach});
            }
        }
        for (const auto& vg : varying) {
            const int delta = vg.scale - k;
            if (std::abs(delta) > ctx.scale_offset_cap()) continue;
            const Response& R = ctx.kernel_response(vg.profile_id, delta);
            double amax = 0.0;
            for (double a : vg.amps) amax = std::max(amax, std::abs(a));
            const double pair_sup = amax * R.sup;
            max_pair_sup = std::max(max_pair_sup, pair_sup);
            if (pair_sup < quad.activation_cutoff) {
                dropped += pair_sup;
                continue;
            }
            ActivePair pr;
            pr.R = &R;
            pr.varying = &vg;
            const double posScale = std::ldexp(1.0, k - vg.scale);
            pr.pos0z = vg.pos0 * posScale;
            pr.stepz = vg.step * posScale;
            plan.pairs.push_back(pr);
            const double sv = std::ldexp(1.0, vg.scale);
            const double xreach = R.extent / two_k;
            act.push_back({vg.pos0 / sv - xreach,
                           (vg.pos0 + vg.step * static_cast<double>(vg.amps.size() - 1)) / sv +
                               xreach});
        }
        plan.active = merge_intervals(std::move(act));
        if (!plan.pairs.empty()) plans.push_back(std::move(plan));
    }
    res.dropped_bound = dropped;
    if (plans.empty()) return res;

    // second activation pass, relative to the strongest pair
    if (quad.activation_rel > 0.0 && max_pair_sup > 0.0) {
        const double cut = max_pair_sup * quad.activation_rel;
        std::vector<ScalePlan> kept;
        for (auto& pl : plans) {
            std::vector<ActivePair> pp;
            for (auto& pr : pl.pairs) {
                double sup;
                if (pr.varying) {
                    double amax = 0.0;
                    for (double a : pr.varying->amps) amax = std::max(amax, std::abs(a));
                    sup = amax * pr.R->sup;
                } else {
                    sup = std::abs(pr.amplitude) * pr.R->sup;
                }
                if (sup >= cut)
                    pp.push_back(pr);
                else
                    res.dropped_bound += sup;
            }
            pl.pairs = std::move(pp);
            if (!pl.pairs.empty()) kept.push_back(std::move(pl));
        }
        plans = std::move(kept);
        if (plans.empty()) return res;
    }

    // domain: [domain_lo, domain_hi] plus all active intervals
    std::vector<Interval> dom{{quad.domain_lo, quad.domain_hi}};
    for (const auto& pl : plans)
        for (const auto& iv : pl.active) dom.push_back(iv);
    dom = merge_intervals(std::move(dom));
    res.domain_lo = dom.front().lo;
    res.domain_hi = dom.back().hi;

    // panels: segmentation by every active boundary, then length-capped
    struct Panel {
        double a, b;
        int k_fine;
    };
    const double base_len = ctx.phi().radius();
    std::vector<double> cuts;
    for (const auto& dv : dom) {
        cuts.push_back(dv.lo);
        cuts.push_back(dv.hi);
    }
    for (const auto& pl : plans)
        for (const auto& iv : pl.active) {
            cuts.push_back(iv.lo);
            cuts.push_back(iv.hi);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Panel> panels;
    for (const auto& dv : dom) {
        auto it = std::lower_bound(cuts.begin(), cuts.end(), dv.lo);
        double prev = dv.lo;
        for (; it != cuts.end() && *it <= dv.hi; ++it) {
            if (*it > prev + 1e-15) {
                const double len = *it - prev;
                const std::int64_t np =
                    std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(len / base_len)));
                for (std::int64_t i = 0; i < np; ++i)
                    panels.push_back({prev + len * static_cast<double>(i) / static_cast<double>(np),
                                      prev + len * static_cast<double>(i + 1) / static_cast<double>(np),
                                      k_min});
                prev = *it;
            }
        }
        if (dv.hi > prev + 1e-15) panels.push_back({prev, dv.hi, k_min});
    }
    if (panels.size() > (std::size_t(1) << 21))
        throw std::runtime_error("fspq_norm: panel segmentation too large");

    // per-panel finest active scale via two-pointer sweeps
    {
        std::vector<std::size_t> ptr(plans.size(), 0);
        std::vector<std::size_t> order(panels.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return panels[a].a < panels[b].a; });
        for (std::size_t oi : order) {
            auto& pan = panels[oi];
            const double mid = 0.5 * (pan.a + pan.b);
            for (std::size_t pi = 0; pi < plans.size(); ++pi) {
                const auto& ivs = plans[pi].active;
                auto& j = ptr[pi];
                while (j < ivs.size() && ivs[j].hi < mid) ++j;
                if (j < ivs.size() && ivs[j].lo <= mid)
                    pan.k_fine = std::max(pan.k_fine, plans[pi].k);
            }
        }
    }

    // feasibility estimate before committing
    const double node_step0 = ctx.phi().radius() / quad.points_per_feature /
                              std::max(1, quad.oversample);
    std::int64_t est = 0;
    for (const auto& pan : panels)
        est += static_cast<std::int64_t>((pan.b - pan.a) / node_step0 * std::ldexp(1.0, pan.k_fine)) +
               8;
    if (est > quad.max_points)
        throw std::runtime_error("fspq_norm: quadrature would need ~" + std::to_string(est) +
                                 " points, above the configured budget");

    const double pq = p / q;
    std::vector<double> partial(panels.size(), 0.0);
    std::vector<std::int64_t> counts(panels.size(), 0);

    parallel_for(
        panels.size(),
        [&](std::size_t ip) {
            const Panel pan = panels[ip];
            const double mid = 0.5 * (pan.a + pan.b);
            struct ScaleNodes {
                const ScalePlan* plan;
                double h;
                std::int64_t n;
                std::vector<double> v;
                double weight;
                bool active = false;
            };
            std::vector<ScaleNodes> nodes;
            nodes.reserve(plans.size());
            for (const auto& pl : plans) {
                ScaleNodes sn;
                sn.plan = &pl;
                sn.weight = pl.weight;
                bool overlap = false;
                auto it = std::upper_bound(pl.active.begin(), pl.active.end(), mid,
                                           [](double x, const Interval& iv) { return x < iv.lo; });
                if (it != pl.active.begin()) {
                    --it;
                    if (it->hi > pan.a && it->lo < pan.b) overlap = true;
                }
                if (!overlap && it + 1 != pl.active.end()) {
                    auto nx = it + 1;
                    if (nx->lo < pan.b && nx->hi > pan.a) overlap = true;
                }
                if (!overlap) {
                    nodes.push_back(std::move(sn));
                    continue;
                }
                sn.active = true;
                const double step = node_step0 / std::ldexp(1.0, pl.k);
                std::int64_t n = static_cast<std::int64_t>(std::ceil((pan.b - pan.a) / step));
                n = std::max<std::int64_t>(n, 4);
                if (n % 2) ++n;
                sn.h = (pan.b - pan.a) / static_cast<double>(n);
                sn.n = n;
                sn.v.resize(static_cast<std::size_t>(n + 5));
                const double two_k = std::ldexp(1.0, pl.k);
                for (std::int64_t i = -2; i <= n + 2; ++i)
                    sn.v[static_cast<std::size_t>(i + 2)] =
                        eval_scale(pl, pan.a + sn.h * static_cast<double>(i), two_k);
                nodes.push_back(std::move(sn));
            }
            std::int64_t nf = 4;
            for (const auto& sn : nodes)
                if (sn.active) nf = std::max(nf, sn.n);
            const double hf = (pan.b - pan.a) / static_cast<double>(nf);
            double acc = 0.0;
            std::int64_t cnt = 0;
            for (std::int64_t i = 0; i <= nf; ++i) {
                const double x = pan.a + hf * static_cast<double>(i);
                double S = 0.0;
                for (const auto& sn : nodes) {
                    if (!sn.active) continue;
                    double u;
                    if (sn.n == nf) {
                        u = sn.v[static_cast<std::size_t>(i + 2)];
                    } else {
                        const double t = (x - pan.a) / sn.h;
                        std::int64_t j = std::clamp<std::int64_t>(
                            static_cast<std::int64_t>(t), 0, sn.n - 1);
                        const double uu = t - static_cast<double>(j);
                        const double p0 = sn.v[static_cast<std::size_t>(j + 1)];
                        const double p1 = sn.v[static_cast<std::size_t>(j + 2)];
                        const double p2 = sn.v[static_cast<std::size_t>(j + 3)];
                        const double p3 = sn.v[static_cast<std::size_t>(j + 4)];
                        const double ca = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
                        const double cb = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
                        const double cc = -0.5 * p0 + 0.5 * p2;
                        u = ((ca * uu + cb) * uu + cc) * uu + p1;
                    }
                    if (u != 0.0) S += sn.weight * abs_pow(u, q);
                }
                const double integrand = (S == 0.0) ? 0.0 : std::pow(S, pq);
                const double w = (i == 0 || i == nf) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                acc += w * integrand;
                ++cnt;
            }
            partial[ip] = acc * hf / 3.0;
            counts[ip] = cnt;
        },
        threads);

    double total = 0.0;
    std::int64_t pts = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        total += partial[i];
        pts += counts[i];
    }
    res.points = pts;
    res.value = std::pow(total, 1.0 / p);
    return res;
}

double littlewood_paley_norm(const std::vector<TermGroup>& groups,
                             const std::vector<VaryingTermGroup>& varying, double s, double p,
                             double q, const LocalMeansContext& ctx,
                             const LittlewoodPaleyConfig& cfg) {
    const std::size_t n = std::size_t(1) << cfg.log2_points;
    const double lo = cfg.grid_lo, hi = cfg.grid_hi;
    const double dx = (hi - lo) / static_cast<double>(n);

    // render f on the grid
    std::vector<std::complex<double>> fhat(n, 0.0);
    for (const auto& g : groups) {
        const auto h = ctx.handle(g.profile_id);
        const double sc = std::ldexp(1.0, g.scale);
        const double rad = std::max(std::abs(h.support_left()), std::abs(h.support_right())) / sc;
        for (std::int64_t i = 0; i < g.count; ++i) {
            const double c = g.center0 + g.stride * static_cast<double>(i);
            const std::int64_t j0 = std::max<std::int64_t>(
                0, static_cast<std::int64_t>(std::floor((c - rad - lo) / dx)));
            const std::int64_t j1 = std::min<std::int64_t>(
                static_cast<std::int64_t>(n) - 1,
                static_cast<std::int64_t>(std::ceil((c + rad - lo) / dx)));
            for (std::int64_t j = j0; j <= j1; ++j) {
                const double x = lo + dx * static_cast<double>(j);
                fhat[static_cast<std::size_t>(j)] += g.amplitude * h.eval(sc * (x - c));
            }
        }
    }
    for (const auto& vg : varying) {
        const auto h = ctx.handle(vg.profile_id);
        const double sc = std::ldexp(1.0, vg.scale);
        const double ext = std::max(std::abs(h.support_left()), std::abs(h.support_right()));
        for (std::size_t i = 0; i < vg.amps.size(); ++i) {
            if (vg.amps[i] == 0.0) continue;
            const double pos = vg.pos0 + vg.step * static_cast<double>(i);
            const double cx = pos / sc;  // center in x
            const double rad = ext / sc;
            const std::int64_t j0 = std::max<std::int64_t>(
                0, static_cast<std::int64_t>(std::floor((cx - rad - lo) / dx)));
            const std::int64_t j1 = std::min<std::int64_t>(
                static_cast<std::int64_t>(n) - 1,
                static_cast<std::int64_t>(std::ceil((cx + rad - lo) / dx)));
            for (std::int64_t j = j0; j <= j1; ++j) {
                const double x = lo + dx * static_cast<double>(j);
                fhat[static_cast<std::size_t>(j)] += vg.amps[i] * h.eval(sc * x - pos);
            }
        }
    }

    fft_radix2(fhat, false);

    // smooth dyadic windows in frequency
    auto smoothstep = [](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        const double a = std::exp(-1.0 / t);
        const double b = std::exp(-1.0 / (1.0 - t));
        return a / (a + b);
    };
    auto w0 = [&](double xi) {
        const double a = std::abs(xi);
        if (a <= 4.0 / 3.0) return 1.0;
        if (a >= 1.5) return 0.0;
        return smoothstep((1.5 - a) / (1.5 - 4.0 / 3.0));
    };

    std::vector<double> Ssum(n, 0.0);
    std::vector<std::complex<double>> layer(n);
    const double xi_nyq = std::numbers::pi / dx;
    for (int k = 0; k <= cfg.k_max; ++k) {
        const double scale = std::ldexp(1.0, -k);
        bool any = false;
        for (std::size_t j = 0; j < n; ++j) {
            const double fr = (j <= n / 2) ? static_cast<double>(j)
                                           : static_cast<double>(j) - static_cast<double>(n);
            const double xi = 2.0 * std::numbers::pi * fr / (hi - lo);
            double m;
            if (k == 0)
                m = w0(xi);
            else
                m = w0(xi * scale) - w0(xi * scale * 2.0);
            layer[j] = fhat[j] * m;
            if (m != 0.0) any = true;
        }
        if (!any) break;
        if (std::ldexp(1.0, k) * 1.5 > xi_nyq / (2.0 * std::numbers::pi) * (hi - lo) * 2) {
            // window support beyond the resolvable band; truncate here
        }
        fft_radix2(layer, true);
        const double wk = std::pow(2.0, k * s * q);
        for (std::size_t j = 0; j < n; ++j) Ssum[j] += wk * abs_pow(std::abs(layer[j]), q);
    }

    double total = 0.0;
    const double pq = p / q;
    for (std::size_t j = 0; j < n; ++j)
        if (Ssum[j] > 0.0) total += std::pow(Ssum[j], pq);
    return std::pow(total * dx, 1.0 / p);
}

}  // namespace splinelab
