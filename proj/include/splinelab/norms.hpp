#ifndef SPLINELAB_NORMS_HPP
#define SPLINELAB_NORMS_HPP

#include <vector>

#include "splinelab/local_means.hpp"

namespace splinelab {

// Arithmetic progression of identical translates of one profile:
// amplitude * U(2^scale (x - center_i)), center_i = center0 + i * stride.
struct TermGroup {
    int scale = 0;
    double center0 = 0.0;
    double stride = 0.0;
    std::int64_t count = 1;
    double amplitude = 0.0;
    int profile_id = -1;
};

// A term whose translates carry individual amplitudes on a lattice:
// sum_i amps[i] * U(2^scale x - (pos0 + i * step)); used for wavelet
// expansions where coefficients vary with the translate.
struct VaryingTermGroup {
    int scale = 0;
    double pos0 = 0.0;   // in the 2^scale x coordinate
    double step = 0.0;
    std::vector<double> amps;
    int profile_id = -1;
};

struct QuadratureConfig {
    double domain_lo = -1.0;
    double domain_hi = 1.0;       // extended to K0 by callers
    int points_per_feature = 128;  // nodes per kernel radius at each scale
    int oversample = 1;            // divides the node step (oracle comparisons)
    double activation_cutoff = 1e-13;  // absolute pair-sup cutoff
    double activation_rel = 1e-8;      // relative pair-sup cutoff
    std::int64_t max_points = std::int64_t(1) << 28;  // feasibility guard
};

struct NormResult {
    double value = 0.0;
    int k_min = 0, k_max = 0;
    double domain_lo = 0.0, domain_hi = 0.0;
    std::int64_t points = 0;       // integrand evaluations
    double dropped_bound = 0.0;    // certified bound for skipped (group, k) pairs
};

// Local-means estimator: || (sum_{k in range} 2^{ksq} |phi_k * f|^q)^{1/q} ||_{L^p(D)}
// with phi_k = 2^k phi(2^k .). Terms may mix both group kinds.
NormResult fspq_norm(const std::vector<TermGroup>& groups,
                     const std::vector<VaryingTermGroup>& varying, double s, double p, double q,
                     int k_min, int k_max, const LocalMeansContext& ctx,
                     const QuadratureConfig& quad, int threads = 0);

// Littlewood-Paley cross-check: smooth dyadic frequency decomposition computed
// with FFTs on a padded dense grid. Oracle quality only.
struct LittlewoodPaleyConfig {
    double grid_lo = -2.0;
    double grid_hi = 2.0;
    int log2_points = 20;
    int k_max = 18;
};

double littlewood_paley_norm(const std::vector<TermGroup>& groups,
                             const std::vector<VaryingTermGroup>& varying, double s, double p,
                             double q, const LocalMeansContext& ctx,
                             const LittlewoodPaleyConfig& cfg);

}  // namespace splinelab

#endif
