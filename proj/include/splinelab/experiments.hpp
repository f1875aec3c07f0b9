#ifndef SPLINELAB_EXPERIMENTS_HPP
#define SPLINELAB_EXPERIMENTS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splinelab/test_functions.hpp"

namespace splinelab {

// Thrown when a run would exceed its configured atom/point budgets; the CLI
// maps it to the numerical-failure exit code.
struct InfeasibleRun : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    int order = 0;
    double p = 4.0, q = 1.5, s = -0.6;
    int N_min = 2, N_max = 4;
    int trials = 8;
    std::uint64_t seed = 1;
    int K0 = 0;                      // 0 = auto via choose_K0
    double coefficient_cutoff = 1e-10;
    int k_pad_lo = 10, k_pad_hi = 4; // k range around the active scales
    int endpoint_intervals = 4;      // desk-scale M (<= 4^N); endpoint runs
    std::int64_t max_atoms = std::int64_t(1) << 21;
    QuadratureConfig quad;
    double tol = 1e-8;               // wavelet construction tolerance
    int threads = 0;

    void validate_growth() const;    // throws with the violated inequality
    void validate_endpoint() const;
};

struct GrowthFit {
    std::vector<std::pair<double, double>> points;  // (abscissa, log2 value)
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    double theory_slope = 0.0;
    std::string to_json() const;
};

GrowthFit fit_growth(const std::vector<std::pair<double, double>>& pts, double theory_slope);

// Shared experiment state: the system, its registered profiles, response caches.
struct ExperimentContext {
    WaveletSystem sys;
    LocalMeansContext lm;
    int psi_id = -1;
    int eta_id = -1;
    int eta_sign = +1;
    int K0 = 1;

    explicit ExperimentContext(const ExperimentConfig& cfg);
    ExperimentContext(const ExperimentContext&) = delete;
};

struct CoefficientCertificate {
    double value = 0.0;
    double skipped_bound = 0.0;
};

// 2^j <f, psi(2^j . - K0 mu)> with window cutoffs certified.
CoefficientCertificate wavelet_coefficient(const SparseSuperposition& f, const ExperimentContext& ec,
                                           int j, std::int64_t mu, double cutoff);

// Signed coefficient map over the operator index set, as norm-engine terms:
// one VaryingTermGroup per scale with amps[mu] = r_j(t) 2^j <f, psi_{j,K0 mu}>.
struct CoefficientMap {
    std::vector<VaryingTermGroup> blocks;
    std::vector<std::vector<std::int64_t>> mu_values;  // per block, the mu per slot
    double skipped_bound = 0.0;
    std::int64_t coefficient_count() const;
};

CoefficientMap apply_signed_operator(const SparseSuperposition& f, const FrequencySet& fs, double t,
                                     const ExperimentContext& ec, double cutoff,
                                     std::int64_t max_coefficients, bool endpoint = false);

// Partition by sign of r_j(t): T_t = P_{E+} - P_{E-} at the coefficient level.
std::pair<CoefficientMap, CoefficientMap> split_projection_sets(const CoefficientMap& m,
                                                                const FrequencySet& fs, double t);

struct LocalLowerBound {
    double J_lo = 0.0, J_hi = 0.0;
    double c0 = 0.0;
};

// Scan |phi * psi| on [1/4, 3/4]; c0 = half the maximum, J the longest run above.
LocalLowerBound check_local_lower_bound(const ExperimentContext& ec);

struct SandwichReport {
    double measured = 0.0;
    double lower = 0.0, upper = 0.0;
    bool pass = false;
};

SandwichReport check_inner_product_sandwich(const ExperimentContext& ec, const FrequencySet& fs,
                                            double s, double q, int k, std::int64_t mu);

struct DecayCheck {
    std::vector<std::pair<double, double>> points;  // (|mu - mu'|, log measured)
    double slope = 0.0;
    double required_slope = 0.0;  // -gamma_fit * K0 * margin
    bool pass = false;
};

DecayCheck check_convolution_decay(const ExperimentContext& ec, int max_offset = 3,
                                   double margin = 0.8);

struct TrialRow {
    int N = 0;
    int trial = 0;
    double t1 = 0.0, t2 = 0.0;
    double norm_f = 0.0;
    double norm_Tf = 0.0;
    double norm_Pplus = 0.0, norm_Pminus = 0.0;
    double Z = 1.0;
};

struct ExperimentResult {
    std::vector<TrialRow> rows;
    GrowthFit fit_Tf;      // log2 q-mean of ||Tf|| vs N (growth) or log2 N (endpoint)
    GrowthFit fit_f;       // log2 max ||f_t|| vs the same abscissa
    std::optional<GrowthFit> fit_ratio;  // endpoint only
    int K0 = 1;
    double qmean_variance = 0.0;  // across trials at the largest N
};

ExperimentResult run_growth_experiment(const ExperimentConfig& cfg, ExperimentContext& ec);
ExperimentResult run_endpoint_experiment(const ExperimentConfig& cfg, ExperimentContext& ec);

// deterministic trial parameters: a few structured sign patterns then a
// Kronecker low-discrepancy fill, all seeded
std::vector<std::pair<double, double>> sample_t_pairs(int trials, std::uint64_t seed);

}  // namespace splinelab

#endif
