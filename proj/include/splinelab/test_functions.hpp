#ifndef SPLINELAB_TEST_FUNCTIONS_HPP
#define SPLINELAB_TEST_FUNCTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "splinelab/norms.hpp"
#include "splinelab/wavelet_system.hpp"

namespace splinelab {

struct EndpointInterval {
    int base = 0;                 // b_kappa, left end of the length-N interval
    std::vector<int> members;     // exponents of A inside the interval
};

struct FrequencySet {
    std::vector<int> exponents;   // sorted k with 2^k in A
    int N = 0;                    // 2^N <= #A < 2^{N+1}
    std::vector<EndpointInterval> intervals;
    double Z = 0.0;               // mean interval occupancy

    int max_exponent() const { return exponents.empty() ? 0 : exponents.back(); }
    std::string to_json() const;
};

enum class FrequencyMode { consecutive, random, given };

FrequencySet choose_frequency_set(int Lambda, FrequencyMode mode = FrequencyMode::consecutive,
                                  const std::vector<int>& given = {}, std::uint64_t seed = 0);

// k-th Rademacher function: +1 on even dyadic intervals of generation k+1.
int rademacher(int k, double t);
// Flip exactly the k-th sign of t's dyadic expansion.
double complement_at_generation(double t, int k);

// A test function as translated bump groups; serializes to atoms.json.
struct SparseSuperposition {
    std::vector<TermGroup> groups;
    double domain_lo = 0.0, domain_hi = 1.0;

    std::int64_t atom_count() const;
    // smallest gap between consecutive atoms of one group, in units of
    // K0 * 2^{m - l} for the group's scales (>= 1 means the separation
    // hypothesis holds)
    double min_separation_ratio(int K0, int m) const;
    std::string to_json(const LocalMeansContext& ctx) const;
    static SparseSuperposition from_json(const std::string& text, LocalMeansContext& ctx);
};

// 2^k translates of eta at scale k+N with the standard amplitude.
TermGroup build_upsilon(int k, const FrequencySet& fs, double s, double q, int K0, int eta_id);

SparseSuperposition build_test_function(const FrequencySet& fs, double t, double s, double q,
                                        int K0, int eta_id);

// Smallest K0 with 8 C e^gamma * 2 e^{-gamma K0} / (1 - e^{-gamma K0})
// <= |A~| / (2 safety); 1 for compactly supported systems.
int choose_K0(const WaveletSystem& sys, double safety = 1.0);

// Desk-scale endpoint geometry: count disjoint length-N integer intervals with
// one or more frequencies each; bases start at N+3 so translate counts stay
// finite. members_per_interval fills Z.
FrequencySet build_endpoint_intervals(int N, int interval_count, int members_per_interval = 1);

// H_kappa: atoms at scales b+tau (tau = 0..N-1) with amplitudes
// 2^{(tau-N)(n+1)}, centered on the lattice 2^{N+2-b} K0 rho, 0 < rho-lattice < 1.
SparseSuperposition build_endpoint_component(int kappa, const FrequencySet& fs, int n, int K0,
                                             int eta_id);

SparseSuperposition build_endpoint_test(const FrequencySet& fs, double t, double q, int n, int K0,
                                        int eta_id);

}  // namespace splinelab

#endif
