#include "splinelab/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace splinelab {

namespace {

int floor_log2(std::int64_t v) {
    int n = -1;
    while (v > 0) {
        v >>= 1;
        ++n;
    }
    return n;
}

}  // namespace

std::string FrequencySet::to_json() const {
    nlohmann::json j;
    j["exponents"] = exponents;
    j["N"] = N;
    j["Z"] = Z;
    j["intervals"] = nlohmann::json::array();
    for (const auto& iv : intervals) j["intervals"].push_back({{"base", iv.base}, {"members", iv.members}});
    return j.dump(2);
}

FrequencySet choose_frequency_set(int Lambda, FrequencyMode mode, const std::vector<int>& given,
                                  std::uint64_t seed) {
    if (Lambda <= 10) throw std::invalid_argument("choose_frequency_set: Lambda must exceed 10");
    FrequencySet fs;
    switch (mode) {
        case FrequencyMode::consecutive:
            for (int k = 0; k < Lambda; ++k) fs.exponents.push_back(k);
            break;
        case FrequencyMode::random: {
            std::mt19937_64 rng(seed);
            std::set<int> chosen;
            std::uniform_int_distribution<int> pick(0, 2 * Lambda - 1);
            while (static_cast<int>(chosen.size()) < Lambda) chosen.insert(pick(rng));
            fs.exponents.assign(chosen.begin(), chosen.end());
            break;
        }
        case FrequencyMode::given: {
            if (static_cast<int>(given.size()) < Lambda)
                throw std::invalid_argument(
                    "choose_frequency_set: given set smaller than Lambda");
            std::set<int> chosen(given.begin(), given.end());
            if (static_cast<int>(chosen.size()) < Lambda)
                throw std::invalid_argument("choose_frequency_set: duplicate exponents in set");
            fs.exponents.assign(chosen.begin(), chosen.end());
            break;
        }
    }
    fs.N = floor_log2(static_cast<std::int64_t>(fs.exponents.size()));
    return fs;
}

int rademacher(int k, double t) {
    if (t < 0.0 || t >= 1.0) throw std::invalid_argument("rademacher: t must lie in [0, 1)");
    double x = t;
    for (int i = 0; i < k; ++i) {
        x *= 2.0;
        x -= std::floor(x);
    }
    return (2.0 * x < 1.0) ? +1 : -1;
}

double complement_at_generation(double t, int k) {
    const double bit = std::ldexp(1.0, -(k + 1));
    return rademacher(k, t) > 0 ? t + bit : t - bit;
}

std::int64_t SparseSuperposition::atom_count() const {
    std::int64_t n = 0;
    for (const auto& g : groups) n += g.count;
    return n;
}

double SparseSuperposition::min_separation_ratio(int K0, int m) const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& g : groups) {
        if (g.count < 2) continue;
        const double required = K0 * std::ldexp(1.0, m - g.scale);
        worst = std::min(worst, g.stride / required);
    }
    return worst;
}

std::string SparseSuperposition::to_json(const LocalMeansContext& ctx) const {
    nlohmann::json j;
    j["domain"] = {domain_lo, domain_hi};
    auto& atoms = j["atoms"];
    atoms = nlohmann::json::array();
    for (const auto& g : groups) {
        if (g.count > (std::int64_t(1) << 20))
            throw std::runtime_error("SparseSuperposition::to_json: group too large to expand");
        for (std::int64_t i = 0; i < g.count; ++i)
            atoms.push_back({{"scale", g.scale},
                             {"center", g.center0 + g.stride * static_cast<double>(i)},
                             {"amplitude", g.amplitude},
                             {"profile", ctx.profile_name(g.profile_id)}});
    }
    return j.dump(2);
}

SparseSuperposition SparseSuperposition::from_json(const std::string& text,
                                                   LocalMeansContext& ctx) {
    const auto j = nlohmann::json::parse(text);
    SparseSuperposition out;
    if (j.contains("domain")) {
        out.domain_lo = j["domain"][0].get<double>();
        out.domain_hi = j["domain"][1].get<double>();
    }
    for (const auto& a : j.at("atoms")) {
        TermGroup g;
        g.scale = a.at("scale").get<int>();
        g.center0 = a.at("center").get<double>();
        g.stride = 0.0;
        g.count = 1;
        g.amplitude = a.at("amplitude").get<double>();
        const std::string prof = a.at("profile").get<std::string>();
        g.profile_id = ctx.has_profile(prof) ? ctx.profile_id(prof)
                                             : ctx.register_bump(prof, BumpProfile::from_descriptor(prof));
        out.groups.push_back(g);
    }
    return out;
}

TermGroup build_upsilon(int k, const FrequencySet& fs, double s, double q, int K0, int eta_id) {
    if (std::find(fs.exponents.begin(), fs.exponents.end(), k) == fs.exponents.end())
        throw std::invalid_argument("build_upsilon: 2^k not in the frequency set");
    TermGroup g;
    g.scale = k + fs.N;
    g.center0 = std::ldexp(1.0, -k - 1);
    g.stride = std::ldexp(static_cast<double>(K0), -k);
    g.count = std::int64_t(1) << k;
    g.amplitude = std::pow(2.0, fs.N * (-s + 1.0 / q));
    g.profile_id = eta_id;
    return g;
}

SparseSuperposition build_test_function(const FrequencySet& fs, double t, double s, double q,
                                        int K0, int eta_id) {
    SparseSuperposition f;
    f.domain_lo = 0.0;
    f.domain_hi = static_cast<double>(K0);
    for (int k : fs.exponents) {
        TermGroup g = build_upsilon(k, fs, s, q, K0, eta_id);
        g.amplitude *= std::pow(2.0, -fs.N / q) * rademacher(k, t) * std::pow(2.0, -k * s);
        f.groups.push_back(g);
    }
    return f;
}

int choose_K0(const WaveletSystem& sys, double safety) {
    if (sys.compactly_supported()) return 1;
    if (sys.A_tilde == 0.0) throw std::invalid_argument("choose_K0: A~ must be nonzero");
    const double C = sys.decay_C, gamma = sys.decay_gamma;
    for (int K0 = 1; K0 < 1000000; ++K0) {
        const double e = std::exp(-gamma * K0);
        const double tail = 8.0 * C * std::exp(gamma) * 2.0 * e / (1.0 - e);
        if (tail <= std::abs(sys.A_tilde) / (2.0 * safety)) return K0;
    }
    throw std::runtime_error("choose_K0: no feasible separation found");
}

FrequencySet build_endpoint_intervals(int N, int interval_count, int members_per_interval) {
    if (N < 1 || interval_count < 1)
        throw std::invalid_argument("build_endpoint_intervals: need N >= 1 and intervals >= 1");
    if (members_per_interval < 1 || members_per_interval > N)
        throw std::invalid_argument(
            "build_endpoint_intervals: members per interval must lie in [1, N]");
    FrequencySet fs;
    fs.N = N;
    double occupancy = 0.0;
    for (int kappa = 0; kappa < interval_count; ++kappa) {
        EndpointInterval iv;
        iv.base = (N + 3) + kappa * N;
        for (int i = 0; i < members_per_interval; ++i) iv.members.push_back(iv.base + i);
        occupancy += static_cast<double>(iv.members.size());
        for (int m : iv.members) fs.exponents.push_back(m);
        fs.intervals.push_back(std::move(iv));
    }
    std::sort(fs.exponents.begin(), fs.exponents.end());
    fs.Z = occupancy / static_cast<double>(interval_count);
    return fs;
}

SparseSuperposition build_endpoint_component(int kappa, const FrequencySet& fs, int n, int K0,
                                             int eta_id) {
    if (kappa < 0 || kappa >= static_cast<int>(fs.intervals.size()))
        throw std::invalid_argument("build_endpoint_component: no such interval");
    const int b = fs.intervals[static_cast<std::size_t>(kappa)].base;
    const int N = fs.N;
    if (b <= N + 2)
        throw std::invalid_argument("build_endpoint_component: base too small for translates");
    SparseSuperposition H;
    H.domain_lo = 0.0;
    H.domain_hi = static_cast<double>(K0);
    const std::int64_t rho_count = (std::int64_t(1) << (b - N - 2)) - 1;
    for (int tau = 0; tau < N; ++tau) {
        TermGroup g;
        g.scale = b + tau;
        g.stride = std::ldexp(static_cast<double>(K0), N + 2 - b);
        g.center0 = g.stride;  // rho starts at 1
        g.count = rho_count;
        g.amplitude = std::pow(2.0, (tau - N) * (n + 1));
        g.profile_id = eta_id;
        H.groups.push_back(g);
    }
    return H;
}

SparseSuperposition build_endpoint_test(const FrequencySet& fs, double t, double q, int n, int K0,
                                        int eta_id) {
    SparseSuperposition f;
    f.domain_lo = 0.0;
    f.domain_hi = static_cast<double>(K0);
    const double qp = q / (q - 1.0);
    for (std::size_t kappa = 0; kappa < fs.intervals.size(); ++kappa) {
        const int b = fs.intervals[kappa].base;
        auto H = build_endpoint_component(static_cast<int>(kappa), fs, n, K0, eta_id);
        const double amp = rademacher(b + fs.N, t) * std::pow(2.0, (b + fs.N) / qp);
        for (auto& g : H.groups) {
            g.amplitude *= amp;
            f.groups.push_back(g);
        }
    }
    return f;
}

}  // namespace splinelab
