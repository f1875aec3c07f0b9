#ifndef SPLINELAB_MANIFEST_HPP
#define SPLINELAB_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace splinelab {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& data);

// Full round-trip decimal formatting for every numeric output.
std::string format_full(double v);

// Embedded in every result file; wall_clock is excluded from the hash so
// payloads stay bit-identical across reruns.
struct RunManifest {
    std::string config_hash;
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    double wall_clock_seconds = 0.0;
    std::vector<std::string> outputs;

    std::string to_json() const;
    // header comment lines for CSV files (hash, version, seed only)
    std::string csv_header() const;
};

RunManifest make_manifest(const std::string& canonical_config, std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace splinelab

#endif
