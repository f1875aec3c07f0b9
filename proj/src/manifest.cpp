#include "splinelab/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace splinelab {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string RunManifest::to_json() const {
    std::ostringstream os;
    os << "{\"config_hash\": \"" << config_hash << "\", \"version\": \"" << version
       << "\", \"seed\": " << seed << ", \"wall_clock_seconds\": " << format_full(wall_clock_seconds)
       << ", \"outputs\": [";
    for (std::size_t i = 0; i < outputs.size(); ++i)
        os << (i ? ", " : "") << '"' << outputs[i] << '"';
    os << "]}";
    return os.str();
}

std::string RunManifest::csv_header() const {
    std::ostringstream os;
    os << "# config_hash=" << config_hash << " version=" << version << " seed=" << seed << "\n";
    return os.str();
}

RunManifest make_manifest(const std::string& canonical_config, std::uint64_t seed) {
    RunManifest m;
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config)));
    m.config_hash = buf;
    m.seed = seed;
    return m;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace splinelab
