#include "manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace langnet::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string fingerprint(std::string_view bytes) {
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << fnv1a64(bytes);
    return std::move(out).str();
}

std::string fingerprint_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("manifest: cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fingerprint(bytes);
}

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    nlohmann::json j;
    j["command_line"] = manifest.command_line;
    j["config"] = {{"c0", manifest.config.c0},
                   {"decay_period", manifest.config.decay_period},
                   {"target_error", manifest.config.target_error},
                   {"max_iterations", manifest.config.max_iterations},
                   {"shake_patience", manifest.config.shake_patience},
                   {"shake_amplitude", manifest.config.shake_amplitude},
                   {"seed", manifest.config.seed}};
    j["seed"] = manifest.seed;
    j["dataset_fingerprint"] = manifest.dataset_fingerprint;
    j["artifacts"] = manifest.artifacts;
    j["duration_seconds"] = manifest.duration_seconds;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("manifest: cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("manifest: write failed for " + path.string());
}

}  // namespace langnet::cli
