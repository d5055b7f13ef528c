#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "langnet/training.hpp"

namespace langnet::cli {

/// FNV-1a 64-bit over a byte string; stable, dependency-free fingerprint.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fingerprint(std::string_view bytes);                 // "fnv1a64:<hex>"
std::string fingerprint_file(const std::filesystem::path& path); // throws on I/O failure

/// Everything needed to reproduce a run, written next to its artifacts.
/// The manifest itself is run metadata (it records the wall-clock
/// duration); the artifacts it lists are byte-reproducible.
struct RunManifest {
    std::vector<std::string> command_line;
    TrainConfig config;
    std::uint64_t seed = 0;
    std::string dataset_fingerprint;  // empty when the command takes no dataset
    std::vector<std::string> artifacts;
    double duration_seconds = 0.0;
};

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace langnet::cli
