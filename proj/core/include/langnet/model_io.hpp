#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "langnet/network.hpp"

namespace langnet {

inline constexpr int kModelFormatVersion = 1;

/// Serialises a network as a self-describing JSON document. Floating-point
/// values survive the round trip bit for bit. `manifest_ref`, when
/// non-empty, is embedded so the artifact points back at the run manifest
/// that produced it.
std::string network_to_json(const Network& net, std::string_view manifest_ref = {});

/// Parses and validates a document produced by network_to_json.
/// Throws std::runtime_error on malformed input or version mismatch and
/// std::invalid_argument when the content violates network invariants.
Network network_from_json(const std::string& text);

void save_network(const Network& net, const std::filesystem::path& path,
                  std::string_view manifest_ref = {});
Network load_network(const std::filesystem::path& path);

}  // namespace langnet
