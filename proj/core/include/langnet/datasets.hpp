#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string_view>

#include "langnet/training.hpp"

namespace langnet {

/// A training set plus the dimensions it was generated for. word_count is
/// the number of distinct words (= apartments) the examples may reference.
struct Dataset {
    std::size_t input_dim = 0;
    std::uint32_t word_count = 0;
    std::vector<TrainingExample> examples;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Throws std::runtime_error when an example's dimensions disagree with the
/// dataset header, a word exceeds word_count, or any input/desired
/// component leaves [0,1].
void validate_dataset(const Dataset& ds);

/// The 8-element XOR training set: each input of the truth table paired
/// with word 1 ("equal") or word 2 ("different"), as positive examples for
/// the matching word and negative examples for the other, with the
/// non-addressed output slot unspecified.
Dataset xor_dataset();

/// The complete 12-element variant: the 8 worded examples with every
/// unspecified slot replaced by 0, plus the 4 word-less inputs with fully
/// specified one-hot targets.
Dataset xor_complete_dataset();

inline constexpr std::array<double, 4> kRgbDefaultOffsets{8.0, 16.0, 24.0, 32.0};

/// Names and 0-255 coordinates of the RGB cube vertices in word order
/// (word k+1 owns vertex k).
struct RgbVertex {
    std::string_view name;
    std::array<double, 3> rgb;
};
std::span<const RgbVertex, 8> rgb_vertices();

/// Color categorization set: for each cube vertex, the vertex plus points
/// displaced toward the cube interior along the 3 axes, 3 face diagonals
/// and the body diagonal at the four given per-component offsets (29
/// points per vertex, 232 total, components scaled to [0,1] by /255).
/// Every point is paired with every word: desired 1 on the word's slot
/// when the word owns the point's vertex, 0 when it does not, all other
/// slots unspecified. 232 * 8 = 1856 examples.
Dataset rgb_dataset(const std::array<double, 4>& offsets = kRgbDefaultOffsets);

/// Two apartments (words 1 and 2) with one output each over a 2-dim input.
ApartmentTopology xor_topology(std::size_t hidden_per_apartment = 8);

/// Eight apartments (words 1..8) with one output each over a 3-dim input.
ApartmentTopology rgb_topology(std::size_t hidden_per_apartment = 12);

/// Renders the dataset as delimiter-separated text: a version comment
/// line, a header row x_1..x_n,word,d_1..d_m, one row per example.
/// Unspecified desired slots are empty cells. Values round-trip
/// losslessly. `manifest_ref`, when non-empty, is recorded as a comment
/// line.
std::string dataset_to_csv(const Dataset& ds, std::string_view manifest_ref = {});

void save_dataset(const Dataset& ds, const std::filesystem::path& path,
                  std::string_view manifest_ref = {});

/// Reads a file produced by save_dataset, validating dimensions and value
/// ranges. Polarity tags are recovered from the desired vectors (an
/// example is positive when any specified slot is 1).
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace langnet
