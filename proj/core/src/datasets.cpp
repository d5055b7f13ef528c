#include "langnet/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace langnet {

namespace {

constexpr std::string_view kDatasetMagic = "# langnet-dataset v1";

TrainingExample make_example(std::vector<double> x, std::uint32_t word,
                             std::vector<std::optional<double>> desired) {
    const bool positive = std::any_of(desired.begin(), desired.end(), [](const auto& d) {
        return d.has_value() && *d == 1.0;
    });
    return TrainingExample{std::move(x), WordId{word}, std::move(desired),
                           positive ? Polarity::positive : Polarity::negative};
}

std::optional<double> some(double v) { return v; }
constexpr std::optional<double> none = std::nullopt;

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view cell, const std::string& context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("dataset: bad number '" + std::string(cell) + "' " + context);
    }
    return v;
}

}  // namespace

void validate_dataset(const Dataset& ds) {
    for (std::size_t i = 0; i < ds.examples.size(); ++i) {
        const auto& e = ds.examples[i];
        const std::string at = "at example " + std::to_string(i);
        if (e.x.size() != ds.input_dim) {
            throw std::runtime_error("dataset: input dimension mismatch " + at);
        }
        if (e.word.value > ds.word_count) {
            throw std::runtime_error("dataset: word exceeds word_count " + at);
        }
        for (const double v : e.x) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::runtime_error("dataset: input component outside [0,1] " + at);
            }
        }
        for (const auto& d : e.desired) {
            if (d && !(*d >= 0.0 && *d <= 1.0)) {
                throw std::runtime_error("dataset: desired value outside [0,1] " + at);
            }
        }
    }
}

Dataset xor_dataset() {
    Dataset ds;
    ds.input_dim = 2;
    ds.word_count = 2;
    // positive examples
    ds.examples.push_back(make_example({0, 0}, 1, {some(1), none}));
    ds.examples.push_back(make_example({1, 1}, 1, {some(1), none}));
    ds.examples.push_back(make_example({0, 1}, 2, {none, some(1)}));
    ds.examples.push_back(make_example({1, 0}, 2, {none, some(1)}));
    // negative examples
    ds.examples.push_back(make_example({0, 0}, 2, {none, some(0)}));
    ds.examples.push_back(make_example({1, 1}, 2, {none, some(0)}));
    ds.examples.push_back(make_example({0, 1}, 1, {some(0), none}));
    ds.examples.push_back(make_example({1, 0}, 1, {some(0), none}));
    return ds;
}

Dataset xor_complete_dataset() {
    Dataset ds = xor_dataset();
    for (auto& e : ds.examples) {
        for (auto& d : e.desired) {
            if (!d) d = 0.0;
        }
    }
    // word-less inputs with the full one-hot truth
    ds.examples.push_back(make_example({0, 0}, 0, {some(1), some(0)}));
    ds.examples.push_back(make_example({1, 1}, 0, {some(1), some(0)}));
    ds.examples.push_back(make_example({0, 1}, 0, {some(0), some(1)}));
    ds.examples.push_back(make_example({1, 0}, 0, {some(0), some(1)}));
    return ds;
}

std::span<const RgbVertex, 8> rgb_vertices() {
    static constexpr std::array<RgbVertex, 8> vertices{{
        {"black", {0, 0, 0}},
        {"blue", {0, 0, 255}},
        {"magenta", {255, 0, 255}},
        {"red", {255, 0, 0}},
        {"yellow", {255, 255, 0}},
        {"green", {0, 255, 0}},
        {"cyan", {0, 255, 255}},
        {"white", {255, 255, 255}},
    }};
    return vertices;
}

Dataset rgb_dataset(const std::array<double, 4>& offsets) {
    Dataset ds;
    ds.input_dim = 3;
    ds.word_count = 8;
    ds.examples.reserve(8 * 29 * 8);

    for (std::size_t c = 0; c < 8; ++c) {
        const auto& vertex = rgb_vertices()[c].rgb;
        std::vector<std::array<double, 3>> points;
        points.push_back(vertex);
        // the 7 inward directions: every non-empty subset of the axes,
        // each component signed toward the cube interior
        for (unsigned mask = 1; mask < 8; ++mask) {
            for (const double off : offsets) {
                std::array<double, 3> p = vertex;
                for (std::size_t axis = 0; axis < 3; ++axis) {
                    if (mask & (1u << axis)) {
                        p[axis] += vertex[axis] == 0.0 ? off : -off;
                    }
                }
                points.push_back(p);
            }
        }
        for (const auto& p : points) {
            const std::vector<double> x{p[0] / 255.0, p[1] / 255.0, p[2] / 255.0};
            for (std::uint32_t word = 1; word <= 8; ++word) {
                std::vector<std::optional<double>> desired(8, none);
                desired[word - 1] = some(word == c + 1 ? 1.0 : 0.0);
                ds.examples.push_back(make_example(x, word, std::move(desired)));
            }
        }
    }
    return ds;
}

ApartmentTopology xor_topology(std::size_t hidden_per_apartment) {
    return ApartmentTopology{2,
                             {{WordId{1}, hidden_per_apartment, 1},
                              {WordId{2}, hidden_per_apartment, 1}}};
}

ApartmentTopology rgb_topology(std::size_t hidden_per_apartment) {
    ApartmentTopology topo;
    topo.input_dim = 3;
    for (std::uint32_t word = 1; word <= 8; ++word) {
        topo.apartments.push_back({WordId{word}, hidden_per_apartment, 1});
    }
    return topo;
}

std::string dataset_to_csv(const Dataset& ds, std::string_view manifest_ref) {
    validate_dataset(ds);
    const std::size_t output_count = ds.examples.empty() ? 0 : ds.examples.front().desired.size();

    std::ostringstream out;
    out << kDatasetMagic << " input_dim=" << ds.input_dim << " word_count=" << ds.word_count
        << " output_count=" << output_count << "\n";
    if (!manifest_ref.empty()) out << "# manifest: " << manifest_ref << "\n";
    for (std::size_t i = 0; i < ds.input_dim; ++i) out << "x_" << (i + 1) << ",";
    out << "word";
    for (std::size_t i = 0; i < output_count; ++i) out << ",d_" << (i + 1);
    out << "\n";

    for (const auto& e : ds.examples) {
        for (const double v : e.x) out << format_double(v) << ",";
        out << e.word.value;
        for (const auto& d : e.desired) {
            out << ",";
            if (d) out << format_double(*d);
        }
        out << "\n";
    }
    return std::move(out).str();
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path,
                  std::string_view manifest_ref) {
    const std::string text = dataset_to_csv(ds, manifest_ref);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dataset: cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("dataset: write failed for " + path.string());
}

namespace {

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::size_t header_field(std::string_view magic_line, std::string_view key) {
    const std::string token = std::string(key) + "=";
    const auto pos = magic_line.find(token);
    if (pos == std::string_view::npos) {
        throw std::runtime_error("dataset: header missing " + std::string(key));
    }
    std::size_t v = 0;
    const char* begin = magic_line.data() + pos + token.size();
    const char* end = magic_line.data() + magic_line.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr == begin) {
        throw std::runtime_error("dataset: bad header value for " + std::string(key));
    }
    return v;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("dataset: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line) || !line.starts_with(kDatasetMagic)) {
        throw std::runtime_error("dataset: not a langnet dataset file (missing '" +
                                 std::string(kDatasetMagic) + "' line)");
    }
    Dataset ds;
    ds.input_dim = header_field(line, "input_dim");
    ds.word_count = static_cast<std::uint32_t>(header_field(line, "word_count"));
    const std::size_t output_count = header_field(line, "output_count");

    // skip comment lines, then the column header row
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.starts_with("#")) break;
    }
    const std::size_t expected_cells = ds.input_dim + 1 + output_count;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.starts_with("#")) continue;
        const auto cells = split_cells(line);
        const std::string at = "at line " + std::to_string(lineno);
        if (cells.size() != expected_cells) {
            throw std::runtime_error("dataset: expected " + std::to_string(expected_cells) +
                                     " cells, got " + std::to_string(cells.size()) + " " + at);
        }
        std::vector<double> x(ds.input_dim);
        for (std::size_t i = 0; i < ds.input_dim; ++i) x[i] = parse_double(cells[i], at);

        std::uint32_t word = 0;
        const auto wcell = cells[ds.input_dim];
        const auto [ptr, ec] = std::from_chars(wcell.data(), wcell.data() + wcell.size(), word);
        if (ec != std::errc{} || ptr != wcell.data() + wcell.size()) {
            throw std::runtime_error("dataset: bad word '" + std::string(wcell) + "' " + at);
        }

        std::vector<std::optional<double>> desired(output_count);
        for (std::size_t i = 0; i < output_count; ++i) {
            const auto cell = cells[ds.input_dim + 1 + i];
            if (cell.empty()) continue;  // empty cell = unspecified
            desired[i] = parse_double(cell, at);
        }
        ds.examples.push_back(make_example(std::move(x), word, std::move(desired)));
    }
    validate_dataset(ds);
    return ds;
}

}  // namespace langnet
