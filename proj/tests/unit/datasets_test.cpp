#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "langnet/datasets.hpp"

using namespace langnet;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::size_t count_specified(const TrainingExample& e) {
    std::size_t n = 0;
    for (const auto& d : e.desired) n += d.has_value();
    return n;
}

}  // namespace

TEST_CASE("xor_dataset reproduces the 8-row table") {
    const Dataset ds = xor_dataset();
    CHECK(ds.input_dim == 2);
    CHECK(ds.word_count == 2);
    REQUIRE(ds.examples.size() == 8);

    std::size_t positives = 0;
    for (const auto& e : ds.examples) {
        CHECK(e.word.value >= 1);  // no word-less training rows
        CHECK(count_specified(e) == 1);
        if (e.polarity == Polarity::positive) ++positives;
    }
    CHECK(positives == 4);

    const auto& first = ds.examples[0];
    CHECK(first.x == std::vector<double>{0.0, 0.0});
    CHECK(first.word == WordId{1});
    REQUIRE(first.desired.size() == 2);
    CHECK(first.desired[0] == 1.0);
    CHECK(!first.desired[1].has_value());
}

TEST_CASE("positive rows specify 1, negative rows specify 0") {
    for (const auto& e : xor_dataset().examples) {
        for (const auto& d : e.desired) {
            if (!d) continue;
            CHECK(*d == (e.polarity == Polarity::positive ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("xor_complete_dataset fills nulls and adds word-less rows") {
    const Dataset ds = xor_complete_dataset();
    REQUIRE(ds.examples.size() == 12);

    // the worded rows are fully specified with nulls replaced by zero
    const auto& first = ds.examples[0];
    CHECK(first.x == std::vector<double>{0.0, 0.0});
    CHECK(first.word == WordId{1});
    CHECK(first.desired[0] == 1.0);
    CHECK(first.desired[1] == 0.0);

    std::size_t wordless = 0;
    for (const auto& e : ds.examples) {
        CHECK(count_specified(e) == 2);
        if (e.word.none()) {
            ++wordless;
            // one-hot XOR truth
            const bool different = e.x[0] != e.x[1];
            CHECK(e.desired[0] == (different ? 0.0 : 1.0));
            CHECK(e.desired[1] == (different ? 1.0 : 0.0));
        }
    }
    CHECK(wordless == 4);
}

TEST_CASE("generators are pure") {
    CHECK(xor_dataset() == xor_dataset());
    CHECK(xor_complete_dataset() == xor_complete_dataset());
    CHECK(rgb_dataset() == rgb_dataset());
}

TEST_CASE("rgb_dataset has the documented shape") {
    const Dataset ds = rgb_dataset();
    CHECK(ds.input_dim == 3);
    CHECK(ds.word_count == 8);
    REQUIRE(ds.examples.size() == 1856);

    std::set<std::array<double, 3>> points;
    std::map<std::array<double, 3>, std::size_t> appearances;
    std::map<std::array<double, 3>, std::size_t> positive_appearances;
    for (const auto& e : ds.examples) {
        CHECK(e.word.value >= 1);
        CHECK(e.word.value <= 8);
        CHECK(count_specified(e) == 1);
        for (const double v : e.x) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        const std::array<double, 3> p{e.x[0], e.x[1], e.x[2]};
        points.insert(p);
        ++appearances[p];
        if (e.polarity == Polarity::positive) ++positive_appearances[p];
        // the specified slot is the presented word's apartment
        CHECK(e.desired[e.word.value - 1].has_value());
    }
    CHECK(points.size() == 232);
    for (const auto& [p, n] : appearances) CHECK(n == 8);
    for (const auto& [p, n] : positive_appearances) CHECK(n == 1);
}

TEST_CASE("rgb_dataset labels the vertices themselves correctly") {
    const Dataset ds = rgb_dataset();
    // first example: black vertex paired with word 1 (black)
    const auto& first = ds.examples[0];
    CHECK(first.x == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(first.word == WordId{1});
    CHECK(first.desired[0] == 1.0);
    for (std::size_t i = 1; i < 8; ++i) CHECK(!first.desired[i].has_value());
    CHECK(first.polarity == Polarity::positive);
}

TEST_CASE("canonical topologies") {
    const ApartmentTopology xt = xor_topology();
    CHECK(xt.input_dim == 2);
    REQUIRE(xt.apartments.size() == 2);
    CHECK(xt.apartments[0].word == WordId{1});
    CHECK(xt.apartments[1].word == WordId{2});

    const ApartmentTopology rt = rgb_topology();
    CHECK(rt.input_dim == 3);
    REQUIRE(rt.apartments.size() == 8);
    CHECK(rt.apartments[7].word == WordId{8});
    for (const auto& ap : rt.apartments) {
        CHECK(ap.hidden_count == 12);
        CHECK(ap.output_count == 1);
    }
}

TEST_CASE("datasets round-trip through files") {
    const auto path = temp_file("langnet_dataset_roundtrip.csv");
    for (const Dataset& ds : {xor_dataset(), xor_complete_dataset(), rgb_dataset()}) {
        save_dataset(ds, path);
        CHECK(load_dataset(path) == ds);
    }
    std::filesystem::remove(path);
}

TEST_CASE("empty desired cells load as unspecified") {
    const auto path = temp_file("langnet_dataset_nulls.csv");
    save_dataset(xor_dataset(), path);
    const Dataset ds = load_dataset(path);
    CHECK(!ds.examples[0].desired[1].has_value());
    CHECK(ds.examples[0].desired[0] == 1.0);
    std::filesystem::remove(path);
}

TEST_CASE("loader rejects malformed files") {
    const auto path = temp_file("langnet_dataset_bad.csv");

    auto write = [&](const char* text) {
        std::ofstream out(path);
        out << text;
    };

    write("x_1,x_2,word,d_1,d_2\n0,0,1,1,\n");  // missing version line
    CHECK_THROWS_AS(load_dataset(path), std::runtime_error);

    write("# langnet-dataset v1 input_dim=2 word_count=2 output_count=2\n"
          "x_1,x_2,word,d_1,d_2\n"
          "0,0,1,1\n");  // wrong cell count
    CHECK_THROWS_AS(load_dataset(path), std::runtime_error);

    write("# langnet-dataset v1 input_dim=2 word_count=2 output_count=2\n"
          "x_1,x_2,word,d_1,d_2\n"
          "0,0,1,1.5,\n");  // desired outside [0,1]
    CHECK_THROWS_AS(load_dataset(path), std::runtime_error);

    write("# langnet-dataset v1 input_dim=2 word_count=2 output_count=2\n"
          "x_1,x_2,word,d_1,d_2\n"
          "0,0,7,1,\n");  // word exceeds word_count
    CHECK_THROWS_AS(load_dataset(path), std::runtime_error);

    write("# langnet-dataset v1 input_dim=2 word_count=2 output_count=2\n"
          "x_1,x_2,word,d_1,d_2\n"
          "0,2,1,1,\n");  // input outside [0,1]
    CHECK_THROWS_AS(load_dataset(path), std::runtime_error);

    write("# langnet-dataset v1 input_dim=2 word_count=2 output_count=2\n"
          "x_1,x_2,word,d_1,d_2\n"
          "0,zero,1,1,\n");  // unparsable number
    CHECK_THROWS_AS(load_dataset(path), std::runtime_error);

    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_dataset("/nonexistent/data.csv"), std::runtime_error);
}
