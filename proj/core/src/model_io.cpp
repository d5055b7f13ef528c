#include "langnet/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace langnet {

namespace {

using nlohmann::json;

json neuron_to_json(const Neuron& n) {
    json j;
    j["threshold"] = n.threshold;
    j["weights"] = n.weights;
    if (n.word_weight) j["word_weight"] = *n.word_weight;
    return j;
}

Neuron neuron_from_json(const json& j, bool expect_word_weight) {
    Neuron n;
    n.threshold = j.at("threshold").get<double>();
    n.weights = j.at("weights").get<std::vector<double>>();
    if (expect_word_weight) {
        n.word_weight = j.at("word_weight").get<std::uint32_t>();
    }
    return n;
}

}  // namespace

std::string network_to_json(const Network& net, std::string_view manifest_ref) {
    json j;
    j["format_version"] = kModelFormatVersion;

    json topo;
    topo["input_dim"] = net.topology.input_dim;
    topo["apartments"] = json::array();
    for (const auto& ap : net.topology.apartments) {
        topo["apartments"].push_back({{"word", ap.word.value},
                                      {"hidden_count", ap.hidden_count},
                                      {"output_count", ap.output_count}});
    }
    j["topology"] = std::move(topo);

    j["hidden_neurons"] = json::array();
    for (const auto& n : net.hidden_layer) j["hidden_neurons"].push_back(neuron_to_json(n));
    j["output_neurons"] = json::array();
    for (const auto& n : net.output_layer) j["output_neurons"].push_back(neuron_to_json(n));

    if (!manifest_ref.empty()) j["manifest"] = manifest_ref;
    return j.dump(2) + "\n";
}

Network network_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("model: malformed JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != kModelFormatVersion) {
            throw std::runtime_error("model: unsupported format_version");
        }
        Network net;
        const json& topo = j.at("topology");
        net.topology.input_dim = topo.at("input_dim").get<std::size_t>();
        for (const auto& ap : topo.at("apartments")) {
            net.topology.apartments.push_back({WordId{ap.at("word").get<std::uint32_t>()},
                                               ap.at("hidden_count").get<std::size_t>(),
                                               ap.at("output_count").get<std::size_t>()});
        }
        for (const auto& n : j.at("hidden_neurons")) {
            net.hidden_layer.push_back(neuron_from_json(n, true));
        }
        for (const auto& n : j.at("output_neurons")) {
            net.output_layer.push_back(neuron_from_json(n, false));
        }
        validate_network(net);
        return net;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("model: missing or mistyped field: ") + e.what());
    }
}

void save_network(const Network& net, const std::filesystem::path& path,
                  std::string_view manifest_ref) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("model: cannot open " + path.string() + " for writing");
    out << network_to_json(net, manifest_ref);
    if (!out) throw std::runtime_error("model: write failed for " + path.string());
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("model: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return network_from_json(text);
}

}  // namespace langnet
