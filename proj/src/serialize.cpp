#include "kolmonet/serialize.hpp"

#include <fstream>

#include "kolmonet/error.hpp"

using nlohmann::json;

namespace kolmonet {

json to_json(const Fnn& net) {
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    layers.push_back({{"W", layer.weights.to_row_major()}, {"B", layer.bias}});
  }
  return {{"type", "fnn"}, {"arch", net.architecture()}, {"layers", std::move(layers)}};
}

json to_json(const ResNet& net) {
  json blocks = json::array();
  for (const auto& b : net.blocks()) {
    json gamma = {{"rows", b.shortcut.rows()},
                  {"cols", b.shortcut.cols()},
                  {"data", b.shortcut.to_row_major()}};
    blocks.push_back({{"gamma", std::move(gamma)}, {"fnn", to_json(b.residual)}});
  }
  return {{"type", "resnet"}, {"blocks", std::move(blocks)}};
}

namespace {

const json& member(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ConfigParse(std::string("network document is missing '") + key + "'");
  }
  return doc.at(key);
}

std::vector<double> numbers(const json& arr, const char* what) {
  if (!arr.is_array()) throw ConfigParse(std::string("'") + what + "' must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw ConfigParse(std::string("'") + what + "' holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t positive_size(const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ConfigParse(std::string("'") + what + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

void expect_type(const json& doc, const char* type) {
  const auto& t = member(doc, "type");
  if (!t.is_string() || t.get<std::string>() != type) {
    throw ConfigParse(std::string("expected a document of type '") + type + "'");
  }
}

}  // namespace

Fnn fnn_from_json(const json& doc) {
  expect_type(doc, "fnn");
  const auto& arch_doc = member(doc, "arch");
  const auto& layers_doc = member(doc, "layers");
  if (!arch_doc.is_array() || !layers_doc.is_array()) {
    throw ConfigParse("'arch' and 'layers' must be arrays");
  }
  std::vector<std::size_t> arch;
  for (const auto& v : arch_doc) arch.push_back(positive_size(v, "arch"));
  if (arch.size() != layers_doc.size() + 1) {
    throw DimensionMismatch("arch has " + std::to_string(arch.size()) + " entries for " +
                            std::to_string(layers_doc.size()) + " layers");
  }
  std::vector<Layer> layers;
  for (std::size_t k = 0; k < layers_doc.size(); ++k) {
    auto w = numbers(member(layers_doc[k], "W"), "W");
    auto b = numbers(member(layers_doc[k], "B"), "B");
    if (w.size() != arch[k + 1] * arch[k] || b.size() != arch[k + 1]) {
      throw DimensionMismatch("layer " + std::to_string(k + 1) + " does not match arch");
    }
    layers.push_back(Layer{Matrix(arch[k + 1], arch[k], std::move(w)), std::move(b)});
  }
  return Fnn(std::move(layers));
}

ResNet resnet_from_json(const json& doc) {
  expect_type(doc, "resnet");
  const auto& blocks_doc = member(doc, "blocks");
  if (!blocks_doc.is_array()) throw ConfigParse("'blocks' must be an array");
  std::vector<ResidualBlock> blocks;
  for (const auto& bd : blocks_doc) {
    const auto& g = member(bd, "gamma");
    const auto rows = positive_size(member(g, "rows"), "rows");
    const auto cols = positive_size(member(g, "cols"), "cols");
    auto data = numbers(member(g, "data"), "data");
    blocks.push_back(ResidualBlock{Matrix(rows, cols, std::move(data)), fnn_from_json(member(bd, "fnn"))});
  }
  return ResNet(std::move(blocks));
}

void save_json(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigParse("cannot open '" + path.string() + "' for writing");
  out << doc.dump() << '\n';
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigParse("'" + path.string() + "': " + e.what());
  }
}

namespace {

template <class Loader>
auto load_network(const std::filesystem::path& path, Loader loader) {
  const auto doc = load_json(path);
  try {
    return loader(doc);
  } catch (const Error& e) {
    throw ConfigParse("'" + path.string() + "': " + e.what());
  } catch (const json::exception& e) {
    throw ConfigParse("'" + path.string() + "': " + e.what());
  }
}

}  // namespace

Fnn load_fnn(const std::filesystem::path& path) { return load_network(path, fnn_from_json); }

ResNet load_resnet(const std::filesystem::path& path) {
  return load_network(path, resnet_from_json);
}

}  // namespace kolmonet
