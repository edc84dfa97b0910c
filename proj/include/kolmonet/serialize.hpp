#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "kolmonet/fnn.hpp"
#include "kolmonet/resnet.hpp"

namespace kolmonet {

// Network documents:
//   {"type":"fnn","arch":[l0,...,lL],"layers":[{"W":[row-major],"B":[...]},...]}
//   {"type":"resnet","blocks":[{"gamma":{"rows":r,"cols":c,"data":[row-major]},"fnn":{...}},...]}
// Block-diagonal storage is expanded; zeros are written out.

nlohmann::json to_json(const Fnn& net);
nlohmann::json to_json(const ResNet& net);

/// Throws ConfigParse on malformed documents, DimensionMismatch on inconsistent shapes.
Fnn fnn_from_json(const nlohmann::json& doc);
ResNet resnet_from_json(const nlohmann::json& doc);

/// File variants. Any failure is reported as ConfigParse naming the file.
void save_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json load_json(const std::filesystem::path& path);
Fnn load_fnn(const std::filesystem::path& path);
ResNet load_resnet(const std::filesystem::path& path);

}  // namespace kolmonet
