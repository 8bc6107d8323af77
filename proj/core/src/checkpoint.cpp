#include "specgnn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace specgnn {

namespace {

constexpr const char* kFormatTag = "specgnn-checkpoint";
constexpr int kFormatVersion = 1;

int hex_digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument(std::string("decode_f64_hex: invalid hex character '") + c + "'");
}

}  // namespace

std::string encode_f64_hex(std::span<const double> values) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(values.size() * 16);
  for (double v : values) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int byte = 0; byte < 8; ++byte) {
      const unsigned b = static_cast<unsigned>((bits >> (8 * byte)) & 0xFFu);
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 0xFu]);
    }
  }
  return out;
}

std::vector<double> decode_f64_hex(const std::string& hex) {
  if (hex.size() % 16 != 0) {
    throw std::invalid_argument("decode_f64_hex: length " + std::to_string(hex.size()) +
                                " is not a multiple of 16");
  }
  std::vector<double> out(hex.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (int byte = 0; byte < 8; ++byte) {
      const int hi = hex_digit_value(hex[i * 16 + 2 * byte]);
      const int lo = hex_digit_value(hex[i * 16 + 2 * byte + 1]);
      bits |= static_cast<std::uint64_t>((hi << 4) | lo) << (8 * byte);
    }
    std::memcpy(&out[i], &bits, sizeof(bits));
  }
  return out;
}

std::string checkpoint_to_json(const Checkpoint& cp) {
  const GnnModel& m = cp.model;
  if (m.layer_count() == 0) {
    throw std::invalid_argument("checkpoint_to_json: model has no layers");
  }
  nlohmann::json j;
  j["format"] = kFormatTag;
  j["version"] = kFormatVersion;
  j["architecture"] = {{"feature_dims", m.feature_dims()},
                       {"taps", m.taps()},
                       {"nonlinearity", to_string(m.nonlinearity())},
                       {"readout_mode", to_string(m.readout_mode())},
                       {"output_dim", m.output_dim()},
                       {"nodes", m.nodes()}};
  if (cp.constraint) {
    j["constraint"] = nlohmann::json::parse(constraint_spec_to_json(*cp.constraint));
  } else {
    j["constraint"] = nullptr;
  }
  j["epochs_completed"] = cp.epochs_completed;

  nlohmann::json layers = nlohmann::json::array();
  for (const FilterTensor& t : m.layers()) layers.push_back(encode_f64_hex(t.values()));
  j["tensors"] = {{"layers", std::move(layers)}, {"readout", encode_f64_hex(m.readout().entries())}};
  return j.dump(2);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != kFormatTag) {
    throw std::invalid_argument("checkpoint: missing or unexpected format tag");
  }
  if (j.at("version").get<int>() != kFormatVersion) {
    throw std::invalid_argument("checkpoint: unsupported version " + j.at("version").dump());
  }

  const nlohmann::json& arch = j.at("architecture");
  Checkpoint cp;
  cp.model = GnnModel(arch.at("feature_dims").get<std::vector<std::size_t>>(),
                      arch.at("taps").get<std::size_t>(),
                      nonlinearity_from_string(arch.at("nonlinearity").get<std::string>()),
                      readout_mode_from_string(arch.at("readout_mode").get<std::string>()),
                      arch.at("output_dim").get<std::size_t>(),
                      arch.value("nodes", std::size_t{0}));
  cp.epochs_completed = j.value("epochs_completed", std::uint64_t{0});
  if (j.contains("constraint") && !j.at("constraint").is_null()) {
    cp.constraint = constraint_spec_from_json(j.at("constraint").dump());
  }

  const nlohmann::json& tensors = j.at("tensors");
  const nlohmann::json& layer_blocks = tensors.at("layers");
  if (layer_blocks.size() != cp.model.layer_count()) {
    throw std::invalid_argument("checkpoint: expected " +
                                std::to_string(cp.model.layer_count()) +
                                " tensor blocks, found " + std::to_string(layer_blocks.size()));
  }
  for (std::size_t q = 0; q < cp.model.layer_count(); ++q) {
    std::vector<double> values = decode_f64_hex(layer_blocks.at(q).get<std::string>());
    FilterTensor& t = cp.model.layers()[q];
    if (values.size() != t.values().size()) {
      throw std::invalid_argument("checkpoint: layer " + std::to_string(q) + " block has " +
                                  std::to_string(values.size()) + " values, expected " +
                                  std::to_string(t.values().size()));
    }
    t.values() = std::move(values);
  }
  std::vector<double> readout = decode_f64_hex(tensors.at("readout").get<std::string>());
  if (readout.size() != cp.model.readout().entries().size()) {
    throw std::invalid_argument("checkpoint: readout block has " +
                                std::to_string(readout.size()) + " values, expected " +
                                std::to_string(cp.model.readout().entries().size()));
  }
  cp.model.readout().entries() = std::move(readout);

  if (!cp.model.all_finite()) {
    throw std::invalid_argument("checkpoint: model contains non-finite values");
  }
  return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << checkpoint_to_json(cp) << "\n";
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

}  // namespace specgnn
