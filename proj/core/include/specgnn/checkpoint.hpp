#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specgnn/constraints.hpp"
#include "specgnn/gnn.hpp"

namespace specgnn {

/// A trained (or in-progress) model plus everything needed to resume or audit
/// it: the constraint it was trained under and how many epochs have run.
struct Checkpoint {
  GnnModel model;
  std::optional<ConstraintSpec> constraint;
  std::uint64_t epochs_completed = 0;
};

/// Lowercase hex of the raw float64 bits, little-endian byte order, 16 chars
/// per value; platform-independent and bit-exact.
std::string encode_f64_hex(std::span<const double> values);
std::vector<double> decode_f64_hex(const std::string& hex);

/// JSON document: header (format tag, version, architecture, constraint,
/// progress) plus one hex block per filter tensor and one for the readout.
std::string checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace specgnn
