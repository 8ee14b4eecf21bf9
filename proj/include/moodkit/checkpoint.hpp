#pragma once

#include "moodkit/model.hpp"
#include "moodkit/train.hpp"

#include <cstdint>
#include <string>

namespace moodkit {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointData {
  ModelParams params;
  EncoderConfig encoder;
  TrainConfig train;
  std::string variant = "full";  // forward-graph variant the weights expect
};

// Single binary file: magic, format version, dims, a JSON config snapshot,
// then named flat weight arrays as little-endian 64-bit floats. Round-trips
// bit-for-bit.
void save_checkpoint(const std::string& path, const CheckpointData& data);

// Throws IoError on unreadable/truncated files and ConfigError on version or
// shape mismatches.
CheckpointData load_checkpoint(const std::string& path);

}  // namespace moodkit
