#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "riskml/matrix.hpp"
#include "riskml/model.hpp"

namespace riskml {

inline constexpr int kModelFormatVersion = 1;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

struct DataFingerprint {
  std::size_t rows = 0;
  std::string content_hash;  // 16 hex digits over the exact decimal text of every value

  friend bool operator==(const DataFingerprint&, const DataFingerprint&) = default;
};

DataFingerprint fingerprint(const Matrix& features, std::span<const int> labels);

/// A model file: one JSON document holding the format version, model kind,
/// hyperparameters, master seed, training-data fingerprint, the learned parameters
/// (standardizer included) and a checksum over everything else.
struct PersistedModel {
  int format_version = kModelFormatVersion;
  ModelSpec spec;
  std::uint64_t seed = 42;
  DataFingerprint training_data;
  ModelPtr model;
};

std::string serialize_model(const PersistedModel& persisted);
/// Throws DataError on an unknown format version, a checksum mismatch or malformed content.
PersistedModel deserialize_model(std::string_view text);

void save_model(const PersistedModel& persisted, const std::filesystem::path& path);
PersistedModel load_model(const std::filesystem::path& path);

}  // namespace riskml
