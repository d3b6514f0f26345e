#include "riskml/persistence.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "riskml/csv.hpp"
#include "riskml/errors.hpp"
#include "riskml/serialization.hpp"

namespace riskml {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

DataFingerprint fingerprint(const Matrix& features, std::span<const int> labels) {
  std::string text;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (double v : features.row(r)) {
      text += format_double(v);
      text += ',';
    }
    if (r < labels.size()) text += std::to_string(labels[r]);
    text += '\n';
  }
  return {features.rows(), hex64(fnv1a64(text))};
}

std::string serialize_model(const PersistedModel& persisted) {
  if (!persisted.model) throw std::invalid_argument("serialize_model: no model");
  json doc{{"format_version", persisted.format_version},
           {"model_kind", persisted.model->kind()},
           {"hyperparameters", persisted.spec.hyperparameters},
           {"seed", persisted.seed},
           {"training_data", {{"rows", persisted.training_data.rows}, {"hash", persisted.training_data.content_hash}}},
           {"model", persisted.model->to_json()}};
  doc["checksum"] = hex64(fnv1a64(doc.dump()));
  return doc.dump(1) + "\n";
}

PersistedModel deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw DataError("model file has no format_version");
  }
  const int version = doc["format_version"].get<int>();
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format_version " + std::to_string(version) + " (expected " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  if (!doc.contains("checksum") || !doc["checksum"].is_string()) throw DataError("model file has no checksum");
  const auto stored = doc["checksum"].get<std::string>();
  doc.erase("checksum");
  if (hex64(fnv1a64(doc.dump())) != stored) throw DataError("model file checksum mismatch (corrupted file)");

  try {
    PersistedModel out;
    out.format_version = version;
    out.spec.kind = doc.at("model_kind").get<ModelKind>();
    out.spec.hyperparameters = doc.at("hyperparameters").get<Hyperparameters>();
    out.seed = doc.at("seed").get<std::uint64_t>();
    out.training_data.rows = doc.at("training_data").at("rows").get<std::size_t>();
    out.training_data.content_hash = doc.at("training_data").at("hash").get<std::string>();
    out.model = model_from_json(doc.at("model"));
    if (out.model->kind() != out.spec.kind) throw DataError("model_kind does not match the stored parameters");
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const PersistedModel& persisted, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << serialize_model(persisted);
  if (!out) throw DataError("write failed: " + path.string());
}

PersistedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize_model(buffer.str());
}

}  // namespace riskml
