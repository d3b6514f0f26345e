#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "riskml/dataset.hpp"

namespace riskml {

/// Header with the label column. Prediction inputs may omit the trailing `infected`.
inline constexpr std::string_view kCsvHeader =
    "age,body_temperature,fatigue,cough,body_pain,sore_throat,breathing_difficulty,infected";

Dataset read_csv(std::istream& in);
Dataset load_csv(const std::filesystem::path& path);

/// Writes the label column when the dataset is labeled.
void write_csv(const Dataset& dataset, std::ostream& out);
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Shortest representation that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace riskml
