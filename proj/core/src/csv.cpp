#include "riskml/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "riskml/errors.hpp"

namespace riskml {
namespace {

constexpr std::string_view kUnlabeledHeader =
    "age,body_temperature,fatigue,cough,body_pain,sore_throat,breathing_difficulty";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string at_line(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

double parse_real(std::string_view field, std::string_view name, std::size_t line_no) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw DataError(at_line(line_no, "cannot parse " + std::string(name) + " from '" + std::string(field) + "'"));
  }
  return value;
}

int parse_flag(std::string_view field, std::string_view name, std::size_t line_no) {
  int value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw DataError(at_line(line_no, "cannot parse " + std::string(name) + " from '" + std::string(field) + "'"));
  }
  if (value != 0 && value != 1) {
    throw DataError(at_line(line_no, std::string(name) + " must be 0 or 1, got " + std::to_string(value)));
  }
  return value;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool has_label = false;
  if (line == kCsvHeader) {
    has_label = true;
  } else if (line != kUnlabeledHeader) {
    throw DataError("line 1: unknown header '" + line + "', expected '" + std::string(kCsvHeader) + "'");
  }
  const std::size_t expected_fields = has_label ? kFeatureCount + 1 : kFeatureCount;

  std::vector<PatientRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != expected_fields) {
      throw DataError(at_line(line_no, "expected " + std::to_string(expected_fields) + " fields, got " +
                                           std::to_string(fields.size())));
    }
    PatientRecord r;
    r.age = parse_real(fields[0], kFeatureNames[0], line_no);
    r.body_temperature = parse_real(fields[1], kFeatureNames[1], line_no);
    r.fatigue = parse_flag(fields[2], kFeatureNames[2], line_no);
    r.cough = parse_flag(fields[3], kFeatureNames[3], line_no);
    r.body_pain = parse_flag(fields[4], kFeatureNames[4], line_no);
    r.sore_throat = parse_flag(fields[5], kFeatureNames[5], line_no);
    r.breathing_difficulty = parse_flag(fields[6], kFeatureNames[6], line_no);
    if (has_label) r.infected = parse_flag(fields[7], kLabelName, line_no);
    try {
      validate_record(r);
    } catch (const DataError& e) {
      throw DataError(at_line(line_no, e.what()));
    }
    records.push_back(r);
  }
  return Dataset(std::move(records));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  out << (dataset.labeled() || dataset.empty() ? kCsvHeader : kUnlabeledHeader) << '\n';
  for (const auto& r : dataset.records()) {
    out << format_double(r.age) << ',' << format_double(r.body_temperature) << ',' << r.fatigue << ',' << r.cough
        << ',' << r.body_pain << ',' << r.sore_throat << ',' << r.breathing_difficulty;
    if (r.infected) out << ',' << *r.infected;
    out << '\n';
  }
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(dataset, out);
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace riskml
