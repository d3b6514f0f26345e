#include "riskml/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "riskml/random.hpp"

namespace riskml {
namespace {

std::array<std::vector<std::size_t>, 2> indices_by_class(const Dataset& dataset) {
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < dataset.size(); ++i) by_class[static_cast<std::size_t>(*dataset[i].infected)].push_back(i);
  return by_class;
}

}  // namespace

TrainTestSplit train_test_split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  require_labeled(dataset, "train_test_split");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("train_test_split: test_fraction must lie in (0, 1)");
  }
  auto by_class = indices_by_class(dataset);
  Rng rng = make_rng(seed, stream::kSplit);
  for (auto& members : by_class) shuffle_in_place(members, rng);

  // Largest-remainder allocation of the test quota across the two classes.
  const auto n = dataset.size();
  const auto total_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  std::array<std::size_t, 2> quota{};
  std::array<double, 2> remainder{};
  std::size_t allotted = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double exact = static_cast<double>(by_class[c].size()) * static_cast<double>(total_test) /
                         static_cast<double>(n);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(quota[c]);
    allotted += quota[c];
  }
  while (allotted < total_test) {
    const std::size_t c = remainder[1] > remainder[0] ? 1 : 0;
    ++quota[c];
    remainder[c] = -1.0;
    ++allotted;
  }

  TrainTestSplit out;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& members = by_class[c];
    out.test_indices.insert(out.test_indices.end(), members.begin(), members.begin() + static_cast<long>(quota[c]));
    out.train_indices.insert(out.train_indices.end(), members.begin() + static_cast<long>(quota[c]), members.end());
  }
  std::sort(out.train_indices.begin(), out.train_indices.end());
  std::sort(out.test_indices.begin(), out.test_indices.end());
  out.train = dataset.subset(out.train_indices);
  out.test = dataset.subset(out.test_indices);
  return out;
}

FoldAssignment make_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  require_labeled(dataset, "make_folds");
  if (k < 2 || k > dataset.size()) {
    throw std::invalid_argument("make_folds: k must lie in [2, n], got k=" + std::to_string(k) +
                                " for n=" + std::to_string(dataset.size()));
  }
  auto by_class = indices_by_class(dataset);
  Rng rng = make_rng(seed, stream::kFolds);
  FoldAssignment folds{k, std::vector<std::size_t>(dataset.size(), 0)};
  std::size_t position = 0;
  for (auto& members : by_class) {
    shuffle_in_place(members, rng);
    for (auto i : members) folds.fold_index[i] = position++ % k;
  }
  return folds;
}

std::vector<std::size_t> FoldAssignment::validation_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_index.size(); ++i) {
    if (fold_index[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::training_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_index.size(); ++i) {
    if (fold_index[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto f : fold_index) ++sizes[f];
  return sizes;
}

}  // namespace riskml
