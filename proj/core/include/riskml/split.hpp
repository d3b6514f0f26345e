#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riskml/dataset.hpp"

namespace riskml {

struct TrainTestSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;  // positions in the source dataset, ascending
  std::vector<std::size_t> test_indices;
};

/// Stratified split. The test set holds round(n * test_fraction) records, allotted
/// to classes by largest remainder so every class is within one record of its share.
TrainTestSplit train_test_split(const Dataset& dataset, double test_fraction, std::uint64_t seed);

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold_index;  // one entry per record, each in [0, k)

  std::vector<std::size_t> validation_indices(std::size_t fold) const;
  std::vector<std::size_t> training_indices(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

/// Stratified k-fold assignment: records are shuffled within class, the classes are
/// concatenated and positions are dealt round-robin, so fold sizes differ by at most one
/// overall and per class.
FoldAssignment make_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

}  // namespace riskml
