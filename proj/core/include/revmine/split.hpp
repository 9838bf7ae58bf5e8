#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "revmine/corpus.hpp"

namespace revmine {

enum class Part { train = 0, val = 1, test = 2 };
inline constexpr std::array<const char*, 3> kPartNames = {"train", "val", "test"};

struct SplitFractions {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
};

struct SplitAssignment {
  std::unordered_map<std::string, Part> part_of;  // review id -> part
  SplitFractions fractions;
  uint64_t seed = 0;

  // ids of one part, in corpus order
  std::vector<std::string> ids_in(Part p) const;
  size_t count(Part p) const;
};

// Iterative stratification over the 4 binary labels: repeatedly take the label
// with fewest remaining positives and deal its examples to the part furthest
// below that label's quota, subject to each part's remaining size capacity.
// Ties break on overall capacity, then seeded randomness. Exact part sizes
// (train = round(f*N), test = remainder). Deterministic per seed.
SplitAssignment stratified_split(const Corpus& corpus, SplitFractions fractions,
                                 uint64_t seed);

// Convenience: entries of one part, corpus order preserved.
std::vector<const LabeledReview*> part_entries(const Corpus& corpus,
                                               const SplitAssignment& split, Part p);

}  // namespace revmine
