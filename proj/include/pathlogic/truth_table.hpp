#pragma once

#include <map>
#include <set>
#include <vector>

#include "pathlogic/formula.hpp"
#include "pathlogic/simd/kernels.hpp"

namespace pathlogic {

/// Largest atom count for which full truth tables are built (2^24 bits = 2 MiB per table).
inline constexpr int kMaxTableAtoms = 24;

using TruthTable = std::vector<simd::Word>;

/// Bit-sliced evaluation space over a fixed atom vocabulary. Vocabularies
/// smaller than 6 atoms are padded with unused variables so a table always
/// fills whole words; padding duplicates assignments and leaves every
/// validity and satisfiability answer unchanged.
class TruthTableSpace {
 public:
  explicit TruthTableSpace(const std::set<Atom>& atoms, const simd::Kernels& kernels = simd::active_kernels());

  int variable_count() const { return variables_; }
  std::size_t words() const { return words_; }
  const simd::Kernels& kernels() const { return *kernels_; }

  /// Throws std::out_of_range when `f` mentions an atom outside the vocabulary.
  TruthTable evaluate(const Formula& f) const;

 private:
  void evaluate_into(const Formula& f, TruthTable& out) const;

  const simd::Kernels* kernels_;
  int variables_ = 0;
  std::size_t words_ = 0;
  std::map<Atom, std::size_t> index_;
  std::vector<TruthTable> atom_tables_;
};

}  // namespace pathlogic
