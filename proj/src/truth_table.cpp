#include "pathlogic/truth_table.hpp"

#include <stdexcept>

namespace pathlogic {

namespace {

constexpr simd::Word kLowPatterns[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

TruthTable variable_table(int var, std::size_t words) {
  TruthTable t(words);
  if (var < 6) {
    for (auto& w : t) w = kLowPatterns[var];
    return t;
  }
  const std::size_t shift = static_cast<std::size_t>(var - 6);
  for (std::size_t w = 0; w < words; ++w) t[w] = ((w >> shift) & 1U) ? ~simd::Word{0} : 0;
  return t;
}

}  // namespace

TruthTableSpace::TruthTableSpace(const std::set<Atom>& atoms, const simd::Kernels& kernels) : kernels_(&kernels) {
  if (atoms.size() > static_cast<std::size_t>(kMaxTableAtoms)) {
    throw std::length_error("truth table over " + std::to_string(atoms.size()) + " atoms exceeds the limit of " +
                            std::to_string(kMaxTableAtoms));
  }
  variables_ = std::max<int>(6, static_cast<int>(atoms.size()));
  words_ = std::size_t{1} << (variables_ - 6);
  std::size_t i = 0;
  for (const auto& a : atoms) {
    index_.emplace(a, i);
    atom_tables_.push_back(variable_table(static_cast<int>(i), words_));
    ++i;
  }
}

TruthTable TruthTableSpace::evaluate(const Formula& f) const {
  TruthTable out(words_);
  evaluate_into(f, out);
  return out;
}

void TruthTableSpace::evaluate_into(const Formula& f, TruthTable& out) const {
  switch (f.kind()) {
    case Connective::atom: {
      auto it = index_.find(f.atom());
      if (it == index_.end()) throw std::out_of_range("atom '" + to_string(f.atom()) + "' outside the table vocabulary");
      out = atom_tables_[it->second];
      return;
    }
    case Connective::negation:
      evaluate_into(f.operand(), out);
      kernels_->not_words(out.data(), out.data(), words_);
      return;
    default:
      break;
  }
  TruthTable rhs(words_);
  evaluate_into(f.lhs(), out);
  evaluate_into(f.rhs(), rhs);
  switch (f.kind()) {
    case Connective::implication: kernels_->implies_words(out.data(), out.data(), rhs.data(), words_); break;
    case Connective::disjunction: kernels_->or_words(out.data(), out.data(), rhs.data(), words_); break;
    case Connective::conjunction: kernels_->and_words(out.data(), out.data(), rhs.data(), words_); break;
    default: break;
  }
}

}  // namespace pathlogic
