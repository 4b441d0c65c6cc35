#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathlogic/catalog.hpp"
#include "pathlogic/dag.hpp"
#include "pathlogic/formula.hpp"
#include "pathlogic/text_client.hpp"

namespace pathlogic {

struct SymbolEntry {
  Atom abstract;
  Atom concrete;
  /// Clause describing the atom, e.g. "Emma can enter the Vault".
  std::string gloss;
};

class NamingCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bijection from abstract DAG atoms to named atoms with glosses.
class SymbolMap {
 public:
  /// Throws NamingCollision when the abstract atom, the concrete atom or the
  /// gloss (compared case-insensitively) is already taken.
  void add(Atom abstract, Atom concrete, std::string gloss);

  const SymbolEntry* find(const Atom& abstract) const;
  const SymbolEntry* find_concrete(const Atom& concrete) const;
  /// Throws std::out_of_range for an unmapped atom.
  Formula apply(const Formula& abstract_formula) const;

  const std::vector<SymbolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<SymbolEntry> entries_;
  std::map<Atom, std::size_t> by_abstract_;
  std::map<Atom, std::size_t> by_concrete_;
  std::map<std::string, std::size_t> by_gloss_;
};

/// DAG atoms in minting order (a1, a2, ..., a10, ...).
std::vector<Atom> dag_atoms(const LogicDag& dag);

/// `to` is `from` with atoms renamed by `map`.
bool structure_preserved(const Formula& from, const Formula& to, const SymbolMap& map);

struct VerbalizedInstance {
  std::string context;
  /// One sentence per premise, in premise order.
  std::vector<std::string> premise_sentences;
  std::string goal_sentence;
  /// Canonical formula text for each premise, then the goal.
  std::vector<std::string> prover9_forms;
  /// "fallback" or "client".
  std::string mode;
};

struct InstantiationOptions {
  /// Non-owning; null selects the offline templates.
  TextClient* client = nullptr;
  /// On client failure use the offline path instead of throwing.
  bool fallback_on_failure = true;
  /// Extra prompts after a response fails validation.
  int max_reprompts = 2;
  std::uint64_t seed = 0;
};

class InstantiationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mechanical names: atom k becomes `<type>_prop_k(<type>_j)` glossed as
/// "<type> j has property k", with j drawn from the profile's constant pool
/// size using `seed`.
SymbolMap fallback_symbol_map(const LogicDag& dag, const DomainProfile& profile, std::uint64_t seed);

SymbolMap assign_semantics(const LogicDag& dag, const DomainProfile& profile, const InstantiationOptions& options);

/// Template rendering: "If X, then Y", "Either X or Y", "Both X and Y",
/// "It is not the case that X"; compound operands are parenthesized.
std::string render_clause(const Formula& f, const SymbolMap& map);
std::string render_sentence(const Formula& f, const SymbolMap& map);

VerbalizedInstance verbalize(const LogicDag& dag, const SymbolMap& map, const DomainProfile& profile,
                             const InstantiationOptions& options);

/// Inverse of render_sentence over a known vocabulary of glosses. Matching
/// ignores letter case and a trailing period.
class SentenceReader {
 public:
  SentenceReader() = default;
  explicit SentenceReader(const std::vector<std::pair<Atom, std::string>>& glossary);
  explicit SentenceReader(const SymbolMap& map);

  std::optional<Formula> read(std::string_view sentence) const;

 private:
  std::optional<Formula> parse(std::string_view s) const;
  std::optional<Formula> operand(std::string_view s) const;

  std::map<std::string, Atom, std::less<>> atoms_;
};

std::string casefold(std::string_view text);

}  // namespace pathlogic
