#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pathlogic {

/// Ground atom: `name` or `name(c1,...,ck)`. Arguments are opaque constants,
/// so an atom behaves as a single propositional variable.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

/// `[a-z][a-z0-9_]*`
bool is_identifier(std::string_view text);

/// Builds an atom after checking the identifier grammar; throws std::invalid_argument.
Atom make_atom(std::string predicate, std::vector<std::string> args = {});

std::string to_string(const Atom& atom);

enum class Connective : std::uint8_t { atom, negation, implication, disjunction, conjunction };

/// Immutable formula tree with value semantics. Copies share structure.
class Formula {
 public:
  static Formula make_atom(Atom atom);
  static Formula make_not(Formula operand);
  static Formula make_implies(Formula antecedent, Formula consequent);
  static Formula make_or(Formula lhs, Formula rhs);
  static Formula make_and(Formula lhs, Formula rhs);

  Connective kind() const { return node_->kind; }
  bool is_atom() const { return node_->kind == Connective::atom; }
  /// Atom or negated atom.
  bool is_literal() const;

  const Atom& atom() const;
  /// Operand of a negation.
  const Formula& operand() const;
  /// Left child of a binary connective (antecedent for implications).
  const Formula& lhs() const;
  const Formula& rhs() const;

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Connective kind;
    Atom atom;
    std::vector<Formula> children;
    std::size_t size = 1;
    std::size_t hash = 0;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make_binary(Connective kind, Formula lhs, Formula rhs);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

// Short constructors used throughout the generator and the tests.
Formula atom(std::string_view name);
Formula atom(Atom a);
Formula neg(Formula f);
Formula implies(Formula a, Formula b);
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);

/// Error raised for text outside the formula grammar.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, std::string found);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string found_;
};

/// Parses one formula of the Prover9 subset. Precedence `-` > `&` > `|` > `->`;
/// binary connectives associate to the right; a trailing `.` is accepted.
Formula parse_formula(std::string_view text);

/// Canonical text with minimal parentheses. `parse_formula(format_formula(f)) == f`.
std::string format_formula(const Formula& f);

std::set<Atom> atoms_of(const Formula& f);
void collect_atoms(const Formula& f, std::set<Atom>& out);

/// Rebuilds `f` with every atom replaced by `lookup(atom)`.
template <typename Lookup>
Formula substitute_atoms(const Formula& f, const Lookup& lookup);

/// Truth value under an assignment callback `bool(const Atom&)`.
template <typename Assignment>
bool evaluate(const Formula& f, const Assignment& value_of) {
  switch (f.kind()) {
    case Connective::atom:
      return value_of(f.atom());
    case Connective::negation:
      return !evaluate(f.operand(), value_of);
    case Connective::implication:
      return !evaluate(f.lhs(), value_of) || evaluate(f.rhs(), value_of);
    case Connective::disjunction:
      return evaluate(f.lhs(), value_of) || evaluate(f.rhs(), value_of);
    case Connective::conjunction:
      return evaluate(f.lhs(), value_of) && evaluate(f.rhs(), value_of);
  }
  return false;
}

template <typename Lookup>
Formula substitute_atoms(const Formula& f, const Lookup& lookup) {
  switch (f.kind()) {
    case Connective::atom:
      return lookup(f.atom());
    case Connective::negation:
      return neg(substitute_atoms(f.operand(), lookup));
    case Connective::implication:
      return implies(substitute_atoms(f.lhs(), lookup), substitute_atoms(f.rhs(), lookup));
    case Connective::disjunction:
      return lor(substitute_atoms(f.lhs(), lookup), substitute_atoms(f.rhs(), lookup));
    case Connective::conjunction:
      return land(substitute_atoms(f.lhs(), lookup), substitute_atoms(f.rhs(), lookup));
  }
  return f;
}

/// True when `a` and `b` have the same connective tree (atoms ignored).
bool same_shape(const Formula& a, const Formula& b);

}  // namespace pathlogic
