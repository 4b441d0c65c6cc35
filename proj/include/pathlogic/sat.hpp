#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "pathlogic/formula.hpp"

namespace pathlogic::sat {

using Var = int;

/// Literal encoded as 2*var + (negative ? 1 : 0).
struct Lit {
  int code = 0;

  static Lit positive(Var v) { return Lit{2 * v}; }
  static Lit negative(Var v) { return Lit{2 * v + 1}; }
  Var var() const { return code >> 1; }
  bool is_negative() const { return code & 1; }
  Lit operator~() const { return Lit{code ^ 1}; }
  bool operator==(const Lit&) const = default;
};

/// Small DPLL solver: two watched literals, chronological backtracking,
/// incremental clause addition between calls and solving under assumptions.
/// Sized for the formulas this project produces (hundreds of variables).
class Solver {
 public:
  /// Decision variables are branched on; the others must be fixed by
  /// propagation once every decision variable has a value (Tseitin gates).
  Var new_var(bool decision = true);
  int var_count() const { return static_cast<int>(assign_.size()); }

  /// Returns false once the clause set is unsatisfiable at the root.
  bool add_clause(std::vector<Lit> clause);

  bool solve(std::span<const Lit> assumptions = {});

  /// Model of the last satisfiable call.
  bool model_value(Var v) const { return model_[static_cast<std::size_t>(v)] > 0; }
  bool okay() const { return ok_; }

 private:
  int value(Lit l) const {
    int8_t a = assign_[static_cast<std::size_t>(l.var())];
    return l.is_negative() ? -a : a;
  }
  void enqueue(Lit l);
  bool propagate();  // false on conflict
  void new_level() { trail_lim_.push_back(trail_.size()); }
  int level() const { return static_cast<int>(trail_lim_.size()); }
  void cancel_until(int lvl);
  Var pick_branch() const;

  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;  // indexed by literal code: clauses watching its negation
  std::vector<int8_t> assign_;
  std::vector<bool> decision_;
  std::vector<int8_t> model_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  bool ok_ = true;
};

/// Equisatisfiable CNF via Tseitin definitions (full equivalences, so gate
/// values are forced by the atoms they depend on).
class TseitinEncoder {
 public:
  explicit TseitinEncoder(Solver& solver) : solver_(solver) {}

  Lit encode(const Formula& f);
  Var atom_var(const Atom& a);

 private:
  Solver& solver_;
  std::map<Atom, Var> atoms_;
  std::unordered_map<Formula, Lit, FormulaHash> gates_;
};

}  // namespace pathlogic::sat
