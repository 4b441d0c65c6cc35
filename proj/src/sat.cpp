#include "pathlogic/sat.hpp"

#include <algorithm>

namespace pathlogic::sat {

Var Solver::new_var(bool decision) {
  Var v = static_cast<Var>(assign_.size());
  assign_.push_back(0);
  decision_.push_back(decision);
  model_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  return v;
}

void Solver::enqueue(Lit l) {
  assign_[static_cast<std::size_t>(l.var())] = l.is_negative() ? -1 : 1;
  trail_.push_back(l);
}

bool Solver::add_clause(std::vector<Lit> clause) {
  if (!ok_) return false;
  cancel_until(0);
  std::sort(clause.begin(), clause.end(), [](Lit a, Lit b) { return a.code < b.code; });
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < clause.size(); ++i) {
    if (i + 1 < clause.size() && clause[i + 1] == ~clause[i]) return true;  // tautology
    int v = value(clause[i]);
    if (v > 0) return true;
    if (v == 0) kept.push_back(clause[i]);
  }
  if (kept.empty()) return ok_ = false;
  if (kept.size() == 1) {
    enqueue(kept[0]);
    if (!propagate()) ok_ = false;
    return ok_;
  }
  const int index = static_cast<int>(clauses_.size());
  watches_[static_cast<std::size_t>((~kept[0]).code)].push_back(index);
  watches_[static_cast<std::size_t>((~kept[1]).code)].push_back(index);
  clauses_.push_back(std::move(kept));
  return true;
}

bool Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    auto& ws = watches_[static_cast<std::size_t>(p.code)];
    std::size_t keep = 0;
    bool conflict = false;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const int ci = ws[i];
      if (conflict) {
        ws[keep++] = ci;
        continue;
      }
      auto& c = clauses_[static_cast<std::size_t>(ci)];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) > 0) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) >= 0) {
          std::swap(c[1], c[k]);
          watches_[static_cast<std::size_t>((~c[1]).code)].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = ci;
      if (value(c[0]) < 0) {
        conflict = true;
      } else {
        enqueue(c[0]);
      }
    }
    ws.resize(keep);
    if (conflict) return false;
  }
  return true;
}

void Solver::cancel_until(int lvl) {
  if (level() <= lvl) return;
  const std::size_t stop = trail_lim_[static_cast<std::size_t>(lvl)];
  for (std::size_t i = trail_.size(); i > stop; --i) assign_[static_cast<std::size_t>(trail_[i - 1].var())] = 0;
  trail_.resize(stop);
  trail_lim_.resize(static_cast<std::size_t>(lvl));
  qhead_ = std::min(qhead_, trail_.size());
}

Var Solver::pick_branch() const {
  Var fallback = -1;
  for (std::size_t v = 0; v < assign_.size(); ++v) {
    if (assign_[v] != 0) continue;
    if (decision_[v]) return static_cast<Var>(v);
    if (fallback < 0) fallback = static_cast<Var>(v);
  }
  return fallback;
}

bool Solver::solve(std::span<const Lit> assumptions) {
  if (!ok_) return false;
  cancel_until(0);
  qhead_ = 0;
  if (!propagate()) return ok_ = false;

  for (Lit a : assumptions) {
    int v = value(a);
    if (v > 0) continue;
    if (v < 0) {
      cancel_until(0);
      return false;
    }
    new_level();
    enqueue(a);
    if (!propagate()) {
      cancel_until(0);
      return false;
    }
  }
  const int base = level();
  std::vector<bool> flipped(static_cast<std::size_t>(base) + 1, false);

  while (true) {
    Var v = pick_branch();
    if (v < 0) {
      model_ = assign_;
      cancel_until(0);
      return true;
    }
    new_level();
    flipped.push_back(false);
    enqueue(Lit::negative(v));
    while (!propagate()) {
      while (level() > base && flipped[static_cast<std::size_t>(level())]) {
        cancel_until(level() - 1);
        flipped.pop_back();
      }
      if (level() <= base) {
        cancel_until(0);
        return false;
      }
      const Lit decision = trail_[trail_lim_.back()];
      cancel_until(level() - 1);
      new_level();
      flipped.back() = true;
      enqueue(~decision);
    }
  }
}

Var TseitinEncoder::atom_var(const Atom& a) {
  auto it = atoms_.find(a);
  if (it != atoms_.end()) return it->second;
  Var v = solver_.new_var(true);
  atoms_.emplace(a, v);
  return v;
}

Lit TseitinEncoder::encode(const Formula& f) {
  switch (f.kind()) {
    case Connective::atom:
      return Lit::positive(atom_var(f.atom()));
    case Connective::negation:
      return ~encode(f.operand());
    default:
      break;
  }
  if (auto it = gates_.find(f); it != gates_.end()) return it->second;
  Lit a = encode(f.lhs());
  const Lit b = encode(f.rhs());
  if (f.kind() == Connective::implication) a = ~a;
  const Lit x = Lit::positive(solver_.new_var(false));
  if (f.kind() == Connective::conjunction) {
    solver_.add_clause({~x, a});
    solver_.add_clause({~x, b});
    solver_.add_clause({x, ~a, ~b});
  } else {
    solver_.add_clause({~x, a, b});
    solver_.add_clause({x, ~a});
    solver_.add_clause({x, ~b});
  }
  gates_.emplace(f, x);
  return x;
}

}  // namespace pathlogic::sat
