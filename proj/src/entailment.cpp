#include "pathlogic/entailment.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "pathlogic/sat.hpp"
#include "pathlogic/truth_table.hpp"

namespace pathlogic {

namespace {

std::set<Atom> vocabulary(std::span<const Formula> formulas, const Formula* extra) {
  std::set<Atom> atoms;
  for (const auto& f : formulas) collect_atoms(f, atoms);
  if (extra) collect_atoms(*extra, atoms);
  return atoms;
}

bool use_tables(Engine engine, std::size_t atom_count, std::size_t auto_limit) {
  if (atom_count > static_cast<std::size_t>(kMaxTableAtoms)) return false;
  switch (engine) {
    case Engine::truth_table: return true;
    case Engine::sat: return false;
    case Engine::automatic: return atom_count <= auto_limit;
  }
  return false;
}

// Some assignment satisfies every formula and, when given, falsifies `goal`.
bool countermodel_exists(std::span<const Formula> formulas, const Formula* goal, Engine engine) {
  const auto atoms = vocabulary(formulas, goal);
  if (use_tables(engine, atoms.size(), kAutoTableAtoms)) {
    TruthTableSpace space(atoms);
    std::vector<TruthTable> tables;
    tables.reserve(formulas.size());
    for (const auto& f : formulas) tables.push_back(space.evaluate(f));
    std::vector<const simd::Word*> rows;
    for (const auto& t : tables) rows.push_back(t.data());
    TruthTable goal_table;
    if (goal) goal_table = space.evaluate(*goal);
    return space.kernels().conjunction_escapes(rows.data(), rows.size(), goal ? goal_table.data() : nullptr,
                                               space.words());
  }
  sat::Solver solver;
  sat::TseitinEncoder encoder(solver);
  for (const auto& f : formulas) solver.add_clause({encoder.encode(f)});
  if (goal) solver.add_clause({~encoder.encode(*goal)});
  return solver.solve();
}

}  // namespace

bool entails(std::span<const Formula> premises, const Formula& goal, Engine engine) {
  return !countermodel_exists(premises, &goal, engine);
}

bool entails(std::initializer_list<Formula> premises, const Formula& goal, Engine engine) {
  return entails(std::span<const Formula>(premises.begin(), premises.size()), goal, engine);
}

bool satisfiable(std::span<const Formula> formulas, Engine engine) {
  return countermodel_exists(formulas, nullptr, engine);
}

bool satisfiable(std::initializer_list<Formula> formulas, Engine engine) {
  return satisfiable(std::span<const Formula>(formulas.begin(), formulas.size()), engine);
}

PremiseSet::PremiseSet(std::vector<Formula> formulas) : formulas_(std::move(formulas)) {
  std::unordered_set<Formula, FormulaHash> seen;
  for (std::size_t i = 0; i < formulas_.size(); ++i) {
    if (!seen.insert(formulas_[i]).second) {
      throw std::invalid_argument("premise " + std::to_string(i + 1) + " duplicates an earlier premise: " +
                                  format_formula(formulas_[i]));
    }
  }
}

const Formula& PremiseSet::at(int id) const {
  if (id < 1 || static_cast<std::size_t>(id) > formulas_.size()) {
    throw std::out_of_range("premise id " + std::to_string(id) + " outside 1.." + std::to_string(formulas_.size()));
  }
  return formulas_[static_cast<std::size_t>(id - 1)];
}

std::vector<Formula> PremiseSet::select(std::span<const int> ids) const {
  std::vector<Formula> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(at(id));
  return out;
}

std::strong_ordering operator<=>(const MinimalSupport& a, const MinimalSupport& b) {
  if (auto c = a.premise_ids.size() <=> b.premise_ids.size(); c != 0) return c;
  return a.premise_ids <=> b.premise_ids;
}

PremiseMask mask_of(std::span<const int> ids) {
  PremiseMask m = 0;
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(kMaxOraclePremises)) throw std::out_of_range("premise id outside mask range");
    m |= PremiseMask{1} << (id - 1);
  }
  return m;
}

std::vector<int> ids_of(PremiseMask mask) {
  std::vector<int> ids;
  while (mask) {
    ids.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return ids;
}

// Tables are kept per premise so each query is one fused AND-escape pass;
// beyond the table range every premise gets a selector literal and queries
// become SAT calls under assumptions.
struct SupportOracle::Backend {
  std::optional<TruthTableSpace> space;
  std::vector<TruthTable> tables;
  TruthTable goal_table;

  sat::Solver solver;
  std::vector<sat::Var> selectors;
  std::vector<sat::Lit> assumptions;

  bool decide(PremiseMask mask) {
    if (space) {
      std::vector<const simd::Word*> rows;
      for (PremiseMask m = mask; m; m &= m - 1) rows.push_back(tables[static_cast<std::size_t>(std::countr_zero(m))].data());
      return !space->kernels().conjunction_escapes(rows.data(), rows.size(), goal_table.data(), space->words());
    }
    assumptions.clear();
    for (std::size_t i = 0; i < selectors.size(); ++i) {
      const bool on = (mask >> i) & 1U;
      assumptions.push_back(on ? sat::Lit::positive(selectors[i]) : sat::Lit::negative(selectors[i]));
    }
    return !solver.solve(assumptions);
  }
};

SupportOracle::SupportOracle(const PremiseSet& premises, const Formula& goal, Engine engine)
    : count_(premises.size()), backend_(std::make_unique<Backend>()) {
  if (count_ > kMaxOraclePremises) {
    throw std::length_error("support oracle handles at most " + std::to_string(kMaxOraclePremises) + " premises");
  }
  const auto atoms = vocabulary(premises.formulas(), &goal);
  if (use_tables(engine, atoms.size(), 20)) {
    backend_->space.emplace(atoms);
    for (const auto& f : premises.formulas()) backend_->tables.push_back(backend_->space->evaluate(f));
    backend_->goal_table = backend_->space->evaluate(goal);
    return;
  }
  sat::TseitinEncoder encoder(backend_->solver);
  for (const auto& f : premises.formulas()) {
    const sat::Var sel = backend_->solver.new_var(true);
    backend_->selectors.push_back(sel);
    backend_->solver.add_clause({sat::Lit::negative(sel), encoder.encode(f)});
  }
  backend_->solver.add_clause({~encoder.encode(goal)});
}

SupportOracle::~SupportOracle() = default;

bool SupportOracle::entails(PremiseMask subset) {
  if (auto it = cache_.find(subset); it != cache_.end()) return it->second;
  ++decisions_;
  const bool result = backend_->decide(subset);
  cache_.emplace(subset, result);
  return result;
}

namespace {

PremiseMask shrink(SupportOracle& oracle, PremiseMask set) {
  for (PremiseMask m = set; m; m &= m - 1) {
    const PremiseMask bit = m & (~m + 1);
    if (oracle.entails(set & ~bit)) set &= ~bit;
  }
  return set;
}

}  // namespace

// Split on a known support: every minimal support T inside an entailing set S
// either is the support M found for S or misses some member of M, so the
// subsets S \ {i} for i in M cover all remaining supports.
std::vector<MinimalSupport> minimal_supports(const PremiseSet& premises, const Formula& goal,
                                             const EnumerationOptions& options) {
  const std::size_t n = premises.size();
  if (n > options.max_premises || n > kMaxOraclePremises) throw EnumerationLimit(n, options.max_premises);
  SupportOracle oracle(premises, goal, options.engine);
  const PremiseMask full = n == 64 ? ~PremiseMask{0} : (PremiseMask{1} << n) - 1;

  std::vector<PremiseMask> found;
  std::unordered_set<PremiseMask> visited;
  std::vector<PremiseMask> stack{full};
  while (!stack.empty()) {
    const PremiseMask s = stack.back();
    stack.pop_back();
    if (!visited.insert(s).second) continue;
    if (!oracle.entails(s)) continue;
    PremiseMask support = 0;
    bool known = false;
    for (PremiseMask f : found) {
      if ((f & ~s) == 0) {
        support = f;
        known = true;
        break;
      }
    }
    if (!known) {
      support = shrink(oracle, s);
      found.push_back(support);
    }
    for (PremiseMask m = support; m; m &= m - 1) stack.push_back(s & ~(m & (~m + 1)));
  }

  std::vector<MinimalSupport> out;
  out.reserve(found.size());
  for (PremiseMask f : found) out.push_back(MinimalSupport{ids_of(f)});
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<int> normalized_ids(std::span<const int> ids, const PremiseSet& premises) {
  std::vector<int> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int id : sorted) (void)premises.at(id);
  if (sorted.size() > kMaxOraclePremises) throw std::length_error("support candidate larger than the oracle range");
  return sorted;
}

}  // namespace

MinimalSupport minimize_support(std::span<const int> candidate_ids, const PremiseSet& premises, const Formula& goal) {
  const auto ids = normalized_ids(candidate_ids, premises);
  PremiseSet local(premises.select(ids));
  SupportOracle oracle(local, goal);
  PremiseMask set = ids.size() == 64 ? ~PremiseMask{0} : (PremiseMask{1} << ids.size()) - 1;
  if (!oracle.entails(set)) throw std::invalid_argument("candidate premises do not entail the goal");
  set = shrink(oracle, set);
  MinimalSupport out;
  for (int local_id : ids_of(set)) out.premise_ids.push_back(ids[static_cast<std::size_t>(local_id - 1)]);
  return out;
}

bool is_minimal_support(std::span<const int> ids, const PremiseSet& premises, const Formula& goal) {
  const auto sorted = normalized_ids(ids, premises);
  if (sorted.size() != ids.size()) return false;
  PremiseSet local(premises.select(sorted));
  SupportOracle oracle(local, goal);
  const PremiseMask all = sorted.size() == 64 ? ~PremiseMask{0} : (PremiseMask{1} << sorted.size()) - 1;
  if (!oracle.entails(all)) return false;
  for (PremiseMask m = all; m; m &= m - 1) {
    if (oracle.entails(all & ~(m & (~m + 1)))) return false;
  }
  return true;
}

}  // namespace pathlogic
