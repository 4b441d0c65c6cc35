#include "pathlogic/dag.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pathlogic {

std::string_view tier_name(Tier tier) {
  switch (tier) {
    case Tier::small: return "small";
    case Tier::medium: return "medium";
    case Tier::large: return "large";
  }
  return "small";
}

std::optional<Tier> tier_from_name(std::string_view name) {
  if (name == "small") return Tier::small;
  if (name == "medium") return Tier::medium;
  if (name == "large") return Tier::large;
  return std::nullopt;
}

TierBand GenerationConfig::band() const {
  switch (tier) {
    case Tier::small: return {2, 4};
    case Tier::medium: return {5, 7};
    case Tier::large: return {8, large_max_paths};
  }
  return {2, 4};
}

void GenerationConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("generation config: " + what); };
  if (depth_min < 1) fail("depth_min must be at least 1");
  if (depth_max < depth_min) fail("depth_max is below depth_min");
  if (branch_depth_min < 1 || branch_depth_max < branch_depth_min) fail("branch depth range is empty");
  double total = 0;
  for (double w : form_weights) {
    if (w < 0) fail("form weights must be non-negative");
    total += w;
  }
  if (total <= 0) fail("form weights are all zero");
  if (!(share_probability >= 0 && share_probability <= 1)) fail("share_probability outside [0,1]");
  if (max_branch_attempts < 1) fail("max_branch_attempts must be positive");
  if (instance_attempts < 1) fail("instance_attempts must be positive");
  if (max_formula_size < 3) fail("max_formula_size must be at least 3");
  if (large_max_paths < 8) fail("large_max_paths must be at least 8");
  if (max_reuse_ratio < 1) fail("max_reuse_ratio must be at least 1");
}

int LogicDag::add_formula(Formula f) {
  for (const auto& g : formulas_) {
    if (g == f) throw std::logic_error("duplicate formula node: " + format_formula(f));
  }
  formulas_.push_back(std::move(f));
  derivations_.emplace_back();
  return static_cast<int>(formulas_.size());
}

int LogicDag::add_inference(FormKind form, std::vector<int> premises, int conclusion, std::vector<Atom> minted) {
  for (int p : premises) (void)formula(p);
  (void)formula(conclusion);
  const int id = static_cast<int>(inferences_.size()) + 1;
  inferences_.push_back(InferenceNode{id, form, std::move(premises), conclusion, std::move(minted)});
  derivations_[static_cast<std::size_t>(conclusion - 1)].push_back(id);
  leaf_order_.clear();
  return id;
}

const Formula& LogicDag::formula(int node_id) const {
  if (node_id < 1 || static_cast<std::size_t>(node_id) > formulas_.size()) {
    throw std::out_of_range("formula node " + std::to_string(node_id) + " does not exist");
  }
  return formulas_[static_cast<std::size_t>(node_id - 1)];
}

const InferenceNode& LogicDag::inference(int inference_id) const {
  if (inference_id < 1 || static_cast<std::size_t>(inference_id) > inferences_.size()) {
    throw std::out_of_range("inference node " + std::to_string(inference_id) + " does not exist");
  }
  return inferences_[static_cast<std::size_t>(inference_id - 1)];
}

const std::vector<int>& LogicDag::derivations(int node_id) const {
  (void)formula(node_id);
  return derivations_[static_cast<std::size_t>(node_id - 1)];
}

std::vector<int> LogicDag::leaves() const {
  if (!leaf_order_.empty()) return leaf_order_;
  std::vector<int> out;
  for (std::size_t i = 0; i < formulas_.size(); ++i) {
    if (derivations_[i].empty()) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

int LogicDag::premise_id(int node_id) const {
  const auto order = leaves();
  auto it = std::find(order.begin(), order.end(), node_id);
  return it == order.end() ? 0 : static_cast<int>(it - order.begin()) + 1;
}

void LogicDag::set_leaf_order(std::vector<int> order) {
  leaf_order_.clear();
  auto current = leaves();
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != current) throw std::invalid_argument("leaf order is not a permutation of the leaves");
  leaf_order_ = std::move(order);
}

void LogicDag::set_goal(int node_id) {
  (void)formula(node_id);
  goal_id_ = node_id;
}

bool LogicDag::depends_on(int node_id, int target) const {
  std::vector<char> seen(formulas_.size() + 1, 0);
  std::vector<int> stack{node_id};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (n == target) return true;
    if (seen[static_cast<std::size_t>(n)]) continue;
    seen[static_cast<std::size_t>(n)] = 1;
    for (int inf : derivations(n)) {
      for (int p : inference(inf).premises) stack.push_back(p);
    }
  }
  return false;
}

std::vector<int> LogicDag::topological_inferences() const {
  std::vector<int> order;
  std::vector<char> state(inferences_.size() + 1, 0);
  std::function<void(int)> visit = [&](int inf) {
    if (state[static_cast<std::size_t>(inf)] == 2) return;
    if (state[static_cast<std::size_t>(inf)] == 1) throw std::logic_error("cycle through inference node");
    state[static_cast<std::size_t>(inf)] = 1;
    for (int p : inference(inf).premises) {
      for (int d : derivations(p)) visit(d);
    }
    state[static_cast<std::size_t>(inf)] = 2;
    order.push_back(inf);
  };
  for (const auto& node : inferences_) visit(node.id);
  return order;
}

Atom LogicDag::mint_atom() { return Atom{"a" + std::to_string(next_atom_++), {}}; }

namespace {

// Premise shapes each form needs, checked against the size cap.
bool form_applies(FormKind form, const Formula& phi, int cap) {
  const auto size = static_cast<int>(phi.size());
  switch (form) {
    case FormKind::mp:
    case FormKind::ds:
    case FormKind::de:
      return size + 2 <= cap;
    case FormKind::mt:
      return phi.kind() == Connective::negation && static_cast<int>(phi.operand().size()) + 2 <= cap;
    case FormKind::raa:
      return phi.kind() == Connective::negation && static_cast<int>(phi.operand().size()) + 3 <= cap;
    case FormKind::hs:
    case FormKind::cd:
      if (phi.kind() != (form == FormKind::hs ? Connective::implication : Connective::disjunction)) return false;
      return static_cast<int>(std::max(phi.lhs().size(), phi.rhs().size())) + 2 <= cap;
  }
  return false;
}

bool expandable(const Formula& phi, const GenerationConfig& config) {
  for (FormKind k : kAllForms) {
    if (config.form_weights[static_cast<std::size_t>(k)] > 0 && form_applies(k, phi, config.max_formula_size)) return true;
  }
  return false;
}

std::optional<int> find_node(const LogicDag& dag, const Formula& f) {
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) {
    if (dag.formula(static_cast<int>(i)) == f) return static_cast<int>(i);
  }
  return std::nullopt;
}

struct Slot {
  std::optional<int> existing;
  std::optional<Formula> fresh;
};

// Existing nodes that can stand in for the MP minor premise or the negative
// premise of MT/DS when deriving `target`.
std::vector<int> share_candidates(const LogicDag& dag, FormKind form, int target, int cap) {
  std::vector<int> out;
  const Formula& phi = dag.formula(target);
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) {
    const int id = static_cast<int>(i);
    if (id == target || id == dag.goal_id()) continue;
    const Formula& f = dag.formula(id);
    std::optional<Formula> partner;
    switch (form) {
      case FormKind::mp:
        partner = implies(f, phi);
        break;
      case FormKind::mt:
        if (f.kind() == Connective::negation) partner = implies(phi.operand(), f.operand());
        break;
      case FormKind::ds:
        if (f.kind() == Connective::negation) partner = lor(f.operand(), phi);
        break;
      default:
        break;
    }
    if (!partner || static_cast<int>(partner->size()) > cap) continue;
    if (find_node(dag, *partner)) continue;
    if (dag.depends_on(id, target)) continue;
    out.push_back(id);
  }
  return out;
}

// Adds one inference node deriving `target`; returns the ids of the premise
// nodes it created (shared premises are not included).
std::vector<int> derive_once(LogicDag& dag, int target, const GenerationConfig& config, Rng& rng, bool allow_share) {
  const Formula phi = dag.formula(target);
  const int cap = config.max_formula_size;
  std::vector<FormKind> forms;
  std::vector<double> weights;
  for (FormKind k : kAllForms) {
    const double w = config.form_weights[static_cast<std::size_t>(k)];
    if (w > 0 && form_applies(k, phi, cap)) {
      forms.push_back(k);
      weights.push_back(w);
    }
  }
  if (forms.empty()) return {};
  const FormKind form = forms[rng.weighted_index(weights)];

  std::optional<int> shared;
  if (allow_share && (form == FormKind::mp || form == FormKind::mt || form == FormKind::ds) &&
      rng.bernoulli(config.share_probability)) {
    auto candidates = share_candidates(dag, form, target, cap);
    if (!candidates.empty()) shared = rng.pick(candidates);
  }

  std::vector<Atom> minted;
  auto fresh = [&] {
    minted.push_back(dag.mint_atom());
    return atom(minted.back());
  };
  std::vector<Slot> slots;
  auto add = [&](Formula f) { slots.push_back(Slot{std::nullopt, std::move(f)}); };
  auto reuse = [&](int id) { slots.push_back(Slot{id, std::nullopt}); };

  switch (form) {
    case FormKind::mp: {
      if (shared) {
        add(implies(dag.formula(*shared), phi));
        reuse(*shared);
      } else {
        Formula a = fresh();
        add(implies(a, phi));
        add(a);
      }
      break;
    }
    case FormKind::mt: {
      const Formula& x = phi.operand();
      if (shared) {
        add(implies(x, dag.formula(*shared).operand()));
        reuse(*shared);
      } else {
        Formula q = fresh();
        add(implies(x, q));
        add(neg(q));
      }
      break;
    }
    case FormKind::hs: {
      Formula q = fresh();
      add(implies(phi.lhs(), q));
      add(implies(q, phi.rhs()));
      break;
    }
    case FormKind::ds: {
      if (shared) {
        add(lor(dag.formula(*shared).operand(), phi));
        reuse(*shared);
      } else {
        Formula p = fresh();
        add(lor(p, phi));
        add(neg(p));
      }
      break;
    }
    case FormKind::cd: {
      Formula p = fresh();
      Formula r = fresh();
      add(implies(p, phi.lhs()));
      add(implies(r, phi.rhs()));
      add(lor(p, r));
      break;
    }
    case FormKind::raa: {
      Formula q = fresh();
      add(implies(phi.operand(), q));
      add(implies(phi.operand(), neg(q)));
      break;
    }
    case FormKind::de: {
      Formula p = fresh();
      Formula q = fresh();
      add(lor(p, q));
      add(implies(p, phi));
      add(implies(q, phi));
      break;
    }
  }

  std::vector<int> premise_ids;
  std::vector<int> created;
  for (auto& slot : slots) {
    if (slot.existing) {
      premise_ids.push_back(*slot.existing);
    } else {
      const int id = dag.add_formula(*slot.fresh);
      premise_ids.push_back(id);
      created.push_back(id);
    }
  }
  const int inf = dag.add_inference(form, std::move(premise_ids), target, std::move(minted));
  if (shared) dag.record_share(ShareEvent{inf, *shared});
  return created;
}

// Derives `start`, then keeps deriving one of the freshly created premises
// until `steps` inference nodes exist on the new sub-chain.
int grow(LogicDag& dag, int start, int steps, const GenerationConfig& config, Rng& rng, bool allow_share) {
  int current = start;
  int made = 0;
  while (made < steps) {
    auto created = derive_once(dag, current, config, rng, allow_share);
    if (created.empty()) break;
    ++made;
    std::vector<int> next;
    for (int id : created) {
      if (expandable(dag.formula(id), config)) next.push_back(id);
    }
    if (next.empty()) break;
    current = rng.pick(next);
  }
  return made;
}

struct Attempt {
  LogicDag dag;
  GroundTruth gt;
};

bool same_supports(const GroundTruth& gt, const std::vector<MinimalSupport>& oracle) {
  if (gt.solutions.size() != oracle.size()) return false;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    if (gt.solutions[i].support != oracle[i]) return false;
  }
  return true;
}

std::optional<Attempt> try_branch(const LogicDag& dag, std::size_t previous_paths, Rng& rng) {
  const auto& config = dag.config;
  std::vector<int> derived;
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) {
    const int id = static_cast<int>(i);
    if (!dag.is_leaf(id) && expandable(dag.formula(id), config)) derived.push_back(id);
  }
  if (derived.empty()) return std::nullopt;
  LogicDag next = dag;
  const int node = rng.pick(derived);
  const int steps = rng.uniform_int(config.branch_depth_min, config.branch_depth_max);
  if (grow(next, node, steps, config, rng, true) == 0) return std::nullopt;

  GroundTruth gt;
  try {
    gt = derive_ground_truth(next);
  } catch (const GroundTruthInconsistent&) {
    return std::nullopt;
  }
  if (gt.solutions.size() <= previous_paths) return std::nullopt;
  const auto leaves = next.leaves();
  std::vector<Formula> leaf_formulas;
  for (int id : leaves) leaf_formulas.push_back(next.formula(id));
  if (!satisfiable(leaf_formulas)) return std::nullopt;
  if (leaves.size() <= config.oracle_premise_limit) {
    const auto oracle = minimal_supports(PremiseSet(leaf_formulas), next.goal());
    if (!same_supports(gt, oracle)) return std::nullopt;
  }
  return Attempt{std::move(next), std::move(gt)};
}

Attempt branch_or_throw(const LogicDag& dag, std::size_t previous_paths, Rng& rng) {
  for (int attempt = 0; attempt < dag.config.max_branch_attempts; ++attempt) {
    if (auto result = try_branch(dag, previous_paths, rng)) return std::move(*result);
  }
  throw BranchRejected("no acceptable branch after " + std::to_string(dag.config.max_branch_attempts) + " attempts");
}

}  // namespace

LogicDag generate_chain(const GenerationConfig& config, Rng& rng) {
  config.validate();
  LogicDag dag;
  dag.seed = config.seed;
  dag.config = config;
  const int goal = dag.add_formula(atom(dag.mint_atom()));
  dag.set_goal(goal);
  grow(dag, goal, rng.uniform_int(config.depth_min, config.depth_max), config, rng, false);
  return dag;
}

LogicDag add_branch(const LogicDag& dag, Rng& rng) {
  if (dag.inference_count() == 0) throw std::invalid_argument("add_branch needs at least one inference node");
  const std::size_t paths = derive_ground_truth(dag).solutions.size();
  return branch_or_throw(dag, paths, rng).dag;
}

GeneratedInstance generate_instance(const GenerationConfig& config) {
  config.validate();
  const TierBand band = config.band();
  for (int attempt = 0; attempt < config.instance_attempts; ++attempt) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(attempt)));
    LogicDag dag = generate_chain(config, rng);
    GroundTruth gt = derive_ground_truth(dag);
    const int target = rng.uniform_int(band.min_paths, band.max_paths);
    int overshoots = 0;
    try {
      while (static_cast<int>(gt.solutions.size()) < target && overshoots < config.max_branch_attempts) {
        Attempt next = branch_or_throw(dag, gt.solutions.size(), rng);
        if (static_cast<int>(next.gt.solutions.size()) > band.max_paths) {
          ++overshoots;
          continue;
        }
        dag = std::move(next.dag);
        gt = std::move(next.gt);
      }
    } catch (const BranchRejected&) {
      continue;
    }
    const int paths = static_cast<int>(gt.solutions.size());
    if (paths < band.min_paths || paths > band.max_paths) continue;
    if (gt.stats.reuse_ratio > config.max_reuse_ratio) continue;

    auto order = dag.leaves();
    rng.shuffle(order);
    dag.set_leaf_order(std::move(order));
    gt = derive_ground_truth(dag);
    return GeneratedInstance{std::move(dag), std::move(gt)};
  }
  throw TierUnreachable("no " + std::string(tier_name(config.tier)) + " instance within " +
                        std::to_string(config.instance_attempts) + " attempts for seed " + std::to_string(config.seed));
}

std::vector<std::string> check_dag(const LogicDag& dag) {
  std::vector<std::string> problems;
  if (dag.goal_id() == 0) {
    problems.push_back("goal node not set");
    return problems;
  }
  try {
    (void)dag.topological_inferences();
  } catch (const std::logic_error& e) {
    problems.push_back(e.what());
    return problems;
  }

  std::vector<char> reaches_goal(dag.formula_count() + 1, 0);
  std::vector<int> stack{dag.goal_id()};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (reaches_goal[static_cast<std::size_t>(n)]) continue;
    reaches_goal[static_cast<std::size_t>(n)] = 1;
    for (int inf : dag.derivations(n)) {
      for (int p : dag.inference(inf).premises) stack.push_back(p);
    }
  }
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) {
    if (!reaches_goal[i]) problems.push_back("node " + std::to_string(i) + " is not on any path to the goal");
  }

  std::set<Atom> minted_so_far;
  for (const auto& inf : dag.inferences()) {
    std::vector<Formula> premises;
    for (int p : inf.premises) premises.push_back(dag.formula(p));
    const Formula& conclusion = dag.formula(inf.conclusion);
    const std::string tag = "inference " + std::to_string(inf.id) + " (" + std::string(form_code(inf.form)) + ")";
    if (!match_form(argument_form(inf.form), premises, conclusion)) problems.push_back(tag + " does not match its form");
    if (!entails(premises, conclusion)) problems.push_back(tag + " is not a valid step");

    std::set<Atom> allowed = atoms_of(conclusion);
    for (const auto& a : inf.minted) {
      if (!minted_so_far.insert(a).second) problems.push_back(tag + " re-mints atom " + to_string(a));
      allowed.insert(a);
    }
    for (const auto& share : dag.shares()) {
      if (share.inference_id == inf.id) collect_atoms(dag.formula(share.node_id), allowed);
    }
    for (const auto& p : premises) {
      for (const auto& a : atoms_of(p)) {
        if (!allowed.count(a)) problems.push_back(tag + " uses atom " + to_string(a) + " that is neither fresh nor shared");
      }
    }
  }
  return problems;
}

std::string to_dot(const LogicDag& dag) {
  std::ostringstream out;
  out << "digraph logic_dag {\n  rankdir=BT;\n";
  const auto leaves = dag.leaves();
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) {
    const int id = static_cast<int>(i);
    out << "  n" << id << " [label=\"";
    if (int pid = dag.premise_id(id)) out << "P" << pid << ": ";
    out << format_formula(dag.formula(id)) << "\"";
    if (id == dag.goal_id()) out << ", shape=doubleoctagon";
    else if (dag.is_leaf(id)) out << ", shape=box";
    out << "];\n";
  }
  for (const auto& inf : dag.inferences()) {
    out << "  i" << inf.id << " [shape=record, label=\"{I" << inf.id << "|" << form_code(inf.form) << "}\"];\n";
    for (int p : inf.premises) out << "  n" << p << " -> i" << inf.id << ";\n";
    out << "  i" << inf.id << " -> n" << inf.conclusion << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace pathlogic
