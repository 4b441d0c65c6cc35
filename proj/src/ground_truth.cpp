#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "pathlogic/dag.hpp"

namespace pathlogic {

namespace {

struct ProofSubgraph {
  std::vector<int> leaves;      // formula node ids, sorted
  std::vector<int> inferences;  // sorted
};

// Every way of resolving each needed node by exactly one of its derivations.
// `choice[n]` is -1 for a used leaf, an inference id for a resolved node,
// and 0 for nodes not (yet) needed.
class ProofEnumerator {
 public:
  ProofEnumerator(const LogicDag& dag, std::size_t cap) : dag_(dag), cap_(cap) {}

  std::vector<ProofSubgraph> run() {
    std::vector<int> choice(dag_.formula_count() + 1, 0);
    walk({dag_.goal_id()}, choice);
    return std::move(out_);
  }

 private:
  void walk(std::vector<int> pending, std::vector<int>& choice) {
    while (!pending.empty()) {
      const int n = pending.back();
      pending.pop_back();
      if (choice[static_cast<std::size_t>(n)] != 0) continue;
      if (dag_.is_leaf(n)) {
        choice[static_cast<std::size_t>(n)] = -1;
        continue;
      }
      for (int inf : dag_.derivations(n)) {
        auto branch_choice = choice;
        branch_choice[static_cast<std::size_t>(n)] = inf;
        auto branch_pending = pending;
        for (int p : dag_.inference(inf).premises) branch_pending.push_back(p);
        walk(std::move(branch_pending), branch_choice);
      }
      return;
    }
    if (out_.size() >= cap_) {
      throw GroundTruthInconsistent("more than " + std::to_string(cap_) + " proof subgraphs");
    }
    ProofSubgraph g;
    for (std::size_t n = 1; n < choice.size(); ++n) {
      if (choice[n] == -1) g.leaves.push_back(static_cast<int>(n));
      if (choice[n] > 0) g.inferences.push_back(choice[n]);
    }
    std::sort(g.inferences.begin(), g.inferences.end());
    out_.push_back(std::move(g));
  }

  const LogicDag& dag_;
  std::size_t cap_;
  std::vector<ProofSubgraph> out_;
};

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

GroundTruth derive_ground_truth(const LogicDag& dag) {
  if (dag.goal_id() == 0) throw std::invalid_argument("DAG has no goal");
  const auto leaf_order = dag.leaves();
  std::map<int, int> premise_of;
  std::vector<Formula> leaf_formulas;
  for (std::size_t i = 0; i < leaf_order.size(); ++i) {
    premise_of[leaf_order[i]] = static_cast<int>(i) + 1;
    leaf_formulas.push_back(dag.formula(leaf_order[i]));
  }

  // Equal supports keep the subgraph with the fewest inference nodes.
  std::map<std::vector<int>, std::vector<int>> by_support;
  for (auto& g : ProofEnumerator(dag, dag.config.max_proof_subgraphs).run()) {
    std::vector<int> ids;
    for (int n : g.leaves) ids.push_back(premise_of.at(n));
    std::sort(ids.begin(), ids.end());
    auto [it, inserted] = by_support.emplace(ids, g.inferences);
    if (!inserted) {
      auto& kept = it->second;
      if (g.inferences.size() < kept.size() || (g.inferences.size() == kept.size() && g.inferences < kept)) {
        kept = g.inferences;
      }
    }
  }

  GroundTruth gt;
  const PremiseSet premises(leaf_formulas);
  for (const auto& [ids, infs] : by_support) {
    bool superset = false;
    for (const auto& [other, unused] : by_support) {
      if (other.size() < ids.size() && is_subset(other, ids)) {
        superset = true;
        break;
      }
    }
    if (superset) continue;
    if (!is_minimal_support(ids, premises, dag.goal())) {
      std::string text;
      for (int id : ids) text += (text.empty() ? "P" : ", P") + std::to_string(id);
      throw GroundTruthInconsistent("proof subgraph leaves {" + text + "} are not a minimal support of the goal");
    }
    gt.solutions.push_back(Solution{MinimalSupport{ids}, infs, static_cast<int>(infs.size())});
  }
  std::sort(gt.solutions.begin(), gt.solutions.end(),
            [](const Solution& a, const Solution& b) { return a.support < b.support; });

  const std::size_t n = gt.solutions.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  std::map<int, std::size_t> first_user;
  for (std::size_t i = 0; i < n; ++i) {
    for (int inf : gt.solutions[i].inference_ids) {
      auto [it, inserted] = first_user.emplace(inf, i);
      if (!inserted) parent[root(i)] = root(it->second);
    }
  }
  std::map<std::size_t, std::vector<int>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[root(i)].push_back(static_cast<int>(i) + 1);
  for (auto& [r, members] : groups) gt.families.push_back(std::move(members));
  std::sort(gt.families.begin(), gt.families.end());

  gt.stats = dag_stats(dag, gt);
  return gt;
}

DagStats dag_stats(const LogicDag&, const GroundTruth& gt) {
  DagStats s;
  s.n_paths = static_cast<int>(gt.solutions.size());
  if (gt.solutions.empty()) return s;
  std::set<int> distinct;
  double total = 0;
  for (const auto& sol : gt.solutions) {
    total += sol.length;
    distinct.insert(sol.inference_ids.begin(), sol.inference_ids.end());
  }
  s.depth = total / static_cast<double>(gt.solutions.size());
  s.reuse_ratio = distinct.empty() ? 1.0 : total / static_cast<double>(distinct.size());
  return s;
}

}  // namespace pathlogic
