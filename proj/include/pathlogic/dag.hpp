#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathlogic/argument_form.hpp"
#include "pathlogic/entailment.hpp"
#include "pathlogic/formula.hpp"
#include "pathlogic/rng.hpp"

namespace pathlogic {

enum class Tier { small, medium, large };

std::string_view tier_name(Tier tier);
std::optional<Tier> tier_from_name(std::string_view name);

/// Inclusive solution-count band of a tier.
struct TierBand {
  int min_paths;
  int max_paths;
};

struct GenerationConfig {
  std::uint64_t seed = 0;
  int depth_min = 4;
  int depth_max = 7;
  Tier tier = Tier::small;
  /// Indexed by FormKind.
  std::array<double, 7> form_weights{3.0, 1.5, 1.0, 1.5, 0.75, 0.75, 1.0};
  int max_branch_attempts = 16;
  double share_probability = 0.15;
  int branch_depth_min = 2;
  int branch_depth_max = 5;
  /// Upper bound on the node count of any minted premise formula.
  int max_formula_size = 7;
  /// Instances with at most this many leaves are cross-checked against
  /// exhaustive minimal-support enumeration after every branch.
  std::size_t oracle_premise_limit = 12;
  /// Fresh chains tried before generate_instance gives up.
  int instance_attempts = 64;
  double max_reuse_ratio = 1.9;
  int large_max_paths = 19;
  std::size_t max_proof_subgraphs = 4096;

  TierBand band() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct InferenceNode {
  int id;
  FormKind form;
  /// Formula node ids in the form's premise-schema order.
  std::vector<int> premises;
  int conclusion;
  /// Atoms this node introduced; none of them occurs in any earlier node.
  std::vector<Atom> minted;
};

/// An existing node adopted as a premise of a new inference node.
struct ShareEvent {
  int inference_id;
  int node_id;
};

/// Formula nodes and inference nodes, both with dense 1-based ids. Leaves
/// are the formula nodes no inference node concludes; they are the given
/// premises, numbered in `leaves()` order.
class LogicDag {
 public:
  int add_formula(Formula f);
  int add_inference(FormKind form, std::vector<int> premises, int conclusion, std::vector<Atom> minted);
  void record_share(ShareEvent event) { shares_.push_back(event); }

  std::size_t formula_count() const { return formulas_.size(); }
  std::size_t inference_count() const { return inferences_.size(); }
  const Formula& formula(int node_id) const;
  const InferenceNode& inference(int inference_id) const;
  const std::vector<InferenceNode>& inferences() const { return inferences_; }
  const std::vector<ShareEvent>& shares() const { return shares_; }

  /// Inference nodes concluding `node_id`, in creation order.
  const std::vector<int>& derivations(int node_id) const;
  bool is_leaf(int node_id) const { return derivations(node_id).empty(); }
  /// Leaf ids in premise order: premise k is leaves()[k-1].
  std::vector<int> leaves() const;
  /// 1-based premise id of a leaf, or 0 if the node is not a leaf.
  int premise_id(int node_id) const;
  /// Must be a permutation of the current leaves.
  void set_leaf_order(std::vector<int> order);

  int goal_id() const { return goal_id_; }
  void set_goal(int node_id);
  const Formula& goal() const { return formula(goal_id_); }

  /// True when `target` is used, transitively, in some derivation of `node_id`.
  bool depends_on(int node_id, int target) const;
  /// Inference ids ordered so every premise is concluded before it is used.
  std::vector<int> topological_inferences() const;

  Atom mint_atom();
  int minted_atom_count() const { return next_atom_ - 1; }

  std::uint64_t seed = 0;
  GenerationConfig config;

 private:
  std::vector<Formula> formulas_;
  std::vector<std::vector<int>> derivations_;
  std::vector<InferenceNode> inferences_;
  std::vector<ShareEvent> shares_;
  std::vector<int> leaf_order_;
  int goal_id_ = 0;
  int next_atom_ = 1;
};

struct Solution {
  MinimalSupport support;
  /// Sorted inference ids of the proof subgraph.
  std::vector<int> inference_ids;
  int length = 0;
};

struct DagStats {
  double depth = 0;
  int n_paths = 0;
  double reuse_ratio = 0;
};

struct GroundTruth {
  std::vector<Solution> solutions;
  /// Partition of 1-based solution indices.
  std::vector<std::vector<int>> families;
  DagStats stats;
};

class GroundTruthInconsistent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BranchRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TierUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Single backward chain of sampled depth ending in a fresh goal atom.
LogicDag generate_chain(const GenerationConfig& config, Rng& rng);

/// Copy of `dag` with one more derivation of a uniformly chosen derived
/// node, grown into a fresh sub-chain. Throws BranchRejected when every
/// attempt fails the ground-truth checks.
LogicDag add_branch(const LogicDag& dag, Rng& rng);

struct GeneratedInstance {
  LogicDag dag;
  GroundTruth ground_truth;
};

/// Chain plus branches until the solution count lands in the tier band.
/// Deterministic in config (including config.seed).
GeneratedInstance generate_instance(const GenerationConfig& config);

/// Proof subgraphs reduced to minimal supports, grouped into families of
/// solutions that share an inference node. Solutions are canonically
/// ordered by support.
GroundTruth derive_ground_truth(const LogicDag& dag);

DagStats dag_stats(const LogicDag& dag, const GroundTruth& gt);

/// Structural problems: form shape mismatches, unsound steps, orphans,
/// fresh-atom violations. Empty when the DAG is well formed.
std::vector<std::string> check_dag(const LogicDag& dag);

std::string to_dot(const LogicDag& dag);

}  // namespace pathlogic
