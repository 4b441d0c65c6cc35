#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathlogic/instance.hpp"

namespace pathlogic {

struct StepCheck {
  int inference_id;
  bool pass;
};

enum class RejectReason { none, stepwise_entailment, global_derivability, contextual_consistency };

std::string_view reason_code(RejectReason reason);

struct ValidationReport {
  std::string instance_id;
  std::vector<StepCheck> stepwise;
  bool global_pass = false;
  bool consistency_pass = false;

  bool accepted() const { return reason() == RejectReason::none; }
  /// First failing check in the order stepwise, global, consistency.
  RejectReason reason() const;
};

/// Each inference node's concrete premises entail its concrete conclusion.
std::vector<StepCheck> check_stepwise(const BenchmarkInstance& instance);

/// Walks the inference nodes in topological order, starting from the stated
/// premises. A node whose premises are all established must have its
/// conclusion entailed, which then becomes established; a node with an
/// unestablished premise belongs to a route cut off from the premises and is
/// skipped. Passes when every reachable step holds and the goal is entailed by
/// everything established.
bool check_global(const BenchmarkInstance& instance);

/// The stated premises are jointly satisfiable.
bool check_consistency(const BenchmarkInstance& instance);

ValidationReport validate_instance(const BenchmarkInstance& instance);

/// Prover9 input: an assumptions list and a goals list, one canonical
/// formula per line.
std::string emit_prover9_job(std::span<const Formula> premises, const Formula& goal);

enum class ProverOutcome { proved, not_proved, unavailable };

std::string_view outcome_name(ProverOutcome outcome);

struct ProverResult {
  ProverOutcome outcome = ProverOutcome::unavailable;
  bool timed_out = false;
  int exit_status = -1;
  std::string detail;
};

struct ExternalProverConfig {
  /// Empty: $PATHLOGIC_PROVER9, then `prover9` on $PATH.
  std::filesystem::path binary;
  std::chrono::milliseconds timeout{5000};
};

std::optional<std::filesystem::path> locate_prover(const ExternalProverConfig& config);

/// Runs the prover with the job on standard input. Exit status 0 with a
/// proof in the output is `proved`; status 2 (search exhausted) or a timeout
/// is `not_proved`; anything else, including a missing binary, is
/// `unavailable`.
ProverResult external_prove(const std::string& job, const ExternalProverConfig& config = {});

}  // namespace pathlogic
