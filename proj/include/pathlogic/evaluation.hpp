#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathlogic/instance.hpp"
#include "pathlogic/text_client.hpp"

namespace pathlogic {

struct RawResponse {
  std::string instance_id;
  std::string model_name;
  std::string text;
  std::optional<long> completion_tokens;
};

enum class RefKind { fact, rule, step, unresolved };

struct Reference {
  RefKind kind = RefKind::unresolved;
  int number = 0;
  /// Citation as written, e.g. "Fact 2" or "the previous step".
  std::string text;

  bool operator==(const Reference&) const = default;
};

struct Step {
  int index = 0;
  std::vector<Reference> cited_refs;
  std::string nl_text;
  /// Statement with citations and leading connectives removed.
  std::string claim;
  std::optional<Formula> formal;
  std::optional<FormKind> form_hint;
  /// The formalization mentions atoms outside the instance vocabulary.
  bool out_of_vocabulary = false;
};

struct CandidateSolution {
  int solution_index = 0;
  std::vector<Step> steps;
  std::string conclusion_text;
  bool concluded_goal = false;
};

struct Segmentation {
  std::vector<CandidateSolution> solutions;
  bool unparseable = false;
  /// Solution headers with no steps under them; not counted as candidates.
  int empty_blocks = 0;
  bool repaired = false;
};

/// Parses the answer template:
///   ### Solution k
///   Step t: <statement>. [uses: Fact n, Rule m, Step s]
///   Conclusion: <goal statement>
/// "previous step" citations resolve to step t-1. Citations that are not
/// facts, rules or earlier steps stay as RefKind::unresolved. When nothing
/// parses and `repair` is given, the client rewrites the text into the
/// template once and the rewrite is parsed the same way.
Segmentation segment_response(std::string_view text, TextClient* repair = nullptr);

/// Removes leading connectives ("Therefore,", "From Fact 1 and Rule 2,",
/// "we conclude that") and the trailing period.
std::string strip_connectives(std::string_view statement);

struct Formalization {
  std::optional<Formula> formula;
  bool out_of_vocabulary = false;
  /// "premise", "goal", "template", "formula", "client" or "failed".
  std::string method = "failed";
};

/// Maps a step claim to a formula over the instance vocabulary: stored
/// sentences first, then the template reader, then literal Prover9 syntax,
/// then the client with the premise formulas as anchors.
class Formalizer {
 public:
  explicit Formalizer(const BenchmarkInstance& instance, TextClient* client = nullptr);

  Formalization formalize(std::string_view claim) const;

 private:
  Formalization check_vocabulary(Formula f, std::string method) const;
  Formalization ask_client(std::string_view claim) const;

  const BenchmarkInstance& instance_;
  TextClient* client_;
  SentenceReader reader_;
  std::vector<std::pair<std::string, Formula>> stored_;
  std::set<Atom> vocabulary_;
};

void formalize_step(Step& step, const Formalizer& formalizer);

enum class ErrorLabel {
  semantic_misinterpretation,
  information_omission,
  fact_hallucination,
  invalid_deduction,
  rule_misapplication,
  insufficient_premise,
};

enum class Decidability { symbolic, assisted };

std::string_view label_name(ErrorLabel label);
std::optional<ErrorLabel> label_from_name(std::string_view name);
Decidability decidability(ErrorLabel label);

struct StepError {
  int step_index;
  ErrorLabel label;
};

struct SolutionVerdict {
  std::vector<bool> locally_valid;
  bool globally_valid = false;
  bool concluded_goal = false;
  /// Premise ids cited anywhere in the solution, sorted.
  std::vector<int> used_premises;
  std::optional<MinimalSupport> matched_support;
  int length = 0;
  std::vector<StepError> error_labels;

  bool all_steps_valid() const;
  /// Every step valid, the goal concluded and entailed by the cited premises.
  bool valid() const { return all_steps_valid() && globally_valid && concluded_goal; }
};

/// Local check per step against its cited facts, rules and earlier steps;
/// global check of the goal against the cited premises alone.
SolutionVerdict verify_solution(CandidateSolution& candidate, const BenchmarkInstance& instance);

/// Reduces the cited premises with minimize_support and looks the result up
/// among the ground-truth supports. Sets verdict.matched_support on success.
std::optional<int> match_ground_truth(SolutionVerdict& verdict, const BenchmarkInstance& instance);

/// One symbolic label per locally invalid step, by priority:
/// fact_hallucination, insufficient_premise, rule_misapplication,
/// invalid_deduction.
std::vector<StepError> classify_errors(const SolutionVerdict& verdict, const CandidateSolution& candidate,
                                       const BenchmarkInstance& instance);

struct CandidateReport {
  int solution_index = 0;
  SolutionVerdict verdict;
  std::optional<int> matched_id;
  /// An earlier candidate of the same response matched the same solution.
  bool duplicate = false;
};

struct ResponseEvaluation {
  std::string instance_id;
  std::string model_name;
  bool unparseable = false;
  bool repaired = false;
  int empty_blocks = 0;
  std::vector<CandidateReport> candidates;
  std::optional<long> completion_tokens;

  /// Distinct matched solution ids, ascending.
  std::vector<int> matched_ids() const;
};

struct EvaluationOptions {
  /// Non-owning; used for template repair and formalization fallback.
  TextClient* client = nullptr;
};

ResponseEvaluation evaluate_response(const RawResponse& response, const BenchmarkInstance& instance,
                                     const EvaluationOptions& options = {});

/// Every ground-truth solution written out in the answer template, one
/// step per inference node, citing premises by label.
std::string render_reference_response(const BenchmarkInstance& instance);
std::string render_solution(const BenchmarkInstance& instance, const Solution& solution, int index);

ordered_json evaluation_to_json(const ResponseEvaluation& evaluation);
ResponseEvaluation evaluation_from_json(const nlohmann::json& j);

}  // namespace pathlogic
