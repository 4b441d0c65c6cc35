#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathlogic/evaluation.hpp"
#include "pathlogic/instance.hpp"

namespace pathlogic {

struct CandidateSummary {
  bool valid = false;
  std::optional<int> matched_id;
  int length = 0;
};

/// One model's response to one instance, reduced to what the metrics need.
struct CaseResult {
  std::string instance_id;
  std::optional<Tier> tier;
  int gt_solution_count = 0;
  std::vector<std::vector<int>> gt_families;
  int min_gt_length = 0;
  std::vector<CandidateSummary> candidates;
  std::optional<long> completion_tokens;

  /// Throws std::invalid_argument when a matched id is out of range.
  void check() const;
  std::vector<int> matched_ids() const;
};

CaseResult case_result(const BenchmarkInstance& instance, const ResponseEvaluation& evaluation);

struct ConvergentMetrics {
  double success_rate = 0;
  double precision = 0;
  double spf_rate = 0;
  /// No candidates anywhere, so precision was set to 0 by convention.
  bool precision_undefined = false;
};

enum class SpfMode { per_case, per_candidate };

ConvergentMetrics convergent_metrics(const std::vector<CaseResult>& results, SpfMode spf = SpfMode::per_case);

/// Raised when originality is asked for without the other models' results.
class MissingCrossModelContext : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// instance id -> model name -> matched ids, covering every evaluated model.
using CrossModelMatches = std::map<std::string, std::map<std::string, std::vector<int>>>;

CrossModelMatches cross_model_matches(const std::map<std::string, std::vector<CaseResult>>& by_model);

struct DivergentMetrics {
  double diversity = 0;
  double versatility = 0;
  std::optional<double> originality;
};

/// Diversity and versatility per case, averaged and scaled to percent.
/// Originality weights each matched solution by 1/k, k being the number of
/// models that matched it on the same case, and divides by the solution
/// count; it needs `context` and `model_name`.
DivergentMetrics divergent_metrics(const std::vector<CaseResult>& results, const CrossModelMatches* context = nullptr,
                                   const std::string& model_name = "");

struct TokenEfficiency {
  std::optional<double> mean;
  int counted = 0;
  int missing = 0;
};

TokenEfficiency token_efficiency(const std::vector<CaseResult>& results);

struct MetricRow {
  double success_rate = 0;
  double precision = 0;
  double spf_rate = 0;
  double diversity = 0;
  double versatility = 0;
  std::optional<double> originality;
  std::optional<double> token_efficiency;
};

struct ModelReport {
  std::string model_name;
  std::map<Tier, MetricRow> per_tier;
  /// Unweighted mean of the tier rows present.
  MetricRow average;
  int cases = 0;
};

/// Throws std::invalid_argument when a case has no tier or results is empty.
ModelReport aggregate_report(const std::string& model_name, const std::vector<CaseResult>& results,
                             const CrossModelMatches* context = nullptr, SpfMode spf = SpfMode::per_case);

/// Columns: model, tier, metric, value. Absent values are left empty.
std::string report_csv(const std::vector<ModelReport>& reports);
std::string report_table(const std::vector<ModelReport>& reports);
/// Report conventions, so readers know how each number was obtained.
ordered_json report_metadata();
ordered_json case_detail_json(const std::string& model_name, const CaseResult& result);

}  // namespace pathlogic
