#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathlogic/evaluation.hpp"
#include "pathlogic/instance.hpp"
#include "pathlogic/metrics.hpp"
#include "pathlogic/validator.hpp"

namespace pathlogic {

/// Runs fn(0..n-1) on up to `workers` threads and returns the results in
/// index order. The first exception thrown by any call is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& fn);

struct Rejection {
  std::string instance_id;
  Tier tier;
  std::string reason;
};

struct GenerateOptions {
  GenerationConfig base;
  std::map<Tier, int> counts;
  /// Empty cycles through the builtin profiles.
  std::string domain;
  int workers = 1;
  InstantiationOptions instantiation;
  /// Candidates tried per requested instance before giving up on a tier.
  int attempts_per_instance = 8;
};

struct GenerateResult {
  std::vector<BenchmarkInstance> accepted;
  std::vector<Rejection> rejected;
  /// Tiers that ran out of attempts before reaching their count.
  std::vector<Tier> short_tiers;
};

/// Seeds are derived from base.seed, the tier and the candidate index, and
/// candidates are accepted in index order, so the output does not depend on
/// the worker count.
GenerateResult generate_dataset(const GenerateOptions& options, std::ostream* log = nullptr);

class InsufficientPool : public std::runtime_error {
 public:
  InsufficientPool(Tier tier, std::size_t have, std::size_t need);
  Tier tier() const { return tier_; }

 private:
  Tier tier_;
};

/// Uniform sample without replacement of `per_tier` instances from each
/// tier, kept in pool order.
std::vector<BenchmarkInstance> stratified_sample(const std::vector<BenchmarkInstance>& pool, std::size_t per_tier,
                                                 std::uint64_t seed);

struct ValidateResult {
  std::vector<BenchmarkInstance> survivors;
  std::vector<ValidationReport> reports;
  std::map<std::string, int> failures;
};

ValidateResult validate_dataset(const std::vector<BenchmarkInstance>& instances, int workers = 1);
ordered_json validation_report_json(const ValidationReport& report);

/// `<dir>/<instance_id>/<model>.txt` files, or a JSON-lines file of
/// {instance_id, model, text, completion_tokens}.
std::vector<RawResponse> load_responses(const std::filesystem::path& path);

struct EvaluateResult {
  std::vector<ResponseEvaluation> evaluations;
  /// "<instance_id>/<model>" pairs with no response.
  std::vector<std::string> missing;
  std::vector<std::string> unknown_instances;
};

EvaluateResult evaluate_dataset(const std::vector<BenchmarkInstance>& instances,
                                const std::vector<RawResponse>& responses, const EvaluationOptions& options,
                                int workers = 1);

std::vector<ResponseEvaluation> read_verdicts(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<ordered_json>& records);

struct ReportBundle {
  std::vector<ModelReport> reports;
  std::vector<ordered_json> case_details;
};

/// One report per model; originality uses every model in `evaluations`.
ReportBundle build_reports(const std::vector<BenchmarkInstance>& instances,
                           const std::vector<ResponseEvaluation>& evaluations);

}  // namespace pathlogic

#include "pathlogic/detail/parallel.hpp"
