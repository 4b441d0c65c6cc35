#include "pathlogic/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace pathlogic {

void CaseResult::check() const {
  for (const auto& c : candidates) {
    if (c.matched_id && (*c.matched_id < 1 || *c.matched_id > gt_solution_count)) {
      throw std::invalid_argument(instance_id + ": matched id " + std::to_string(*c.matched_id) +
                                  " outside 1.." + std::to_string(gt_solution_count));
    }
  }
}

std::vector<int> CaseResult::matched_ids() const {
  std::set<int> ids;
  for (const auto& c : candidates) {
    if (c.matched_id) ids.insert(*c.matched_id);
  }
  return {ids.begin(), ids.end()};
}

CaseResult case_result(const BenchmarkInstance& instance, const ResponseEvaluation& evaluation) {
  CaseResult r;
  r.instance_id = instance.instance_id;
  r.tier = instance.tier;
  r.gt_solution_count = static_cast<int>(instance.ground_truth.solutions.size());
  r.gt_families = instance.ground_truth.families;
  r.min_gt_length = 0;
  for (const auto& s : instance.ground_truth.solutions) {
    if (r.min_gt_length == 0 || s.length < r.min_gt_length) r.min_gt_length = s.length;
  }
  for (const auto& c : evaluation.candidates) r.candidates.push_back({c.verdict.valid(), c.matched_id, c.verdict.length});
  r.completion_tokens = evaluation.completion_tokens;
  r.check();
  return r;
}

ConvergentMetrics convergent_metrics(const std::vector<CaseResult>& results, SpfMode spf) {
  ConvergentMetrics m;
  if (results.empty()) return m;
  int success = 0, shortest = 0;
  long valid = 0, total = 0, shortest_candidates = 0;
  for (const auto& r : results) {
    bool any_valid = false, any_shortest = false;
    for (const auto& c : r.candidates) {
      ++total;
      if (!c.valid) continue;
      ++valid;
      any_valid = true;
      if (c.length == r.min_gt_length) {
        any_shortest = true;
        ++shortest_candidates;
      }
    }
    success += any_valid;
    shortest += any_shortest;
  }
  const double cases = static_cast<double>(results.size());
  m.success_rate = 100.0 * success / cases;
  if (total == 0) {
    m.precision_undefined = true;
  } else {
    m.precision = 100.0 * static_cast<double>(valid) / static_cast<double>(total);
  }
  if (spf == SpfMode::per_case) {
    m.spf_rate = 100.0 * shortest / cases;
  } else {
    m.spf_rate = valid == 0 ? 0.0 : 100.0 * static_cast<double>(shortest_candidates) / static_cast<double>(valid);
  }
  return m;
}

CrossModelMatches cross_model_matches(const std::map<std::string, std::vector<CaseResult>>& by_model) {
  CrossModelMatches out;
  for (const auto& [model, results] : by_model) {
    for (const auto& r : results) out[r.instance_id][model] = r.matched_ids();
  }
  return out;
}

DivergentMetrics divergent_metrics(const std::vector<CaseResult>& results, const CrossModelMatches* context,
                                   const std::string& model_name) {
  DivergentMetrics m;
  if (results.empty()) return m;
  double diversity = 0, versatility = 0, originality = 0;
  for (const auto& r : results) {
    const auto matched = r.matched_ids();
    const std::set<int> hit(matched.begin(), matched.end());
    if (r.gt_solution_count > 0) diversity += static_cast<double>(hit.size()) / r.gt_solution_count;
    if (!r.gt_families.empty()) {
      int covered = 0;
      for (const auto& family : r.gt_families) {
        covered += std::any_of(family.begin(), family.end(), [&](int id) { return hit.count(id) > 0; });
      }
      versatility += static_cast<double>(covered) / static_cast<double>(r.gt_families.size());
    }
    if (context) {
      auto inst = context->find(r.instance_id);
      if (inst == context->end() || !inst->second.count(model_name)) {
        throw MissingCrossModelContext("no cross-model matches recorded for " + model_name + " on " + r.instance_id);
      }
      double sum = 0;
      for (int s : hit) {
        int k = 0;
        for (const auto& [other, ids] : inst->second) k += std::binary_search(ids.begin(), ids.end(), s);
        sum += 1.0 / k;
      }
      if (r.gt_solution_count > 0) originality += sum / r.gt_solution_count;
    }
  }
  const double cases = static_cast<double>(results.size());
  m.diversity = 100.0 * diversity / cases;
  m.versatility = 100.0 * versatility / cases;
  if (context) m.originality = 100.0 * originality / cases;
  return m;
}

TokenEfficiency token_efficiency(const std::vector<CaseResult>& results) {
  TokenEfficiency t;
  double sum = 0;
  for (const auto& r : results) {
    if (r.completion_tokens) {
      sum += static_cast<double>(*r.completion_tokens);
      ++t.counted;
    } else {
      ++t.missing;
    }
  }
  if (t.counted > 0) t.mean = sum / t.counted;
  return t;
}

namespace {

MetricRow row_for(const std::string& model, const std::vector<CaseResult>& results, const CrossModelMatches* context,
                  SpfMode spf) {
  const auto c = convergent_metrics(results, spf);
  const auto d = divergent_metrics(results, context, model);
  return MetricRow{c.success_rate, c.precision, c.spf_rate, d.diversity, d.versatility, d.originality,
                   token_efficiency(results).mean};
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0;
  int n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

ModelReport aggregate_report(const std::string& model_name, const std::vector<CaseResult>& results,
                             const CrossModelMatches* context, SpfMode spf) {
  if (results.empty()) throw std::invalid_argument("no cases to report for " + model_name);
  std::map<Tier, std::vector<CaseResult>> by_tier;
  for (const auto& r : results) {
    if (!r.tier) throw std::invalid_argument("case " + r.instance_id + " has no tier");
    r.check();
    by_tier[*r.tier].push_back(r);
  }
  ModelReport report;
  report.model_name = model_name;
  report.cases = static_cast<int>(results.size());
  for (const auto& [tier, cases] : by_tier) report.per_tier[tier] = row_for(model_name, cases, context, spf);

  auto avg = [&](auto field) {
    double sum = 0;
    for (const auto& [tier, row] : report.per_tier) sum += row.*field;
    return sum / static_cast<double>(report.per_tier.size());
  };
  report.average.success_rate = avg(&MetricRow::success_rate);
  report.average.precision = avg(&MetricRow::precision);
  report.average.spf_rate = avg(&MetricRow::spf_rate);
  report.average.diversity = avg(&MetricRow::diversity);
  report.average.versatility = avg(&MetricRow::versatility);
  std::vector<std::optional<double>> orig, tokens;
  for (const auto& [tier, row] : report.per_tier) {
    orig.push_back(row.originality);
    tokens.push_back(row.token_efficiency);
  }
  if (context) report.average.originality = mean_of(orig);
  report.average.token_efficiency = mean_of(tokens);
  return report;
}

namespace {

std::string fmt(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string fmt(const std::optional<double>& v, int precision = 2) { return v ? fmt(*v, precision) : ""; }

struct Column {
  const char* name;
  std::optional<double> (*get)(const MetricRow&);
};

const std::vector<Column>& columns() {
  static const std::vector<Column> cols{
      {"success_rate", [](const MetricRow& r) -> std::optional<double> { return r.success_rate; }},
      {"precision", [](const MetricRow& r) -> std::optional<double> { return r.precision; }},
      {"spf_rate", [](const MetricRow& r) -> std::optional<double> { return r.spf_rate; }},
      {"diversity", [](const MetricRow& r) -> std::optional<double> { return r.diversity; }},
      {"versatility", [](const MetricRow& r) -> std::optional<double> { return r.versatility; }},
      {"originality", [](const MetricRow& r) { return r.originality; }},
      {"token_efficiency", [](const MetricRow& r) { return r.token_efficiency; }},
  };
  return cols;
}

std::vector<std::pair<std::string, const MetricRow*>> rows_of(const ModelReport& report) {
  std::vector<std::pair<std::string, const MetricRow*>> rows;
  rows.emplace_back("avg", &report.average);
  for (const auto& [tier, row] : report.per_tier) rows.emplace_back(std::string(tier_name(tier)), &row);
  return rows;
}

}  // namespace

std::string report_csv(const std::vector<ModelReport>& reports) {
  std::string out = "model,tier,metric,value\n";
  for (const auto& report : reports) {
    for (const auto& [tier, row] : rows_of(report)) {
      for (const auto& col : columns()) {
        out += report.model_name + "," + tier + "," + col.name + "," + fmt(col.get(*row), 4) + "\n";
      }
    }
  }
  return out;
}

std::string report_table(const std::vector<ModelReport>& reports) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"model", "tier"};
  for (const auto& col : columns()) header.push_back(col.name);
  cells.push_back(header);
  for (const auto& report : reports) {
    for (const auto& [tier, row] : rows_of(report)) {
      std::vector<std::string> line{report.model_name, tier};
      for (const auto& col : columns()) {
        auto v = col.get(*row);
        line.push_back(v ? fmt(*v) : "-");
      }
      cells.push_back(std::move(line));
    }
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const std::string pad(width[i] - line[i].size(), ' ');
      out += i < 2 ? line[i] + pad : pad + line[i];
      out += i + 1 < line.size() ? "  " : "\n";
    }
  }
  return out;
}

ordered_json report_metadata() {
  return ordered_json{
      {"average", "unweighted mean of the tier values present"},
      {"precision", "valid candidates / all candidates; repeated identical candidates each counted; "
                    "unparseable responses contribute no candidates"},
      {"spf", "case counts when at least one valid candidate has the minimum ground-truth length"},
      {"originality", "per case sum over matched solutions of 1/k, k = models matching that solution, "
                      "divided by the solution count"},
      {"matching", "cited premises reduced to a minimal support before lookup"},
      {"token_efficiency", "mean completion tokens over responses that report them"}};
}

ordered_json case_detail_json(const std::string& model_name, const CaseResult& r) {
  ordered_json candidates = ordered_json::array();
  for (const auto& c : r.candidates) {
    candidates.push_back(
        {{"valid", c.valid}, {"matched_id", c.matched_id ? ordered_json(*c.matched_id) : ordered_json()}, {"length", c.length}});
  }
  return ordered_json{{"model", model_name},
                      {"instance_id", r.instance_id},
                      {"tier", r.tier ? ordered_json(std::string(tier_name(*r.tier))) : ordered_json()},
                      {"gt_solution_count", r.gt_solution_count},
                      {"gt_families", r.gt_families},
                      {"min_gt_length", r.min_gt_length},
                      {"matched_ids", r.matched_ids()},
                      {"completion_tokens", r.completion_tokens ? ordered_json(*r.completion_tokens) : ordered_json()},
                      {"candidates", candidates}};
}

}  // namespace pathlogic
