#include "pathlogic/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace pathlogic {

namespace {

int tier_index(Tier t) { return static_cast<int>(t); }

std::string make_id(Tier tier, int ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04d", std::string(tier_name(tier)).c_str(), ordinal);
  return buf;
}

struct Candidate {
  std::optional<BenchmarkInstance> instance;
  std::string reason;
};

Candidate make_candidate(const GenerateOptions& options, Tier tier, std::size_t index) {
  GenerationConfig config = options.base;
  config.tier = tier;
  config.seed = derive_seed(derive_seed(options.base.seed, static_cast<std::uint64_t>(tier_index(tier)) + 1), index);
  const auto& profiles = builtin_profiles();
  const DomainProfile& profile =
      options.domain.empty() ? profiles[(static_cast<std::size_t>(tier_index(tier)) * 7 + index) % profiles.size()]
                             : builtin_profile(options.domain);
  InstantiationOptions inst = options.instantiation;
  inst.seed = config.seed;
  Candidate out;
  try {
    const auto generated = generate_instance(config);
    auto instance = build_instance(generated, "", profile, inst);
    const auto report = validate_instance(instance);
    if (!report.accepted()) {
      out.reason = std::string(reason_code(report.reason()));
      return out;
    }
    out.instance = std::move(instance);
  } catch (const TierUnreachable&) {
    out.reason = "tier_unreachable";
  } catch (const GroundTruthInconsistent&) {
    out.reason = "ground_truth_inconsistent";
  } catch (const NamingCollision&) {
    out.reason = "naming_collision";
  } catch (const InstantiationError&) {
    out.reason = "instantiation_failed";
  } catch (const ClientFailure& e) {
    throw ClientFailure(std::string(tier_name(tier)) + "#" + std::to_string(index) + ": " + e.what(),
                        e.last_failure(), e.attempts());
  }
  return out;
}

}  // namespace

GenerateResult generate_dataset(const GenerateOptions& options, std::ostream* log) {
  options.base.validate();
  GenerateResult result;
  for (const auto& [tier, count] : options.counts) {
    if (count < 0) throw std::invalid_argument("negative instance count for tier " + std::string(tier_name(tier)));
    int accepted = 0;
    std::size_t next = 0;
    const std::size_t budget = static_cast<std::size_t>(count) * static_cast<std::size_t>(options.attempts_per_instance);
    while (accepted < count && next < budget) {
      const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(count - accepted), budget - next);
      const std::size_t first = next;
      auto candidates = parallel_map<Candidate>(batch, options.workers, [&, t = tier](std::size_t i) {
        return make_candidate(options, t, first + i);
      });
      next += batch;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto& c = candidates[i];
        const std::string label = std::string(tier_name(tier)) + "#" + std::to_string(first + i);
        if (!c.instance) {
          result.rejected.push_back({label, tier, c.reason});
          if (log) *log << "rejected " << label << ": " << c.reason << "\n";
          continue;
        }
        c.instance->instance_id = make_id(tier, ++accepted);
        result.accepted.push_back(std::move(*c.instance));
      }
    }
    if (accepted < count) {
      result.short_tiers.push_back(tier);
      if (log) *log << "tier " << tier_name(tier) << ": " << accepted << " of " << count << " instances\n";
    }
  }
  return result;
}

InsufficientPool::InsufficientPool(Tier tier, std::size_t have, std::size_t need)
    : std::runtime_error("tier " + std::string(tier_name(tier)) + " has " + std::to_string(have) +
                         " instances, the sample needs " + std::to_string(need)),
      tier_(tier) {}

std::vector<BenchmarkInstance> stratified_sample(const std::vector<BenchmarkInstance>& pool, std::size_t per_tier,
                                                 std::uint64_t seed) {
  std::map<Tier, std::vector<std::size_t>> by_tier;
  for (Tier t : {Tier::small, Tier::medium, Tier::large}) by_tier[t];
  for (std::size_t i = 0; i < pool.size(); ++i) by_tier[pool[i].tier].push_back(i);
  std::vector<std::size_t> chosen;
  for (auto& [tier, indices] : by_tier) {
    if (indices.size() < per_tier) throw InsufficientPool(tier, indices.size(), per_tier);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(tier_index(tier))));
    rng.shuffle(indices);
    chosen.insert(chosen.end(), indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(per_tier));
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<BenchmarkInstance> out;
  for (auto i : chosen) out.push_back(pool[i]);
  return out;
}

ValidateResult validate_dataset(const std::vector<BenchmarkInstance>& instances, int workers) {
  ValidateResult result;
  result.reports = parallel_map<ValidationReport>(instances.size(), workers,
                                                  [&](std::size_t i) { return validate_instance(instances[i]); });
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto reason = result.reports[i].reason();
    if (reason == RejectReason::none) {
      result.survivors.push_back(instances[i]);
    } else {
      ++result.failures[std::string(reason_code(reason))];
    }
  }
  return result;
}

ordered_json validation_report_json(const ValidationReport& r) {
  ordered_json steps = ordered_json::array();
  for (const auto& s : r.stepwise) steps.push_back({{"inference", s.inference_id}, {"pass", s.pass}});
  return ordered_json{{"instance_id", r.instance_id},
                      {"verdict", reason_code(r.reason())},
                      {"stepwise", steps},
                      {"global_pass", r.global_pass},
                      {"consistency_pass", r.consistency_pass}};
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

std::vector<RawResponse> load_responses(const std::filesystem::path& path) {
  std::vector<RawResponse> out;
  if (!std::filesystem::exists(path)) throw std::runtime_error("responses path " + path.string() + " does not exist");
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> dirs;
    for (const auto& e : std::filesystem::directory_iterator(path)) {
      if (e.is_directory()) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        out.push_back(RawResponse{dir.filename().string(), f.stem().string(), read_file(f), std::nullopt});
      }
    }
    return out;
  }
  std::istringstream lines(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw SchemaError("responses line " + std::to_string(line_no) + ": not a JSON object");
    try {
      RawResponse r{j.at("instance_id").get<std::string>(), j.at("model").get<std::string>(),
                    j.at("text").get<std::string>(), std::nullopt};
      if (j.contains("completion_tokens") && !j["completion_tokens"].is_null()) {
        r.completion_tokens = j["completion_tokens"].get<long>();
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("responses line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

EvaluateResult evaluate_dataset(const std::vector<BenchmarkInstance>& instances,
                                const std::vector<RawResponse>& responses, const EvaluationOptions& options,
                                int workers) {
  EvaluateResult result;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < instances.size(); ++i) index.emplace(instances[i].instance_id, i);
  std::set<std::string> models;
  for (const auto& r : responses) models.insert(r.model_name);

  std::map<std::pair<std::size_t, std::string>, const RawResponse*> jobs;
  std::set<std::string> unknown;
  for (const auto& r : responses) {
    auto it = index.find(r.instance_id);
    if (it == index.end()) {
      unknown.insert(r.instance_id);
      continue;
    }
    jobs[{it->second, r.model_name}] = &r;
  }
  result.unknown_instances.assign(unknown.begin(), unknown.end());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const auto& m : models) {
      if (!jobs.count({i, m})) result.missing.push_back(instances[i].instance_id + "/" + m);
    }
  }
  std::vector<std::pair<std::size_t, const RawResponse*>> ordered;
  for (const auto& [key, r] : jobs) ordered.emplace_back(key.first, r);
  result.evaluations = parallel_map<ResponseEvaluation>(ordered.size(), workers, [&](std::size_t k) {
    return evaluate_response(*ordered[k].second, instances[ordered[k].first], options);
  });
  return result;
}

std::vector<ResponseEvaluation> read_verdicts(const std::filesystem::path& path) {
  std::vector<ResponseEvaluation> out;
  std::istringstream lines(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw SchemaError("verdicts line " + std::to_string(line_no) + ": not valid JSON");
    out.push_back(evaluation_from_json(j));
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<ordered_json>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& r : records) out << r.dump() << '\n';
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

ReportBundle build_reports(const std::vector<BenchmarkInstance>& instances,
                           const std::vector<ResponseEvaluation>& evaluations) {
  std::map<std::string, const BenchmarkInstance*> by_id;
  for (const auto& inst : instances) by_id.emplace(inst.instance_id, &inst);
  std::map<std::string, std::vector<CaseResult>> by_model;
  for (const auto& e : evaluations) {
    auto it = by_id.find(e.instance_id);
    if (it == by_id.end()) throw SchemaError("verdict for unknown instance " + e.instance_id);
    by_model[e.model_name].push_back(case_result(*it->second, e));
  }
  const auto context = cross_model_matches(by_model);
  ReportBundle bundle;
  for (const auto& [model, results] : by_model) {
    bundle.reports.push_back(aggregate_report(model, results, &context));
    for (const auto& r : results) bundle.case_details.push_back(case_detail_json(model, r));
  }
  return bundle;
}

}  // namespace pathlogic
