#include "pathlogic/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <memory>

#include "pathlogic/harness.hpp"

namespace pathlogic::cli {

namespace {

struct ClientFlags {
  std::string endpoint;
  std::string model = "default";
  std::string credential_env = "PATHLOGIC_API_KEY";
  int max_in_flight = 4;
};

void add_client_flags(CLI::App* cmd, ClientFlags& flags) {
  cmd->add_option("--endpoint", flags.endpoint, "Chat-completion URL for the text service");
  cmd->add_option("--model", flags.model, "Model name sent to the endpoint");
  cmd->add_option("--credential-env", flags.credential_env, "Environment variable holding the bearer credential");
  cmd->add_option("--in-flight", flags.max_in_flight, "Concurrent requests to the endpoint")->check(CLI::PositiveNumber);
}

std::unique_ptr<TextClient> make_client(const ClientFlags& flags) {
  if (flags.endpoint.empty()) return nullptr;
  HttpEndpointConfig config;
  config.url = flags.endpoint;
  config.model = flags.model;
  config.credential_env = flags.credential_env;
  return std::make_unique<TextClient>(make_http_transport(config), RetryPolicy{}, flags.max_in_flight);
}

std::optional<Tier> parse_tier(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto t = tier_from_name(name);
  if (!t) throw std::invalid_argument("unknown tier '" + name + "' (expected small, medium or large)");
  return t;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument(path + " is not valid JSON");
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-path reasoning benchmark: generation, validation, evaluation and reporting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kGeneratorVersion));

  // generate
  std::uint64_t seed = 0;
  std::string tier_name_flag, out_path, config_path, domain;
  int count = 0, per_tier = 0, workers = 1;
  bool offline = false;
  ClientFlags gen_client;
  auto* generate = app.add_subcommand("generate", "Generate, instantiate and validate instances");
  generate->add_option("--seed", seed, "Master seed");
  generate->add_option("--tier", tier_name_flag, "small, medium or large");
  generate->add_option("--count", count, "Instances for --tier")->check(CLI::NonNegativeNumber);
  generate->add_option("--per-tier", per_tier, "Instances for every tier")->check(CLI::NonNegativeNumber);
  generate->add_flag("--offline", offline, "Template instantiation only (the default without --endpoint)");
  generate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  generate->add_option("--out", out_path, "Dataset file (JSON lines)")->required();
  generate->add_option("--config", config_path, "JSON file of generation settings");
  generate->add_option("--domain", domain, "Builtin domain profile; default cycles through all");
  add_client_flags(generate, gen_client);

  // sample
  std::string in_path;
  std::size_t sample_per_tier = 0;
  auto* sample = app.add_subcommand("sample", "Stratified sample of a dataset");
  sample->add_option("--in", in_path, "Pool dataset")->required();
  sample->add_option("--per-tier", sample_per_tier, "Instances drawn per tier")->required();
  sample->add_option("--seed", seed, "Sampling seed");
  sample->add_option("--out", out_path, "Sampled dataset")->required();

  // validate
  std::string report_path;
  auto* validate = app.add_subcommand("validate", "Re-check every instance and keep the survivors");
  validate->add_option("--in", in_path, "Dataset")->required();
  validate->add_option("--out", out_path, "Surviving instances")->required();
  validate->add_option("--report", report_path, "Per-instance check results (JSON lines)");
  validate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  // reference
  std::string model_name = "reference";
  auto* reference = app.add_subcommand("reference", "Write every ground-truth proof as a model response");
  reference->add_option("--in", in_path, "Dataset")->required();
  reference->add_option("--out", out_path, "Responses directory")->required();
  reference->add_option("--model", model_name, "Model name for the response files");

  // evaluate
  std::string responses_path;
  ClientFlags eval_client;
  auto* evaluate = app.add_subcommand("evaluate", "Verify model responses against the dataset");
  evaluate->add_option("--in", in_path, "Dataset")->required();
  evaluate->add_option("--responses", responses_path, "Responses directory or JSON-lines file")->required();
  evaluate->add_option("--out", out_path, "Verdict store (JSON lines)")->required();
  evaluate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  evaluate->add_flag("--offline", offline, "No text service for repair or formalization");
  add_client_flags(evaluate, eval_client);

  // report
  std::string verdicts_path;
  std::vector<std::string> dot_ids;
  auto* report = app.add_subcommand("report", "Metric tables from a verdict store");
  report->add_option("--in", in_path, "Dataset")->required();
  report->add_option("--verdicts", verdicts_path, "Verdict store")->required();
  report->add_option("--out", out_path, "Output directory")->required();
  report->add_option("--dot", dot_ids, "Instance ids whose DAG is exported as DOT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*generate) {
      if (offline && !gen_client.endpoint.empty()) throw std::invalid_argument("--offline and --endpoint conflict");
      GenerateOptions options;
      if (!config_path.empty()) options.base = config_from_json(read_json_file(config_path));
      if (generate->count("--seed") || config_path.empty()) options.base.seed = seed;
      const auto tier = parse_tier(tier_name_flag);
      if (per_tier > 0 && (tier || count > 0)) throw std::invalid_argument("--per-tier excludes --tier/--count");
      if (per_tier > 0) {
        for (Tier t : {Tier::small, Tier::medium, Tier::large}) options.counts[t] = per_tier;
      } else if (tier) {
        options.counts[*tier] = count;
      } else {
        throw std::invalid_argument("give --tier with --count, or --per-tier");
      }
      if (!domain.empty()) builtin_profile(domain);
      options.domain = domain;
      options.workers = workers;
      auto client = make_client(gen_client);
      options.instantiation.client = client.get();
      options.instantiation.fallback_on_failure = false;
      auto result = generate_dataset(options, &err);
      write_dataset(out_path, result.accepted);
      out << "wrote " << result.accepted.size() << " instances to " << out_path << " (" << result.rejected.size()
          << " candidates rejected)\n";
      return result.short_tiers.empty() ? kExitOk : kExitValidationFailures;
    }
    if (*sample) {
      auto pool = read_dataset(in_path);
      auto picked = stratified_sample(pool, sample_per_tier, seed);
      write_dataset(out_path, picked);
      out << "sampled " << picked.size() << " of " << pool.size() << " instances\n";
      return kExitOk;
    }
    if (*validate) {
      auto dataset = read_dataset(in_path);
      auto result = validate_dataset(dataset, workers);
      write_dataset(out_path, result.survivors);
      if (!report_path.empty()) {
        std::vector<ordered_json> rows;
        for (const auto& r : result.reports) rows.push_back(validation_report_json(r));
        write_jsonl(report_path, rows);
      }
      out << result.survivors.size() << " of " << dataset.size() << " instances accepted\n";
      for (const auto& [reason, n] : result.failures) out << "  " << reason << ": " << n << "\n";
      return result.failures.empty() ? kExitOk : kExitValidationFailures;
    }
    if (*reference) {
      auto dataset = read_dataset(in_path);
      for (const auto& inst : dataset) {
        write_text(std::filesystem::path(out_path) / inst.instance_id / (model_name + ".txt"),
                   render_reference_response(inst));
      }
      out << "wrote " << dataset.size() << " responses under " << out_path << "\n";
      return kExitOk;
    }
    if (*evaluate) {
      if (offline && !eval_client.endpoint.empty()) throw std::invalid_argument("--offline and --endpoint conflict");
      auto dataset = read_dataset(in_path);
      auto responses = load_responses(responses_path);
      auto client = make_client(eval_client);
      EvaluationOptions options;
      options.client = client.get();
      auto result = evaluate_dataset(dataset, responses, options, workers);
      std::vector<ordered_json> rows;
      for (const auto& e : result.evaluations) rows.push_back(evaluation_to_json(e));
      write_jsonl(out_path, rows);
      if (responses.empty()) err << "warning: no responses found under " << responses_path << "\n";
      for (const auto& m : result.missing) err << "warning: missing response " << m << "\n";
      for (const auto& u : result.unknown_instances) err << "warning: responses for unknown instance " << u << "\n";
      out << "evaluated " << result.evaluations.size() << " responses\n";
      return kExitOk;
    }
    if (*report) {
      auto dataset = read_dataset(in_path);
      auto verdicts = read_verdicts(verdicts_path);
      const std::filesystem::path dir(out_path);
      std::filesystem::create_directories(dir);
      if (verdicts.empty()) {
        err << "warning: the verdict store is empty\n";
      } else {
        auto bundle = build_reports(dataset, verdicts);
        write_text(dir / "report.csv", report_csv(bundle.reports));
        write_text(dir / "report.txt", report_table(bundle.reports));
        write_jsonl(dir / "cases.jsonl", bundle.case_details);
        write_text(dir / "metadata.json", report_metadata().dump(2) + "\n");
        out << report_table(bundle.reports);
      }
      for (const auto& id : dot_ids) {
        auto it = std::find_if(dataset.begin(), dataset.end(), [&](const auto& i) { return i.instance_id == id; });
        if (it == dataset.end()) throw std::invalid_argument("no instance with id " + id);
        write_text(dir / (id + ".dot"), to_dot(it->dag));
      }
      return kExitOk;
    }
  } catch (const ClientFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const InsufficientPool& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitConfigError;
}

}  // namespace pathlogic::cli
