#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "pathlogic/cli.hpp"
#include "pathlogic/harness.hpp"

using namespace pathlogic;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pathlogic-harness-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "pathlogic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

GenerateOptions small_options(std::uint64_t seed, int count, int workers = 1) {
  GenerateOptions o;
  o.base.seed = seed;
  o.counts[Tier::small] = count;
  o.workers = workers;
  return o;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("parallel_map keeps order and rethrows") {
    const auto squares = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
    REQUIRE(squares.size() == 50);
    CHECK(squares[7] == 49);
    CHECK_THROWS_AS(parallel_map<int>(10, 3,
                                      [](std::size_t i) -> int {
                                        if (i == 6) throw std::runtime_error("boom");
                                        return 0;
                                      }),
                    std::runtime_error);
  }

  TEST_CASE("generation ids, tiers and worker-count independence") {
    const auto one = generate_dataset(small_options(11, 6, 1));
    const auto four = generate_dataset(small_options(11, 6, 4));
    REQUIRE(one.accepted.size() == 6);
    CHECK(one.short_tiers.empty());
    CHECK(one.accepted[0].instance_id == "small-0001");
    CHECK(one.accepted[5].instance_id == "small-0006");
    CHECK(to_jsonl(one.accepted) == to_jsonl(four.accepted));
    for (const auto& inst : one.accepted) CHECK(inst.tier == Tier::small);
  }

  TEST_CASE("stratified sampling") {
    GenerateOptions o;
    o.base.seed = 3;
    o.counts = {{Tier::small, 4}, {Tier::medium, 3}, {Tier::large, 2}};
    const auto pool = generate_dataset(o).accepted;
    REQUIRE(pool.size() == 9);
    const auto picked = stratified_sample(pool, 2, 99);
    REQUIRE(picked.size() == 6);
    std::map<Tier, int> per;
    for (const auto& i : picked) ++per[i.tier];
    CHECK(per[Tier::small] == 2);
    CHECK(per[Tier::medium] == 2);
    CHECK(per[Tier::large] == 2);
    CHECK(to_jsonl(stratified_sample(pool, 2, 99)) == to_jsonl(picked));
    CHECK_THROWS_AS(stratified_sample(pool, 3, 99), InsufficientPool);
  }

  TEST_CASE("validation separates survivors from failures") {
    auto broken = fixtures::vault_instance();
    broken.premises.erase(broken.premises.begin() + 6);
    broken.premises.erase(broken.premises.begin() + 5);
    const auto result = validate_dataset({fixtures::vault_instance(), broken, fixtures::dd_instance()}, 2);
    CHECK(result.survivors.size() == 2);
    CHECK(result.failures.at("global_derivability") == 1);
    CHECK(validation_report_json(result.reports[1]).at("verdict") == "global_derivability");
  }

  TEST_CASE("responses load from directories and JSON lines") {
    const auto dir = scratch("responses");
    std::filesystem::create_directories(dir / "vault");
    std::ofstream(dir / "vault" / "m1.txt") << fixtures::dd_response();
    std::ofstream(dir / "vault" / "m2.txt") << "nothing";
    const auto from_dir = load_responses(dir);
    REQUIRE(from_dir.size() == 2);
    CHECK(from_dir[0].model_name == "m1");
    CHECK(from_dir[0].instance_id == "vault");
    std::ofstream(dir / "r.jsonl") << R"({"instance_id": "vault", "model": "m3", "text": "x", "completion_tokens": 42})"
                                   << "\n";
    const auto from_lines = load_responses(dir / "r.jsonl");
    REQUIRE(from_lines.size() == 1);
    CHECK(from_lines[0].completion_tokens == 42);
    std::ofstream(dir / "bad.jsonl") << "{}\n";
    CHECK_THROWS_AS(load_responses(dir / "bad.jsonl"), SchemaError);
  }

  TEST_CASE("evaluation reports missing and unknown responses") {
    const auto vault = fixtures::vault_instance();
    const auto dd = fixtures::dd_instance();
    const std::vector<RawResponse> responses{
        {"vault", "m1", render_reference_response(vault), std::nullopt},
        {"dd", "m2", fixtures::dd_response(), std::nullopt},
        {"ghost", "m1", "x", std::nullopt},
    };
    const auto result = evaluate_dataset({vault, dd}, responses, {}, 2);
    CHECK(result.evaluations.size() == 2);
    CHECK(result.missing == std::vector<std::string>{"vault/m2", "dd/m1"});
    CHECK(result.unknown_instances == std::vector<std::string>{"ghost"});
  }

  TEST_CASE("command line: full offline pipeline and determinism") {
    const auto dir = scratch("cli");
    const std::string data = (dir / "data.jsonl").string();
    std::string out;
    REQUIRE(run_cli({"generate", "--tier", "small", "--count", "4", "--seed", "5", "--offline", "--out", data}, &out) ==
            cli::kExitOk);
    CHECK(out.find("wrote 4 instances") != std::string::npos);
    REQUIRE(run_cli({"generate", "--tier", "small", "--count", "4", "--seed", "5", "--workers", "3", "--out",
                     (dir / "again.jsonl").string()}) == cli::kExitOk);
    CHECK(slurp(data) == slurp(dir / "again.jsonl"));
    CHECK(run_cli({"validate", "--in", data, "--out", (dir / "valid.jsonl").string(), "--report",
                   (dir / "report.jsonl").string()}) == cli::kExitOk);
    CHECK(run_cli({"reference", "--in", data, "--out", (dir / "responses").string()}) == cli::kExitOk);
    CHECK(run_cli({"evaluate", "--in", data, "--responses", (dir / "responses").string(), "--out",
                   (dir / "verdicts.jsonl").string()}) == cli::kExitOk);
    CHECK(run_cli({"report", "--in", data, "--verdicts", (dir / "verdicts.jsonl").string(), "--out",
                   (dir / "report").string(), "--dot", "small-0001"}) == cli::kExitOk);
    const auto csv = slurp(dir / "report" / "report.csv");
    CHECK(csv.find("reference,avg,success_rate,100.0000") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "report" / "small-0001.dot"));
    CHECK(std::filesystem::exists(dir / "report" / "metadata.json"));
  }

  TEST_CASE("command line exit codes") {
    const auto dir = scratch("codes");
    std::string err;
    CHECK(run_cli({"generate", "--tier", "tiny", "--count", "1", "--out", (dir / "x.jsonl").string()}, nullptr,
                  &err) == cli::kExitConfigError);
    CHECK(err.find("tiny") != std::string::npos);
    CHECK(run_cli({"generate", "--out", (dir / "x.jsonl").string()}) == cli::kExitConfigError);
    CHECK(run_cli({"frobnicate"}) == cli::kExitConfigError);
    CHECK(run_cli({"validate", "--in", (dir / "missing.jsonl").string(), "--out", (dir / "y.jsonl").string()}) ==
          cli::kExitIoError);
    std::ofstream(dir / "corrupt.jsonl") << "{\"schema\": 1}\n";
    CHECK(run_cli({"validate", "--in", (dir / "corrupt.jsonl").string(), "--out", (dir / "y.jsonl").string()}) ==
          cli::kExitIoError);

    auto broken = fixtures::vault_instance();
    broken.premises.pop_back();
    broken.premises.pop_back();
    write_dataset(dir / "broken.jsonl", {fixtures::dd_instance(), broken});
    std::string out;
    CHECK(run_cli({"validate", "--in", (dir / "broken.jsonl").string(), "--out", (dir / "ok.jsonl").string()}, &out) ==
          cli::kExitValidationFailures);
    CHECK(out.find("1 of 2 instances accepted") != std::string::npos);
    CHECK(read_dataset(dir / "ok.jsonl").size() == 1);

    write_dataset(dir / "pool.jsonl", {fixtures::dd_instance()});
    CHECK(run_cli({"sample", "--in", (dir / "pool.jsonl").string(), "--per-tier", "1", "--out",
                   (dir / "s.jsonl").string()}) == cli::kExitConfigError);
    std::ofstream(dir / "cfg.json") << R"({"depth_range": [4, 5], "bogus": 1})";
    CHECK(run_cli({"generate", "--tier", "small", "--count", "1", "--config", (dir / "cfg.json").string(), "--out",
                   (dir / "x.jsonl").string()}) == cli::kExitConfigError);
    CHECK(run_cli({"generate", "--tier", "small", "--count", "1", "--endpoint", "http://127.0.0.1:1/v1",
                   "--credential-env", "PATHLOGIC_TEST_UNSET_VARIABLE", "--out", (dir / "x.jsonl").string()}) ==
          cli::kExitConfigError);
  }
}
