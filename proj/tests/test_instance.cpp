#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "pathlogic/instance.hpp"

using namespace pathlogic;

namespace {

BenchmarkInstance generated(Tier tier, std::uint64_t seed) {
  GenerationConfig c;
  c.tier = tier;
  c.seed = seed;
  return build_instance(generate_instance(c), "t-" + std::to_string(seed), builtin_profiles()[seed % 6], {});
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pathlogic-test-" + name);
}

}  // namespace

TEST_SUITE("instance") {
  TEST_CASE("facts and rules are numbered apart in premise order") {
    const auto inst = fixtures::vault_instance();
    REQUIRE(inst.premises.size() == 7);
    CHECK(inst.premises[0].label == "Fact 1");
    CHECK(inst.premises[2].label == "Fact 3");
    CHECK(inst.premises[3].label == "Rule 1");
    CHECK(inst.premises[6].label == "Rule 4");
    CHECK(inst.find_label("Rule 4")->id == 7);
    CHECK(inst.find_label("Fact 4") == nullptr);
    CHECK(premise_label_kind(parse_formula("-p")) == "Fact");
    CHECK(premise_label_kind(parse_formula("p | q")) == "Rule");
    CHECK(inst.goal_text == "Emma can enter the Vault.");
  }

  TEST_CASE("generated instances carry consistent concrete premises") {
    const auto inst = generated(Tier::small, 3);
    CHECK(inst.premises.size() == inst.dag.leaves().size());
    for (const auto& p : inst.premises) CHECK(p.formula == inst.concrete(p.node));
    CHECK(inst.goal == inst.concrete(inst.dag.goal_id()));
    CHECK(inst.provenance.instantiation_mode == "fallback");
    CHECK(inst.provenance.config_hash == config_hash(inst.dag.config));
    CHECK(inst.premise_set().size() == inst.premises.size());
  }

  TEST_CASE("instance JSON round trips") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto inst = generated(Tier::medium, seed);
      const auto j = instance_to_json(inst);
      CHECK(j.at("schema") == kInstanceSchema);
      const auto back = instance_from_json(nlohmann::json::parse(j.dump()));
      CHECK(instance_to_json(back).dump() == j.dump());
      CHECK(back.goal == inst.goal);
      CHECK(back.ground_truth.solutions.size() == inst.ground_truth.solutions.size());
      CHECK(to_dot(back.dag) == to_dot(inst.dag));
    }
    const auto vault = fixtures::vault_instance(true);
    CHECK(instance_to_json(instance_from_json(nlohmann::json::parse(instance_to_json(vault).dump()))).dump() ==
          instance_to_json(vault).dump());
  }

  TEST_CASE("datasets round trip through disk") {
    std::vector<BenchmarkInstance> set{generated(Tier::small, 5), fixtures::dd_instance()};
    const auto path = temp_path("roundtrip/data.jsonl");
    std::filesystem::remove_all(path.parent_path());
    write_dataset(path, set);
    const auto back = read_dataset(path);
    REQUIRE(back.size() == 2);
    CHECK(to_jsonl(back) == to_jsonl(set));
    std::filesystem::remove_all(path.parent_path());
  }

  TEST_CASE("schema errors name the line") {
    const std::string good = instance_to_json(fixtures::dd_instance()).dump();
    CHECK(parse_dataset(good + "\n\n" + good + "\n").size() == 2);
    CHECK_THROWS_WITH_AS(parse_dataset(good + "\n{not json\n"), doctest::Contains("line 2"), SchemaError);
    auto j = nlohmann::json::parse(good);
    j.erase("goal");
    CHECK_THROWS_WITH_AS(parse_dataset(good + "\n" + good + "\n" + j.dump()), doctest::Contains("line 3"),
                         SchemaError);
    auto wrong = nlohmann::json::parse(good);
    wrong["schema"] = "other/v9";
    CHECK_THROWS_AS(parse_dataset(wrong.dump()), SchemaError);
    auto bad_formula = nlohmann::json::parse(good);
    bad_formula["premises"][0]["formula"] = "p -> ";
    CHECK_THROWS_AS(parse_dataset(bad_formula.dump()), SchemaError);
    CHECK_THROWS(read_dataset(temp_path("does-not-exist.jsonl")));
  }

  TEST_CASE("generation config JSON") {
    GenerationConfig c;
    c.seed = 9;
    c.tier = Tier::large;
    c.depth_min = 5;
    c.form_weights[2] = 0.25;
    const auto back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(config_from_json(nlohmann::json{{"depth_range", {3, 6}}}).depth_max == 6);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"depth", 3}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"depth_range", {3}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"tier", "huge"}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"form_weights", {{"XX", 1.0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"max_reuse_ratio", "high"}}), std::invalid_argument);
  }

  TEST_CASE("config hash ignores the seed only") {
    GenerationConfig a, b;
    a.seed = 1;
    b.seed = 2;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.share_probability = 0.3;
    CHECK(config_hash(a) != config_hash(b));
  }
}
