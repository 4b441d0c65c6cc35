#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathlogic/evaluation.hpp"

using namespace pathlogic;

namespace {

ResponseEvaluation evaluate(const BenchmarkInstance& inst, const std::string& text) {
  return evaluate_response(RawResponse{inst.instance_id, "m", text, std::nullopt}, inst);
}

// Leaves s, s -> q, p -> q; goal q by MP.
BenchmarkInstance converse_instance() {
  LogicDag d;
  const int s = d.add_formula(parse_formula("s"));
  const int sq = d.add_formula(parse_formula("s -> q"));
  const int pq = d.add_formula(parse_formula("p -> q"));
  const int q = d.add_formula(parse_formula("q"));
  d.add_inference(FormKind::mp, {sq, s}, q, {});
  d.set_goal(q);
  d.set_leaf_order({s, sq, pq});
  return instance_from_dag(d, "converse", Tier::small, {});
}

bool has_label(const SolutionVerdict& v, int step, ErrorLabel label) {
  for (const auto& e : v.error_labels) {
    if (e.step_index == step && e.label == label) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("evaluation") {
  TEST_CASE("segmentation of two solutions with citations") {
    const auto seg = segment_response(
        "Some preamble.\n"
        "### Solution 1\n"
        "Step 1: Emma is verified. [uses: Fact 1, Rule 1]\n"
        "Step 2: Therefore, Emma can enter the Vault. [uses: previous step, Rule 3]\n"
        "Conclusion: Emma can enter the Vault.\n"
        "\n"
        "### Solution 2\n"
        "Step 1: Emma can enter the Vault. [uses: Fact 3, Rule 4, Step 7]\n"
        "Conclusion: Emma can enter the Vault.\n");
    CHECK_FALSE(seg.unparseable);
    REQUIRE(seg.solutions.size() == 2);
    const auto& s1 = seg.solutions[0];
    REQUIRE(s1.steps.size() == 2);
    CHECK(s1.steps[0].cited_refs == std::vector<Reference>{{RefKind::fact, 1, "Fact 1"}, {RefKind::rule, 1, "Rule 1"}});
    CHECK(s1.steps[1].claim == "Emma can enter the Vault");
    REQUIRE(s1.steps[1].cited_refs.size() == 2);
    CHECK(s1.steps[1].cited_refs[0].kind == RefKind::step);
    CHECK(s1.steps[1].cited_refs[0].number == 1);
    CHECK(s1.conclusion_text.find("Emma can enter the Vault") != std::string::npos);
    const auto& s2 = seg.solutions[1];
    CHECK(s2.steps[0].cited_refs.back().kind == RefKind::unresolved);
  }

  TEST_CASE("written step numbers map to positions") {
    const auto seg = segment_response(fixtures::dd_response());
    REQUIRE(seg.solutions.size() == 1);
    const auto& steps = seg.solutions[0].steps;
    REQUIRE(steps.size() == 3);
    CHECK(steps[2].index == 3);
    std::vector<int> cited_steps;
    for (const auto& r : steps[2].cited_refs) {
      if (r.kind == RefKind::step) cited_steps.push_back(r.number);
    }
    CHECK(cited_steps == std::vector<int>{1, 2});
  }

  TEST_CASE("text without the template is unparseable") {
    const auto seg = segment_response("I think Emma can enter, because of the escort.");
    CHECK(seg.unparseable);
    CHECK(seg.solutions.empty());
    const auto empty = segment_response("### Solution 1\n### Solution 2\nStep 1: p. [uses: Fact 1]\n");
    CHECK(empty.empty_blocks == 1);
    CHECK(empty.solutions.size() == 1);
  }

  TEST_CASE("connective stripping") {
    CHECK(strip_connectives("Therefore, Emma can enter the Vault.") == "Emma can enter the Vault");
    CHECK(strip_connectives("From Fact 1 and Rule 2, we conclude that Emma is verified.") == "Emma is verified");
    CHECK(strip_connectives("Emma is verified") == "Emma is verified");
  }

  TEST_CASE("formalization by stored sentence, template and literal syntax") {
    const auto inst = fixtures::vault_instance();
    const Formalizer fz(inst);
    const auto goal = fz.formalize("Emma can enter the Vault.");
    CHECK(goal.formula == parse_formula("enter(emma)"));
    CHECK(goal.method == "goal");
    const auto prem = fz.formalize(inst.premises[3].text);
    CHECK(prem.formula == inst.premises[3].formula);
    CHECK(prem.method == "premise");
    const auto tmpl = fz.formalize("If Emma has a security escort, then Emma is verified");
    CHECK(tmpl.formula == parse_formula("escort(emma) -> verified(emma)"));
    CHECK(tmpl.method == "template");
    const auto lit = fz.formalize("escort(emma) & pin(emma)");
    CHECK(lit.formula == parse_formula("escort(emma) & pin(emma)"));
    CHECK(lit.method == "formula");
    const auto oov = fz.formalize("dragon(emma)");
    CHECK(oov.out_of_vocabulary);
    CHECK(fz.formalize("Emma flies to the moon").method == "failed");
  }

  TEST_CASE("destructive dilemma: the reference derivation verifies") {
    const auto inst = fixtures::dd_instance();
    auto seg = segment_response(fixtures::dd_response());
    REQUIRE(seg.solutions.size() == 1);
    auto& c = seg.solutions[0];
    const Formalizer fz(inst);
    for (auto& s : c.steps) formalize_step(s, fz);
    const auto v = verify_solution(c, inst);
    CHECK(v.locally_valid == std::vector<bool>{true, true, true});
    CHECK(v.globally_valid);
    CHECK(v.concluded_goal);
    CHECK(v.valid());
    CHECK(v.used_premises == std::vector<int>{1, 2, 3});
  }

  TEST_CASE("destructive dilemma: dropping the Rule 2 citation invalidates that step") {
    const auto eval = evaluate(fixtures::dd_instance(), fixtures::dd_response(false));
    REQUIRE(eval.candidates.size() == 1);
    const auto& v = eval.candidates[0].verdict;
    CHECK(v.locally_valid == std::vector<bool>{true, false, true});
    CHECK_FALSE(v.globally_valid);
    CHECK_FALSE(v.valid());
    CHECK(has_label(v, 2, ErrorLabel::insufficient_premise));
  }

  TEST_CASE("clinic: full citations are valid, a missing bridge rule is an insufficient premise") {
    const auto inst = fixtures::clinic_instance();
    const auto good = evaluate(inst, fixtures::clinic_response_complete());
    REQUIRE(good.candidates.size() == 1);
    CHECK(good.candidates[0].verdict.valid());
    CHECK(good.candidates[0].verdict.error_labels.empty());
    const auto bad = evaluate(inst, fixtures::clinic_response_missing_rule());
    const auto& v = bad.candidates.at(0).verdict;
    CHECK(v.locally_valid == std::vector<bool>{true, false, true});
    REQUIRE(v.error_labels.size() == 1);
    CHECK(v.error_labels[0].step_index == 2);
    CHECK(v.error_labels[0].label == ErrorLabel::insufficient_premise);
  }

  TEST_CASE("a dilemma compressed into one step is still valid") {
    const auto inst = fixtures::sample_instance();
    const auto eval = evaluate(inst, fixtures::sample_response_compressed());
    REQUIRE(eval.candidates.size() == 1);
    const auto& v = eval.candidates[0].verdict;
    CHECK(v.valid());
    CHECK(v.used_premises == std::vector<int>{2, 3, 4, 5});
    // The reduced citation set is a ground-truth support per the oracle.
    std::vector<Formula> premises;
    for (const auto& p : inst.premises) premises.push_back(p.formula);
    const auto supports = oracle::minimal_supports(premises, inst.goal);
    REQUIRE(v.matched_support);
    CHECK(std::find(supports.begin(), supports.end(), v.matched_support->premise_ids) != supports.end());
  }

  TEST_CASE("affirming the consequent is an invalid deduction") {
    const auto inst = converse_instance();
    const auto eval = evaluate(inst,
                               "### Solution 1\n"
                               "Step 1: q. [uses: Fact 1, Rule 1]\n"
                               "Step 2: p. [uses: Rule 2, Step 1]\n"
                               "Conclusion: q.\n");
    const auto& v = eval.candidates.at(0).verdict;
    CHECK(v.locally_valid == std::vector<bool>{true, false});
    REQUIRE(v.error_labels.size() == 1);
    CHECK(v.error_labels[0].label == ErrorLabel::invalid_deduction);
  }

  TEST_CASE("citing a premise that does not exist is a fact hallucination") {
    const auto eval = evaluate(fixtures::vault_instance(),
                               "### Solution 1\n"
                               "Step 1: Emma can enter the Vault. [uses: Fact 9, Rule 4]\n"
                               "Conclusion: Emma can enter the Vault.\n");
    const auto& v = eval.candidates.at(0).verdict;
    CHECK_FALSE(v.valid());
    REQUIRE(v.error_labels.size() == 1);
    CHECK(v.error_labels[0].label == ErrorLabel::fact_hallucination);
  }

  TEST_CASE("redundant citations stay valid; a rule used without its antecedent is misapplied") {
    const auto eval = evaluate(fixtures::vault_instance(),
                               "### Solution 1\n"
                               "Step 1: Emma can enter the Vault. [uses: Rule 3, Fact 3, Rule 4]\n"
                               "Conclusion: Emma can enter the Vault.\n");
    CHECK(eval.candidates.at(0).verdict.valid());
    // p -> q applied with p nowhere established; no single extra premise helps.
    const auto wrong = evaluate(converse_instance(),
                                "### Solution 1\n"
                                "Step 1: q. [uses: Rule 2]\n"
                                "Conclusion: q.\n");
    const auto& v = wrong.candidates.at(0).verdict;
    CHECK(v.locally_valid == std::vector<bool>{false});
    REQUIRE(v.error_labels.size() == 1);
    CHECK(v.error_labels[0].label == ErrorLabel::rule_misapplication);
  }

  TEST_CASE("matching reduces citations before the lookup and flags duplicates") {
    const auto inst = fixtures::vault_instance();
    const auto eval = evaluate(inst,
                               "### Solution 1\n"
                               "Step 1: Emma can enter the Vault. [uses: Fact 3, Rule 4, Fact 1]\n"
                               "Conclusion: Emma can enter the Vault.\n"
                               "### Solution 2\n"
                               "Step 1: Emma can enter the Vault. [uses: Fact 3, Rule 4]\n"
                               "Conclusion: Emma can enter the Vault.\n"
                               "### Solution 3\n"
                               "Step 1: Emma is verified. [uses: Fact 1, Rule 1]\n"
                               "Step 2: Emma can enter the Vault. [uses: Step 1, Rule 3]\n"
                               "Conclusion: Emma can enter the Vault.\n");
    REQUIRE(eval.candidates.size() == 3);
    REQUIRE(eval.candidates[0].verdict.matched_support);
    CHECK(eval.candidates[0].verdict.matched_support->premise_ids == std::vector<int>{3, 7});
    CHECK(eval.candidates[0].matched_id == 1);
    CHECK_FALSE(eval.candidates[0].duplicate);
    CHECK(eval.candidates[1].matched_id == 1);
    CHECK(eval.candidates[1].duplicate);
    CHECK(eval.candidates[2].verdict.matched_support->premise_ids == std::vector<int>{1, 4, 6});
    CHECK(eval.matched_ids() == std::vector<int>{1, 2});
  }

  TEST_CASE("reference responses verify and match every solution") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      GenerationConfig c;
      c.seed = seed;
      c.tier = seed % 2 ? Tier::small : Tier::medium;
      const auto inst = build_instance(generate_instance(c), "g", builtin_profiles()[seed % 6], {});
      const auto eval = evaluate(inst, render_reference_response(inst));
      CAPTURE(seed);
      CHECK_FALSE(eval.unparseable);
      REQUIRE(eval.candidates.size() == inst.ground_truth.solutions.size());
      for (const auto& cand : eval.candidates) CHECK(cand.verdict.valid());
      std::vector<int> all(inst.ground_truth.solutions.size());
      std::iota(all.begin(), all.end(), 1);
      CHECK(eval.matched_ids() == all);
    }
  }

  TEST_CASE("verdict JSON round trips") {
    const auto inst = fixtures::vault_instance(true);
    auto eval = evaluate(inst, render_reference_response(inst));
    eval.completion_tokens = 321;
    const auto j = evaluation_to_json(eval);
    const auto back = evaluation_from_json(nlohmann::json::parse(j.dump()));
    CHECK(evaluation_to_json(back).dump() == j.dump());
    CHECK(back.completion_tokens == 321);
  }

  TEST_CASE("error label names") {
    CHECK(label_name(ErrorLabel::insufficient_premise) == "insufficient_premise");
    CHECK(label_from_name("rule_misapplication") == ErrorLabel::rule_misapplication);
    CHECK_FALSE(label_from_name("typo"));
    CHECK(decidability(ErrorLabel::fact_hallucination) == Decidability::symbolic);
    CHECK(decidability(ErrorLabel::semantic_misinterpretation) == Decidability::assisted);
  }
}
