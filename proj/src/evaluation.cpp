#include "pathlogic/evaluation.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace pathlogic {

namespace {

constexpr auto kIcase = std::regex::ECMAScript | std::regex::icase;

std::string trim_copy(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string without_period(std::string_view s) {
  std::string t = trim_copy(s);
  while (!t.empty() && (t.back() == '.' || t.back() == ' ')) t.pop_back();
  return t;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

const std::regex& header_re() {
  static const std::regex re(R"(^\s*(?:#{1,6}\s*|\*\*\s*)?solution\s+(\d+)\b.*$)", kIcase);
  return re;
}

const std::regex& step_re() {
  static const std::regex re(R"(^\s*[*_>\-]*\s*step\s+(\d+)\s*[*_]*\s*[:.)\-]\s*[*_]*\s*(.*)$)", kIcase);
  return re;
}

const std::regex& conclusion_re() {
  static const std::regex re(R"(^\s*[*_>\-]*\s*conclusion\s*[*_]*\s*:\s*[*_]*\s*(.*)$)", kIcase);
  return re;
}

const std::regex& uses_re() {
  static const std::regex re(R"(\[\s*uses?\s*:\s*([^\]]*)\])", kIcase);
  return re;
}

const std::regex& ref_token_re() {
  static const std::regex re(R"(^(fact|rule|step)\s*#?\s*(\d+)$)", kIcase);
  return re;
}

const std::regex& inline_ref_re() {
  static const std::regex re(R"(\b(fact|rule|step)\s+(\d+)\b)", kIcase);
  return re;
}

const std::regex& previous_re() {
  static const std::regex re(R"(\b(?:the\s+)?previous\s+step\b)", kIcase);
  return re;
}

struct RawStep {
  int written = 0;
  std::string text;
};

struct RawBlock {
  int index = 0;
  std::vector<RawStep> steps;
  std::string conclusion;
};

std::vector<RawBlock> split_blocks(std::string_view text) {
  std::vector<RawBlock> blocks;
  bool saw_header = false;
  RawBlock implicit;
  RawBlock* current = &implicit;
  bool open_step = false;
  for (const auto& line : split_lines(text)) {
    std::smatch m;
    if (std::regex_match(line, m, header_re())) {
      saw_header = true;
      blocks.push_back(RawBlock{std::stoi(m[1].str()), {}, {}});
      current = &blocks.back();
      open_step = false;
    } else if (std::regex_match(line, m, step_re())) {
      current->steps.push_back(RawStep{std::stoi(m[1].str()), trim_copy(m[2].str())});
      open_step = true;
    } else if (std::regex_match(line, m, conclusion_re())) {
      current->conclusion = trim_copy(m[1].str());
      open_step = false;
    } else if (open_step && !trim_copy(line).empty()) {
      auto& step = current->steps.back();
      if (step.text.find('[') == std::string::npos) step.text += " " + trim_copy(line);
    } else if (trim_copy(line).empty()) {
      open_step = false;
    }
  }
  if (!saw_header && !implicit.steps.empty()) {
    implicit.index = 1;
    blocks.push_back(std::move(implicit));
  }
  return blocks;
}

std::vector<std::string> split_ref_list(const std::string& list) {
  static const std::regex sep(R"(\s*(?:,|;|\band\b|&)\s*)", kIcase);
  std::vector<std::string> out;
  for (std::sregex_token_iterator it(list.begin(), list.end(), sep, -1), end; it != end; ++it) {
    auto t = trim_copy(it->str());
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

void add_ref(std::vector<Reference>& refs, Reference r) {
  if (std::find(refs.begin(), refs.end(), r) == refs.end()) refs.push_back(std::move(r));
}

Reference step_ref(int written, int position, const std::map<int, int>& earlier, std::string text) {
  auto it = earlier.find(written);
  if (it == earlier.end() || it->second >= position) return Reference{RefKind::unresolved, written, std::move(text)};
  return Reference{RefKind::step, it->second, std::move(text)};
}

Reference previous_ref(int position, std::string text) {
  if (position <= 1) return Reference{RefKind::unresolved, 0, std::move(text)};
  return Reference{RefKind::step, position - 1, std::move(text)};
}

Reference classify_token(const std::string& token, int position, const std::map<int, int>& earlier) {
  std::smatch m;
  if (std::regex_match(token, m, ref_token_re())) {
    const std::string kind = casefold(m[1].str());
    const int n = std::stoi(m[2].str());
    const std::string text = (kind == "fact" ? "Fact " : kind == "rule" ? "Rule " : "Step ") + std::to_string(n);
    if (kind == "fact") return Reference{RefKind::fact, n, text};
    if (kind == "rule") return Reference{RefKind::rule, n, text};
    return step_ref(n, position, earlier, text);
  }
  if (std::regex_search(token, previous_re())) return previous_ref(position, token);
  return Reference{RefKind::unresolved, 0, token};
}

std::optional<FormKind> detect_form(const std::string& text) {
  const std::string folded = casefold(text);
  for (FormKind k : kAllForms) {
    if (folded.find(casefold(form_name(k))) != std::string::npos) return k;
    const std::string code = "(" + casefold(form_code(k)) + ")";
    if (folded.find(code) != std::string::npos) return k;
  }
  return std::nullopt;
}

std::string drop_form_mention(std::string s) {
  for (FormKind k : kAllForms) {
    for (const std::string& name : {std::string(form_name(k)), std::string(form_code(k))}) {
      const std::regex re(R"(\s*\(\s*(?:by\s+)?)" + name + R"(\s*\)\s*\.?\s*$)", kIcase);
      s = std::regex_replace(s, re, "");
      const std::regex by(R"(\s*,?\s*\bby\s+)" + name + R"(\s*\.?\s*$)", kIcase);
      s = std::regex_replace(s, by, "");
    }
  }
  return s;
}

Step build_step(const RawStep& raw, int position, const std::map<int, int>& earlier) {
  Step step;
  step.index = position;
  step.nl_text = raw.text;
  std::string statement = raw.text;
  std::smatch m;
  if (std::regex_search(raw.text, m, uses_re())) {
    for (const auto& token : split_ref_list(m[1].str())) add_ref(step.cited_refs, classify_token(token, position, earlier));
    statement = m.prefix().str() + m.suffix().str();
  } else {
    for (std::sregex_iterator it(raw.text.begin(), raw.text.end(), inline_ref_re()), end; it != end; ++it) {
      add_ref(step.cited_refs, classify_token((*it)[0].str(), position, earlier));
    }
  }
  if (std::regex_search(raw.text, previous_re())) add_ref(step.cited_refs, previous_ref(position, "previous step"));
  step.form_hint = detect_form(statement);
  step.claim = strip_connectives(drop_form_mention(statement));
  return step;
}

std::vector<CandidateSolution> parse_template(std::string_view text, int& empty_blocks) {
  std::vector<CandidateSolution> out;
  empty_blocks = 0;
  for (const auto& block : split_blocks(text)) {
    if (block.steps.empty()) {
      ++empty_blocks;
      continue;
    }
    CandidateSolution c;
    c.solution_index = block.index;
    c.conclusion_text = block.conclusion;
    std::map<int, int> earlier;
    for (std::size_t i = 0; i < block.steps.size(); ++i) {
      const int position = static_cast<int>(i) + 1;
      c.steps.push_back(build_step(block.steps[i], position, earlier));
      earlier.emplace(block.steps[i].written, position);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::string strip_connectives(std::string_view statement) {
  static const std::regex lead_clause(
      R"(^\s*(?:from|by|using|since|because of|applying|combining|given)\b[^,]*,\s*)", kIcase);
  static const std::regex adverb(
      R"(^\s*(?:therefore|thus|hence|so|consequently|then|finally|accordingly)\b\s*,?\s*)", kIcase);
  static const std::regex verb(
      R"(^\s*(?:we\s+(?:can\s+|may\s+)?(?:conclude|infer|derive|deduce|obtain|get|know)|it\s+follows|this\s+(?:means|shows|gives))(?:\s+that)?\s*[:,]?\s*)",
      kIcase);
  std::string s = trim_copy(statement);
  for (;;) {
    std::string next = std::regex_replace(s, lead_clause, "", std::regex_constants::format_first_only);
    next = std::regex_replace(next, adverb, "", std::regex_constants::format_first_only);
    next = std::regex_replace(next, verb, "", std::regex_constants::format_first_only);
    if (next == s) break;
    s = next;
  }
  return without_period(s);
}

Segmentation segment_response(std::string_view text, TextClient* repair) {
  Segmentation seg;
  seg.solutions = parse_template(text, seg.empty_blocks);
  if (seg.solutions.empty() && repair) {
    TextRequest request;
    request.system_text =
        "Rewrite the answer below into this exact format and change nothing else.\n"
        "### Solution k\nStep t: <statement>. [uses: Fact n, Rule m, Step s]\nConclusion: <goal statement>";
    request.user_text = std::string(text);
    try {
      const auto reply = repair->complete(request);
      int empty = 0;
      auto rewritten = parse_template(reply.text, empty);
      if (!rewritten.empty()) {
        seg.solutions = std::move(rewritten);
        seg.empty_blocks = empty;
        seg.repaired = true;
      }
    } catch (const std::exception&) {
      // A failed repair leaves the response unparseable.
    }
  }
  seg.unparseable = seg.solutions.empty();
  return seg;
}

Formalizer::Formalizer(const BenchmarkInstance& instance, TextClient* client)
    : instance_(instance), client_(client), reader_(instance.symbol_map()) {
  for (const auto& p : instance.premises) stored_.emplace_back(casefold(without_period(p.text)), p.formula);
  stored_.emplace_back(casefold(without_period(instance.goal_text)), instance.goal);
  for (const auto& v : instance.vocabulary) vocabulary_.insert(v.atom);
}

Formalization Formalizer::check_vocabulary(Formula f, std::string method) const {
  Formalization out{std::move(f), false, std::move(method)};
  for (const auto& a : atoms_of(*out.formula)) {
    if (!vocabulary_.count(a)) out.out_of_vocabulary = true;
  }
  return out;
}

Formalization Formalizer::formalize(std::string_view claim) const {
  const std::string key = casefold(without_period(claim));
  if (key.empty()) return {};
  for (std::size_t i = 0; i < stored_.size(); ++i) {
    if (stored_[i].first == key) return {stored_[i].second, false, i + 1 == stored_.size() ? "goal" : "premise"};
  }
  if (auto f = reader_.read(claim)) return {*f, false, "template"};
  try {
    return check_vocabulary(parse_formula(without_period(claim)), "formula");
  } catch (const ParseError&) {
  } catch (const std::invalid_argument&) {
  }
  if (client_) return ask_client(claim);
  return {};
}

Formalization Formalizer::ask_client(std::string_view claim) const {
  TextRequest request;
  request.system_text =
      "Translate the statement into one Prover9 formula using only the atoms listed. "
      "Use - for not, & for and, | for or, -> for implies. Reply with the formula only.";
  std::string user = "Atoms:\n";
  for (const auto& v : instance_.vocabulary) user += to_string(v.atom) + " : " + v.gloss + "\n";
  user += "Examples:\n";
  for (const auto& p : instance_.premises) user += p.text + " => " + format_formula(p.formula) + "\n";
  user += "Statement: " + std::string(claim) + "\n";
  request.user_text = std::move(user);
  request.max_tokens = 256;
  try {
    const auto reply = client_->complete(request);
    for (const auto& line : split_lines(reply.text)) {
      std::string t = trim_copy(line);
      t.erase(std::remove(t.begin(), t.end(), '`'), t.end());
      if (t.empty()) continue;
      return check_vocabulary(parse_formula(t), "client");
    }
  } catch (const std::exception&) {
  }
  return {};
}

void formalize_step(Step& step, const Formalizer& formalizer) {
  auto f = formalizer.formalize(step.claim);
  step.formal = f.formula;
  step.out_of_vocabulary = f.out_of_vocabulary;
}

std::string_view label_name(ErrorLabel label) {
  switch (label) {
    case ErrorLabel::semantic_misinterpretation: return "semantic_misinterpretation";
    case ErrorLabel::information_omission: return "information_omission";
    case ErrorLabel::fact_hallucination: return "fact_hallucination";
    case ErrorLabel::invalid_deduction: return "invalid_deduction";
    case ErrorLabel::rule_misapplication: return "rule_misapplication";
    case ErrorLabel::insufficient_premise: return "insufficient_premise";
  }
  return "invalid_deduction";
}

std::optional<ErrorLabel> label_from_name(std::string_view name) {
  for (auto l : {ErrorLabel::semantic_misinterpretation, ErrorLabel::information_omission,
                 ErrorLabel::fact_hallucination, ErrorLabel::invalid_deduction, ErrorLabel::rule_misapplication,
                 ErrorLabel::insufficient_premise}) {
    if (label_name(l) == name) return l;
  }
  return std::nullopt;
}

Decidability decidability(ErrorLabel label) {
  return label == ErrorLabel::semantic_misinterpretation || label == ErrorLabel::information_omission
             ? Decidability::assisted
             : Decidability::symbolic;
}

bool SolutionVerdict::all_steps_valid() const {
  return !locally_valid.empty() && std::all_of(locally_valid.begin(), locally_valid.end(), [](bool b) { return b; });
}

namespace {

struct Citations {
  std::vector<Formula> formulas;
  std::vector<int> premise_ids;
  bool resolved = true;
};

Citations resolve(const Step& step, const CandidateSolution& candidate, const BenchmarkInstance& instance) {
  Citations c;
  for (const auto& r : step.cited_refs) {
    switch (r.kind) {
      case RefKind::fact:
      case RefKind::rule: {
        const auto* p = instance.find_label(r.text);
        if (!p) {
          c.resolved = false;
          break;
        }
        c.formulas.push_back(p->formula);
        c.premise_ids.push_back(p->id);
        break;
      }
      case RefKind::step: {
        const Step& earlier = candidate.steps.at(static_cast<std::size_t>(r.number) - 1);
        if (earlier.formal) c.formulas.push_back(*earlier.formal);
        else c.resolved = false;
        break;
      }
      case RefKind::unresolved:
        c.resolved = false;
        break;
    }
  }
  return c;
}

std::vector<Formula> with(std::vector<Formula> base, const Formula& extra) {
  base.push_back(extra);
  return base;
}

}  // namespace

SolutionVerdict verify_solution(CandidateSolution& candidate, const BenchmarkInstance& instance) {
  SolutionVerdict v;
  std::set<int> used;
  for (const auto& step : candidate.steps) {
    const auto c = resolve(step, candidate, instance);
    used.insert(c.premise_ids.begin(), c.premise_ids.end());
    const bool ok = c.resolved && step.formal && !step.out_of_vocabulary && entails(c.formulas, *step.formal);
    v.locally_valid.push_back(ok);
  }
  v.used_premises.assign(used.begin(), used.end());
  std::vector<Formula> cited;
  for (int id : v.used_premises) cited.push_back(instance.premises.at(static_cast<std::size_t>(id) - 1).formula);
  v.globally_valid = entails(cited, instance.goal);
  candidate.concluded_goal = std::any_of(candidate.steps.begin(), candidate.steps.end(), [&](const Step& s) {
    return s.formal && !s.out_of_vocabulary && entails({*s.formal}, instance.goal);
  });
  v.concluded_goal = candidate.concluded_goal;
  v.length = static_cast<int>(candidate.steps.size());
  v.error_labels = classify_errors(v, candidate, instance);
  return v;
}

std::optional<int> match_ground_truth(SolutionVerdict& verdict, const BenchmarkInstance& instance) {
  if (!verdict.valid()) return std::nullopt;
  const auto reduced = minimize_support(verdict.used_premises, instance.premise_set(), instance.goal);
  const auto& sols = instance.ground_truth.solutions;
  for (std::size_t i = 0; i < sols.size(); ++i) {
    if (sols[i].support == reduced) {
      verdict.matched_support = reduced;
      return static_cast<int>(i) + 1;
    }
  }
  return std::nullopt;
}

std::vector<StepError> classify_errors(const SolutionVerdict& verdict, const CandidateSolution& candidate,
                                       const BenchmarkInstance& instance) {
  std::vector<StepError> out;
  for (std::size_t i = 0; i < candidate.steps.size() && i < verdict.locally_valid.size(); ++i) {
    if (verdict.locally_valid[i]) continue;
    const Step& step = candidate.steps[i];
    const int index = step.index;
    const auto c = resolve(step, candidate, instance);
    bool fabricated = step.out_of_vocabulary;
    for (const auto& r : step.cited_refs) {
      if (r.kind == RefKind::unresolved) fabricated = true;
      if ((r.kind == RefKind::fact || r.kind == RefKind::rule) && !instance.find_label(r.text)) fabricated = true;
    }
    if (fabricated) {
      out.push_back({index, ErrorLabel::fact_hallucination});
      continue;
    }
    if (!step.formal) {
      out.push_back({index, ErrorLabel::invalid_deduction});
      continue;
    }
    const Formula& claim = *step.formal;
    bool insufficient = false;
    for (const auto& p : instance.premises) {
      if (std::find(c.premise_ids.begin(), c.premise_ids.end(), p.id) != c.premise_ids.end()) continue;
      if (entails(with(c.formulas, p.formula), claim)) {
        insufficient = true;
        break;
      }
    }
    if (insufficient) {
      out.push_back({index, ErrorLabel::insufficient_premise});
      continue;
    }
    bool misapplied = false;
    for (std::size_t r = 0; r < c.formulas.size() && !misapplied; ++r) {
      const Formula& rule = c.formulas[r];
      if (rule.kind() != Connective::implication) continue;
      std::vector<Formula> others;
      for (std::size_t o = 0; o < c.formulas.size(); ++o) {
        if (o != r) others.push_back(c.formulas[o]);
      }
      misapplied = !entails(others, rule.lhs()) && entails(with(others, rule.rhs()), claim);
    }
    out.push_back({index, misapplied ? ErrorLabel::rule_misapplication : ErrorLabel::invalid_deduction});
  }
  return out;
}

std::vector<int> ResponseEvaluation::matched_ids() const {
  std::set<int> ids;
  for (const auto& c : candidates) {
    if (c.matched_id) ids.insert(*c.matched_id);
  }
  return {ids.begin(), ids.end()};
}

ResponseEvaluation evaluate_response(const RawResponse& response, const BenchmarkInstance& instance,
                                     const EvaluationOptions& options) {
  ResponseEvaluation out;
  out.instance_id = response.instance_id;
  out.model_name = response.model_name;
  out.completion_tokens = response.completion_tokens;
  auto seg = segment_response(response.text, options.client);
  out.unparseable = seg.unparseable;
  out.repaired = seg.repaired;
  out.empty_blocks = seg.empty_blocks;
  const Formalizer formalizer(instance, options.client);
  std::set<int> seen;
  for (auto& candidate : seg.solutions) {
    for (auto& step : candidate.steps) formalize_step(step, formalizer);
    CandidateReport report;
    report.solution_index = candidate.solution_index;
    report.verdict = verify_solution(candidate, instance);
    report.matched_id = match_ground_truth(report.verdict, instance);
    if (report.matched_id) report.duplicate = !seen.insert(*report.matched_id).second;
    out.candidates.push_back(std::move(report));
  }
  return out;
}

std::string render_solution(const BenchmarkInstance& instance, const Solution& solution, int index) {
  const SymbolMap map = instance.symbol_map();
  const std::set<int> members(solution.inference_ids.begin(), solution.inference_ids.end());
  std::map<int, std::string> premise_label;
  for (const auto& p : instance.premises) premise_label.emplace(p.node, p.label);
  std::map<int, int> node_step;
  std::string out = "### Solution " + std::to_string(index) + "\n";
  int t = 0;
  for (int id : instance.dag.topological_inferences()) {
    if (!members.count(id)) continue;
    const auto& inf = instance.dag.inference(id);
    std::string uses;
    for (int node : inf.premises) {
      if (!uses.empty()) uses += ", ";
      if (auto it = node_step.find(node); it != node_step.end()) uses += "Step " + std::to_string(it->second);
      else uses += premise_label.at(node);
    }
    node_step[inf.conclusion] = ++t;
    out += "Step " + std::to_string(t) + ": " + render_sentence(instance.concrete(inf.conclusion), map) + " [uses: " +
           uses + "]\n";
  }
  out += "Conclusion: " + instance.goal_text + "\n";
  return out;
}

std::string render_reference_response(const BenchmarkInstance& instance) {
  std::string out;
  const auto& sols = instance.ground_truth.solutions;
  for (std::size_t i = 0; i < sols.size(); ++i) {
    if (i) out += "\n";
    out += render_solution(instance, sols[i], static_cast<int>(i) + 1);
  }
  return out;
}

ordered_json evaluation_to_json(const ResponseEvaluation& e) {
  ordered_json candidates = ordered_json::array();
  for (const auto& c : e.candidates) {
    const auto& v = c.verdict;
    ordered_json errors = ordered_json::array();
    for (const auto& err : v.error_labels) {
      errors.push_back({{"step", err.step_index},
                        {"label", label_name(err.label)},
                        {"decidability", decidability(err.label) == Decidability::symbolic ? "symbolic" : "assisted"}});
    }
    candidates.push_back({{"solution_index", c.solution_index},
                          {"valid", v.valid()},
                          {"locally_valid", v.locally_valid},
                          {"globally_valid", v.globally_valid},
                          {"concluded_goal", v.concluded_goal},
                          {"used_premises", v.used_premises},
                          {"matched_support", v.matched_support ? ordered_json(v.matched_support->premise_ids) : ordered_json()},
                          {"matched_id", c.matched_id ? ordered_json(*c.matched_id) : ordered_json()},
                          {"duplicate", c.duplicate},
                          {"length", v.length},
                          {"errors", errors}});
  }
  return ordered_json{{"instance_id", e.instance_id},
                      {"model", e.model_name},
                      {"unparseable", e.unparseable},
                      {"repaired", e.repaired},
                      {"empty_blocks", e.empty_blocks},
                      {"completion_tokens", e.completion_tokens ? ordered_json(*e.completion_tokens) : ordered_json()},
                      {"support_rule", "minimized-citations"},
                      {"candidates", candidates}};
}

ResponseEvaluation evaluation_from_json(const nlohmann::json& j) {
  try {
    ResponseEvaluation e;
    e.instance_id = j.at("instance_id").get<std::string>();
    e.model_name = j.at("model").get<std::string>();
    e.unparseable = j.at("unparseable").get<bool>();
    e.repaired = j.value("repaired", false);
    e.empty_blocks = j.value("empty_blocks", 0);
    if (!j.at("completion_tokens").is_null()) e.completion_tokens = j.at("completion_tokens").get<long>();
    for (const auto& c : j.at("candidates")) {
      CandidateReport r;
      r.solution_index = c.at("solution_index").get<int>();
      auto& v = r.verdict;
      v.locally_valid = c.at("locally_valid").get<std::vector<bool>>();
      v.globally_valid = c.at("globally_valid").get<bool>();
      v.concluded_goal = c.at("concluded_goal").get<bool>();
      v.used_premises = c.at("used_premises").get<std::vector<int>>();
      if (!c.at("matched_support").is_null()) v.matched_support = MinimalSupport{c.at("matched_support").get<std::vector<int>>()};
      if (!c.at("matched_id").is_null()) r.matched_id = c.at("matched_id").get<int>();
      r.duplicate = c.at("duplicate").get<bool>();
      v.length = c.at("length").get<int>();
      for (const auto& err : c.at("errors")) {
        auto label = label_from_name(err.at("label").get<std::string>());
        if (!label) throw SchemaError("unknown error label " + err.at("label").dump());
        v.error_labels.push_back({err.at("step").get<int>(), *label});
      }
      e.candidates.push_back(std::move(r));
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("verdict record: ") + ex.what());
  }
}

}  // namespace pathlogic
