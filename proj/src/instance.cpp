#include "pathlogic/instance.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace pathlogic {

using nlohmann::json;

SymbolMap BenchmarkInstance::symbol_map() const {
  SymbolMap map;
  for (const auto& v : vocabulary) map.add(v.abstract, v.atom, v.gloss);
  return map;
}

Formula BenchmarkInstance::concrete(int node_id) const {
  const Formula& f = dag.formula(node_id);
  return substitute_atoms(f, [this](const Atom& a) {
    for (const auto& v : vocabulary) {
      if (v.abstract == a) return atom(v.atom);
    }
    throw std::out_of_range("atom " + to_string(a) + " missing from the instance vocabulary");
  });
}

PremiseSet BenchmarkInstance::premise_set() const {
  std::vector<Formula> formulas;
  for (const auto& p : premises) formulas.push_back(p.formula);
  return PremiseSet(std::move(formulas));
}

const PremiseRecord* BenchmarkInstance::find_label(std::string_view label) const {
  for (const auto& p : premises) {
    if (p.label == label) return &p;
  }
  return nullptr;
}

std::string premise_label_kind(const Formula& f) { return f.is_literal() ? "Fact" : "Rule"; }

namespace {

std::vector<PremiseRecord> label_premises(const LogicDag& dag, const std::vector<Formula>& formulas,
                                          const std::vector<std::string>& texts) {
  std::vector<PremiseRecord> out;
  int facts = 0, rules = 0;
  const auto leaves = dag.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const std::string kind = premise_label_kind(formulas[i]);
    const int n = kind == "Fact" ? ++facts : ++rules;
    out.push_back(PremiseRecord{static_cast<int>(i) + 1, kind + " " + std::to_string(n), formulas[i], texts[i], leaves[i]});
  }
  return out;
}

}  // namespace

BenchmarkInstance build_instance(const GeneratedInstance& generated, const std::string& instance_id,
                                 const DomainProfile& profile, const InstantiationOptions& options) {
  const LogicDag& dag = generated.dag;
  SymbolMap map = assign_semantics(dag, profile, options);
  VerbalizedInstance words = verbalize(dag, map, profile, options);

  BenchmarkInstance inst(map.apply(dag.goal()));
  inst.instance_id = instance_id;
  inst.tier = dag.config.tier;
  inst.domain = profile.name;
  inst.context = words.context;
  inst.goal_text = words.goal_sentence;
  std::vector<Formula> formulas;
  for (int id : dag.leaves()) formulas.push_back(map.apply(dag.formula(id)));
  inst.premises = label_premises(dag, formulas, words.premise_sentences);
  for (const auto& e : map.entries()) inst.vocabulary.push_back(VocabularyEntry{e.abstract, e.concrete, e.gloss});
  inst.dag = dag;
  inst.ground_truth = generated.ground_truth;
  inst.provenance = Provenance{dag.config.seed, config_hash(dag.config), std::string(kCatalogVersion),
                               std::string(kGeneratorVersion), words.mode};
  return inst;
}

BenchmarkInstance instance_from_dag(const LogicDag& dag, const std::string& instance_id, Tier tier,
                                    const std::vector<std::pair<Atom, std::string>>& glosses,
                                    const std::string& context) {
  SymbolMap map;
  std::set<Atom> atoms;
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) collect_atoms(dag.formula(static_cast<int>(i)), atoms);
  for (const auto& a : atoms) {
    std::string gloss = to_string(a);
    for (const auto& [g_atom, text] : glosses) {
      if (g_atom == a) gloss = text;
    }
    map.add(a, a, gloss);
  }
  BenchmarkInstance inst(dag.goal());
  inst.instance_id = instance_id;
  inst.tier = tier;
  inst.domain = "fixture";
  inst.context = context;
  inst.goal_text = render_sentence(dag.goal(), map);
  std::vector<Formula> formulas;
  std::vector<std::string> texts;
  for (int id : dag.leaves()) {
    formulas.push_back(dag.formula(id));
    texts.push_back(render_sentence(dag.formula(id), map));
  }
  inst.premises = label_premises(dag, formulas, texts);
  for (const auto& e : map.entries()) inst.vocabulary.push_back(VocabularyEntry{e.abstract, e.concrete, e.gloss});
  inst.dag = dag;
  inst.ground_truth = derive_ground_truth(dag);
  inst.provenance = Provenance{dag.seed, config_hash(dag.config), std::string(kCatalogVersion),
                               std::string(kGeneratorVersion), "fixture"};
  return inst;
}

ordered_json config_to_json(const GenerationConfig& c) {
  ordered_json weights = ordered_json::object();
  for (FormKind k : kAllForms) weights[std::string(form_code(k))] = c.form_weights[static_cast<std::size_t>(k)];
  return ordered_json{{"seed", c.seed},
                      {"tier", tier_name(c.tier)},
                      {"depth_range", {c.depth_min, c.depth_max}},
                      {"branch_depth_range", {c.branch_depth_min, c.branch_depth_max}},
                      {"form_weights", weights},
                      {"max_branch_attempts", c.max_branch_attempts},
                      {"share_probability", c.share_probability},
                      {"max_formula_size", c.max_formula_size},
                      {"oracle_premise_limit", c.oracle_premise_limit},
                      {"instance_attempts", c.instance_attempts},
                      {"max_reuse_ratio", c.max_reuse_ratio},
                      {"large_max_paths", c.large_max_paths},
                      {"max_proof_subgraphs", c.max_proof_subgraphs}};
}

GenerationConfig config_from_json(const json& j, GenerationConfig c) {
  if (!j.is_object()) throw std::invalid_argument("generation config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "tier") {
        auto t = tier_from_name(value.get<std::string>());
        if (!t) throw std::invalid_argument("unknown tier '" + value.get<std::string>() + "'");
        c.tier = *t;
      } else if (key == "depth_range") {
        auto r = value.get<std::vector<int>>();
        if (r.size() != 2) throw std::invalid_argument("depth_range needs two bounds");
        c.depth_min = r[0];
        c.depth_max = r[1];
      } else if (key == "branch_depth_range") {
        auto r = value.get<std::vector<int>>();
        if (r.size() != 2) throw std::invalid_argument("branch_depth_range needs two bounds");
        c.branch_depth_min = r[0];
        c.branch_depth_max = r[1];
      } else if (key == "form_weights") {
        for (const auto& [code, w] : value.items()) {
          auto k = form_from_code(code);
          if (!k) throw std::invalid_argument("unknown argument form '" + code + "'");
          c.form_weights[static_cast<std::size_t>(*k)] = w.get<double>();
        }
      } else if (key == "max_branch_attempts") c.max_branch_attempts = value.get<int>();
      else if (key == "share_probability") c.share_probability = value.get<double>();
      else if (key == "max_formula_size") c.max_formula_size = value.get<int>();
      else if (key == "oracle_premise_limit") c.oracle_premise_limit = value.get<std::size_t>();
      else if (key == "instance_attempts") c.instance_attempts = value.get<int>();
      else if (key == "max_reuse_ratio") c.max_reuse_ratio = value.get<double>();
      else if (key == "large_max_paths") c.large_max_paths = value.get<int>();
      else if (key == "max_proof_subgraphs") c.max_proof_subgraphs = value.get<std::size_t>();
      else throw std::invalid_argument("unknown generation setting '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("generation config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_hash(const GenerationConfig& config) {
  auto j = config_to_json(config);
  j.erase("seed");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

ordered_json atom_json(const Atom& a) { return to_string(a); }

Atom atom_from(const json& j) {
  Formula f = parse_formula(j.get<std::string>());
  if (!f.is_atom()) throw SchemaError("expected an atom, got " + j.get<std::string>());
  return f.atom();
}

Formula formula_from(const json& j) { return parse_formula(j.get<std::string>()); }

}  // namespace

ordered_json dag_to_json(const LogicDag& dag) {
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) {
    nodes.push_back({{"id", i}, {"formula", format_formula(dag.formula(static_cast<int>(i)))}});
  }
  ordered_json inferences = ordered_json::array();
  for (const auto& inf : dag.inferences()) {
    ordered_json minted = ordered_json::array();
    for (const auto& a : inf.minted) minted.push_back(atom_json(a));
    inferences.push_back({{"id", inf.id},
                          {"form", form_code(inf.form)},
                          {"premises", inf.premises},
                          {"conclusion", inf.conclusion},
                          {"minted", minted}});
  }
  ordered_json shares = ordered_json::array();
  for (const auto& s : dag.shares()) shares.push_back({{"inference", s.inference_id}, {"node", s.node_id}});
  return ordered_json{{"goal_id", dag.goal_id()},
                      {"leaves", dag.leaves()},
                      {"nodes", nodes},
                      {"inferences", inferences},
                      {"shares", shares}};
}

LogicDag dag_from_json(const json& j) {
  LogicDag dag;
  const auto& nodes = j.at("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].at("id").get<std::size_t>() != i + 1) throw SchemaError("DAG node ids must be dense from 1");
    dag.add_formula(formula_from(nodes[i].at("formula")));
  }
  for (const auto& inf : j.at("inferences")) {
    auto form = form_from_code(inf.at("form").get<std::string>());
    if (!form) throw SchemaError("unknown argument form " + inf.at("form").dump());
    std::vector<Atom> minted;
    for (const auto& a : inf.at("minted")) minted.push_back(atom_from(a));
    const int id = dag.add_inference(*form, inf.at("premises").get<std::vector<int>>(), inf.at("conclusion").get<int>(),
                                     std::move(minted));
    if (id != inf.at("id").get<int>()) throw SchemaError("inference ids must be dense from 1");
  }
  for (const auto& s : j.at("shares")) dag.record_share(ShareEvent{s.at("inference").get<int>(), s.at("node").get<int>()});
  dag.set_goal(j.at("goal_id").get<int>());
  dag.set_leaf_order(j.at("leaves").get<std::vector<int>>());
  return dag;
}

ordered_json ground_truth_to_json(const GroundTruth& gt) {
  ordered_json solutions = ordered_json::array();
  for (std::size_t i = 0; i < gt.solutions.size(); ++i) {
    const auto& s = gt.solutions[i];
    solutions.push_back({{"id", i + 1},
                         {"premises", s.support.premise_ids},
                         {"inferences", s.inference_ids},
                         {"length", s.length}});
  }
  return ordered_json{{"solutions", solutions},
                      {"families", gt.families},
                      {"family_rule", kFamilyRule},
                      {"stats",
                       {{"depth", gt.stats.depth}, {"n_paths", gt.stats.n_paths}, {"reuse_ratio", gt.stats.reuse_ratio}}}};
}

GroundTruth ground_truth_from_json(const json& j) {
  GroundTruth gt;
  for (const auto& s : j.at("solutions")) {
    gt.solutions.push_back(Solution{MinimalSupport{s.at("premises").get<std::vector<int>>()},
                                    s.at("inferences").get<std::vector<int>>(), s.at("length").get<int>()});
  }
  gt.families = j.at("families").get<std::vector<std::vector<int>>>();
  const auto& st = j.at("stats");
  gt.stats = DagStats{st.at("depth").get<double>(), st.at("n_paths").get<int>(), st.at("reuse_ratio").get<double>()};
  return gt;
}

ordered_json instance_to_json(const BenchmarkInstance& inst) {
  ordered_json premises = ordered_json::array();
  for (const auto& p : inst.premises) {
    premises.push_back({{"id", p.id},
                        {"label", p.label},
                        {"formula", format_formula(p.formula)},
                        {"text", p.text},
                        {"node", p.node}});
  }
  ordered_json vocabulary = ordered_json::array();
  for (const auto& v : inst.vocabulary) {
    vocabulary.push_back({{"abstract", atom_json(v.abstract)}, {"atom", atom_json(v.atom)}, {"gloss", v.gloss}});
  }
  return ordered_json{{"schema", kInstanceSchema},
                      {"instance_id", inst.instance_id},
                      {"tier", tier_name(inst.tier)},
                      {"domain", inst.domain},
                      {"context", inst.context},
                      {"premises", premises},
                      {"goal", {{"formula", format_formula(inst.goal)}, {"text", inst.goal_text}}},
                      {"vocabulary", vocabulary},
                      {"dag", dag_to_json(inst.dag)},
                      {"ground_truth", ground_truth_to_json(inst.ground_truth)},
                      {"provenance",
                       {{"seed", inst.provenance.seed},
                        {"config_hash", inst.provenance.config_hash},
                        {"catalog_version", inst.provenance.catalog_version},
                        {"generator_version", inst.provenance.generator_version},
                        {"instantiation", inst.provenance.instantiation_mode}}}};
}

BenchmarkInstance instance_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kInstanceSchema) {
      throw SchemaError("unsupported schema " + j.at("schema").dump());
    }
    BenchmarkInstance inst(formula_from(j.at("goal").at("formula")));
    inst.instance_id = j.at("instance_id").get<std::string>();
    auto tier = tier_from_name(j.at("tier").get<std::string>());
    if (!tier) throw SchemaError("unknown tier " + j.at("tier").dump());
    inst.tier = *tier;
    inst.domain = j.at("domain").get<std::string>();
    inst.context = j.at("context").get<std::string>();
    inst.goal_text = j.at("goal").at("text").get<std::string>();
    for (const auto& p : j.at("premises")) {
      inst.premises.push_back(PremiseRecord{p.at("id").get<int>(), p.at("label").get<std::string>(),
                                            formula_from(p.at("formula")), p.at("text").get<std::string>(),
                                            p.at("node").get<int>()});
    }
    for (std::size_t i = 0; i < inst.premises.size(); ++i) {
      if (inst.premises[i].id != static_cast<int>(i) + 1) throw SchemaError("premise ids must be dense from 1");
    }
    for (const auto& v : j.at("vocabulary")) {
      inst.vocabulary.push_back(
          VocabularyEntry{atom_from(v.at("abstract")), atom_from(v.at("atom")), v.at("gloss").get<std::string>()});
    }
    inst.dag = dag_from_json(j.at("dag"));
    inst.ground_truth = ground_truth_from_json(j.at("ground_truth"));
    const auto& prov = j.at("provenance");
    inst.provenance = Provenance{prov.at("seed").get<std::uint64_t>(), prov.at("config_hash").get<std::string>(),
                                 prov.at("catalog_version").get<std::string>(),
                                 prov.at("generator_version").get<std::string>(),
                                 prov.at("instantiation").get<std::string>()};
    inst.dag.seed = inst.provenance.seed;
    inst.dag.config.tier = inst.tier;
    return inst;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("instance record: ") + e.what());
  } catch (const ParseError& e) {
    throw SchemaError(std::string("instance record formula: ") + e.what());
  } catch (const std::logic_error& e) {
    throw SchemaError(std::string("instance record: ") + e.what());
  }
}

std::string to_jsonl(const std::vector<BenchmarkInstance>& instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += instance_to_json(inst).dump();
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const std::vector<BenchmarkInstance>& instances) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_jsonl(instances);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::vector<BenchmarkInstance> parse_dataset(std::string_view text) {
  std::vector<BenchmarkInstance> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw SchemaError("line " + std::to_string(line_no) + ": not valid JSON");
    try {
      out.push_back(instance_from_json(j));
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<BenchmarkInstance> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str());
}

}  // namespace pathlogic
