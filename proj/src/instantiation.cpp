#include "pathlogic/instantiation.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>
#include <set>
#include <sstream>

namespace pathlogic {

using nlohmann::json;

std::string casefold(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void SymbolMap::add(Atom abstract, Atom concrete, std::string gloss) {
  if (gloss.empty()) throw NamingCollision("empty gloss for " + to_string(abstract));
  if (by_abstract_.count(abstract)) throw NamingCollision("atom " + to_string(abstract) + " mapped twice");
  if (by_concrete_.count(concrete)) throw NamingCollision("name " + to_string(concrete) + " used for two atoms");
  const std::string key = casefold(gloss);
  if (by_gloss_.count(key)) throw NamingCollision("gloss \"" + gloss + "\" used for two atoms");
  const std::size_t index = entries_.size();
  by_abstract_.emplace(abstract, index);
  by_concrete_.emplace(concrete, index);
  by_gloss_.emplace(key, index);
  entries_.push_back(SymbolEntry{std::move(abstract), std::move(concrete), std::move(gloss)});
}

const SymbolEntry* SymbolMap::find(const Atom& abstract) const {
  auto it = by_abstract_.find(abstract);
  return it == by_abstract_.end() ? nullptr : &entries_[it->second];
}

const SymbolEntry* SymbolMap::find_concrete(const Atom& concrete) const {
  auto it = by_concrete_.find(concrete);
  return it == by_concrete_.end() ? nullptr : &entries_[it->second];
}

Formula SymbolMap::apply(const Formula& abstract_formula) const {
  return substitute_atoms(abstract_formula, [this](const Atom& a) {
    const SymbolEntry* e = find(a);
    if (!e) throw std::out_of_range("atom " + to_string(a) + " has no name");
    return atom(e->concrete);
  });
}

std::vector<Atom> dag_atoms(const LogicDag& dag) {
  std::set<Atom> atoms;
  for (std::size_t i = 1; i <= dag.formula_count(); ++i) collect_atoms(dag.formula(static_cast<int>(i)), atoms);
  std::vector<Atom> out(atoms.begin(), atoms.end());
  auto minted_index = [](const Atom& a) -> long {
    if (a.predicate.size() < 2 || a.predicate[0] != 'a' || !a.args.empty()) return -1;
    for (std::size_t i = 1; i < a.predicate.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(a.predicate[i]))) return -1;
    }
    return std::stol(a.predicate.substr(1));
  };
  std::stable_sort(out.begin(), out.end(), [&](const Atom& x, const Atom& y) {
    const long ix = minted_index(x), iy = minted_index(y);
    if (ix != iy) return ix < iy;
    return x < y;
  });
  return out;
}

bool structure_preserved(const Formula& from, const Formula& to, const SymbolMap& map) {
  try {
    return map.apply(from) == to;
  } catch (const std::out_of_range&) {
    return false;
  }
}

SymbolMap fallback_symbol_map(const LogicDag& dag, const DomainProfile& profile, std::uint64_t seed) {
  profile.validate();
  const std::string type = casefold(profile.entity_type);
  const auto pool = static_cast<std::uint64_t>(profile.constant_pool.size());
  SymbolMap map;
  std::uint64_t k = 0;
  for (const auto& a : dag_atoms(dag)) {
    ++k;
    Rng rng(derive_seed(seed, k));
    const std::uint64_t j = rng.below(pool) + 1;
    const std::string ks = std::to_string(k);
    const std::string js = std::to_string(j);
    map.add(a, make_atom(type + "_prop_" + ks, {type + "_" + js}), type + " " + js + " has property " + ks);
  }
  return map;
}

namespace {

bool needs_parens(const Formula& f) {
  return !(f.is_atom() || (f.kind() == Connective::negation && f.operand().is_atom()));
}

std::string operand_text(const Formula& f, const SymbolMap& map) {
  std::string inner = render_clause(f, map);
  return needs_parens(f) ? "(" + inner + ")" : inner;
}

std::string strip_period(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::optional<json> extract_json(const std::string& text) {
  const auto open = text.find('{');
  const auto close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open) return std::nullopt;
  json parsed = json::parse(text.substr(open, close - open + 1), nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
  return parsed;
}

std::string formula_listing(const LogicDag& dag) {
  std::ostringstream out;
  int k = 0;
  for (int id : dag.leaves()) out << "P" << ++k << ": " << format_formula(dag.formula(id)) << "\n";
  out << "Goal: " << format_formula(dag.goal()) << "\n";
  return out.str();
}

// Reads a naming response; returns an error description when it is unusable.
std::optional<std::string> read_naming(const std::string& text, const std::vector<Atom>& atoms, SymbolMap& out) {
  auto parsed = extract_json(text);
  if (!parsed) return "response is not a JSON object";
  SymbolMap map;
  try {
    for (const auto& a : atoms) {
      const std::string key = to_string(a);
      if (!parsed->contains(key)) return "no entry for " + key;
      const json& e = (*parsed)[key];
      if (!e.is_object() || !e.contains("predicate") || !e.contains("gloss")) return "entry for " + key + " is incomplete";
      std::vector<std::string> args;
      if (e.contains("args")) args = e["args"].get<std::vector<std::string>>();
      map.add(a, make_atom(e["predicate"].get<std::string>(), std::move(args)), e["gloss"].get<std::string>());
    }
  } catch (const std::exception& e) {
    return std::string("invalid naming: ") + e.what();
  }
  for (const auto& entry : map.entries()) {
    if (entry.gloss.find_first_of("()") != std::string::npos) return "gloss contains parentheses: " + entry.gloss;
  }
  out = std::move(map);
  return std::nullopt;
}

}  // namespace

SymbolMap assign_semantics(const LogicDag& dag, const DomainProfile& profile, const InstantiationOptions& options) {
  profile.validate();
  if (!options.client) return fallback_symbol_map(dag, profile, options.seed);

  const auto atoms = dag_atoms(dag);
  std::ostringstream constants;
  for (const auto& c : profile.constant_pool) constants << c.id << " (" << c.display << ") ";
  std::ostringstream atom_list;
  for (const auto& a : atoms) atom_list << to_string(a) << " ";

  TextRequest request;
  request.system_text =
      "You turn abstract propositional symbols into domain-specific Prover9 predicates. Reply with a single JSON "
      "object and nothing else.";
  request.correlation_id = "naming-" + std::to_string(options.seed);
  request.max_tokens = 4096;
  std::string feedback;
  try {
    for (int round = 0; round <= options.max_reprompts; ++round) {
      std::ostringstream user;
      user << "Domain: " << profile.name << "\nBackground: " << profile.background
           << "\nEntity type: " << profile.entity_type << "\nConstants: " << constants.str()
           << "\nAbstract formulas:\n" << formula_listing(dag) << "\nAtoms to name: " << atom_list.str()
           << "\n\nReturn a JSON object with one key per atom. Each value is {\"predicate\": lowercase identifier, "
              "\"args\": [constants], \"gloss\": short English clause stating the atom}. Every predicate/argument "
              "combination and every gloss must be distinct; glosses must not contain parentheses.";
      if (!feedback.empty()) user << "\nYour previous answer was rejected: " << feedback;
      request.user_text = user.str();
      const auto response = options.client->complete(request);
      SymbolMap map;
      auto problem = read_naming(response.text, atoms, map);
      if (!problem) return map;
      feedback = *problem;
    }
  } catch (const ClientFailure& e) {
    if (!options.fallback_on_failure) throw InstantiationError(e.what());
    return fallback_symbol_map(dag, profile, options.seed);
  }
  if (!options.fallback_on_failure) throw InstantiationError("naming rejected after retries: " + feedback);
  return fallback_symbol_map(dag, profile, options.seed);
}

std::string render_clause(const Formula& f, const SymbolMap& map) {
  switch (f.kind()) {
    case Connective::atom: {
      const SymbolEntry* e = map.find(f.atom());
      if (!e) e = map.find_concrete(f.atom());
      if (!e) throw std::out_of_range("no gloss for atom " + to_string(f.atom()));
      return e->gloss;
    }
    case Connective::negation:
      return "it is not the case that " + operand_text(f.operand(), map);
    case Connective::implication:
      return "if " + operand_text(f.lhs(), map) + ", then " + operand_text(f.rhs(), map);
    case Connective::disjunction:
      return "either " + operand_text(f.lhs(), map) + " or " + operand_text(f.rhs(), map);
    case Connective::conjunction:
      return "both " + operand_text(f.lhs(), map) + " and " + operand_text(f.rhs(), map);
  }
  return {};
}

std::string render_sentence(const Formula& f, const SymbolMap& map) {
  std::string s = render_clause(f, map);
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s + ".";
}

namespace {

VerbalizedInstance fallback_verbalization(const LogicDag& dag, const SymbolMap& map, const DomainProfile& profile) {
  VerbalizedInstance out;
  out.mode = "fallback";
  out.context = profile.background;
  for (int id : dag.leaves()) {
    out.premise_sentences.push_back(render_sentence(dag.formula(id), map));
    out.prover9_forms.push_back(format_formula(map.apply(dag.formula(id))));
  }
  out.goal_sentence = render_sentence(dag.goal(), map);
  out.prover9_forms.push_back(format_formula(map.apply(dag.goal())));
  return out;
}

}  // namespace

VerbalizedInstance verbalize(const LogicDag& dag, const SymbolMap& map, const DomainProfile& profile,
                             const InstantiationOptions& options) {
  profile.validate();
  VerbalizedInstance base = fallback_verbalization(dag, map, profile);
  if (!options.client) return base;

  std::ostringstream listing;
  for (std::size_t i = 0; i < base.premise_sentences.size(); ++i) {
    listing << i + 1 << ". " << base.prover9_forms[i] << "  |  " << base.premise_sentences[i] << "\n";
  }
  TextRequest request;
  request.system_text =
      "You rewrite formal premises as a short, coherent scenario without adding or dropping any logical content. "
      "Reply with a single JSON object and nothing else.";
  request.correlation_id = "verbalize-" + std::to_string(options.seed);
  request.max_tokens = 8192;
  std::string feedback;
  try {
    for (int round = 0; round <= options.max_reprompts; ++round) {
      std::ostringstream user;
      user << "Domain: " << profile.name << "\nBackground: " << profile.background << "\nPremises:\n"
           << listing.str() << "Goal: " << base.prover9_forms.back() << "  |  " << base.goal_sentence
           << "\n\nReturn {\"context\": one paragraph, \"premises\": [exactly " << base.premise_sentences.size()
           << " sentences in the given order], \"goal\": one sentence}.";
      if (!feedback.empty()) user << "\nYour previous answer was rejected: " << feedback;
      request.user_text = user.str();
      const auto response = options.client->complete(request);
      auto parsed = extract_json(response.text);
      if (!parsed) {
        feedback = "response is not a JSON object";
        continue;
      }
      try {
        auto premises = (*parsed).at("premises").get<std::vector<std::string>>();
        auto context = (*parsed).at("context").get<std::string>();
        auto goal = (*parsed).at("goal").get<std::string>();
        if (premises.size() != base.premise_sentences.size()) {
          feedback = "expected " + std::to_string(base.premise_sentences.size()) + " premise sentences, got " +
                     std::to_string(premises.size());
          continue;
        }
        if (context.empty() || goal.empty() ||
            std::any_of(premises.begin(), premises.end(), [](const std::string& s) { return s.empty(); })) {
          feedback = "empty sentence";
          continue;
        }
        base.context = std::move(context);
        base.premise_sentences = std::move(premises);
        base.goal_sentence = std::move(goal);
        base.mode = "client";
        return base;
      } catch (const json::exception& e) {
        feedback = e.what();
      }
    }
  } catch (const ClientFailure& e) {
    if (!options.fallback_on_failure) throw InstantiationError(e.what());
    return base;
  }
  if (!options.fallback_on_failure) throw InstantiationError("verbalization rejected after retries: " + feedback);
  return base;
}

SentenceReader::SentenceReader(const std::vector<std::pair<Atom, std::string>>& glossary) {
  for (const auto& [a, gloss] : glossary) atoms_.emplace(casefold(strip_period(gloss)), a);
}

SentenceReader::SentenceReader(const SymbolMap& map) {
  for (const auto& e : map.entries()) atoms_.emplace(casefold(e.gloss), e.concrete);
}

std::optional<Formula> SentenceReader::read(std::string_view sentence) const {
  const std::string text = casefold(strip_period(sentence));
  if (text.empty()) return std::nullopt;
  return parse(text);
}

namespace {

constexpr std::string_view kNot = "it is not the case that ";

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<Formula> SentenceReader::parse(std::string_view s) const {
  s = trim(s);
  if (auto it = atoms_.find(s); it != atoms_.end()) return atom(it->second);
  if (starts_with(s, kNot)) {
    if (auto inner = operand(s.substr(kNot.size()))) return neg(*inner);
    return std::nullopt;
  }
  struct Binary {
    std::string_view prefix;
    std::string_view separator;
    Connective kind;
  };
  static constexpr Binary kBinary[] = {{"if ", ", then ", Connective::implication},
                                       {"either ", " or ", Connective::disjunction},
                                       {"both ", " and ", Connective::conjunction}};
  for (const auto& b : kBinary) {
    if (!starts_with(s, b.prefix)) continue;
    const std::string_view body = s.substr(b.prefix.size());
    for (auto pos = body.find(b.separator); pos != std::string_view::npos; pos = body.find(b.separator, pos + 1)) {
      auto lhs = operand(body.substr(0, pos));
      if (!lhs) continue;
      auto rhs = operand(body.substr(pos + b.separator.size()));
      if (!rhs) continue;
      switch (b.kind) {
        case Connective::implication: return implies(*lhs, *rhs);
        case Connective::disjunction: return lor(*lhs, *rhs);
        default: return land(*lhs, *rhs);
      }
    }
  }
  return std::nullopt;
}

std::optional<Formula> SentenceReader::operand(std::string_view s) const {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool wraps = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if (depth == 0 && i + 1 < s.size()) {
        wraps = false;
        break;
      }
    }
    if (wraps) return parse(s.substr(1, s.size() - 2));
  }
  auto f = parse(s);
  if (f && (f->is_atom() || (f->kind() == Connective::negation && f->operand().is_atom()))) return f;
  return std::nullopt;
}

}  // namespace pathlogic
