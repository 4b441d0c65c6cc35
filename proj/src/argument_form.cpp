#include "pathlogic/argument_form.hpp"

namespace pathlogic {

namespace {

ArgumentForm build(FormKind kind, std::vector<std::string_view> premises, std::string_view conclusion) {
  ArgumentForm form{kind, {}, parse_formula(conclusion), {}};
  std::set<Atom> vars;
  for (auto text : premises) {
    form.premise_schemas.push_back(parse_formula(text));
    collect_atoms(form.premise_schemas.back(), vars);
  }
  for (const auto& v : vars) form.metavariables.push_back(v.predicate);
  return form;
}

bool match(const Formula& schema, const Formula& f, Bindings& bindings) {
  if (schema.is_atom()) {
    const auto& name = schema.atom().predicate;
    auto it = bindings.find(name);
    if (it == bindings.end()) {
      bindings.emplace(name, f);
      return true;
    }
    return it->second == f;
  }
  if (schema.kind() != f.kind()) return false;
  if (schema.kind() == Connective::negation) return match(schema.operand(), f.operand(), bindings);
  return match(schema.lhs(), f.lhs(), bindings) && match(schema.rhs(), f.rhs(), bindings);
}

}  // namespace

std::string_view form_code(FormKind kind) {
  switch (kind) {
    case FormKind::mp: return "MP";
    case FormKind::mt: return "MT";
    case FormKind::hs: return "HS";
    case FormKind::ds: return "DS";
    case FormKind::cd: return "CD";
    case FormKind::raa: return "RAA";
    case FormKind::de: return "DE";
  }
  return "?";
}

std::string_view form_name(FormKind kind) {
  switch (kind) {
    case FormKind::mp: return "Modus Ponens";
    case FormKind::mt: return "Modus Tollens";
    case FormKind::hs: return "Hypothetical Syllogism";
    case FormKind::ds: return "Disjunctive Syllogism";
    case FormKind::cd: return "Constructive Dilemma";
    case FormKind::raa: return "Reductio ad Absurdum";
    case FormKind::de: return "Disjunction Elimination";
  }
  return "?";
}

std::optional<FormKind> form_from_code(std::string_view code) {
  for (auto k : kAllForms) {
    if (form_code(k) == code) return k;
  }
  return std::nullopt;
}

const std::array<ArgumentForm, 7>& argument_forms() {
  static const std::array<ArgumentForm, 7> forms = {
      build(FormKind::mp, {"p -> q", "p"}, "q"),
      build(FormKind::mt, {"p -> q", "-q"}, "-p"),
      build(FormKind::hs, {"p -> q", "q -> r"}, "p -> r"),
      build(FormKind::ds, {"p | q", "-p"}, "q"),
      build(FormKind::cd, {"p -> q", "r -> s", "p | r"}, "q | s"),
      build(FormKind::raa, {"p -> q", "p -> -q"}, "-p"),
      build(FormKind::de, {"p | q", "p -> r", "q -> r"}, "r"),
  };
  return forms;
}

const ArgumentForm& argument_form(FormKind kind) { return argument_forms()[static_cast<std::size_t>(kind)]; }

FormInstance instantiate_form(const ArgumentForm& form, const Bindings& bindings) {
  auto lookup = [&](const Atom& a) -> Formula {
    auto it = bindings.find(a.predicate);
    if (it == bindings.end()) throw MissingBinding(a.predicate);
    return it->second;
  };
  FormInstance out{{}, substitute_atoms(form.conclusion_schema, lookup)};
  for (const auto& schema : form.premise_schemas) out.premises.push_back(substitute_atoms(schema, lookup));
  return out;
}

std::optional<Bindings> match_form(const ArgumentForm& form, const std::vector<Formula>& premises,
                                   const Formula& conclusion) {
  if (premises.size() != form.premise_schemas.size()) return std::nullopt;
  Bindings b;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (!match(form.premise_schemas[i], premises[i], b)) return std::nullopt;
  }
  if (!match(form.conclusion_schema, conclusion, b)) return std::nullopt;
  return b;
}

}  // namespace pathlogic
