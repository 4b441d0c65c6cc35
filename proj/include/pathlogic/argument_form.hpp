#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathlogic/formula.hpp"

namespace pathlogic {

enum class FormKind { mp, mt, hs, ds, cd, raa, de };

inline constexpr std::array<FormKind, 7> kAllForms = {FormKind::mp, FormKind::mt, FormKind::hs, FormKind::ds,
                                                      FormKind::cd, FormKind::raa, FormKind::de};

/// "MP", "MT", ...
std::string_view form_code(FormKind kind);
std::string_view form_name(FormKind kind);
std::optional<FormKind> form_from_code(std::string_view code);

/// A schema over the metavariables p, q, r, s. Schematic formulas reuse the
/// object-level Formula type with metavariables as zero-argument atoms.
struct ArgumentForm {
  FormKind kind;
  std::vector<Formula> premise_schemas;
  Formula conclusion_schema;
  std::vector<std::string> metavariables;
};

/// The seven basic forms, in FormKind order.
const std::array<ArgumentForm, 7>& argument_forms();
const ArgumentForm& argument_form(FormKind kind);

using Bindings = std::map<std::string, Formula>;

class MissingBinding : public std::invalid_argument {
 public:
  explicit MissingBinding(const std::string& metavariable)
      : std::invalid_argument("no binding for metavariable '" + metavariable + "'"), metavariable_(metavariable) {}
  const std::string& metavariable() const { return metavariable_; }

 private:
  std::string metavariable_;
};

struct FormInstance {
  std::vector<Formula> premises;
  Formula conclusion;
};

FormInstance instantiate_form(const ArgumentForm& form, const Bindings& bindings);

/// Tries to read `premises ⊢ conclusion` as an instance of `form`, with the
/// premises in schema order. Returns the bindings on success.
std::optional<Bindings> match_form(const ArgumentForm& form, const std::vector<Formula>& premises,
                                   const Formula& conclusion);

}  // namespace pathlogic
