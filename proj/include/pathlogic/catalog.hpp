#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pathlogic {

/// Recorded in every instance so a dataset line names the catalog it used.
inline constexpr std::string_view kCatalogVersion = "entities-1.0";

struct EntityType {
  std::string name;
  std::string description;
  std::vector<std::string> example_constants;
};

/// The 32 abstract entity types domains draw their constants from.
const std::vector<EntityType>& entity_catalog();
const EntityType& entity_type(std::string_view name);

/// A constant usable as a predicate argument, with its surface name.
struct NamedConstant {
  std::string id;
  std::string display;
};

struct DomainProfile {
  std::string name;
  std::string background;
  /// Catalog entity type the constants belong to.
  std::string entity_type;
  std::vector<NamedConstant> constant_pool;

  /// Throws std::invalid_argument when a field is empty or malformed.
  void validate() const;
};

const std::vector<DomainProfile>& builtin_profiles();
const DomainProfile& builtin_profile(std::string_view name);

}  // namespace pathlogic
