#include "pathlogic/catalog.hpp"

#include <set>
#include <stdexcept>

#include "pathlogic/formula.hpp"

namespace pathlogic {

const std::vector<EntityType>& entity_catalog() {
  static const std::vector<EntityType> catalog{
      {"Person", "an individual human actor", {"emma", "liam", "noah"}},
      {"Job", "a role or occupation someone holds", {"nurse", "pilot", "auditor"}},
      {"Organization", "a company, agency or institution", {"acme", "northwind", "globex"}},
      {"Location", "a named place or site", {"harbor", "airport", "campus"}},
      {"Vehicle", "a car, truck, train or aircraft", {"truck_7", "ferry_2", "drone_4"}},
      {"Device", "a piece of electronic equipment", {"router_1", "scanner_3", "tablet_9"}},
      {"Document", "a written record or form", {"permit_12", "invoice_8", "report_5"}},
      {"Event", "a scheduled or observed occurrence", {"summit", "launch", "audit_week"}},
      {"Animal", "a domestic or wild animal", {"rex", "luna", "pip"}},
      {"Plant", "a cultivated or wild plant", {"fern", "willow", "basil"}},
      {"Disease", "a medical condition", {"flu", "measles", "blight"}},
      {"Medication", "a drug or treatment", {"drug_a", "drug_b", "serum_x"}},
      {"Building", "a physical structure", {"tower", "depot", "annex"}},
      {"Room", "a space inside a building", {"vault", "lab_3", "lobby"}},
      {"Account", "a financial or user account", {"acct_101", "acct_202", "acct_303"}},
      {"Project", "a planned piece of work", {"apollo", "hermes", "orion"}},
      {"Product", "a manufactured or sold item", {"widget", "gadget", "kit_5"}},
      {"Course", "a unit of study", {"algebra", "biology", "ethics"}},
      {"Team", "a group working together", {"red_team", "blue_team", "crew_9"}},
      {"Machine", "industrial or mechanical equipment", {"press_1", "lathe_2", "pump_6"}},
      {"Software", "a program or service", {"billing_app", "gateway", "scheduler"}},
      {"Dataset", "a collection of records", {"census", "ledger", "survey_3"}},
      {"Contract", "a binding agreement", {"lease_4", "nda_2", "charter"}},
      {"Shipment", "goods in transit", {"crate_11", "pallet_7", "parcel_3"}},
      {"Recipe", "instructions for preparing food", {"stew", "bread", "curry"}},
      {"Instrument", "a musical or measuring instrument", {"violin", "barometer", "cello"}},
      {"Planet", "a celestial body", {"mars", "venus", "kepler_b"}},
      {"Vessel", "a ship or boat", {"aurora", "seahawk", "tug_5"}},
      {"Crop", "a field crop", {"wheat", "maize", "barley"}},
      {"Sensor", "a measuring probe", {"probe_1", "gauge_4", "meter_8"}},
      {"Policy", "a rule set or regulation", {"policy_a", "policy_b", "statute_9"}},
      {"Artwork", "a painting, sculpture or performance piece", {"mural", "sonnet", "fresco"}},
  };
  return catalog;
}

const EntityType& entity_type(std::string_view name) {
  for (const auto& e : entity_catalog()) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("unknown entity type '" + std::string(name) + "'");
}

void DomainProfile::validate() const {
  if (name.empty()) throw std::invalid_argument("domain profile without a name");
  if (background.empty()) throw std::invalid_argument("domain profile '" + name + "' has no background");
  (void)pathlogic::entity_type(entity_type);
  if (constant_pool.empty()) throw std::invalid_argument("domain profile '" + name + "' has no constants");
  std::set<std::string> seen;
  for (const auto& c : constant_pool) {
    if (!is_identifier(c.id)) throw std::invalid_argument("constant '" + c.id + "' is not an identifier");
    if (!seen.insert(c.id).second) throw std::invalid_argument("constant '" + c.id + "' listed twice");
  }
}

const std::vector<DomainProfile>& builtin_profiles() {
  static const std::vector<DomainProfile> profiles{
      {"access control",
       "A research facility guards its vault with layered checks. Staff may be admitted through credentials, "
       "biometrics or an accompanying escort, and the security office keeps rules about who may pass each door.",
       "Person",
       {{"emma", "Emma"}, {"liam", "Liam"}, {"noah", "Noah"}}},
      {"clinical trials",
       "A hospital runs a drug trial. Eligibility, dosing and follow-up depend on screening results, consent "
       "forms and the observations recorded by the study team.",
       "Person",
       {{"ava", "Ava"}, {"omar", "Omar"}, {"mia", "Mia"}}},
      {"logistics",
       "A freight company routes shipments through customs, warehouses and carriers. Handling rules depend on "
       "paperwork, inspections and the state of each consignment.",
       "Shipment",
       {{"crate_11", "crate 11"}, {"pallet_7", "pallet 7"}, {"parcel_3", "parcel 3"}}},
      {"agriculture",
       "An agronomy station tracks its fields through the season. Irrigation, treatment and harvest decisions "
       "follow from soil tests, weather reports and crop inspections.",
       "Crop",
       {{"wheat", "the wheat"}, {"maize", "the maize"}, {"barley", "the barley"}}},
      {"software operations",
       "An operations team manages a fleet of services. Deployments, rollbacks and alerts are governed by test "
       "results, approvals and monitoring signals.",
       "Software",
       {{"billing_app", "the billing app"}, {"gateway", "the gateway"}, {"scheduler", "the scheduler"}}},
      {"maritime",
       "A port authority clears vessels for departure. Clearance depends on inspections, crew certificates, "
       "weather and cargo declarations.",
       "Vessel",
       {{"aurora", "the Aurora"}, {"seahawk", "the Seahawk"}, {"tug_5", "tug 5"}}},
  };
  return profiles;
}

const DomainProfile& builtin_profile(std::string_view name) {
  for (const auto& p : builtin_profiles()) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("unknown domain profile '" + std::string(name) + "'");
}

}  // namespace pathlogic
