#pragma once

// Hand-encoded scenarios. Premise ids follow the leaf order given to
// set_leaf_order, so "P3" below is premise id 3.

#include <string>
#include <utility>
#include <vector>

#include "pathlogic/instance.hpp"

namespace fixtures {

using namespace pathlogic;

inline Formula f(const char* text) { return parse_formula(text); }

inline Atom a(const char* text) { return parse_formula(text).atom(); }

// Vault access: PIN route {P1,P4,P6}, fingerprint route {P2,P5,P6}, escort
// route {P3,P7}. `invitation` adds P8 invited(emma) and P9 invited -> enter,
// a fourth route in a family of its own.
inline LogicDag vault_dag(bool invitation = false) {
  LogicDag d;
  const int pin = d.add_formula(f("pin(emma)"));
  const int scan = d.add_formula(f("fingerprint(emma)"));
  const int escort = d.add_formula(f("escort(emma)"));
  const int p4 = d.add_formula(f("pin(emma) -> verified(emma)"));
  const int p5 = d.add_formula(f("fingerprint(emma) -> verified(emma)"));
  const int p6 = d.add_formula(f("verified(emma) -> enter(emma)"));
  const int p7 = d.add_formula(f("escort(emma) -> enter(emma)"));
  const int verified = d.add_formula(f("verified(emma)"));
  const int enter = d.add_formula(f("enter(emma)"));
  d.add_inference(FormKind::mp, {p4, pin}, verified, {a("pin(emma)")});
  d.add_inference(FormKind::mp, {p5, scan}, verified, {a("fingerprint(emma)")});
  d.add_inference(FormKind::mp, {p6, verified}, enter, {a("verified(emma)")});
  d.add_inference(FormKind::mp, {p7, escort}, enter, {a("escort(emma)")});
  std::vector<int> order{pin, scan, escort, p4, p5, p6, p7};
  if (invitation) {
    const int invited = d.add_formula(f("invited(emma)"));
    const int p9 = d.add_formula(f("invited(emma) -> enter(emma)"));
    d.add_inference(FormKind::mp, {p9, invited}, enter, {a("invited(emma)")});
    order.push_back(invited);
    order.push_back(p9);
  }
  d.set_goal(enter);
  d.set_leaf_order(order);
  return d;
}

inline const std::vector<std::pair<Atom, std::string>>& vault_glosses() {
  static const std::vector<std::pair<Atom, std::string>> g{
      {a("pin(emma)"), "Emma enters a valid PIN"},
      {a("fingerprint(emma)"), "Emma passes the fingerprint scan"},
      {a("escort(emma)"), "Emma has a security escort"},
      {a("verified(emma)"), "Emma is verified"},
      {a("enter(emma)"), "Emma can enter the Vault"},
      {a("invited(emma)"), "Emma holds a visitor invitation"},
  };
  return g;
}

inline BenchmarkInstance vault_instance(bool invitation = false) {
  return instance_from_dag(vault_dag(invitation), invitation ? "vault-invitation" : "vault", Tier::small,
                           vault_glosses(), "A research facility guards its vault.");
}

// Destructive dilemma from MT, MT and CD: premises p->q, r->s, -q | -s.
// The two MT steps derive contrapositives.
inline LogicDag dd_dag() {
  LogicDag d;
  const int p1 = d.add_formula(f("p -> q"));
  const int p2 = d.add_formula(f("r -> s"));
  const int p3 = d.add_formula(f("-q | -s"));
  const int s4 = d.add_formula(f("-q -> -p"));
  const int s5 = d.add_formula(f("-s -> -r"));
  const int s6 = d.add_formula(f("-p | -r"));
  d.add_inference(FormKind::mt, {p1}, s4, {});
  d.add_inference(FormKind::mt, {p2}, s5, {});
  d.add_inference(FormKind::cd, {s4, s5, p3}, s6, {a("q"), a("s")});
  d.set_goal(s6);
  d.set_leaf_order({p1, p2, p3});
  return d;
}

inline BenchmarkInstance dd_instance() {
  return instance_from_dag(dd_dag(), "dd", Tier::small,
                           {{a("p"), "the pump runs"},
                            {a("q"), "the queue drains"},
                            {a("r"), "the relay closes"},
                            {a("s"), "the siren sounds"}});
}

// The dilemma derivation in the answer template; steps are numbered 4 to 6,
// after the three premises.
inline std::string dd_response(bool cite_rule_2_in_step_5 = true) {
  return std::string("### Solution 1\n"
                     "Step 4: -q -> -p. [uses: Rule 1]\n"
                     "Step 5: -s -> -r. [uses: ") +
         (cite_rule_2_in_step_5 ? "Rule 2" : "") +
         "]\n"
         "Step 6: -p | -r. [uses: Rule 3, Step 4, Step 5]\n"
         "Conclusion: -p | -r.\n";
}

// Clinic scenario. Facts: 1 powered, 2 dispensers, 3 staffed, 4 inspected.
// Rules: 1 powered -> operational, 2 staffed -> operational,
// 3 controlled -> safe, 4 inspected -> safe,
// 5 operational & dispensers -> controlled.
// The conjunctive rule lies outside the seven forms; its node is tagged MP
// and only the entailment checks look at it.
inline LogicDag clinic_dag() {
  LogicDag d;
  const int powered = d.add_formula(f("powered(clinic)"));
  const int dispensers = d.add_formula(f("dispensers(clinic)"));
  const int staffed = d.add_formula(f("staffed(clinic)"));
  const int inspected = d.add_formula(f("inspected(clinic)"));
  const int r1 = d.add_formula(f("powered(clinic) -> operational(clinic)"));
  const int r2 = d.add_formula(f("staffed(clinic) -> operational(clinic)"));
  const int r3 = d.add_formula(f("controlled(clinic) -> safe(clinic)"));
  const int r4 = d.add_formula(f("inspected(clinic) -> safe(clinic)"));
  const int r5 = d.add_formula(f("operational(clinic) & dispensers(clinic) -> controlled(clinic)"));
  const int operational = d.add_formula(f("operational(clinic)"));
  const int controlled = d.add_formula(f("controlled(clinic)"));
  const int safe = d.add_formula(f("safe(clinic)"));
  d.add_inference(FormKind::mp, {r1, powered}, operational, {});
  d.add_inference(FormKind::mp, {r2, staffed}, operational, {});
  d.add_inference(FormKind::mp, {r5, operational, dispensers}, controlled, {});
  d.add_inference(FormKind::mp, {r3, controlled}, safe, {});
  d.add_inference(FormKind::mp, {r4, inspected}, safe, {});
  d.set_goal(safe);
  d.set_leaf_order({powered, dispensers, staffed, inspected, r1, r2, r3, r4, r5});
  return d;
}

inline BenchmarkInstance clinic_instance() {
  return instance_from_dag(clinic_dag(), "clinic", Tier::small,
                           {{a("powered(clinic)"), "the clinic has power"},
                            {a("dispensers(clinic)"), "the clinic has sanitizer dispensers"},
                            {a("staffed(clinic)"), "the clinic is staffed"},
                            {a("inspected(clinic)"), "the clinic passed inspection"},
                            {a("operational(clinic)"), "the clinic is operational"},
                            {a("controlled(clinic)"), "infection at the clinic is controlled"},
                            {a("safe(clinic)"), "the clinic is safe"}});
}

// Full citation of the bridging rule in step 2.
inline const char* clinic_response_complete() {
  return "### Solution 1\n"
         "Step 1: The clinic is operational. [uses: Fact 1, Rule 1]\n"
         "Step 2: Infection at the clinic is controlled. [uses: Step 1, Fact 2, Rule 5]\n"
         "Step 3: The clinic is safe. [uses: Step 2, Rule 3]\n"
         "Conclusion: The clinic is safe.\n";
}

// Step 2 leaves out Rule 5.
inline const char* clinic_response_missing_rule() {
  return "### Solution 1\n"
         "Step 1: The clinic is operational. [uses: Fact 1, Rule 1]\n"
         "Step 2: Infection at the clinic is controlled. [uses: Step 1, Fact 2]\n"
         "Step 3: The clinic is safe. [uses: Step 2, Rule 3]\n"
         "Conclusion: The clinic is safe.\n";
}

// Sample scenario for a dilemma compressed into one step. Fact 1 research;
// Rules: 1 research -> -infected, 2 research | plant, 3 plant -> treated,
// 4 treated -> -infected.
inline LogicDag sample_dag() {
  LogicDag d;
  const int research = d.add_formula(f("research(sample)"));
  const int r1 = d.add_formula(f("research(sample) -> -infected(sample)"));
  const int r2 = d.add_formula(f("research(sample) | plant(sample)"));
  const int r3 = d.add_formula(f("plant(sample) -> treated(sample)"));
  const int r4 = d.add_formula(f("treated(sample) -> -infected(sample)"));
  const int bridge = d.add_formula(f("plant(sample) -> -infected(sample)"));
  const int goal = d.add_formula(f("-infected(sample)"));
  d.add_inference(FormKind::hs, {r3, r4}, bridge, {});
  d.add_inference(FormKind::mp, {r1, research}, goal, {});
  d.add_inference(FormKind::de, {r2, r1, bridge}, goal, {});
  d.set_goal(goal);
  d.set_leaf_order({research, r1, r2, r3, r4});
  return d;
}

inline BenchmarkInstance sample_instance() {
  return instance_from_dag(sample_dag(), "sample", Tier::small,
                           {{a("research(sample)"), "the sample came from the research team"},
                            {a("plant(sample)"), "the sample is a medicinal plant"},
                            {a("treated(sample)"), "the sample was treated"},
                            {a("infected(sample)"), "the sample is infected"}});
}

// Step 2 applies the dilemma to Rule 2, Rule 1 and Step 1 at once.
inline const char* sample_response_compressed() {
  return "### Solution 1\n"
         "Step 1: If the sample is a medicinal plant, then it is not the case that the sample is infected. "
         "[uses: Rule 3, Rule 4]\n"
         "Step 2: It is not the case that the sample is infected. [uses: Rule 2, Rule 1, Step 1]\n"
         "Conclusion: It is not the case that the sample is infected.\n";
}

}  // namespace fixtures
