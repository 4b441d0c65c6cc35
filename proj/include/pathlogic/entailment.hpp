#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pathlogic/formula.hpp"

namespace pathlogic {

enum class Engine { automatic, truth_table, sat };

/// Above this many atoms the automatic engine switches from truth tables to SAT.
inline constexpr int kAutoTableAtoms = 16;

/// premises ⊨ goal. An empty premise set entails exactly the tautologies.
bool entails(std::span<const Formula> premises, const Formula& goal, Engine engine = Engine::automatic);
bool entails(std::initializer_list<Formula> premises, const Formula& goal, Engine engine = Engine::automatic);

bool satisfiable(std::span<const Formula> formulas, Engine engine = Engine::automatic);
bool satisfiable(std::initializer_list<Formula> formulas, Engine engine = Engine::automatic);

/// Premises addressed by dense 1-based ids.
class PremiseSet {
 public:
  PremiseSet() = default;
  /// Throws std::invalid_argument on structurally equal entries.
  explicit PremiseSet(std::vector<Formula> formulas);

  std::size_t size() const { return formulas_.size(); }
  bool empty() const { return formulas_.empty(); }
  const Formula& at(int id) const;
  const std::vector<Formula>& formulas() const { return formulas_; }
  std::vector<Formula> select(std::span<const int> ids) const;

 private:
  std::vector<Formula> formulas_;
};

/// Sorted, duplicate-free premise ids.
struct MinimalSupport {
  std::vector<int> premise_ids;

  bool operator==(const MinimalSupport&) const = default;
};

/// Canonical order: smaller supports first, then lexicographic by id.
std::strong_ordering operator<=>(const MinimalSupport& a, const MinimalSupport& b);

/// Bit i-1 of a mask stands for premise id i.
using PremiseMask = std::uint64_t;
inline constexpr std::size_t kMaxOraclePremises = 64;

PremiseMask mask_of(std::span<const int> ids);
std::vector<int> ids_of(PremiseMask mask);

/// Answers "does this subset of premises entail the goal" for many subsets
/// of one premise set. Results are memoized per mask; the cache only ever
/// stores answers of the underlying decision procedure.
class SupportOracle {
 public:
  SupportOracle(const PremiseSet& premises, const Formula& goal, Engine engine = Engine::automatic);
  ~SupportOracle();
  SupportOracle(const SupportOracle&) = delete;
  SupportOracle& operator=(const SupportOracle&) = delete;

  bool entails(PremiseMask subset);
  std::size_t premise_count() const { return count_; }
  std::size_t decisions() const { return decisions_; }

 private:
  struct Backend;
  std::size_t count_;
  std::unique_ptr<Backend> backend_;
  std::unordered_map<PremiseMask, bool> cache_;
  std::size_t decisions_ = 0;
};

class EnumerationLimit : public std::runtime_error {
 public:
  EnumerationLimit(std::size_t premises, std::size_t bound)
      : std::runtime_error("minimal support enumeration over " + std::to_string(premises) +
                           " premises exceeds the bound of " + std::to_string(bound)),
        premises_(premises),
        bound_(bound) {}
  std::size_t premises() const { return premises_; }
  std::size_t bound() const { return bound_; }

 private:
  std::size_t premises_;
  std::size_t bound_;
};

struct EnumerationOptions {
  std::size_t max_premises = 30;
  Engine engine = Engine::automatic;
};

/// Every minimal support of `goal`, canonically ordered. Throws
/// EnumerationLimit when the premise count exceeds options.max_premises.
std::vector<MinimalSupport> minimal_supports(const PremiseSet& premises, const Formula& goal,
                                             const EnumerationOptions& options = {});

/// Deletion-based reduction: members are tried for removal in ascending id
/// order and dropped whenever the rest still entails the goal. Throws
/// std::invalid_argument if the candidate does not entail the goal.
MinimalSupport minimize_support(std::span<const int> candidate_ids, const PremiseSet& premises, const Formula& goal);

bool is_minimal_support(std::span<const int> ids, const PremiseSet& premises, const Formula& goal);

}  // namespace pathlogic
