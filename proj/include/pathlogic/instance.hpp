#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathlogic/catalog.hpp"
#include "pathlogic/dag.hpp"
#include "pathlogic/instantiation.hpp"

namespace pathlogic {

inline constexpr std::string_view kInstanceSchema = "pathlogic.instance/v1";
inline constexpr std::string_view kGeneratorVersion = "1.0.0";
/// Families are connected components of solutions sharing an inference node.
inline constexpr std::string_view kFamilyRule = "shared-inference-node";

using ordered_json = nlohmann::ordered_json;

struct PremiseRecord {
  int id = 0;
  /// "Fact k" for literals, "Rule k" otherwise; the two are numbered apart.
  std::string label;
  Formula formula;
  std::string text;
  /// DAG formula node this premise instantiates.
  int node = 0;
};

struct VocabularyEntry {
  Atom abstract;
  Atom atom;
  std::string gloss;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string catalog_version;
  std::string generator_version;
  std::string instantiation_mode;
};

struct BenchmarkInstance {
  explicit BenchmarkInstance(Formula goal_formula) : goal(std::move(goal_formula)) {}

  std::string instance_id;
  Tier tier = Tier::small;
  std::string domain;
  std::string context;
  std::vector<PremiseRecord> premises;
  Formula goal;
  std::string goal_text;
  std::vector<VocabularyEntry> vocabulary;
  LogicDag dag;
  GroundTruth ground_truth;
  Provenance provenance;

  SymbolMap symbol_map() const;
  /// The DAG node's formula under the instance vocabulary.
  Formula concrete(int node_id) const;
  PremiseSet premise_set() const;
  /// Premise with the given "Fact k"/"Rule k" label, or nullptr.
  const PremiseRecord* find_label(std::string_view label) const;
};

/// Raised for dataset lines that do not follow the instance schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string premise_label_kind(const Formula& f);

/// Instantiates and verbalizes a generated DAG.
BenchmarkInstance build_instance(const GeneratedInstance& generated, const std::string& instance_id,
                                 const DomainProfile& profile, const InstantiationOptions& options);

/// Wraps a hand-written DAG whose atoms are already the final names; each
/// atom is glossed by the supplied table (or by its own text).
BenchmarkInstance instance_from_dag(const LogicDag& dag, const std::string& instance_id, Tier tier,
                                    const std::vector<std::pair<Atom, std::string>>& glosses,
                                    const std::string& context = "");

ordered_json config_to_json(const GenerationConfig& config);
/// Unknown keys and ill-typed values throw std::invalid_argument.
GenerationConfig config_from_json(const nlohmann::json& j, GenerationConfig base = {});
/// FNV-1a over the canonical JSON of the config without its seed.
std::string config_hash(const GenerationConfig& config);

ordered_json dag_to_json(const LogicDag& dag);
LogicDag dag_from_json(const nlohmann::json& j);
ordered_json ground_truth_to_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

ordered_json instance_to_json(const BenchmarkInstance& instance);
BenchmarkInstance instance_from_json(const nlohmann::json& j);

std::string to_jsonl(const std::vector<BenchmarkInstance>& instances);
void write_dataset(const std::filesystem::path& path, const std::vector<BenchmarkInstance>& instances);
/// Throws SchemaError naming the line number of a malformed record.
std::vector<BenchmarkInstance> read_dataset(const std::filesystem::path& path);
std::vector<BenchmarkInstance> parse_dataset(std::string_view text);

}  // namespace pathlogic
