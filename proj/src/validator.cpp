#include "pathlogic/validator.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace pathlogic {

std::string_view reason_code(RejectReason reason) {
  switch (reason) {
    case RejectReason::none: return "accept";
    case RejectReason::stepwise_entailment: return "stepwise_entailment";
    case RejectReason::global_derivability: return "global_derivability";
    case RejectReason::contextual_consistency: return "contextual_consistency";
  }
  return "unknown";
}

RejectReason ValidationReport::reason() const {
  for (const auto& s : stepwise) {
    if (!s.pass) return RejectReason::stepwise_entailment;
  }
  if (!global_pass) return RejectReason::global_derivability;
  if (!consistency_pass) return RejectReason::contextual_consistency;
  return RejectReason::none;
}

namespace {

std::vector<Formula> stated_premises(const BenchmarkInstance& instance) {
  std::vector<Formula> out;
  out.reserve(instance.premises.size());
  for (const auto& p : instance.premises) out.push_back(p.formula);
  return out;
}

std::vector<Formula> local_premises(const BenchmarkInstance& instance, const InferenceNode& inf) {
  std::vector<Formula> out;
  for (int id : inf.premises) out.push_back(instance.concrete(id));
  return out;
}

}  // namespace

std::vector<StepCheck> check_stepwise(const BenchmarkInstance& instance) {
  std::vector<StepCheck> out;
  for (const auto& inf : instance.dag.inferences()) {
    out.push_back({inf.id, entails(local_premises(instance, inf), instance.concrete(inf.conclusion))});
  }
  return out;
}

bool check_global(const BenchmarkInstance& instance) {
  std::vector<Formula> established = stated_premises(instance);
  std::set<Formula> known(established.begin(), established.end());
  for (int id : instance.dag.topological_inferences()) {
    const auto& inf = instance.dag.inference(id);
    auto local = local_premises(instance, inf);
    bool reachable = true;
    for (const auto& f : local) reachable = reachable && known.count(f) > 0;
    if (!reachable) continue;
    // The local premises are a subset of the established set, so their
    // entailment is entailment by everything established so far.
    Formula conclusion = instance.concrete(inf.conclusion);
    if (!entails(local, conclusion)) return false;
    if (known.insert(conclusion).second) established.push_back(conclusion);
  }
  if (known.count(instance.goal)) return true;
  return entails(established, instance.goal);
}

bool check_consistency(const BenchmarkInstance& instance) { return satisfiable(stated_premises(instance)); }

ValidationReport validate_instance(const BenchmarkInstance& instance) {
  ValidationReport report;
  report.instance_id = instance.instance_id;
  report.stepwise = check_stepwise(instance);
  report.global_pass = check_global(instance);
  report.consistency_pass = check_consistency(instance);
  return report;
}

std::string emit_prover9_job(std::span<const Formula> premises, const Formula& goal) {
  std::string out = "formulas(assumptions).\n";
  for (const auto& p : premises) out += format_formula(p) + ".\n";
  out += "end_of_list.\nformulas(goals).\n";
  out += format_formula(goal) + ".\n";
  out += "end_of_list.\n";
  return out;
}

std::string_view outcome_name(ProverOutcome outcome) {
  switch (outcome) {
    case ProverOutcome::proved: return "proved";
    case ProverOutcome::not_proved: return "not_proved";
    case ProverOutcome::unavailable: return "unavailable";
  }
  return "unavailable";
}

std::optional<std::filesystem::path> locate_prover(const ExternalProverConfig& config) {
  auto runnable = [](const std::filesystem::path& p) { return ::access(p.c_str(), X_OK) == 0; };
  if (!config.binary.empty()) {
    if (runnable(config.binary)) return config.binary;
    return std::nullopt;
  }
  if (const char* env = std::getenv("PATHLOGIC_PROVER9"); env && *env) {
    if (runnable(env)) return std::filesystem::path(env);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::stringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    auto candidate = std::filesystem::path(dir) / "prover9";
    if (runnable(candidate)) return candidate;
  }
  return std::nullopt;
}

namespace {

// Temporary file removed on scope exit.
class TempFile {
 public:
  explicit TempFile(const char* stem) {
    auto dir = std::filesystem::temp_directory_path();
    std::string pattern = (dir / (std::string(stem) + "-XXXXXX")).string();
    fd_ = ::mkstemp(pattern.data());
    if (fd_ < 0) throw std::runtime_error("cannot create a temporary file in " + dir.string());
    path_ = pattern;
  }
  ~TempFile() {
    if (fd_ >= 0) ::close(fd_);
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  int fd_ = -1;
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

ProverResult external_prove(const std::string& job, const ExternalProverConfig& config) {
  ProverResult result;
  auto binary = locate_prover(config);
  if (!binary) {
    result.detail = "prover binary not found";
    return result;
  }
  TempFile input("pathlogic-job");
  TempFile output("pathlogic-out");
  {
    std::ofstream f(input.path(), std::ios::binary);
    f << job;
    if (!f) {
      result.detail = "cannot write job file";
      return result;
    }
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    result.detail = "fork failed";
    return result;
  }
  if (pid == 0) {
    int in = ::open(input.path().c_str(), O_RDONLY);
    int out = ::open(output.path().c_str(), O_WRONLY | O_TRUNC);
    int null = ::open("/dev/null", O_WRONLY);
    if (in < 0 || out < 0) ::_exit(127);
    ::dup2(in, STDIN_FILENO);
    ::dup2(out, STDOUT_FILENO);
    if (null >= 0) ::dup2(null, STDERR_FILENO);
    ::setpgid(0, 0);
    const std::string prog = binary->string();
    char* argv[] = {const_cast<char*>(prog.c_str()), nullptr};
    ::execv(prog.c_str(), argv);
    ::_exit(127);
  }

  const auto deadline = std::chrono::steady_clock::now() + config.timeout;
  int status = 0;
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) {
      result.detail = "waitpid failed";
      return result;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.outcome = ProverOutcome::not_proved;
      result.timed_out = true;
      result.detail = "timed out";
      return result;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  if (!WIFEXITED(status)) {
    result.detail = "prover terminated by a signal";
    return result;
  }
  result.exit_status = WEXITSTATUS(status);
  const std::string text = slurp(output.path());
  if (result.exit_status == 0 && text.find("THEOREM PROVED") != std::string::npos) {
    result.outcome = ProverOutcome::proved;
  } else if (result.exit_status == 2) {
    result.outcome = ProverOutcome::not_proved;
    result.detail = "search failed";
  } else if (result.exit_status == 127) {
    result.detail = "prover could not be started";
  } else {
    result.detail = "unexpected prover exit status " + std::to_string(result.exit_status);
  }
  return result;
}

}  // namespace pathlogic
