#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

namespace pathlogic {

struct TextRequest {
  std::string system_text;
  std::string user_text;
  int max_tokens = 1024;
  double temperature = 0.0;
  /// Echoed into errors and logs so concurrent calls can be told apart.
  std::string correlation_id;
};

struct TokenUsage {
  std::optional<long> prompt_tokens;
  std::optional<long> completion_tokens;
};

struct TextResponse {
  std::string text;
  TokenUsage usage;
};

enum class FailureKind { timeout, transport, malformed, rejected };

std::string_view failure_name(FailureKind kind);

/// Raised by a transport for one failed exchange.
class TransportError : public std::runtime_error {
 public:
  TransportError(FailureKind kind, const std::string& what, bool retryable = true)
      : std::runtime_error(what), kind_(kind), retryable_(retryable) {}
  FailureKind kind() const { return kind_; }
  bool retryable() const { return retryable_; }

 private:
  FailureKind kind_;
  bool retryable_;
};

/// Raised by TextClient once the retry budget is spent or a failure is final.
class ClientFailure : public std::runtime_error {
 public:
  ClientFailure(const std::string& what, FailureKind last, int attempts)
      : std::runtime_error(what), last_(last), attempts_(attempts) {}
  FailureKind last_failure() const { return last_; }
  int attempts() const { return attempts_; }

 private:
  FailureKind last_;
  int attempts_;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual TextResponse send(const TextRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};

  /// Delay before retry number `retry` (1 = first retry).
  std::chrono::milliseconds backoff(int retry) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Completion calls with validation, bounded retries and an in-flight limit.
/// Safe to share between threads.
class TextClient {
 public:
  TextClient(std::shared_ptr<Transport> transport, RetryPolicy policy = {}, int max_in_flight = 4,
             Sleeper sleeper = {});

  /// Throws std::invalid_argument for requests that never reach the
  /// transport, ClientFailure when every attempt failed.
  TextResponse complete(const TextRequest& request);

  int max_in_flight() const { return limit_; }

 private:
  std::shared_ptr<Transport> transport_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  int limit_;
  int in_flight_ = 0;
  std::mutex mutex_;
  std::condition_variable slot_free_;
};

struct HttpEndpointConfig {
  /// `http://host[:port]/path` or `https://...`.
  std::string url;
  std::string model;
  /// Name of the environment variable holding the bearer credential; empty
  /// for endpoints without authentication.
  std::string credential_env;
  /// JSON pointers into the response body.
  std::string text_pointer = "/choices/0/message/content";
  std::string prompt_tokens_pointer = "/usage/prompt_tokens";
  std::string completion_tokens_pointer = "/usage/completion_tokens";
  std::chrono::seconds timeout{60};
};

/// HTTP POST of {model, messages, temperature, max_tokens}. Throws
/// std::invalid_argument for a malformed URL or a missing credential.
std::shared_ptr<Transport> make_http_transport(const HttpEndpointConfig& config);

}  // namespace pathlogic
