#include "pathlogic/text_client.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace pathlogic {

std::string_view failure_name(FailureKind kind) {
  switch (kind) {
    case FailureKind::timeout: return "timeout";
    case FailureKind::transport: return "transport";
    case FailureKind::malformed: return "malformed";
    case FailureKind::rejected: return "rejected";
  }
  return "transport";
}

std::chrono::milliseconds RetryPolicy::backoff(int retry) const {
  const double scaled = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, retry - 1);
  const double capped = std::min(scaled, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

TextClient::TextClient(std::shared_ptr<Transport> transport, RetryPolicy policy, int max_in_flight, Sleeper sleeper)
    : transport_(std::move(transport)), policy_(policy), sleeper_(std::move(sleeper)), limit_(max_in_flight) {
  if (!transport_) throw std::invalid_argument("text client needs a transport");
  if (policy_.max_attempts < 1) throw std::invalid_argument("retry policy needs at least one attempt");
  if (limit_ < 1) throw std::invalid_argument("in-flight limit must be positive");
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

TextResponse TextClient::complete(const TextRequest& request) {
  if (request.user_text.empty()) throw std::invalid_argument("completion request with empty user text");
  if (request.max_tokens <= 0) throw std::invalid_argument("completion request needs a positive max_tokens");

  {
    std::unique_lock lock(mutex_);
    slot_free_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
  }
  struct Release {
    TextClient* self;
    ~Release() {
      {
        std::lock_guard lock(self->mutex_);
        --self->in_flight_;
      }
      self->slot_free_.notify_one();
    }
  } release{this};

  FailureKind last = FailureKind::transport;
  std::string last_message;
  for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
    try {
      return transport_->send(request);
    } catch (const TransportError& e) {
      last = e.kind();
      last_message = e.what();
      if (!e.retryable()) {
        throw ClientFailure("request " + request.correlation_id + " failed: " + last_message, last, attempt);
      }
    }
    if (attempt < policy_.max_attempts) sleeper_(policy_.backoff(attempt));
  }
  throw ClientFailure("request " + request.correlation_id + " failed after " + std::to_string(policy_.max_attempts) +
                          " attempts (" + std::string(failure_name(last)) + "): " + last_message,
                      last, policy_.max_attempts);
}

}  // namespace pathlogic
