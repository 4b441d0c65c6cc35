#include <cstdlib>
#include <httplib.h>
#include <json.hpp>

#include "pathlogic/text_client.hpp"

namespace pathlogic {

namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint URL lacks a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported URL scheme: " + scheme);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") throw std::invalid_argument("https endpoints need a build with OpenSSL");
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (out.origin.size() <= scheme_end + 3) throw std::invalid_argument("endpoint URL lacks a host: " + url);
  return out;
}

std::optional<long> read_count(const json& body, const std::string& pointer) {
  if (pointer.empty()) return std::nullopt;
  const json::json_pointer ptr(pointer);
  if (!body.contains(ptr)) return std::nullopt;
  const auto& v = body.at(ptr);
  if (!v.is_number_integer()) return std::nullopt;
  return v.get<long>();
}

class HttpTransport : public Transport {
 public:
  HttpTransport(HttpEndpointConfig config, std::string credential)
      : config_(std::move(config)), url_(split_url(config_.url)), credential_(std::move(credential)) {
    // Pointers are validated up front so a typo is a configuration error.
    (void)json::json_pointer(config_.text_pointer);
    if (!config_.prompt_tokens_pointer.empty()) (void)json::json_pointer(config_.prompt_tokens_pointer);
    if (!config_.completion_tokens_pointer.empty()) (void)json::json_pointer(config_.completion_tokens_pointer);
  }

  TextResponse send(const TextRequest& request) override {
    json body{{"model", config_.model},
              {"messages", json::array()},
              {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};
    if (!request.system_text.empty()) body["messages"].push_back({{"role", "system"}, {"content", request.system_text}});
    body["messages"].push_back({{"role", "user"}, {"content", request.user_text}});

    httplib::Client client(url_.origin);
    const auto seconds = static_cast<time_t>(config_.timeout.count());
    client.set_connection_timeout(seconds, 0);
    client.set_read_timeout(seconds, 0);
    client.set_write_timeout(seconds, 0);
    httplib::Headers headers;
    if (!credential_.empty()) headers.emplace("Authorization", "Bearer " + credential_);
    if (!request.correlation_id.empty()) headers.emplace("X-Request-Id", request.correlation_id);

    auto result = client.Post(url_.path, headers, body.dump(), "application/json");
    if (!result) {
      const auto err = result.error();
      const bool timed_out = err == httplib::Error::Read || err == httplib::Error::Write ||
                             err == httplib::Error::ConnectionTimeout;
      throw TransportError(timed_out ? FailureKind::timeout : FailureKind::transport,
                           "HTTP exchange failed: " + httplib::to_string(err));
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
      throw TransportError(FailureKind::transport, "HTTP status " + std::to_string(status));
    }
    if (status < 200 || status >= 300) {
      throw TransportError(FailureKind::rejected, "HTTP status " + std::to_string(status), false);
    }

    json parsed = json::parse(result->body, nullptr, false);
    if (parsed.is_discarded()) throw TransportError(FailureKind::malformed, "response body is not JSON");
    const json::json_pointer text_ptr(config_.text_pointer);
    if (!parsed.contains(text_ptr) || !parsed.at(text_ptr).is_string()) {
      throw TransportError(FailureKind::malformed, "response has no text at " + config_.text_pointer);
    }
    TextResponse out;
    out.text = parsed.at(text_ptr).get<std::string>();
    out.usage.prompt_tokens = read_count(parsed, config_.prompt_tokens_pointer);
    out.usage.completion_tokens = read_count(parsed, config_.completion_tokens_pointer);
    return out;
  }

 private:
  HttpEndpointConfig config_;
  ParsedUrl url_;
  std::string credential_;
};

}  // namespace

std::shared_ptr<Transport> make_http_transport(const HttpEndpointConfig& config) {
  std::string credential;
  if (!config.credential_env.empty()) {
    const char* value = std::getenv(config.credential_env.c_str());
    if (!value || !*value) {
      throw std::invalid_argument("environment variable " + config.credential_env + " holds no credential");
    }
    credential = value;
  }
  try {
    return std::make_shared<HttpTransport>(config, std::move(credential));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad JSON pointer in endpoint config: ") + e.what());
  }
}

}  // namespace pathlogic
