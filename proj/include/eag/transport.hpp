#ifndef EAG_TRANSPORT_HPP
#define EAG_TRANSPORT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace eag {

struct GenerationRequest {
  std::uint64_t id;
  std::string source;
};

struct GenerationResponse {
  std::uint64_t id;
  std::string hypothesis;
};

struct TransportConfig {
  enum class Mode { Subprocess, Http };

  Mode mode = Mode::Subprocess;
  std::string command;  // shell command for Subprocess mode
  std::string url;      // e.g. http://127.0.0.1:8080/generate
  std::size_t batch_size = 64;
  int max_retries = 3;
  int backoff_ms = 50;     // doubled per retry
  int timeout_ms = 30000;  // per batch read
  std::size_t window = 1;  // concurrent in-flight batches

  void validate() const;
};

// Sends one newline-delimited JSON batch and returns the raw response lines.
// Implementations throw TransportError on I/O-level failures; callers retry.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::vector<std::string> round_trip(
      const std::vector<std::string>& request_lines) = 0;
};

std::unique_ptr<Transport> make_transport(const TransportConfig& cfg);

// One batch against the transport with bounded retries and exponential
// backoff on transport failures. Validates ids (a missing or duplicate id is
// a ProtocolError, never retried) and restores request order.
std::vector<GenerationResponse> remote_generate(
    const std::vector<GenerationRequest>& requests, Transport& transport,
    const TransportConfig& cfg);

std::string request_to_json(const GenerationRequest& req);
GenerationResponse response_from_json(const std::string& line);

}  // namespace eag

#endif  // EAG_TRANSPORT_HPP
