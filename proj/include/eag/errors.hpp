#ifndef EAG_ERRORS_HPP
#define EAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eag {

// Exit codes used by the CLI: 0 success, 1 usage, 2 data, 3 transport.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitTransport = 3,
};

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

// Contract violation in a generator reply (missing or duplicate ids).
// Not retried; carries the first offending id.
class ProtocolError : public TransportError {
 public:
  ProtocolError(const std::string& what, std::uint64_t id)
      : TransportError(what), id_(id) {}
  std::uint64_t id() const { return id_; }

 private:
  std::uint64_t id_;
};

}  // namespace eag

#endif  // EAG_ERRORS_HPP
