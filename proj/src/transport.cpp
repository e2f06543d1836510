#include "eag/transport.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eag/errors.hpp"

namespace eag {

using json = nlohmann::json;

void TransportConfig::validate() const {
  if (batch_size == 0) throw UsageError("transport batch_size must be >= 1");
  if (max_retries < 0) throw UsageError("max_retries must be >= 0");
  if (window == 0) throw UsageError("transport window must be >= 1");
  if (mode == Mode::Subprocess && command.empty())
    throw UsageError("subprocess transport needs a command");
  if (mode == Mode::Http && url.empty())
    throw UsageError("http transport needs a url");
}

std::string request_to_json(const GenerationRequest& req) {
  return json{{"id", req.id}, {"source", req.source}}.dump();
}

GenerationResponse response_from_json(const std::string& line) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed response line: ") + e.what(),
                        0);
  }
  if (!rec.contains("id") || !rec["id"].is_number_integer())
    throw ProtocolError("response object lacks an integer id", 0);
  if (!rec.contains("hypothesis") || !rec["hypothesis"].is_string())
    throw ProtocolError("response object lacks a hypothesis string",
                        rec["id"].get<std::uint64_t>());
  return {rec["id"].get<std::uint64_t>(),
          rec["hypothesis"].get<std::string>()};
}

namespace {

// Line protocol over a child process's stdin/stdout. The child is respawned
// after any failure so a retry starts from a clean stream.
class SubprocessTransport : public Transport {
 public:
  explicit SubprocessTransport(const TransportConfig& cfg) : cfg_(cfg) {
    ::signal(SIGPIPE, SIG_IGN);
  }

  ~SubprocessTransport() override { shutdown(); }

  std::vector<std::string> round_trip(
      const std::vector<std::string>& request_lines) override {
    try {
      if (pid_ < 0) spawn();
      std::string payload;
      for (const std::string& line : request_lines) {
        payload += line;
        payload += '\n';
      }
      write_all(payload);
      std::vector<std::string> out;
      out.reserve(request_lines.size());
      while (out.size() < request_lines.size()) out.push_back(read_line());
      return out;
    } catch (...) {
      shutdown();
      throw;
    }
  }

 private:
  void spawn() {
    // O_CLOEXEC keeps these fds out of children spawned concurrently by
    // other threads; only async-signal-safe calls happen between fork and
    // exec (argv is prebuilt, execv does not allocate).
    int to_child[2], from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0 || pipe2(from_child, O_CLOEXEC) != 0)
      throw TransportError("pipe2() failed: " +
                           std::string(std::strerror(errno)));
    const char* child_argv[4] = {"sh", "-c", cfg_.command.c_str(), nullptr};
    pid_t pid = fork();
    if (pid < 0)
      throw TransportError("fork() failed: " +
                           std::string(std::strerror(errno)));
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);    // dup2 clears CLOEXEC on the copy
      dup2(from_child[1], STDOUT_FILENO);
      execv("/bin/sh", const_cast<char* const*>(child_argv));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    pid_ = pid;
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    buffer_.clear();
  }

  void shutdown() {
    if (in_fd_ >= 0) close(in_fd_);
    if (out_fd_ >= 0) close(out_fd_);
    in_fd_ = out_fd_ = -1;
    if (pid_ > 0) {
      kill(pid_, SIGTERM);
      int status = 0;
      waitpid(pid_, &status, 0);
      pid_ = -1;
    }
    buffer_.clear();
  }

  void write_all(const std::string& data) {
    std::size_t off = 0;
    while (off < data.size()) {
      ssize_t n = write(in_fd_, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError("write to generator failed: " +
                             std::string(std::strerror(errno)));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    for (;;) {
      std::size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      struct pollfd pfd{out_fd_, POLLIN, 0};
      int pr = poll(&pfd, 1, cfg_.timeout_ms);
      if (pr == 0)
        throw TransportError("generator response timed out after " +
                             std::to_string(cfg_.timeout_ms) + " ms");
      if (pr < 0) {
        if (errno == EINTR) continue;
        throw TransportError("poll() failed: " +
                             std::string(std::strerror(errno)));
      }
      char chunk[4096];
      ssize_t n = read(out_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError("read from generator failed: " +
                             std::string(std::strerror(errno)));
      }
      if (n == 0)
        throw TransportError("generator closed its output mid-batch");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  TransportConfig cfg_;
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
};

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

ParsedUrl parse_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0)
    throw UsageError("transport url must start with http:// : " + url);
  std::string rest = url.substr(scheme.size());
  ParsedUrl p;
  std::size_t slash = rest.find('/');
  std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
  if (slash != std::string::npos) p.path = rest.substr(slash);
  std::size_t colon = hostport.find(':');
  if (colon == std::string::npos) {
    p.host = hostport;
  } else {
    p.host = hostport.substr(0, colon);
    p.port = std::stoi(hostport.substr(colon + 1));
  }
  if (p.host.empty()) throw UsageError("transport url lacks a host: " + url);
  return p;
}

// One batch per POST body; the response body carries the batch back.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(const TransportConfig& cfg)
      : cfg_(cfg), url_(parse_url(cfg.url)) {}

  std::vector<std::string> round_trip(
      const std::vector<std::string>& request_lines) override {
    httplib::Client client(url_.host, url_.port);
    client.set_connection_timeout(cfg_.timeout_ms / 1000,
                                  (cfg_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(cfg_.timeout_ms / 1000,
                            (cfg_.timeout_ms % 1000) * 1000);
    std::string body;
    for (const std::string& line : request_lines) {
      body += line;
      body += '\n';
    }
    auto res = client.Post(url_.path, body, "application/x-ndjson");
    if (!res)
      throw TransportError("http transport failed: " +
                           httplib::to_string(res.error()));
    if (res->status != 200)
      throw TransportError("generator returned http status " +
                           std::to_string(res->status));
    std::vector<std::string> lines;
    std::istringstream in(res->body);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
    return lines;
  }

 private:
  TransportConfig cfg_;
  ParsedUrl url_;
};

}  // namespace

std::unique_ptr<Transport> make_transport(const TransportConfig& cfg) {
  cfg.validate();
  if (cfg.mode == TransportConfig::Mode::Subprocess)
    return std::make_unique<SubprocessTransport>(cfg);
  return std::make_unique<HttpTransport>(cfg);
}

std::vector<GenerationResponse> remote_generate(
    const std::vector<GenerationRequest>& requests, Transport& transport,
    const TransportConfig& cfg) {
  if (requests.empty()) return {};

  std::vector<std::string> lines;
  lines.reserve(requests.size());
  for (const GenerationRequest& r : requests)
    lines.push_back(request_to_json(r));

  std::vector<std::string> reply;
  for (int attempt = 0;; ++attempt) {
    try {
      reply = transport.round_trip(lines);
      break;
    } catch (const TransportError& e) {
      if (attempt >= cfg.max_retries)
        throw TransportError("generator unreachable after " +
                             std::to_string(attempt + 1) +
                             " attempts: " + e.what());
      std::this_thread::sleep_for(
          std::chrono::milliseconds(cfg.backoff_ms << attempt));
    }
  }

  std::unordered_map<std::uint64_t, std::string> by_id;
  by_id.reserve(reply.size());
  std::unordered_set<std::uint64_t> wanted;
  for (const GenerationRequest& r : requests) wanted.insert(r.id);
  std::vector<std::uint64_t> duplicated;
  for (const std::string& line : reply) {
    GenerationResponse resp = response_from_json(line);
    if (!by_id.emplace(resp.id, std::move(resp.hypothesis)).second)
      duplicated.push_back(resp.id);
  }
  // A dropped id is the root cause; report it ahead of any duplicate that
  // took its slot.
  for (const GenerationRequest& r : requests) {
    if (!by_id.count(r.id))
      throw ProtocolError("missing response id " + std::to_string(r.id), r.id);
  }
  if (!duplicated.empty())
    throw ProtocolError(
        "duplicate response id " + std::to_string(duplicated.front()),
        duplicated.front());
  for (const auto& [id, hyp] : by_id) {
    if (!wanted.count(id))
      throw ProtocolError("unexpected response id " + std::to_string(id), id);
  }

  std::vector<GenerationResponse> out;
  out.reserve(requests.size());
  for (const GenerationRequest& r : requests)
    out.push_back({r.id, std::move(by_id[r.id])});
  return out;
}

}  // namespace eag
