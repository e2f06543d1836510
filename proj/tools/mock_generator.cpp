// Scripted generator double for transport tests. Speaks the line protocol on
// stdin/stdout: one {"id", "source"} object per line in, one
// {"hypothesis", "id"} object per line out. Behaviors are driven by flags so
// tests can exercise reordering, latency, dropped ids, and crashes.
//
//   --echo               hypothesis = source (default)
//   --parrot             hypothesis = text after the " <sep> " boundary
//   --upper              hypothesis = source uppercased (ASCII)
//   --shuffle            emit each batch's responses in reverse order
//   --delay-ms N         sleep N ms before answering a batch
//   --drop-id K          once: omit id K, emit another batch line twice
//   --omit-id K          once: emit one line fewer (drops id K outright)
//   --crash-after N      exit(1) after answering N batches
//   --batch N            lines per batch (default 1; 0 = read until EOF).
//                        Point the client at the same batch size; a final
//                        short batch starves until EOF.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

using json = nlohmann::json;

int main(int argc, char** argv) {
  bool upper = false;
  bool parrot = false;
  bool shuffle = false;
  long delay_ms = 0;
  long long drop_id = -1;
  long long omit_id = -1;
  long crash_after = -1;
  std::size_t batch = 1;

  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << arg << "\n";
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--echo") {
      upper = false;
    } else if (arg == "--parrot") {
      parrot = true;
    } else if (arg == "--upper") {
      upper = true;
    } else if (arg == "--shuffle") {
      shuffle = true;
    } else if (arg == "--delay-ms") {
      delay_ms = std::stol(next());
    } else if (arg == "--drop-id") {
      drop_id = std::stoll(next());
    } else if (arg == "--omit-id") {
      omit_id = std::stoll(next());
    } else if (arg == "--crash-after") {
      crash_after = std::stol(next());
    } else if (arg == "--batch") {
      batch = static_cast<std::size_t>(std::stoul(next()));
    } else {
      std::cerr << "unknown flag " << arg << "\n";
      return 2;
    }
  }

  long batches_done = 0;
  std::vector<std::pair<std::uint64_t, std::string>> pending;
  std::string line;

  auto flush_batch = [&]() {
    if (pending.empty()) return;
    if (delay_ms > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    if (shuffle) std::reverse(pending.begin(), pending.end());

    std::vector<std::string> out_lines;
    for (const auto& [id, hyp] : pending) {
      if (static_cast<long long>(id) == omit_id) {
        omit_id = -1;
        continue;
      }
      if (static_cast<long long>(id) == drop_id) {
        drop_id = -1;
        // keep the line count: repeat the previous (or next) response
        continue;
      }
      out_lines.push_back(json{{"id", id}, {"hypothesis", hyp}}.dump());
    }
    while (out_lines.size() < pending.size() && !out_lines.empty())
      out_lines.push_back(out_lines.front());
    for (const std::string& l : out_lines) std::cout << l << '\n';
    std::cout.flush();
    pending.clear();
    ++batches_done;
    if (crash_after >= 0 && batches_done >= crash_after) std::exit(1);
  };

  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    json req = json::parse(line, nullptr, false);
    if (req.is_discarded() || !req.contains("id") || !req.contains("source")) {
      std::cerr << "mock_generator: bad request line\n";
      return 2;
    }
    std::string hyp = req["source"].get<std::string>();
    if (parrot) {
      std::size_t sep = hyp.rfind(" <sep> ");
      if (sep != std::string::npos) hyp = hyp.substr(sep + 7);
    }
    if (upper)
      std::transform(hyp.begin(), hyp.end(), hyp.begin(), [](unsigned char c) {
        return static_cast<char>(std::toupper(c));
      });
    pending.emplace_back(req["id"].get<std::uint64_t>(), hyp);
    if (batch > 0 && pending.size() >= batch) flush_batch();
  }
  flush_batch();
  return 0;
}
