#include "eag/edit_script.hpp"

#include <algorithm>

namespace eag {

std::size_t EditScript::cost() const {
  std::size_t c = 0;
  for (const EditOp& op : ops)
    if (op.kind != EditOp::Kind::Keep) ++c;
  return c;
}

EditScript compute_edit_script(std::span<const std::string> src,
                               std::span<const std::string> dst) {
  const std::size_t n = src.size(), m = dst.size();
  std::vector<int> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> int& {
    return d[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      int sub = at(i - 1, j - 1) + (src[i - 1] == dst[j - 1] ? 0 : 1);
      at(i, j) = std::min({sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditScript script;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && src[i - 1] == dst[j - 1] &&
        at(i, j) == at(i - 1, j - 1)) {
      script.ops.push_back({EditOp::Kind::Keep, i - 1, {}});
      --i, --j;
    } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1) {
      script.ops.push_back({EditOp::Kind::Substitute, i - 1, dst[j - 1]});
      --i, --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      script.ops.push_back({EditOp::Kind::Delete, i - 1, {}});
      --i;
    } else {
      script.ops.push_back({EditOp::Kind::Insert, i, dst[j - 1]});
      --j;
    }
  }
  std::reverse(script.ops.begin(), script.ops.end());
  return script;
}

EditScript compute_edit_script(const std::vector<std::string>& src,
                               const std::vector<std::string>& dst) {
  return compute_edit_script(std::span<const std::string>(src),
                             std::span<const std::string>(dst));
}

std::vector<std::string> apply_script(const EditScript& script,
                                      std::span<const std::string> src) {
  std::vector<std::string> out;
  out.reserve(src.size());
  for (const EditOp& op : script.ops) {
    switch (op.kind) {
      case EditOp::Kind::Keep:
        out.push_back(src[op.pos]);
        break;
      case EditOp::Kind::Delete:
        break;
      case EditOp::Kind::Insert:
        out.push_back(op.token);
        break;
      case EditOp::Kind::Substitute:
        out.push_back(op.token);
        break;
    }
  }
  return out;
}

std::vector<std::string> apply_script(const EditScript& script,
                                      const std::vector<std::string>& src) {
  return apply_script(script, std::span<const std::string>(src));
}

}  // namespace eag
