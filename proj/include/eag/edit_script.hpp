#ifndef EAG_EDIT_SCRIPT_HPP
#define EAG_EDIT_SCRIPT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace eag {

struct EditOp {
  enum class Kind { Keep, Delete, Insert, Substitute };

  Kind kind;
  // Position in the source sequence. For Insert this is the insertion point
  // (the token goes immediately before source position pos; pos == |src|
  // appends at the end).
  std::size_t pos;
  std::string token;  // payload for Insert and Substitute

  bool operator==(const EditOp&) const = default;
};

struct EditScript {
  std::vector<EditOp> ops;  // in source order

  // Number of non-Keep operations; equals the edit distance for a minimal
  // script.
  std::size_t cost() const;
};

// Minimal edit script src -> dst. Among minimal scripts, ties at each
// backtrace step prefer Keep > Substitute > Delete > Insert.
EditScript compute_edit_script(std::span<const std::string> src,
                               std::span<const std::string> dst);
EditScript compute_edit_script(const std::vector<std::string>& src,
                               const std::vector<std::string>& dst);

std::vector<std::string> apply_script(const EditScript& script,
                                      std::span<const std::string> src);
std::vector<std::string> apply_script(const EditScript& script,
                                      const std::vector<std::string>& src);

}  // namespace eag

#endif  // EAG_EDIT_SCRIPT_HPP
