#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delib/session_state.hpp"

namespace delib {

class StoreError : public std::runtime_error {
 public:
  enum class Kind { BadDataDir, CorruptSnapshot, WriteFailed };

  StoreError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// One JSON snapshot per session, `<data_dir>/<session_id>.json`, replaced
// atomically (write temp file, fsync, rename).
class SessionStore {
 public:
  // Creates the directory if needed and checks it is writable; throws StoreError(BadDataDir).
  explicit SessionStore(std::filesystem::path data_dir);

  void save(const SessionState& state) const;
  std::filesystem::path path_for(std::string_view session_id) const;
  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }

  struct LoadReport {
    std::vector<SessionState> sessions;
    std::vector<std::string> failures;  // "<path>: <reason>"
  };
  LoadReport load_all() const;

  // Throws StoreError(CorruptSnapshot) for unreadable, truncated or inconsistent files.
  static SessionState load(const std::filesystem::path& file);
  static std::string serialize(const SessionState& state);

 private:
  std::filesystem::path data_dir_;
};

// Session ids double as file names: [A-Za-z0-9_-]{1,64}.
bool is_valid_session_id(std::string_view id);

}  // namespace delib
