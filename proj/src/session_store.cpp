#include "delib/session_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace delib {

namespace fs = std::filesystem;

namespace {

void write_all_synced(const fs::path& path, std::string_view data) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw StoreError(StoreError::Kind::WriteFailed, "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw StoreError(StoreError::Kind::WriteFailed, "cannot write " + path.string() + ": " + std::strerror(err));
    }
    written += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

bool is_valid_session_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

SessionStore::SessionStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(data_dir_, ec);
  if (ec || !fs::is_directory(data_dir_)) {
    throw StoreError(StoreError::Kind::BadDataDir, "data dir " + data_dir_.string() + " is not a usable directory");
  }
  const fs::path probe = data_dir_ / ".write-probe";
  try {
    write_all_synced(probe, "ok");
  } catch (const StoreError&) {
    throw StoreError(StoreError::Kind::BadDataDir, "data dir " + data_dir_.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

fs::path SessionStore::path_for(std::string_view session_id) const {
  if (!is_valid_session_id(session_id)) throw std::invalid_argument("invalid session id");
  return data_dir_ / (std::string(session_id) + ".json");
}

std::string SessionStore::serialize(const SessionState& state) { return Json(state).dump(2) + "\n"; }

void SessionStore::save(const SessionState& state) const {
  const fs::path target = path_for(state.session_id);
  fs::path temp = target;
  temp += ".tmp";
  write_all_synced(temp, serialize(state));
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    throw StoreError(StoreError::Kind::WriteFailed, "cannot replace " + target.string() + ": " + ec.message());
  }
}

SessionState SessionStore::load(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw StoreError(StoreError::Kind::CorruptSnapshot, "cannot read " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const Json parsed = Json::parse(buffer.str(), nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw StoreError(StoreError::Kind::CorruptSnapshot, file.string() + " is not a JSON object");
  }
  SessionState state;
  try {
    state = parsed.get<SessionState>();
  } catch (const std::exception& e) {
    throw StoreError(StoreError::Kind::CorruptSnapshot, file.string() + ": " + e.what());
  }
  if (!is_valid_session_id(state.session_id)) {
    throw StoreError(StoreError::Kind::CorruptSnapshot, file.string() + ": invalid session id");
  }
  if (auto problems = integrity_violations(state); !problems.empty()) {
    throw StoreError(StoreError::Kind::CorruptSnapshot, file.string() + ": " + problems.front());
  }
  return state;
}

SessionStore::LoadReport SessionStore::load_all() const {
  LoadReport report;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(data_dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    try {
      SessionState state = load(file);
      if (state.session_id != file.stem().string()) {
        report.failures.push_back(file.string() + ": holds session \"" + state.session_id + "\"");
        continue;
      }
      report.sessions.push_back(std::move(state));
    } catch (const StoreError& e) {
      report.failures.push_back(e.what());
    }
  }
  return report;
}

}  // namespace delib
