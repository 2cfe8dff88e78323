#include "slakit/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "slakit/digest.hpp"
#include "slakit/timestamp.hpp"

namespace fs = std::filesystem;

namespace slakit {

std::string_view to_string(StoreErrc e) {
  switch (e) {
    case StoreErrc::io_error: return "StoreIoError";
    case StoreErrc::locked: return "StoreLocked";
    case StoreErrc::not_found: return "NotFound";
    case StoreErrc::corrupt_document: return "CorruptDocument";
  }
  return "?";
}

namespace {

[[noreturn]] void io_error(const std::string& what, const fs::path& path) {
  throw StoreError(StoreErrc::io_error, what + " " + path.string() + ": " + std::strerror(errno));
}

std::optional<std::string> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (errno == ENOENT) return std::nullopt;
    io_error("cannot read", path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) io_error("cannot read", path);
  return ss.str();
}

fs::path temp_path_for(const fs::path& target) {
  static std::atomic<unsigned> counter{0};
  return target.parent_path() /
         ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
          std::to_string(counter.fetch_add(1)));
}

void write_atomically(const fs::path& target, std::string_view bytes) {
  const fs::path tmp = temp_path_for(target);
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) io_error("cannot create", tmp);
  const char* p = bytes.data();
  std::size_t left = bytes.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      ::unlink(tmp.c_str());
      io_error("cannot write", tmp);
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    ::unlink(tmp.c_str());
    io_error("cannot flush", tmp);
  }
  if (::rename(tmp.c_str(), target.c_str()) != 0) {
    ::unlink(tmp.c_str());
    io_error("cannot rename onto", target);
  }
}

/// Exclusive lock file; created with O_EXCL and removed on destruction.
class LockFile {
 public:
  LockFile(const fs::path& path, const StoreOptions& opts) : path_(path) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + opts.lock_timeout;
    std::minstd_rand rng(static_cast<unsigned>(::getpid()) ^
                         static_cast<unsigned>(clock::now().time_since_epoch().count()));
    for (;;) {
      int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
      if (fd >= 0) {
        const std::string stamp = std::to_string(::getpid()) + " " +
                                  format_utc_micros(std::chrono::system_clock::now()) + "\n";
        [[maybe_unused]] auto n = ::write(fd, stamp.data(), stamp.size());
        ::close(fd);
        return;
      }
      if (errno != EEXIST) io_error("cannot create lock", path_);

      struct stat st {};
      if (::stat(path_.c_str(), &st) == 0) {
        const auto age = std::chrono::system_clock::now() -
                         std::chrono::system_clock::from_time_t(st.st_mtime);
        if (age > opts.stale_lock_age) {
          std::cerr << "warning: breaking stale store lock " << path_ << "\n";
          ::unlink(path_.c_str());
          continue;
        }
      }
      if (clock::now() >= deadline) {
        throw StoreError(StoreErrc::locked, "timed out waiting for " + path_.string());
      }
      std::this_thread::sleep_for(std::chrono::microseconds(500 + rng() % 4500));
    }
  }
  ~LockFile() { ::unlink(path_.c_str()); }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  fs::path path_;
};

nlohmann::ordered_json summary_to_json(const StoredSlaSummary& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["id"] = s.id;
  j["application_type"] = s.application_type;
  j["created_at"] = s.created_at;
  j["size_bytes"] = s.size_bytes;
  return j;
}

bool summary_less(const StoredSlaSummary& a, const StoredSlaSummary& b) {
  if (a.created_at != b.created_at) return a.created_at < b.created_at;
  return a.id < b.id;
}

std::vector<StoredSlaSummary> parse_index(const std::string& bytes) {
  std::vector<StoredSlaSummary> out;
  const auto j = nlohmann::json::parse(bytes);
  for (const auto& e : j) {
    StoredSlaSummary s;
    s.id = e.at("id").get<std::string>();
    s.application_type = e.at("application_type").get<std::string>();
    s.created_at = e.at("created_at").get<std::string>();
    s.size_bytes = e.at("size_bytes").get<std::uint64_t>();
    out.push_back(std::move(s));
  }
  return out;
}

std::string index_bytes(std::vector<StoredSlaSummary> entries) {
  std::sort(entries.begin(), entries.end(), summary_less);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : entries) arr.push_back(summary_to_json(s));
  return arr.dump();
}

}  // namespace

SlaStore::SlaStore(fs::path root, StoreOptions options) : root_(std::move(root)), options_(options) {}

fs::path SlaStore::doc_path(const std::string& id) const { return root_ / "slas" / (id + ".json"); }

namespace {

void ensure_layout(const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root / "slas", ec);
  if (ec) throw StoreError(StoreErrc::io_error, "cannot create " + (root / "slas").string() + ": " + ec.message());
}

/// Index entries, or a rescan when the index is missing or unreadable.
std::vector<StoredSlaSummary> load_index(const SlaStore& store) {
  auto bytes = read_bytes(store.root() / "index.json");
  if (!bytes) return store.rescan();
  try {
    return parse_index(*bytes);
  } catch (const nlohmann::json::exception&) {
    std::cerr << "warning: index.json is unreadable, rebuilding from slas/\n";
    return store.rescan();
  }
}

}  // namespace

std::string SlaStore::put(const SlaDocument& doc) {
  const std::string bytes = serialize_canonical(doc);
  const std::string id = sha256_hex(bytes);
  ensure_layout(root_);

  LockFile lock(root_ / ".lock", options_);
  auto existing = read_bytes(doc_path(id));
  if (!existing || *existing != bytes) write_atomically(doc_path(id), bytes);

  auto entries = load_index(*this);
  const bool indexed = std::any_of(entries.begin(), entries.end(),
                                   [&](const StoredSlaSummary& s) { return s.id == id; });
  if (!indexed) {
    entries.push_back({id, doc.header.application_type,
                       format_utc_micros(std::chrono::system_clock::now()), bytes.size()});
    write_atomically(root_ / "index.json", index_bytes(std::move(entries)));
  }
  return id;
}

std::string SlaStore::get_bytes(const std::string& id) const {
  if (!is_sha256_hex(id)) throw StoreError(StoreErrc::not_found, "no document with id '" + id + "'");
  auto bytes = read_bytes(doc_path(id));
  if (!bytes) throw StoreError(StoreErrc::not_found, "no document with id '" + id + "'");
  if (sha256_hex(*bytes) != id) {
    throw StoreError(StoreErrc::corrupt_document, "stored bytes of " + id + " do not match their id");
  }
  return *bytes;
}

SlaDocument SlaStore::get(const std::string& id) const {
  const std::string bytes = get_bytes(id);
  try {
    return parse(bytes);
  } catch (const ParseError& e) {
    throw StoreError(StoreErrc::corrupt_document, "stored document " + id + " does not parse: " + e.what());
  }
}

std::vector<StoredSlaSummary> SlaStore::list() const {
  auto entries = load_index(*this);
  std::sort(entries.begin(), entries.end(), summary_less);
  return entries;
}

void SlaStore::remove(const std::string& id) {
  if (!is_sha256_hex(id)) throw StoreError(StoreErrc::not_found, "no document with id '" + id + "'");
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) throw StoreError(StoreErrc::not_found, "no document with id '" + id + "'");

  LockFile lock(root_ / ".lock", options_);
  auto entries = load_index(*this);
  const auto before = entries.size();
  std::erase_if(entries, [&](const StoredSlaSummary& s) { return s.id == id; });
  const bool had_file = fs::exists(doc_path(id), ec);
  if (!had_file && entries.size() == before) {
    throw StoreError(StoreErrc::not_found, "no document with id '" + id + "'");
  }
  if (had_file && ::unlink(doc_path(id).c_str()) != 0 && errno != ENOENT) {
    io_error("cannot remove", doc_path(id));
  }
  write_atomically(root_ / "index.json", index_bytes(std::move(entries)));
}

std::vector<StoredSlaSummary> SlaStore::rescan() const {
  std::map<std::string, std::string> known_created;
  if (auto bytes = read_bytes(root_ / "index.json")) {
    try {
      for (const auto& s : parse_index(*bytes)) known_created[s.id] = s.created_at;
    } catch (const nlohmann::json::exception&) {
    }
  }

  std::vector<StoredSlaSummary> out;
  std::error_code ec;
  if (!fs::is_directory(root_ / "slas", ec)) return out;
  for (const auto& entry : fs::directory_iterator(root_ / "slas")) {
    const auto& p = entry.path();
    if (p.extension() != ".json" || !is_sha256_hex(p.stem().string())) continue;
    const std::string id = p.stem().string();
    auto bytes = read_bytes(p);
    if (!bytes || sha256_hex(*bytes) != id) {
      std::cerr << "warning: skipping corrupt stored document " << p << "\n";
      continue;
    }
    StoredSlaSummary s;
    s.id = id;
    s.size_bytes = bytes->size();
    try {
      s.application_type = parse(*bytes).header.application_type;
    } catch (const ParseError&) {
      std::cerr << "warning: skipping unparseable stored document " << p << "\n";
      continue;
    }
    if (auto it = known_created.find(id); it != known_created.end()) {
      s.created_at = it->second;
    } else {
      const auto mtime = fs::last_write_time(p, ec);
      const auto sys = std::chrono::file_clock::to_sys(mtime);
      s.created_at = format_utc_micros(sys);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), summary_less);
  return out;
}

void SlaStore::rebuild_index() {
  ensure_layout(root_);
  LockFile lock(root_ / ".lock", options_);
  write_atomically(root_ / "index.json", index_bytes(rescan()));
}

std::string put(const fs::path& store_root, const SlaDocument& doc) { return SlaStore(store_root).put(doc); }

SlaDocument get(const fs::path& store_root, const std::string& id) { return SlaStore(store_root).get(id); }

std::vector<StoredSlaSummary> list(const fs::path& store_root) { return SlaStore(store_root).list(); }

void remove(const fs::path& store_root, const std::string& id) { SlaStore(store_root).remove(id); }

}  // namespace slakit
