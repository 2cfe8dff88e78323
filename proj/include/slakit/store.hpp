#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "slakit/composer.hpp"

namespace slakit {

struct StoredSlaSummary {
  std::string id;
  std::string application_type;
  std::string created_at;  // ISO-8601 UTC, assigned by the store
  std::uint64_t size_bytes = 0;

  bool operator==(const StoredSlaSummary&) const = default;
};

enum class StoreErrc { io_error, locked, not_found, corrupt_document };

std::string_view to_string(StoreErrc e);

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}
  StoreErrc code() const noexcept { return code_; }

 private:
  StoreErrc code_;
};

struct StoreOptions {
  std::chrono::milliseconds lock_timeout{5000};
  std::chrono::seconds stale_lock_age{60};
};

/// Content-addressed document collection on the filesystem:
///
///   <root>/slas/<id>.json   canonical bytes, id = SHA-256 of the bytes
///   <root>/index.json       array of summaries (id, application_type,
///                           created_at, size_bytes)
///   <root>/.lock            held around every mutation; holds pid and time
///
/// Readers never take the lock. All mutations are write-to-temp + rename.
class SlaStore {
 public:
  explicit SlaStore(std::filesystem::path root, StoreOptions options = {});

  const std::filesystem::path& root() const { return root_; }

  /// Idempotent: storing identical content again returns the same id and
  /// keeps the original created_at.
  std::string put(const SlaDocument& doc);

  SlaDocument get(const std::string& id) const;

  /// Stored bytes after the hash check.
  std::string get_bytes(const std::string& id) const;

  /// Sorted by (created_at, id).
  std::vector<StoredSlaSummary> list() const;

  void remove(const std::string& id);

  /// Summaries reconstructed from slas/ alone; created_at comes from the
  /// existing index when present, else the file modification time.
  std::vector<StoredSlaSummary> rescan() const;

  /// Replaces the index with rescan().
  void rebuild_index();

 private:
  std::filesystem::path doc_path(const std::string& id) const;

  std::filesystem::path root_;
  StoreOptions options_;
};

// Free-function surface over SlaStore with default options.
std::string put(const std::filesystem::path& store_root, const SlaDocument& doc);
SlaDocument get(const std::filesystem::path& store_root, const std::string& id);
std::vector<StoredSlaSummary> list(const std::filesystem::path& store_root);
void remove(const std::filesystem::path& store_root, const std::string& id);

}  // namespace slakit
