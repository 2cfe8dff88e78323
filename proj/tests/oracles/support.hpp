// Shared fixtures for the unit and acceptance suites.
#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace support {

namespace fs = std::filesystem;

inline fs::path source_dir() { return SLAKIT_SOURCE_DIR; }
inline fs::path default_catalog() { return source_dir() / "catalog"; }
inline fs::path data_dir() { return source_dir() / "tests" / "data"; }
inline std::string sla_binary() { return SLA_BINARY; }

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& bytes) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

/// Fresh directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("slakit-test-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

/// Copy of the shipped catalog that a test may modify.
inline fs::path copy_catalog(const TempDir& dir) {
  const fs::path dest = dir / "catalog";
  fs::copy(default_catalog(), dest, fs::copy_options::recursive);
  return dest;
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

/// Runs a shell command; captures stdout, leaves stderr alone unless the
/// command redirects it.
inline CommandResult run_command(const std::string& command) {
  CommandResult r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

/// SHA-256 from the coreutils tool, independent of the library digest.
inline std::string external_sha256(const fs::path& file) {
  auto r = run_command("sha256sum " + quote(file.string()));
  if (r.exit_code != 0 || r.out.size() < 64) throw std::runtime_error("sha256sum failed");
  return r.out.substr(0, 64);
}

}  // namespace support
