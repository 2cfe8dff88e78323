#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slakit::csv {

/// A parsed record together with the 1-based line on which it started.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// RFC-4180 reader. Quoted fields may contain separators, doubled quotes and
/// line breaks. A trailing CR before LF is tolerated. Blank lines are skipped.
/// Lines starting with '#' outside of a record are returned via `comments`
/// when non-null, and never appear as rows.
std::vector<Row> parse(std::string_view text, std::vector<std::string>* comments = nullptr);

/// Splits a pipe-separated cell ("lt|lte") into its parts; empty cell -> {}.
std::vector<std::string> split_pipe(std::string_view cell);

}  // namespace slakit::csv
