#include "slakit/csv.hpp"

namespace slakit::csv {

std::vector<Row> parse(std::string_view text, std::vector<std::string>* comments) {
  std::vector<Row> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  const std::size_t n = text.size();

  // Skip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;

  while (pos < n) {
    if (text[pos] == '\n') {
      ++pos;
      ++line;
      continue;
    }
    if (text[pos] == '\r' && pos + 1 < n && text[pos + 1] == '\n') {
      pos += 2;
      ++line;
      continue;
    }
    if (text[pos] == '#') {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = n;
      std::string_view c = text.substr(pos + 1, end - pos - 1);
      if (!c.empty() && c.back() == '\r') c.remove_suffix(1);
      if (comments != nullptr) comments->emplace_back(c);
      pos = end;
      continue;
    }

    Row row;
    row.line = line;
    std::string field;
    bool done = false;
    while (!done) {
      field.clear();
      if (pos < n && text[pos] == '"') {
        ++pos;
        for (;;) {
          if (pos >= n) throw ParseError(row.line, "unterminated quoted field");
          char ch = text[pos];
          if (ch == '"') {
            if (pos + 1 < n && text[pos + 1] == '"') {
              field.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            break;
          }
          if (ch == '\n') ++line;
          field.push_back(ch);
          ++pos;
        }
        if (pos < n && text[pos] != ',' && text[pos] != '\n' &&
            !(text[pos] == '\r' && pos + 1 < n && text[pos + 1] == '\n')) {
          throw ParseError(line, "unexpected character after closing quote");
        }
      } else {
        while (pos < n && text[pos] != ',' && text[pos] != '\n') {
          if (text[pos] == '\r' && pos + 1 < n && text[pos + 1] == '\n') break;
          if (text[pos] == '"') throw ParseError(line, "quote inside unquoted field");
          field.push_back(text[pos]);
          ++pos;
        }
      }
      row.fields.push_back(field);

      if (pos >= n) {
        done = true;
      } else if (text[pos] == ',') {
        ++pos;
      } else {
        pos += (text[pos] == '\r') ? 2 : 1;
        ++line;
        done = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> split_pipe(std::string_view cell) {
  std::vector<std::string> out;
  if (cell.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t bar = cell.find('|', start);
    out.emplace_back(cell.substr(start, bar == std::string_view::npos ? cell.npos : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace slakit::csv
