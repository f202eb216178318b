#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cltlab/cli.hpp"

namespace cltlab::cli {

Table::Cell num(double v) {
  Table::Cell c;
  if (std::isfinite(v)) c.number = v;
  return c;
}
Table::Cell num(long v) { return num(static_cast<double>(v)); }
Table::Cell txt(std::string s) {
  Table::Cell c;
  c.text = std::move(s);
  c.is_text = true;
  return c;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != header.size()) throw std::logic_error("Table::add_row: row width does not match header");
  rows.push_back(std::move(row));
}

namespace {

std::string render(const Table::Cell& c) {
  if (c.is_text) return c.text;
  if (!c.number) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", *c.number);
  return buf;
}

}  // namespace

std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += render(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Table& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_csv(t);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read CSV " + path.string());
  const auto fields = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find('"') != std::string::npos) throw UsageError("malformed CSV: quoted fields are not supported (line " + std::to_string(lineno) + ")");
    if (lineno == 1) {
      t.header = fields(line);
      for (const auto& h : t.header)
        if (h.empty()) throw UsageError("malformed CSV: empty column name in header");
      continue;
    }
    if (line.empty()) continue;
    auto f = fields(line);
    if (f.size() != t.header.size()) {
      throw UsageError("malformed CSV: line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                       " fields, header has " + std::to_string(t.header.size()));
    }
    std::vector<Table::Cell> row;
    for (auto& s : f) {
      Table::Cell c;
      if (!s.empty()) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() + s.size() && std::isfinite(v)) {
          c.number = v;
        } else {
          c.text = s;
          c.is_text = true;
        }
      }
      row.push_back(std::move(c));
    }
    t.rows.push_back(std::move(row));
  }
  if (lineno == 0) throw UsageError("malformed CSV: empty file (no header)");
  return t;
}

}  // namespace cltlab::cli
