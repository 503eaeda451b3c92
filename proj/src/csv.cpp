#include "plateau/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace plateau::csv {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

void write(std::ostream& os, const Table& table) {
  if (table.header.empty()) throw DomainError("csv: header is mandatory");
  if (!table.metadata.empty()) {
    os << "# ";
    for (std::size_t i = 0; i < table.metadata.size(); ++i) {
      if (i) os << ';';
      os << table.metadata[i].first << '=' << table.metadata[i].second;
    }
    os << '\n';
  }
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) os << ',';
    os << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw DomainError("csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  for (const auto& line : table.trailing_comments) os << "# " << line << '\n';
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("csv: cannot open for writing: " + path);
  write(out, table);
  if (!out) throw DomainError("csv: write failed: " + path);
}

Table read(std::istream& is) {
  Table table;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      if (!have_header && table.metadata.empty() &&
          body.find('=') != std::string::npos) {
        for (const auto& item : split(body, ';')) {
          const std::size_t eq = item.find('=');
          if (eq == std::string::npos) continue;
          table.metadata.emplace_back(trim(item.substr(0, eq)),
                                      trim(item.substr(eq + 1)));
        }
      } else {
        table.trailing_comments.push_back(body);
      }
      continue;
    }
    if (!have_header) {
      table.header = split(line, ',');
      have_header = true;
    } else {
      table.rows.push_back(split(line, ','));
    }
  }
  if (!have_header) throw DomainError("csv: no header line found");
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("csv: cannot open for reading: " + path);
  return read(in);
}

int column_index(const Table& table, const std::string& name) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    if (table.header[i] == name) return static_cast<int>(i);
  return -1;
}

Eigen::ArrayXd column(const Table& table, const std::string& name) {
  const int idx = column_index(table, name);
  if (idx < 0) throw DomainError("csv: missing column: " + name);
  Eigen::ArrayXd out(static_cast<Eigen::Index>(table.rows.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& cell = table.rows[r][static_cast<std::size_t>(idx)];
    char* end = nullptr;
    const double value = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
      throw DomainError("csv: non-numeric cell in column " + name + ": " +
                        cell);
    out[static_cast<Eigen::Index>(r)] = value;
  }
  return out;
}

Table from_columns(
    const std::vector<std::pair<std::string, Eigen::ArrayXd>>& columns) {
  if (columns.empty()) throw DomainError("csv: no columns");
  Table table;
  const Eigen::Index n = columns.front().second.size();
  for (const auto& col : columns) {
    if (col.second.size() != n)
      throw DomainError("csv: column length mismatch: " + col.first);
    table.header.push_back(col.first);
  }
  table.rows.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    std::vector<std::string> row;
    row.reserve(columns.size());
    for (const auto& col : columns) row.push_back(format_double(col.second[r]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace plateau::csv
