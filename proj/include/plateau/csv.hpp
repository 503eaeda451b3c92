#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "plateau/errors.hpp"

namespace plateau::csv {

// One metadata comment line ("# key=value;..."), a mandatory header, data
// rows, optional trailing comment lines. Values must not contain ',' or
// ';' or newlines; all payloads here are numeric or short tokens.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> trailing_comments;  // written as "# <line>"
};

std::string format_double(double x);  // shortest round-trip decimal

void write(std::ostream& os, const Table& table);
void write_file(const std::string& path, const Table& table);

Table read(std::istream& is);
Table read_file(const std::string& path);

// -1 when the column is absent.
int column_index(const Table& table, const std::string& name);
Eigen::ArrayXd column(const Table& table, const std::string& name);

Table from_columns(
    const std::vector<std::pair<std::string, Eigen::ArrayXd>>& columns);

}  // namespace plateau::csv
