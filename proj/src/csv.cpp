#include "kncond/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kncond/error.hpp"

namespace kncond {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = line.find(sep, start);
    cells.push_back(trim(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end && !cell.empty();
}

double to_double(std::string_view cell, std::size_t line) {
  double v = 0.0;
  if (!parse_double(cell, v)) {
    throw InputError("line " + std::to_string(line) + ": not a number: '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) throw InputError("line " + std::to_string(line) + ": non-finite value");
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

// Non-empty lines, with '\r' stripped.
std::vector<std::pair<std::size_t, std::string>> lines_of(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    out.emplace_back(n, line);
  }
  return out;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text, char sep) {
  std::vector<double> out;
  for (auto cell : split(trim(text), sep)) out.push_back(to_double(cell, 1));
  return out;
}

Dist parse_dist_text(std::string_view text) {
  auto v = parse_number_list(text);
  try {
    return Dist(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid distribution '") + std::string(text) + "': " + e.what());
  }
}

Dist read_dist_csv(const std::string& path) {
  auto in = open(path);
  auto lines = lines_of(in);
  if (lines.size() != 1) throw InputError("'" + path + "': a distribution is a single CSV row");
  return parse_dist_text(lines.front().second);
}

Matrix read_matrix_csv(std::istream& in) {
  auto lines = lines_of(in);
  if (lines.empty()) throw InputError("empty table");
  std::vector<double> data;
  std::size_t cols = 0;
  for (const auto& [n, line] : lines) {
    auto cells = split(line, ',');
    if (cols == 0) cols = cells.size();
    if (cells.size() != cols) throw InputError("line " + std::to_string(n) + ": ragged row");
    for (auto c : cells) data.push_back(to_double(c, n));
  }
  return Matrix(lines.size(), cols, std::move(data));
}

Matrix read_matrix_csv(const std::string& path) {
  auto in = open(path);
  return read_matrix_csv(in);
}

ChannelFile read_channel_csv(std::istream& in) {
  auto lines = lines_of(in);
  if (lines.empty()) throw InputError("empty channel file");
  bool with_prior = false;
  auto first = split(lines.front().second, ',');
  double probe = 0.0;
  if (!parse_double(first.front(), probe)) {
    with_prior = first.front() == "prior";
    lines.erase(lines.begin());
    if (lines.empty()) throw InputError("channel file has a header but no rows");
  }
  std::vector<double> prior;
  std::vector<Dist> rows;
  std::size_t width = 0;
  for (const auto& [n, line] : lines) {
    auto cells = split(line, ',');
    std::vector<double> row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double v = to_double(cells[i], n);
      if (with_prior && i == 0) {
        prior.push_back(v);
      } else {
        row.push_back(v);
      }
    }
    if (width == 0) width = row.size();
    if (row.empty() || row.size() != width) throw InputError("line " + std::to_string(n) + ": ragged row");
    try {
      rows.emplace_back(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw InputError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  ChannelFile f{std::nullopt, Channel(std::move(rows))};
  if (with_prior) {
    try {
      f.prior = Dist(std::move(prior));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("prior column: ") + e.what());
    }
  }
  return f;
}

ChannelFile read_channel_csv(const std::string& path) {
  auto in = open(path);
  try {
    return read_channel_csv(in);
  } catch (const InputError& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

}  // namespace kncond
