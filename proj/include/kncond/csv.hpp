#pragma once

// CSV ingestion for distributions, channels and gain tables.
//
//   dist:     one row of comma-separated decimals
//   channel:  row i is p_{Y|X}(.|x_i); an optional header row whose first
//             cell is "prior" marks the first column as the prior p_X
//   table:    rectangular numeric CSV (gain tables: rows = x, columns = a)

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kncond/prob.hpp"

namespace kncond {

struct ChannelFile {
  std::optional<Dist> prior;
  Channel channel;
};

// "0.9,0.1" -> Dist. Throws InputError on malformed text.
Dist parse_dist_text(std::string_view text);
std::vector<double> parse_number_list(std::string_view text, char sep = ',');

Dist read_dist_csv(const std::string& path);
ChannelFile read_channel_csv(std::istream& in);
ChannelFile read_channel_csv(const std::string& path);
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::string& path);

}  // namespace kncond
