#pragma once

#include <string>
#include <vector>

#include "numvol/algebra.hpp"

namespace numvol::text {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

/// Splits "[section]" headers and "key = value" lines; '#' starts a comment.
std::vector<Section> parse_sections(const std::string& text);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

/// "[1, 2/3, -1]".
RatVec parse_list(const std::string& value, int line);
/// "[[1,0],[0,1]]"; an empty outer list "[]" is allowed.
std::vector<RatVec> parse_nested_list(const std::string& value, int line);

std::string read_file(const std::string& path);

}  // namespace numvol::text
