#include "text_format.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "numvol/errors.hpp"

namespace numvol::text {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<Section> parse_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw = raw.substr(0, hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[' && s.back() == ']' && s.find('=') == std::string::npos) {
      sections.push_back({trim(s.substr(1, s.size() - 2)), line, {}});
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value' or '[section]'", line);
    if (sections.empty()) throw ParseError("entry outside of any section", line);
    Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) throw ParseError("empty key", line);
    if (e.value.empty()) throw ParseError("empty value for key '" + e.key + "'", line);
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

RatVec parse_list(const std::string& raw, int line) {
  std::string v = trim(raw);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ParseError("expected a bracketed list", line);
  std::string inner = trim(v.substr(1, v.size() - 2));
  RatVec out;
  if (inner.empty()) return out;
  for (const auto& piece : split(inner, ',')) {
    try {
      out.push_back(parse_rational(piece));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
  }
  return out;
}

std::vector<RatVec> parse_nested_list(const std::string& raw, int line) {
  std::string v = trim(raw);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ParseError("expected a list of lists", line);
  std::string inner = trim(v.substr(1, v.size() - 2));
  std::vector<RatVec> out;
  std::size_t pos = 0;
  while (pos < inner.size()) {
    while (pos < inner.size() && (std::isspace(static_cast<unsigned char>(inner[pos])) || inner[pos] == ',')) ++pos;
    if (pos >= inner.size()) break;
    if (inner[pos] != '[') throw ParseError("expected '[' in list of lists", line);
    auto close = inner.find(']', pos);
    if (close == std::string::npos) throw ParseError("unterminated inner list", line);
    out.push_back(parse_list(inner.substr(pos, close - pos + 1), line));
    pos = close + 1;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace numvol::text
