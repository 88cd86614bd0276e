#include <set>
#include <sstream>

#include "numvol/errors.hpp"
#include "numvol/varieties.hpp"
#include "text_format.hpp"

namespace numvol {

namespace {

int parse_int(const text::Entry& e) {
  Rational q;
  try {
    q = parse_rational(e.value);
  } catch (const ParseError& err) {
    throw ParseError(err.what(), e.line);
  }
  if (denominator(q) != 1) throw ParseError("'" + e.key + "' must be an integer", e.line);
  return numerator(q).convert_to<int>();
}

bool parse_bool(const text::Entry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ParseError("'" + e.key + "' must be true or false", e.line);
}

std::string list(const RatVec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_rational(v[i]);
  return s + "]";
}

}  // namespace

NumericalVariety parse_variety(const std::string& content) {
  auto sections = text::parse_sections(content);
  if (sections.empty()) throw ParseError("variety file is empty");
  VarietyData data;
  int rank = -1;
  std::set<std::string> seen_sections, seen_keys;
  bool has_nef = false, has_psef = false;
  for (const auto& section : sections) {
    if (!seen_sections.insert(section.name).second)
      throw ParseError("duplicate section [" + section.name + "]", section.line);
    for (const auto& e : section.entries) {
      if (section.name == "variety") {
        if (!seen_keys.insert(e.key).second) throw ParseError("duplicate key '" + e.key + "'", e.line);
        if (e.key == "name") {
          data.name = e.value;
        } else if (e.key == "dim") {
          data.dim = parse_int(e);
        } else if (e.key == "rank") {
          rank = parse_int(e);
        } else if (e.key == "basis") {
          data.basis = text::split(e.value, ',');
          for (const auto& label : data.basis)
            if (label.empty()) throw ParseError("empty basis label", e.line);
        } else if (e.key == "nef_tangent_bundle") {
          data.nef_tangent_bundle = parse_bool(e);
        } else {
          throw ParseError("unknown key '" + e.key + "' in [variety]", e.line);
        }
      } else if (section.name == "intersection") {
        MultiIndex idx;
        for (const auto& piece : text::split(e.key, ',')) {
          text::Entry tmp{piece, piece, e.line};
          idx.push_back(parse_int(tmp));
        }
        if (!std::is_sorted(idx.begin(), idx.end()))
          throw ParseError("intersection indices must be sorted: '" + e.key + "'", e.line);
        if (data.dim > 0 && static_cast<int>(idx.size()) != data.dim)
          throw ParseError("intersection entry '" + e.key + "' does not have dim indices", e.line);
        for (int i : idx)
          if (i < 0 || (rank > 0 && i >= rank)) throw ParseError("intersection index out of range", e.line);
        if (data.intersection.count(idx)) throw ParseError("duplicate intersection entry '" + e.key + "'", e.line);
        try {
          data.intersection[idx] = parse_rational(e.value);
        } catch (const ParseError& err) {
          throw ParseError(err.what(), e.line);
        }
      } else if (section.name == "cones") {
        if (e.key == "nef") {
          data.nef_generators = text::parse_nested_list(e.value, e.line);
          has_nef = true;
        } else if (e.key == "psef") {
          data.psef_generators = text::parse_nested_list(e.value, e.line);
          has_psef = true;
        } else {
          throw ParseError("unknown key '" + e.key + "' in [cones]", e.line);
        }
        for (const auto& g : e.key == "nef" ? data.nef_generators : data.psef_generators)
          if (rank > 0 && static_cast<int>(g.size()) != rank)
            throw ParseError("generator length does not match rank", e.line);
      } else if (section.name == "negative_curves") {
        auto coords = text::parse_list(e.value, e.line);
        if (rank > 0 && static_cast<int>(coords.size()) != rank)
          throw ParseError("negative curve length does not match rank", e.line);
        data.negative_curves.push_back({e.key, coords});
      } else {
        throw ParseError("unknown section [" + section.name + "]", section.line);
      }
    }
    if (section.name != "variety" && section.name != "intersection" && section.name != "cones" &&
        section.name != "negative_curves")
      throw ParseError("unknown section [" + section.name + "]", section.line);
  }
  for (const char* key : {"name", "dim", "rank", "basis"})
    if (!seen_keys.count(key)) throw ParseError(std::string("[variety] is missing '") + key + "'");
  if (rank != static_cast<int>(data.basis.size())) throw ParseError("rank does not match the number of basis labels");
  if (!has_nef || !has_psef) throw ParseError("[cones] needs both nef and psef");
  if (data.intersection.empty()) throw ParseError("[intersection] has no entries");
  for (const auto& [idx, value] : data.intersection)
    if (static_cast<int>(idx.size()) != data.dim) throw ParseError("intersection entry arity does not match dim");
  return make_variety(data);
}

NumericalVariety load_variety(const std::string& path) { return parse_variety(text::read_file(path)); }

std::string serialize_variety(const NumericalVariety& v) {
  std::ostringstream out;
  out << "[variety]\nname = " << v.name << "\ndim = " << v.dim << "\nrank = " << v.rank << "\nbasis = ";
  for (std::size_t i = 0; i < v.basis.size(); ++i) out << (i ? ", " : "") << v.basis[i];
  out << "\nnef_tangent_bundle = " << (v.nef_tangent_bundle ? "true" : "false") << "\n\n[intersection]\n";
  for (const auto& [idx, value] : v.intersection.entries()) {
    for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << idx[i];
    out << " = " << format_rational(value) << "\n";
  }
  auto nested = [](const std::vector<RatVec>& gens) {
    std::string s = "[";
    for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? "," : "") + list(gens[i]);
    return s + "]";
  };
  out << "\n[cones]\nnef = " << nested(v.nef.generators()) << "\npsef = " << nested(v.psef.generators()) << "\n";
  if (!v.negative_curves.empty()) {
    out << "\n[negative_curves]\n";
    for (const auto& c : v.negative_curves) out << c.label << " = " << list(c.coords) << "\n";
  }
  return out.str();
}

}  // namespace numvol
