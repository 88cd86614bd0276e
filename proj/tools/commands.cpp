#include "commands.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "numvol/cycle_volume.hpp"
#include "numvol/divisor_volume.hpp"
#include "numvol/errors.hpp"
#include "numvol/toric.hpp"
#include "numvol/verify.hpp"
#include "numvol/zariski.hpp"

namespace numvol::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr const char* kVersion = "0.1.0";

struct Options {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int starts = 16;
  int max_iter = 1000;
  double fd_step = 1e-5;
  std::string format = "json";
  std::string variety, fan, file;
  std::vector<std::string> params;
  std::string cls, curve, gamma, ample;
  std::string eps = "1e-4:1e-1:logsteps=12";
  bool fit = false;
  bool nef_slice = false;
  std::string suite = "all";
  double sample_scale = 1.0;
};

struct Loaded {
  NumericalVariety variety;
  Json identity;
};

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::map<std::string, int> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, int> out;
  static const std::regex pattern(R"(([A-Za-z]+)=(-?[0-9]+))");
  for (const auto& p : raw) {
    std::smatch m;
    if (!std::regex_match(p, m, pattern)) throw ArgumentError("--param expects key=integer, got '" + p + "'");
    out[m[1]] = std::stoi(m[2]);
  }
  return out;
}

Loaded load(const Options& o) {
  int sources = !o.variety.empty() + !o.fan.empty() + !o.file.empty();
  if (sources == 0) throw ArgumentError("no variety given: use --variety <name|path>, --file <path> or --fan <path>");
  if (sources > 1) throw ArgumentError("give only one of --variety, --file, --fan");
  Loaded out;
  if (!o.fan.empty()) {
    std::string bytes = read_bytes(o.fan);
    out.variety = toric_variety(parse_fan(bytes), std::nullopt, {}, std::filesystem::path(o.fan).stem().string());
    out.identity = {{"name", out.variety.name}, {"source", "fan"}, {"path", o.fan}, {"hash", fnv1a(bytes)}};
    return out;
  }
  std::string path = o.file;
  if (path.empty() && std::filesystem::is_regular_file(o.variety)) path = o.variety;
  if (!path.empty()) {
    std::string bytes = read_bytes(path);
    out.variety = parse_variety(bytes);
    out.identity = {{"name", out.variety.name}, {"source", "file"}, {"path", path}, {"hash", fnv1a(bytes)}};
    return out;
  }
  auto params = parse_params(o.params);
  out.variety = catalog(o.variety, params);
  out.identity = {{"name", out.variety.name}, {"source", "catalog"}, {"params", params}};
  return out;
}

Json rational_json(const Rational& q) { return format_rational(q); }

Json vector_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(format_rational(q));
  return a;
}

Json cone_json(const PolyhedralCone& c) {
  Json gens = Json::array(), facets = Json::array();
  for (const auto& g : c.generators()) gens.push_back(vector_json(g));
  for (const auto& f : c.facets()) facets.push_back(vector_json(f));
  return {{"generators", gens}, {"facets", facets}};
}

Json opt_json(const OptResult& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["kkt_gap"] = r.kkt_gap;
  j["iterations"] = r.iterations;
  j["starts_used"] = r.starts_used;
  j["argmin"] = r.argmin;
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  return j;
}

OptConfig config_of(const Options& o) {
  if (o.starts < 1) throw ArgumentError("--starts must be at least 1");
  if (o.max_iter < 1) throw ArgumentError("--max-iter must be at least 1");
  if (!(o.tol > 0)) throw ArgumentError("--tol must be positive");
  if (!(o.fd_step > 0)) throw ArgumentError("--fd-step must be positive");
  return {o.starts, o.max_iter, o.tol, o.seed, o.fd_step};
}

RatVec require_coords(const std::string& text, const char* flag, const NumericalVariety& v) {
  if (text.empty()) throw ArgumentError(std::string("missing ") + flag);
  return parse_coords(text, v.rank);
}

Json profile(const NumericalVariety& v) {
  Json entries = Json::object();
  for (const auto& [index, value] : v.intersection.entries()) {
    std::string key;
    for (std::size_t i = 0; i < index.size(); ++i) key += (i ? "," : "") + std::to_string(index[i]);
    entries[key] = format_rational(value);
  }
  Json curves = Json::array();
  for (const auto& c : v.negative_curves) curves.push_back({{"label", c.label}, {"coords", vector_json(c.coords)}});
  return {{"name", v.name},
          {"dim", v.dim},
          {"rank", v.rank},
          {"basis", v.basis},
          {"intersection", entries},
          {"nef", cone_json(v.nef)},
          {"psef", cone_json(v.psef)},
          {"mori", cone_json(v.mori)},
          {"movable", cone_json(v.movable)},
          {"negative_curves", curves},
          {"oracle", to_string(v.oracle)},
          {"nef_tangent_bundle", v.nef_tangent_bundle}};
}

Json volume_json(const NumericalVariety& v, const RatVec& alpha) {
  auto r = vol(v, alpha);
  return {{"value", format_rational(r.value)},
          {"value_float", to_double(r.value)},
          {"method", r.method.rfind("oracle", 0) == 0 ? "oracle" : "tensor"},
          {"detail", r.method},
          {"status", "exact"}};
}

Json cyclevol_json(const NumericalVariety& v, const RatVec& gamma, const OptConfig& cfg) {
  auto r = vol_hat(v, gamma, cfg);
  Json j = {{"value", r.value}, {"method", "optimizer"}};
  j.update(opt_json(r.opt));
  return j;
}

Json minv_json(const NumericalVariety& v, const RatVec& gamma, const OptConfig& cfg, bool nef_slice) {
  auto r = nef_slice ? m_invariant_nef_slice(v, gamma, cfg) : m_invariant(v, gamma, cfg);
  Json j = {{"value", r.value}, {"method", "optimizer"}, {"volume_evaluator", r.method}, {"upper_bound", r.upper_bound}};
  j.update(opt_json(r.opt));
  return j;
}

Json mobbound_json(const NumericalVariety& v, const RatVec& gamma, const OptConfig& cfg) {
  auto r = mobility_upper_bound(v, gamma, cfg);
  Json j = {{"value", r.bound}, {"constant", r.constant}, {"vol_hat", r.vol_hat}, {"method", "optimizer"}};
  j.update(opt_json(r.opt));
  return j;
}

Json zariski_json(const NumericalVariety& v, const RatVec& gamma) {
  auto z = zariski_decompose(v, gamma);
  Json negative = Json::array();
  RatVec rebuilt = z.positive;
  bool orthogonal = true;
  for (std::size_t k = 0; k < z.support.size(); ++k) {
    const auto& c = v.negative_curves[z.support[k]];
    negative.push_back({{"curve", c.label}, {"coeff", format_rational(z.negative[k].second)}});
    for (int j = 0; j < v.rank; ++j) rebuilt[j] += z.negative[k].second * c.coords[j];
    orthogonal = orthogonal && dot(v.intersection.polar(z.positive), c.coords) == 0;
  }
  Rational square = v.intersection.power(z.positive);
  return {{"positive", vector_json(z.positive)},
          {"negative", negative},
          {"volume", format_rational(square)},
          {"method", "oracle"},
          {"checks",
           {{"sum_equals_class", rebuilt == gamma},
            {"positive_is_nef", v.nef.contains(z.positive)},
            {"positive_orthogonal_to_support", orthogonal},
            {"support_negative_definite", true}}}};
}

std::vector<double> parse_eps(const std::string& text) {
  static const std::regex pattern(R"(([^:]+):([^:]+):logsteps=([0-9]+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw ArgumentError("--eps expects lo:hi:logsteps=k, got '" + text + "'");
  try {
    return log_grid(std::stod(m[1]), std::stod(m[2]), std::stoi(m[3]));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ArgumentError*>(&e)) throw;
    throw ArgumentError("--eps bounds are not numbers: '" + text + "'");
  }
}

class Runner {
 public:
  Runner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
      : args_(args), out_(out), err_(err), started_(std::chrono::steady_clock::now()) {}

  int run() {
    CLI::App app{"Numerical volume functionals for divisor and curve classes", "numvol"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", o_.seed, "Base seed; start i uses seed + i");
    app.add_option("--tol", o_.tol, "Optimizer KKT tolerance");
    app.add_option("--starts", o_.starts, "Optimizer multi-start count");
    app.add_option("--max-iter", o_.max_iter, "Iterations per start");
    app.add_option("--fd-step", o_.fd_step, "Relative finite-difference step");
    app.add_option("--format", o_.format, "json or csv (csv only for sweep)")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--variety", o_.variety, "Catalog name or path to a variety file");
    app.add_option("--file", o_.file, "Path to a variety file");
    app.add_option("--fan", o_.fan, "Path to a fan file");
    app.add_option("--param", o_.params, "Catalog parameter key=value (repeatable)");

    auto* catalog_cmd = app.add_subcommand("catalog", "List catalog entries, or print a variety profile");
    auto* report = app.add_subcommand("report", "Evaluate every functional on a class and/or curve");
    report->add_option("--class", o_.cls, "Divisor class coordinates");
    report->add_option("--curve", o_.curve, "Curve class coordinates");
    auto* volume = app.add_subcommand("volume", "Volume of a divisor class");
    volume->add_option("--class", o_.cls)->required();
    auto* cyclevol = app.add_subcommand("cyclevol", "Volume functional of a curve class");
    cyclevol->add_option("--curve", o_.curve)->required();
    auto* minv = app.add_subcommand("minv", "Invariant over the unit-volume psef slice");
    minv->add_option("--curve", o_.curve)->required();
    minv->add_flag("--nef-slice", o_.nef_slice, "Restrict to the nef slice (upper bound)");
    auto* dualvol = app.add_subcommand("dualvol", "Volume through the duality characterization");
    dualvol->add_option("--class", o_.cls)->required();
    auto* zariski = app.add_subcommand("zariski", "Zariski decomposition on a surface");
    zariski->add_option("--class", o_.cls)->required();
    auto* sweep = app.add_subcommand("sweep", "Volume functional along gamma + eps A^{n-1}");
    sweep->add_option("--gamma", o_.gamma)->required();
    sweep->add_option("--ample", o_.ample)->required();
    sweep->add_option("--eps", o_.eps, "lo:hi:logsteps=k");
    sweep->add_flag("--fit", o_.fit, "Fit the log-log slope");
    auto* mobbound = app.add_subcommand("mobbound", "Upper bound for the mobility of a curve class");
    mobbound->add_option("--curve", o_.curve)->required();
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--suite", o_.suite)->check(CLI::IsMember(suite_names()));
    verify->add_option("--sample-scale", o_.sample_scale, "Multiplier on sample counts");

    try {
      std::vector<std::string> reversed(args_.rbegin(), args_.rend());
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e, out_, err_);
      return code == 0 ? 0 : 2;
    }

    try {
      if (o_.format == "csv" && !sweep->parsed()) throw ArgumentError("csv output is only available for sweep");
      if (catalog_cmd->parsed()) return cmd_catalog();
      if (verify->parsed()) return cmd_verify();
      Loaded loaded = load(o_);
      const auto& v = loaded.variety;
      OptConfig cfg = config_of(o_);
      Json result;
      std::string name;
      if (report->parsed()) {
        name = "report";
        result = cmd_report(v, cfg);
      } else if (volume->parsed()) {
        name = "volume";
        result = volume_json(v, require_coords(o_.cls, "--class", v));
      } else if (cyclevol->parsed()) {
        name = "cyclevol";
        result = cyclevol_json(v, require_coords(o_.curve, "--curve", v), cfg);
      } else if (minv->parsed()) {
        name = "minv";
        result = minv_json(v, require_coords(o_.curve, "--curve", v), cfg, o_.nef_slice);
      } else if (dualvol->parsed()) {
        name = "dualvol";
        auto d = vol_via_duality(v, require_coords(o_.cls, "--class", v), cfg);
        result = {{"value", d.value},
                  {"method", "optimizer"},
                  {"reference", d.reference},
                  {"reference_method", d.reference_method.rfind("oracle", 0) == 0 ? "oracle" : "tensor"},
                  {"relative_gap", d.reference > 0 ? std::abs(d.value - d.reference) / d.reference : std::abs(d.value)}};
        result.update(opt_json(d.outer));
      } else if (zariski->parsed()) {
        name = "zariski";
        result = zariski_json(v, require_coords(o_.cls, "--class", v));
      } else if (mobbound->parsed()) {
        name = "mobbound";
        result = mobbound_json(v, require_coords(o_.curve, "--curve", v), cfg);
      } else if (sweep->parsed()) {
        return cmd_sweep(loaded, cfg);
      }
      emit(name, loaded.identity, result);
      return 0;
    } catch (const ParseError& e) {
      err_ << "error: " << e.what() << "\n";
    } catch (const ArgumentError& e) {
      err_ << "error: " << e.what() << "\n";
    } catch (const NefOnlyError& e) {
      err_ << "error: " << e.what() << "\n";
    } catch (const InvariantError& e) {
      err_ << "error: invariant violated: " << e.what() << "\n";
    }
    return 2;
  }

 private:
  Json manifest(const Json& identity) const {
    std::string line = "numvol";
    for (const auto& a : args_) line += " " + a;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    return {{"command_line", line},
            {"variety", identity},
            {"seed", o_.seed},
            {"tolerances", {{"tol", o_.tol}, {"fd_step", o_.fd_step}, {"starts", o_.starts}, {"max_iter", o_.max_iter}}},
            {"version", kVersion},
            {"wall_clock_seconds", elapsed}};
  }

  void emit(const std::string& command, const Json& identity, const Json& result) {
    Json doc = {{"command", command}, {"result", result}, {"manifest", manifest(identity)}};
    out_ << doc.dump(2) << "\n";
  }

  int cmd_catalog() {
    if (o_.variety.empty() && o_.file.empty() && o_.fan.empty()) {
      emit("catalog", nullptr, {{"entries", catalog_names()}});
      return 0;
    }
    Loaded loaded = load(o_);
    emit("catalog", loaded.identity, profile(loaded.variety));
    return 0;
  }

  Json cmd_report(const NumericalVariety& v, const OptConfig& cfg) {
    if (o_.cls.empty() && o_.curve.empty()) throw ArgumentError("report needs --class and/or --curve");
    Json j = Json::object();
    if (!o_.cls.empty()) {
      RatVec alpha = parse_coords(o_.cls, v.rank);
      Json c = {{"coords", vector_json(alpha)},
                {"nef", v.nef.contains(alpha)},
                {"ample", v.nef.is_interior(alpha)},
                {"pseudo_effective", v.psef.contains(alpha)},
                {"big", v.psef.is_interior(alpha)}};
      try {
        c["vol"] = volume_json(v, alpha);
      } catch (const NefOnlyError& e) {
        c["vol"] = {{"error", e.what()}};
      }
      if (v.dim == 2 && v.psef.contains(alpha)) c["zariski"] = zariski_json(v, alpha);
      j["class"] = c;
    }
    if (!o_.curve.empty()) {
      RatVec gamma = parse_coords(o_.curve, v.rank);
      Json c = {{"coords", vector_json(gamma)},
                {"in_mori_cone", v.mori.contains(gamma)},
                {"interior_mori_cone", v.mori.is_interior(gamma)},
                {"movable", v.movable.contains(gamma)}};
      c["vol_hat"] = cyclevol_json(v, gamma, cfg);
      if (v.oracle != VolumeOracle::NefOnly)
        c["minv"] = minv_json(v, gamma, cfg, false);
      else
        c["minv_nef_slice"] = minv_json(v, gamma, cfg, true);
      c["mobility_bound"] = mobbound_json(v, gamma, cfg);
      j["curve"] = c;
    }
    return j;
  }

  int cmd_sweep(const Loaded& loaded, const OptConfig& cfg) {
    const auto& v = loaded.variety;
    auto grid = parse_eps(o_.eps);
    auto r = boundary_sweep(v, require_coords(o_.gamma, "--gamma", v), require_coords(o_.ample, "--ample", v), grid, cfg);
    if (o_.format == "csv") {
      out_ << "eps,vol_hat\n";
      out_ << std::setprecision(17);
      for (const auto& p : r.points) out_ << p.eps << "," << p.value << "\n";
      if (o_.fit) out_ << "# slope," << (r.slope ? std::to_string(*r.slope) : "undefined") << "\n";
      return 0;
    }
    Json points = Json::array();
    for (const auto& p : r.points) points.push_back({{"eps", p.eps}, {"vol_hat", p.value}, {"status", to_string(p.status)}});
    Json result = {{"points", points}, {"method", "optimizer"}};
    if (o_.fit) {
      result["slope"] = r.slope ? Json(*r.slope) : Json(nullptr);
      result["slope_defined"] = r.slope.has_value();
      result["fitted_points"] = r.fitted_points;
      result["bound_exponent"] = 1.0 / (v.dim - 1);
    }
    emit("sweep", loaded.identity, result);
    return 0;
  }

  int cmd_verify() {
    VerifyOptions options;
    options.suite = o_.suite;
    options.config = config_of(o_);
    options.sample_scale = o_.sample_scale;
    Json identity = nullptr;
    if (!o_.variety.empty() || !o_.file.empty() || !o_.fan.empty()) {
      Loaded loaded = load(o_);
      options.varieties.push_back(loaded.variety);
      identity = loaded.identity;
    }
    auto report = run_verify(options);
    Json checks = Json::array();
    for (const auto& c : report.checks)
      checks.push_back({{"suite", c.suite},
                        {"variety", c.variety},
                        {"name", c.name},
                        {"measured", c.measured},
                        {"relation", c.relation},
                        {"bound", c.bound},
                        {"pass", c.pass}});
    for (const auto& w : report.warnings) err_ << "warning: " << w << "\n";
    emit("verify", identity, {{"suite", o_.suite}, {"passed", report.passed()}, {"checks", checks}, {"warnings", report.warnings}});
    return report.passed() ? 0 : 1;
  }

  const std::vector<std::string>& args_;
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point started_;
  Options o_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(args, out, err).run();
}

}  // namespace numvol::cli
