#include "youngfn/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "youngfn/errors.hpp"
#include "youngfn/format.hpp"

namespace youngfn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ValidationError("unknown key '" + k + "' in " + where);
}

double positive_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ValidationError("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("'" + key + "' must be positive");
  return v;
}

int int_in(const json& j, const std::string& key, int lo, int hi) {
  if (!j.is_number_integer()) throw ValidationError("'" + key + "' must be an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    throw ValidationError("'" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::string resolve(const std::string& base, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base) / p).lexically_normal().string();
}

std::vector<double> parse_range(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ValidationError("--range must look like a:b:n");
  const double a = parse_double(spec.substr(0, c1));
  const double b = parse_double(spec.substr(c1 + 1, c2 - c1 - 1));
  const std::string ns = spec.substr(c2 + 1);
  std::size_t used = 0;
  long n = 0;
  try {
    n = std::stol(ns, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != ns.size() || n < 1) throw ValidationError("--range count must be a positive integer");
  if (!(a > 0.0) || !(b >= a) || !std::isfinite(b)) throw ValidationError("--range needs 0 < a <= b");
  if (n == 1) return {a};
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double la = std::log(a), lb = std::log(b);
  for (long i = 0; i < n; ++i) xs[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
  xs.front() = a;
  xs.back() = b;
  return xs;
}

struct Loaded {
  std::optional<Config> cfg;
  std::optional<MeasureFamily> family;
  std::optional<ScaleSequence> scale;
  YoungFunction young;
};

Loaded load(const std::string& config_path, const std::string& artifact_path) {
  Loaded l;
  if (!config_path.empty()) {
    l.cfg = load_config(config_path);
    l.family = config_family(*l.cfg);
    l.scale = build_scale(*l.family, l.cfg->horizon);
    BuildOptions bo;
    bo.theta = l.cfg->theta;
    bo.epsilon = l.cfg->epsilon;
    bo.horizon = l.cfg->horizon;
    l.young = build_from_family(*l.family, bo);
  } else {
    l.young = deserialize(read_file(artifact_path));
  }
  return l;
}

void write_rows(std::ostream& out, const YoungFunction& y, const std::vector<double>& xs) {
  out << "x,U,U1,U2\n";
  for (double x : xs)
    out << format_double(x) << ',' << format_double(y(x)) << ',' << format_double(y.d1(x)) << ','
        << format_double(y.d2(x)) << '\n';
}

}  // namespace

Config parse_config(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(j, {"p", "theta", "epsilon", "measures", "horizon", "verify", "outputs"}, "config");
  Config c;
  if (j.contains("p")) c.p = positive_number(j["p"], "p");
  if (j.contains("theta")) {
    const json& t = j["theta"];
    if (t.is_string() && t.get<std::string>() == "sqrt") {
      c.theta = ThetaSpec::sqrt();
    } else if (t.is_object()) {
      require_keys(t, {"kind", "beta"}, "theta");
      const std::string kind = t.value("kind", "");
      if (kind == "sqrt") c.theta = ThetaSpec::sqrt();
      else if (kind == "power" && t.contains("beta")) {
        const double beta = positive_number(t["beta"], "beta");
        if (beta > 0.5) throw ValidationError("'beta' must lie in (0, 1/2]");
        c.theta = ThetaSpec::power(beta);
      } else {
        throw ValidationError("theta must be \"sqrt\" or {\"kind\": \"power\", \"beta\": b}");
      }
    } else {
      throw ValidationError("theta must be \"sqrt\" or {\"kind\": \"power\", \"beta\": b}");
    }
  }
  if (j.contains("epsilon")) {
    const double e = positive_number(j["epsilon"], "epsilon");
    if (!(e < 0.125)) throw ValidationError("'epsilon' must lie in (0, 1/8)");
    c.epsilon = e;
  }
  if (!j.contains("measures") || !j["measures"].is_string())
    throw ValidationError("'measures' must name the measures document");
  c.measures = resolve(base_dir, j["measures"].get<std::string>());
  if (j.contains("horizon")) c.horizon = int_in(j["horizon"], "horizon", 2, 64);
  if (j.contains("verify")) {
    const json& v = j["verify"];
    require_keys(v, {"per_decade", "window_points", "x_min", "top_index", "pair_points_per_octave",
                     "random_pairs", "seed"},
                 "verify");
    if (v.contains("per_decade")) c.verify.per_decade = int_in(v["per_decade"], "per_decade", 1, 100000);
    if (v.contains("window_points")) c.verify.window_points = int_in(v["window_points"], "window_points", 2, 100000);
    if (v.contains("x_min")) c.verify.x_min = positive_number(v["x_min"], "x_min");
    if (v.contains("top_index")) c.verify.top_index = int_in(v["top_index"], "top_index", 2, 64);
    if (v.contains("pair_points_per_octave"))
      c.verify.pair_points_per_octave = int_in(v["pair_points_per_octave"], "pair_points_per_octave", 1, 1024);
    if (v.contains("random_pairs")) c.verify.random_pairs = int_in(v["random_pairs"], "random_pairs", 1, 10000000);
    if (v.contains("seed")) {
      if (!v["seed"].is_number_unsigned()) throw ValidationError("'seed' must be a non-negative integer");
      c.verify.seed = v["seed"].get<std::uint64_t>();
    }
  }
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    require_keys(o, {"artifact", "report"}, "outputs");
    for (const char* key : {"artifact", "report"})
      if (o.contains(key) && !o[key].is_string()) throw ValidationError(std::string("'") + key + "' must be a path");
    if (o.contains("artifact")) c.artifact_out = resolve(base_dir, o["artifact"].get<std::string>());
    if (o.contains("report")) c.report_out = resolve(base_dir, o["report"].get<std::string>());
  }
  return c;
}

Config load_config(const std::string& path) {
  const std::string base = fs::path(path).parent_path().string();
  return parse_config(read_file(path), base.empty() ? "." : base);
}

MeasureFamily config_family(const Config& cfg) {
  const MeasureFamily doc = load_measure_family(cfg.measures);
  if (!cfg.p) return doc;
  return MeasureFamily(doc.members(), *cfg.p);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moderate C^2 Young functions from measure tails"};
  app.require_subcommand(1);

  std::string config, artifact, out_path, range;
  std::vector<std::string> xs;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* build = app.add_subcommand("build", "build a Young function artifact from a config");
  build->add_option("--config", config, "config JSON")->required();
  build->add_option("--out", out_path, "artifact path (overrides the config)");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  auto* vc = verify->add_option("--config", config, "config JSON");
  auto* va = verify->add_option("--artifact", artifact, "artifact JSON");
  vc->excludes(va);
  verify->add_option("--out", out_path, "report path (overrides the config)");
  verify->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "print x,U,U1,U2 rows");
  auto* ec = eval->add_option("--config", config, "config JSON");
  auto* ea = eval->add_option("--artifact", artifact, "artifact JSON");
  ec->excludes(ea);
  eval->add_option("x", xs, "arguments")->required();

  auto* tab = app.add_subcommand("tabulate", "write x,U,U1,U2 over a log range");
  auto* tc = tab->add_option("--config", config, "config JSON");
  auto* ta = tab->add_option("--artifact", artifact, "artifact JSON");
  tc->excludes(ta);
  tab->add_option("--range", range, "a:b:n, n log-spaced points")->required();
  tab->add_option("--out", out_path, "CSV path (default: standard output)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  auto need_source = [&] {
    if (config.empty() && artifact.empty()) throw ValidationError("one of --config or --artifact is required");
  };

  try {
    if (build->parsed()) {
      const Loaded l = load(config, "");
      const std::string text = serialize(l.young);
      const std::string path = !out_path.empty() ? out_path : l.cfg->artifact_out.value_or("");
      if (path.empty()) out << text << '\n';
      else write_file(path, text + "\n");
      return kExitOk;
    }

    if (verify->parsed()) {
      need_source();
      VerificationReport report;
      std::optional<std::string> report_path;
      if (!out_path.empty()) report_path = out_path;
      try {
        const Loaded l = load(config, artifact);
        if (!report_path && l.cfg) report_path = l.cfg->report_out;
        SuiteInputs in{&l.young, l.family ? &*l.family : nullptr, l.scale ? &*l.scale : nullptr};
        report = run_suite(in, l.cfg ? l.cfg->verify : VerifyOptions{}, jobs);
      } catch (const IntegrityError& e) {
        Check c;
        c.name = "artifact_integrity";
        c.anchor = "stored table agrees with the stored derivative";
        c.status = Status::Fail;
        c.detail = e.what();
        report.checks.push_back(c);
      }
      if (report_path) write_file(*report_path, report.to_json());
      out << report.to_table();
      std::size_t failed = 0;
      for (const auto& c : report.checks) failed += c.status == Status::Fail;
      out << (failed ? std::to_string(failed) + " check(s) failed\n" : "all checks passed\n");
      return failed ? kExitVerifyFailed : kExitOk;
    }

    if (eval->parsed()) {
      need_source();
      std::vector<double> pts;
      for (const auto& s : xs) pts.push_back(parse_double(s));
      const Loaded l = load(config, artifact);
      std::ostringstream rows;
      try {
        write_rows(rows, l.young, pts);
      } catch (const RangeError& e) {
        throw DomainError(e.what());
      }
      out << rows.str();
      return kExitOk;
    }

    if (tab->parsed()) {
      need_source();
      const auto pts = parse_range(range);
      const Loaded l = load(config, artifact);
      std::ostringstream csv;
      try {
        write_rows(csv, l.young, pts);
      } catch (const RangeError& e) {
        throw DomainError(e.what());
      }
      if (out_path.empty()) out << csv.str();
      else write_file(out_path, csv.str());
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConstructionError& e) {
    err << "construction failed: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace youngfn
