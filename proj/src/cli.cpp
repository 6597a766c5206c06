#include "dhls/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dhls/errors.hpp"

namespace dhls {

namespace {

constexpr int kSchemaVersion = 1;

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string jstr(const std::string& s) { return "\"" + json_escape(s) + "\""; }

const char* convention_name(Convention c) {
  return c == Convention::Unit ? "unit" : "centered";
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string config_json(const RunConfig& cfg) {
  std::string out = "{";
  out += "\"n\":" + std::to_string(cfg.n);
  out += ",\"N\":[";
  for (std::size_t i = 0; i < cfg.N_values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(cfg.N_values[i]);
  }
  out += "]";
  out += ",\"convention\":" + jstr(convention_name(cfg.convention));
  out += ",\"tol\":" + format_double(cfg.tol);
  out += ",\"max_iter\":" + std::to_string(cfg.max_iter);
  out += ",\"shift\":" + format_double(cfg.shift);
  out += ",\"dense_limit\":" + std::to_string(cfg.dense_limit);
  out += ",\"seed\":" + std::to_string(cfg.seed);
  out += std::string(",\"deterministic\":") +
         (cfg.deterministic ? "true" : "false");
  out += ",\"format\":" + jstr(cfg.format);
  out += ",\"output\":" + jstr(cfg.output);
  out += "}";
  return out;
}

std::string validate_config(const RunConfig& cfg, const std::string& command) {
  std::vector<std::string> problems;
  if (cfg.n < 1 || cfg.n > kMaxDimension)
    problems.push_back("n must be in [1, " + std::to_string(kMaxDimension) +
                       "], got " + std::to_string(cfg.n));
  if (cfg.N_values.empty()) problems.push_back("at least one N is required");
  for (int N : cfg.N_values)
    if (N < 1) problems.push_back("N must be >= 1, got " + std::to_string(N));
  if (command == "sweep") {
    for (std::size_t i = 1; i < cfg.N_values.size(); ++i)
      if (cfg.N_values[i] <= cfg.N_values[i - 1]) {
        problems.push_back("sweep N values must be strictly increasing");
        break;
      }
  } else if (cfg.N_values.size() != 1) {
    problems.push_back(command + " takes exactly one N");
  }
  if (!(cfg.tol > 0.0)) problems.push_back("tol must be > 0");
  if (cfg.max_iter < 1) problems.push_back("max_iter must be >= 1");
  if (cfg.shift < 0.0) problems.push_back("shift must be >= 0");
  if (cfg.dense_limit < 1) problems.push_back("dense_limit must be >= 1");
  if (cfg.format != "json" && cfg.format != "csv")
    problems.push_back("format must be json or csv, got " + cfg.format);
  if (command == "decay" && cfg.convention != Convention::Centered)
    problems.push_back("decay requires the centered convention");
  if (command == "verify" && cfg.convention != Convention::Unit)
    problems.push_back("verify runs on the unit convention");

  if (problems.empty()) return {};
  std::string msg = "invalid configuration:";
  for (const std::string& p : problems) msg += "\n  - " + p;
  return msg;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
  if (!j.is_object())
    throw std::runtime_error("config file " + path + ": expected an object");

  try {
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("N")) {
      if (j.at("N").is_array())
        cfg.N_values = j.at("N").get<std::vector<int>>();
      else
        cfg.N_values = {j.at("N").get<int>()};
    }
    if (j.contains("convention")) {
      const std::string c = j.at("convention").get<std::string>();
      if (c == "unit")
        cfg.convention = Convention::Unit;
      else if (c == "centered")
        cfg.convention = Convention::Centered;
      else
        throw std::runtime_error("unknown convention: " + c);
    }
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
    if (j.contains("shift")) cfg.shift = j.at("shift").get<double>();
    if (j.contains("dense_limit"))
      cfg.dense_limit = j.at("dense_limit").get<std::int64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned>();
    if (j.contains("deterministic"))
      cfg.deterministic = j.at("deterministic").get<bool>();
    if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.has_parent_path()) return path;
  if (const char* dir = std::getenv("DHLS_OUTPUT_DIR"))
    return (std::filesystem::path(dir) / p).string();
  return path;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, target);
}

std::string sweep_csv(const SweepTable& table, const RunConfig& cfg) {
  std::string out;
  out += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += "# config=" + config_json(cfg) + "\n";
  out += "n,N,lambda,lower,upper,slope_prev,ln_N,wall_ms,error\n";
  for (const SweepRow& r : table.rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.N) + ",";
    if (r.error.empty())
      out += format_double(r.lambda);
    out += "," + format_double(r.lower_uniform);
    out += "," + format_double(r.upper_center);
    out += ",";
    if (r.slope_prev) out += format_double(*r.slope_prev);
    out += "," + format_double(r.ln_N);
    out += "," + format_double(cfg.deterministic ? 0.0 : r.wall_ms);
    out += ",";
    // commas inside error text would break the row
    std::string e = r.error;
    for (char& c : e)
      if (c == ',' || c == '\n') c = ';';
    out += e;
    out += "\n";
  }
  return out;
}

SweepTable parse_sweep_csv(const std::string& text) {
  SweepTable table;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column names are fixed by the schema
      continue;
    }
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 9)
      throw std::runtime_error("sweep CSV: expected 9 fields, got " +
                               std::to_string(fields.size()));
    SweepRow r;
    r.n = std::stoi(fields[0]);
    r.N = std::stoi(fields[1]);
    r.error = fields[8];
    if (!fields[2].empty()) r.lambda = std::stod(fields[2]);
    r.lower_uniform = std::stod(fields[3]);
    r.upper_center = std::stod(fields[4]);
    if (!fields[5].empty()) r.slope_prev = std::stod(fields[5]);
    r.ln_N = std::stod(fields[6]);
    r.wall_ms = std::stod(fields[7]);
    table.dimension = r.n;
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::string verify_report_json(const CertificationReport& rep,
                               const RunConfig& cfg) {
  std::string out = "{";
  out += "\"schema_version\":" + std::to_string(kSchemaVersion);
  out += ",\"n\":" + std::to_string(rep.n);
  out += ",\"N\":" + std::to_string(rep.N);
  out += ",\"tol\":" + format_double(rep.tol);
  out += ",\"seed\":" + std::to_string(rep.seed);
  out += ",\"config\":" + config_json(cfg);
  out += ",\"entries\":[";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const CertEntry& e = rep.entries[i];
    if (i) out += ",";
    out += "{\"id\":" + jstr(e.id);
    out += std::string(",\"pass\":") + (e.pass ? "true" : "false");
    out += ",\"metrics\":{";
    for (std::size_t m = 0; m < e.metrics.size(); ++m) {
      if (m) out += ",";
      out += jstr(e.metrics[m].first) + ":" + format_double(e.metrics[m].second);
    }
    out += "}";
    if (!e.note.empty()) out += ",\"note\":" + jstr(e.note);
    out += "}";
  }
  out += "]";
  out += std::string(",\"pass\":") + (rep.pass ? "true" : "false");
  out += "}\n";
  return out;
}

std::string decay_report_json(const DecayReport& rep, const RunConfig& cfg) {
  std::string out = "{";
  out += "\"schema_version\":" + std::to_string(kSchemaVersion);
  out += ",\"n\":" + std::to_string(rep.grid.dimension);
  out += ",\"N\":" + std::to_string(rep.grid.side);
  out += ",\"convention\":" + jstr(convention_name(rep.grid.convention));
  out += ",\"config\":" + config_json(cfg);
  out += ",\"axes\":[";
  for (std::size_t i = 0; i < rep.axes.size(); ++i) {
    const AxisDecayReport& a = rep.axes[i];
    if (i) out += ",";
    out += "{\"axis\":" + std::to_string(a.axis);
    out += ",\"min_d\":" + format_double(a.min_d);
    out += ",\"min_F\":" + format_double(a.min_F);
    out += ",\"opnorm_A\":" + format_double(a.opnorm_A);
    out += ",\"residual\":" + format_double(a.residual);
    out += std::string(",\"pass\":") + (a.pass ? "true" : "false");
    out += "}";
  }
  out += "]";
  out += std::string(",\"pass\":") + (rep.pass ? "true" : "false");
  out += "}\n";
  return out;
}

std::string compute_report_json(const OptimizerResult& res,
                                const RunConfig& cfg) {
  std::string out = "{";
  out += "\"schema_version\":" + std::to_string(kSchemaVersion);
  out += ",\"n\":" + std::to_string(res.grid.dimension);
  out += ",\"N\":" + std::to_string(res.grid.side);
  out += ",\"convention\":" + jstr(convention_name(res.grid.convention));
  out += ",\"config\":" + config_json(cfg);
  out += ",\"lambda\":" + format_double(res.lambda);
  out += ",\"el_residual\":" + format_double(res.el_residual);
  out += ",\"gap_ratio\":" + format_double(res.gap_ratio);
  out += ",\"iterations\":" + std::to_string(res.iterations);
  out += "}\n";
  return out;
}

std::string bounds_report_json(const BoundsReport& rep, const RunConfig& cfg) {
  std::string out = "{";
  out += "\"schema_version\":" + std::to_string(kSchemaVersion);
  out += ",\"n\":" + std::to_string(rep.grid.dimension);
  out += ",\"N\":" + std::to_string(rep.grid.side);
  out += ",\"convention\":" + jstr(convention_name(rep.grid.convention));
  out += ",\"config\":" + config_json(cfg);
  out += ",\"lower_uniform\":" + format_double(rep.lower_uniform);
  out += ",\"upper_center\":" + format_double(rep.upper_center);
  out += ",\"sphere_area\":" + format_double(rep.sphere_area);
  out += ",\"ln_N\":" + format_double(rep.log_N);
  out += ",\"upper_integral_estimate\":" +
         format_double(rep.upper_integral_estimate);
  if (rep.lambda) out += ",\"lambda\":" + format_double(*rep.lambda);
  out += "}\n";
  return out;
}

namespace {

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions opt;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.shift = cfg.shift;
  opt.dense_limit = cfg.dense_limit;
  return opt;
}

void emit(const RunConfig& cfg, const std::string& content,
          std::ostream& out) {
  const std::string path = resolve_output_path(cfg.output);
  if (path.empty())
    out << content;
  else
    write_file_atomic(path, content);
}

}  // namespace

int run_compute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string problems = validate_config(cfg, "compute");
  if (!problems.empty()) {
    err << problems << "\n";
    return 1;
  }
  const GridSpec g(cfg.n, cfg.N_values[0], cfg.convention);
  try {
    const OptimizerResult res = solve_optimizer(g, solve_options(cfg));
    out << "lambda = " << format_double(res.lambda) << "\n"
        << "el_residual = " << format_double(res.el_residual) << "\n"
        << "gap_ratio = " << format_double(res.gap_ratio) << "\n"
        << "iterations = " << res.iterations << "\n";
    if (!cfg.output.empty())
      write_file_atomic(resolve_output_path(cfg.output),
                        compute_report_json(res, cfg));
    if (!cfg.vector_out.empty()) {
      std::string dump;
      for (double x : res.vector) dump += format_double(x) + "\n";
      write_file_atomic(resolve_output_path(cfg.vector_out), dump);
    }
    return 0;
  } catch (const NonConvergence& e) {
    err << "compute failed: " << e.what() << "\n";
    return 2;
  }
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string problems = validate_config(cfg, "sweep");
  if (!problems.empty()) {
    err << problems << "\n";
    return 1;
  }
  const SweepTable table =
      sweep(cfg.n, cfg.N_values, solve_options(cfg), /*keep_going=*/true);
  emit(cfg, sweep_csv(table, cfg), out);

  if (!cfg.plot_out.empty()) {
    std::string plot = "ln_N,lambda,lower,upper\n";
    for (const SweepRow& r : table.rows) {
      if (!r.error.empty()) continue;
      plot += format_double(r.ln_N) + "," + format_double(r.lambda) + "," +
              format_double(r.lower_uniform) + "," +
              format_double(r.upper_center) + "\n";
    }
    write_file_atomic(resolve_output_path(cfg.plot_out), plot);
  }

  for (const SweepRow& r : table.rows)
    if (!r.error.empty()) {
      err << "sweep row N=" << r.N << " failed: " << r.error << "\n";
      return 2;
    }
  return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string problems = validate_config(cfg, "verify");
  if (!problems.empty()) {
    err << problems << "\n";
    return 1;
  }
  const CertificationReport rep =
      certify_all(cfg.n, cfg.N_values[0], cfg.tol, cfg.seed);
  emit(cfg, verify_report_json(rep, cfg), out);
  if (!rep.pass) {
    for (const CertEntry& e : rep.entries)
      if (!e.pass) err << "verify entry failed: " << e.id << "\n";
    return 2;
  }
  return 0;
}

int run_decay(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string problems = validate_config(cfg, "decay");
  if (!problems.empty()) {
    err << problems << "\n";
    return 1;
  }
  const GridSpec g(cfg.n, cfg.N_values[0], Convention::Centered);
  try {
    const OptimizerResult res = solve_optimizer(g, solve_options(cfg));
    const DecayReport rep = verify_decay(res);
    emit(cfg, decay_report_json(rep, cfg), out);
    return rep.pass ? 0 : 2;
  } catch (const NonConvergence& e) {
    err << "decay failed: " << e.what() << "\n";
    return 2;
  }
}

int run_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string problems = validate_config(cfg, "bounds");
  if (!problems.empty()) {
    err << problems << "\n";
    return 1;
  }
  const GridSpec g(cfg.n, cfg.N_values[0], cfg.convention);
  std::optional<double> lambda;
  if (cfg.with_lambda) {
    try {
      lambda = solve_optimizer(g, solve_options(cfg)).lambda;
    } catch (const NonConvergence& e) {
      err << "bounds: lambda solve failed: " << e.what() << "\n";
      return 2;
    }
  }
  emit(cfg, bounds_report_json(bounds_report(g, lambda), cfg), out);
  return 0;
}

}  // namespace dhls
