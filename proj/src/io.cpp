#include "swred/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace swred {

using nlohmann::json;

std::string tool_version() { return "swred 0.1.0"; }

ConfigError::ConfigError(const std::string& what) : std::runtime_error(what) {}

namespace {

json field_to_json(const ScalarField& f) {
  json arr = json::array();
  for (const Complex& v : f.values) arr.push_back({v.real(), v.imag()});
  return arr;
}

ScalarField field_from_json(const TorusGrid& g, const json& arr,
                            const char* name) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != g.size())
    throw ConfigError(std::string("configuration file: field '") + name +
                      "' must be an array of n*n [re, im] pairs");
  ScalarField f(g);
  for (int k = 0; k < g.size(); ++k) {
    const json& entry = arr[k];
    if (!entry.is_array() || entry.size() != 2)
      throw ConfigError(std::string("configuration file: field '") + name +
                        "' entries must be [re, im] pairs");
    f.values[k] = Complex(entry[0].get<double>(), entry[1].get<double>());
  }
  return f;
}

}  // namespace

void save_configuration(const std::string& path, const Configuration& c) {
  json doc;
  doc["format"] = "swred-configuration";
  doc["n"] = c.grid().n;
  doc["side"] = c.grid().side;
  doc["a"] = field_to_json(c.connection.a);
  doc["psi1"] = field_to_json(c.spinor.psi1);
  doc["psi2"] = field_to_json(c.spinor.psi2);
  doc["phi"] = field_to_json(c.higgs.phi);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << doc.dump(1) << '\n';
}

Configuration load_configuration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("configuration file '" + path + "': " + e.what());
  }
  try {
    if (doc.value("format", "") != "swred-configuration")
      throw ConfigError("configuration file '" + path +
                        "': missing format tag 'swred-configuration'");
    const TorusGrid g{doc.at("n").get<int>(), doc.at("side").get<double>()};
    return Configuration(
        Connection(field_from_json(g, doc.at("a"), "a")),
        Spinor(field_from_json(g, doc.at("psi1"), "psi1"),
               field_from_json(g, doc.at("psi2"), "psi2")),
        Higgs(field_from_json(g, doc.at("phi"), "phi")));
  } catch (const json::exception& e) {
    throw ConfigError("configuration file '" + path + "': " + e.what());
  }
}

void write_field_csv(std::ostream& out, const ScalarField& f) {
  const TorusGrid& g = f.grid;
  out << "i,j,x1,x2,re,im\n" << std::setprecision(17);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const Complex v = f.at(i, j);
      out << i << ',' << j << ',' << g.x1(i) << ',' << g.x2(j) << ','
          << v.real() << ',' << v.imag() << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<SolveStep>& trace) {
  out << "iter,energy,r1,r2,r3a,r3b,step\n" << std::setprecision(17);
  for (const SolveStep& s : trace)
    out << s.iteration << ',' << s.energy << ',' << s.r1 << ',' << s.r2 << ','
        << s.r3a << ',' << s.r3b << ',' << s.step << '\n';
}

void write_plot_grid(std::ostream& out, const ScalarField& f) {
  const TorusGrid& g = f.grid;
  out << "# x1 x2 re im abs\n" << std::setprecision(17);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Complex v = f.at(i, j);
      out << g.x1(i) << ' ' << g.x2(j) << ' ' << v.real() << ' ' << v.imag()
          << ' ' << std::abs(v) << '\n';
    }
    out << '\n';
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("config key '" + key + "': cannot parse '" + value +
                      "'");
  return out;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");

    if (key == "n")
      cfg.n = parse_number<int>(value, key);
    else if (key == "side")
      cfg.side = parse_number<double>(value, key);
    else if (key == "seed")
      cfg.seed = parse_number<unsigned long long>(value, key);
    else if (key == "c2")
      cfg.c2 = parse_number<double>(value, key);
    else if (key == "phase")
      cfg.phase = parse_number<double>(value, key);
    else if (key == "tol")
      cfg.tol = parse_number<double>(value, key);
    else if (key == "samples")
      cfg.samples = parse_number<int>(value, key);
    else if (key == "max_iters")
      cfg.max_iters = parse_number<int>(value, key);
    else if (key == "energy_tol")
      cfg.energy_tol = parse_number<double>(value, key);
    else if (key == "perturb")
      cfg.perturb = parse_number<double>(value, key);
    else if (key == "t")
      cfg.t = parse_number<double>(value, key);
    else if (key == "max_mode")
      cfg.max_mode = parse_number<int>(value, key);
    else if (key == "method")
      cfg.method = value;
    else
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

void merge_run_config(RunConfig& base, const RunConfig& over) {
  if (over.n) base.n = over.n;
  if (over.side) base.side = over.side;
  if (over.seed) base.seed = over.seed;
  if (over.c2) base.c2 = over.c2;
  if (over.phase) base.phase = over.phase;
  if (over.tol) base.tol = over.tol;
  if (over.samples) base.samples = over.samples;
  if (over.max_iters) base.max_iters = over.max_iters;
  if (over.energy_tol) base.energy_tol = over.energy_tol;
  if (over.perturb) base.perturb = over.perturb;
  if (over.t) base.t = over.t;
  if (over.max_mode) base.max_mode = over.max_mode;
  if (over.method) base.method = over.method;
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.n && (*cfg.n < 4 || *cfg.n % 2 != 0))
    throw ConfigError("n must be even and >= 4");
  if (cfg.side && !(*cfg.side > 0.0)) throw ConfigError("side must be > 0");
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (cfg.samples && *cfg.samples < 1)
    throw ConfigError("samples must be >= 1");
  if (cfg.max_iters && *cfg.max_iters < 0)
    throw ConfigError("max_iters must be >= 0");
  if (cfg.energy_tol && !(*cfg.energy_tol > 0.0))
    throw ConfigError("energy_tol must be > 0");
  if (cfg.perturb && !(*cfg.perturb >= 0.0))
    throw ConfigError("perturb must be >= 0");
  if (cfg.max_mode && *cfg.max_mode < 0)
    throw ConfigError("max_mode must be >= 0");
  if (cfg.method && *cfg.method != "gauss-newton" &&
      *cfg.method != "gradient-flow")
    throw ConfigError("method must be 'gauss-newton' or 'gradient-flow'");
}

}  // namespace swred
