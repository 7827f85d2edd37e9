#include "qfcli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <sstream>
#include <thread>

#include "quasiform/cache.hpp"
#include "quasiform/classical.hpp"
#include "quasiform/zeta.hpp"

namespace qfcli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---- config parsing ----

std::string where(const std::string& path) { return path.empty() ? "config" : path; }

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field " + where(path + "." + key));
  return j.at(key);
}

double finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(where(path) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where(path) + " must be finite");
  return v;
}

int positive_int(const json& j, const std::string& path, int lo = 1) {
  if (!j.is_number_integer()) throw ConfigError(where(path) + " must be an integer");
  const int v = j.get<int>();
  if (v < lo) throw ConfigError(where(path) + " must be at least " + std::to_string(lo));
  return v;
}

cplx complex_value(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where(path) + " must be a [re, im] pair");
  return {finite_number(j[0], path + "[0]"), finite_number(j[1], path + "[1]")};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

template <typename F>
void optional_field(const json& j, const std::string& key, F&& apply) {
  if (j.is_object() && j.contains(key)) apply(j.at(key));
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// ---- output ----

struct Report {
  std::string command;
  json summary = json::object();
  std::vector<json> rows;  // objects sharing one key order
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    std::string s;
    for (const json& e : v) s += (s.empty() ? "" : ";") + csv_cell(e);
    return s;
  }
  return v.dump();
}

void write_report(const Report& r, const std::string& format, std::ostream& out) {
  if (format == "json") {
    json doc;
    doc["command"] = r.command;
    doc["summary"] = r.summary;
    doc["rows"] = r.rows;
    out << doc.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : r.summary.items()) out << "# " << k << ": " << csv_cell(v) << "\n";
  if (r.rows.empty()) return;
  bool first = true;
  for (const auto& [k, v] : r.rows.front().items()) {
    out << (first ? "" : ",") << k;
    first = false;
  }
  out << "\n";
  for (const json& row : r.rows) {
    first = true;
    for (const auto& [k, v] : row.items()) {
      out << (first ? "" : ",") << csv_cell(v);
      first = false;
    }
    out << "\n";
  }
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- engines ----

class EngineStore {
 public:
  EngineStore(const RunConfig& cfg, qf::SchottkyData s, fs::path dir) : cfg_(cfg), s_(std::move(s)), dir_(std::move(dir)) {}

  const qf::QuasiformEngine& get(int N) {
    auto it = engines_.find(N);
    if (it != engines_.end()) return *it->second;
    const qf::KernelConfig kc = make_kernel(cfg_, s_, N);
    std::unique_ptr<qf::QuasiformEngine> e;
    fs::path file;
    if (!dir_.empty()) {
      file = dir_ / (qf::engine_key(s_, kc, cfg_.modes) + ".qfe");
      std::ifstream in(file, std::ios::binary);
      if (in) e = std::make_unique<qf::QuasiformEngine>(qf::load_engine(in));
    }
    if (!e) {
      e = std::make_unique<qf::QuasiformEngine>(qf::QuasiformEngine::assemble(s_, kc, cfg_.modes));
      if (!file.empty()) {
        fs::create_directories(dir_);
        std::ofstream out(file, std::ios::binary);
        qf::save_engine(*e, out);
      }
    }
    return *engines_.emplace(N, std::move(e)).first->second;
  }

 private:
  const RunConfig& cfg_;
  qf::SchottkyData s_;
  fs::path dir_;
  std::map<int, std::unique_ptr<qf::QuasiformEngine>> engines_;
};

// ---- commands ----

Report cmd_validate(const qf::SchottkyData& s, bool& ok) {
  const qf::ValidationReport v = qf::validate(s);
  ok = v.ok;
  Report r{"validate"};
  r.summary["ok"] = v.ok;
  r.summary["min_gap"] = number(v.min_gap);
  r.summary["worst_a"] = v.worst_a;
  r.summary["worst_b"] = v.worst_b;
  for (const std::string& m : v.messages) {
    json row;
    row["message"] = m;
    r.rows.push_back(row);
  }
  return r;
}

json eval_row(const std::string& what, cplx x, cplx y, int a, int ell) {
  json row;
  row["what"] = what;
  row["x_re"] = x.real();
  row["x_im"] = x.imag();
  row["y_re"] = y.real();
  row["y_im"] = y.imag();
  row["a"] = a;
  row["ell"] = ell;
  row["re"] = nullptr;
  row["im"] = nullptr;
  row["weights"] = json::array();
  row["modes"] = nullptr;
  row["spectral_radius"] = nullptr;
  row["error"] = "";
  return row;
}

void fill(json& row, const std::function<qf::FormValue()>& f, const qf::QuasiformEngine& e) {
  row["modes"] = e.modes();
  row["spectral_radius"] = e.spectral_radius();
  try {
    const qf::FormValue v = f();
    row["re"] = number(v.value.real());
    row["im"] = number(v.value.imag());
    row["weights"] = v.weights;
  } catch (const qf::Error& err) {
    row["error"] = qf::to_string(err.kind());
  }
}

Report cmd_eval(const RunConfig& cfg, EngineStore& store) {
  static const std::vector<std::string> kinds = {"psi", "omega", "theta", "nu", "s", "primeform"};
  if (std::find(kinds.begin(), kinds.end(), cfg.what) == kinds.end())
    throw ConfigError("eval.what must be one of psi, omega, theta, nu, s, primeform");
  std::vector<cplx> xs = cfg.points;
  if (cfg.grid) {
    const std::vector<cplx> g = grid_points(*cfg.grid);
    xs.insert(xs.end(), g.begin(), g.end());
  }
  if (xs.empty()) throw ConfigError("eval needs points or a grid");
  const bool weight_one = cfg.what == "nu" || cfg.what == "s" || cfg.what == "primeform";
  const qf::QuasiformEngine& e = store.get(weight_one ? 1 : cfg.weight);
  const int g = e.surface().genus();
  const cplx y = cfg.y;

  // Rows per point are fixed, so each point owns a disjoint slot range.
  const int per_point = cfg.what == "theta" ? g * (2 * e.N() - 1) : cfg.what == "nu" ? g : 1;
  std::vector<json> rows(xs.size() * static_cast<std::size_t>(per_point));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const cplx x = xs[i];
      std::size_t slot = i * static_cast<std::size_t>(per_point);
      if (cfg.what == "theta") {
        for (int a = 1; a <= g; ++a)
          for (int ell = 0; ell < 2 * e.N() - 1; ++ell) {
            json row = eval_row("theta", x, y, a, ell);
            fill(row, [&] { return qf::theta(e, a, ell, x); }, e);
            rows[slot++] = std::move(row);
          }
      } else if (cfg.what == "nu") {
        for (int a = 1; a <= g; ++a) {
          json row = eval_row("nu", x, y, a, 0);
          fill(row, [&] { return qf::nu(e, a, x); }, e);
          rows[slot++] = std::move(row);
        }
      } else {
        json row = eval_row(cfg.what, x, y, 0, 0);
        fill(
            row,
            [&]() -> qf::FormValue {
              if (x == y && cfg.what != "s") throw qf::Error(qf::ErrorKind::PoleEvaluation, "x = y");
              if (cfg.what == "psi") return qf::psi(e, x, y);
              if (cfg.what == "omega") return qf::omega(e, x, y);
              if (cfg.what == "s") return qf::proj_connection(e, x);
              // log E is not a form; its weight (-1/2, -1/2) is left out of the row.
              return {qf::log_prime_form(e, x, y), {}};
            },
            e);
        rows[slot] = std::move(row);
      }
    }
  };
  const std::size_t n = xs.size();
  const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back(work, begin, std::min(n, begin + chunk));
  for (std::thread& t : pool) t.join();

  Report r{"eval"};
  r.summary["what"] = cfg.what;
  r.summary["weight"] = e.N();
  r.summary["modes"] = e.modes();
  r.summary["spectral_radius"] = e.spectral_radius();
  r.summary["rcond"] = e.rcond();
  r.rows = std::move(rows);
  return r;
}

Report cmd_period_matrix(const RunConfig& cfg, EngineStore& store) {
  const qf::PeriodMatrix P = qf::period_matrix(store.get(1), make_quadrature(cfg));
  Report r{"period_matrix"};
  r.summary["symmetry_residual"] = P.symmetry_residual;
  r.summary["normalization_residual"] = P.normalization_residual;
  r.summary["modes"] = cfg.modes;
  for (int a = 0; a < P.omega.rows(); ++a)
    for (int b = 0; b < P.omega.cols(); ++b) {
      json row;
      row["a"] = a + 1;
      row["b"] = b + 1;
      row["re"] = P.omega(a, b).real();
      row["im"] = P.omega(a, b).imag();
      r.rows.push_back(row);
    }
  return r;
}

Report cmd_zeta(const RunConfig& cfg, EngineStore& store) {
  const qf::DetReport d = qf::determinant_report(store.get(cfg.weight), cfg.word_len, cfg.m_max);
  Report r{"zeta"};
  r.summary["weight"] = cfg.weight;
  r.summary["modes"] = d.modes;
  r.summary["max_len"] = d.max_len;
  r.summary["m_max"] = d.m_max;
  auto add = [&](const std::string& q, int k, cplx v) {
    json row;
    row["quantity"] = q;
    row["k"] = k;
    row["re"] = v.real();
    row["im"] = v.imag();
    r.rows.push_back(row);
  };
  add("logdet_truncated", 0, d.logdet_matrix);
  add("logdet_product", 0, d.logdet_product);
  add("difference", 0, d.difference());
  for (std::size_t k = 0; k < d.per_length.size(); ++k) add("per_length", static_cast<int>(k) + 1, d.per_length[k]);
  return r;
}

Report cmd_check(const RunConfig& cfg, const qf::SchottkyData& s, bool& all_pass) {
  std::vector<std::string> names = cfg.checks;
  if (names.empty()) {
    names = qf::identity_names();
    names.push_back("commutator");
  }
  std::vector<std::string> suite_names;
  bool commutator = false;
  for (const std::string& n : names) {
    if (n == "commutator") {
      commutator = true;
    } else if (std::find(qf::identity_names().begin(), qf::identity_names().end(), n) == qf::identity_names().end()) {
      throw ConfigError("unknown check: " + n);
    } else {
      suite_names.push_back(n);
    }
  }
  qf::SuiteConfig sc;
  sc.vc = make_variation(cfg);
  sc.probes = qf::default_probes(s);
  sc.modes = {2 * cfg.modes, cfg.modes};
  Report r{"check"};
  all_pass = true;
  auto add = [&](const std::string& name, double residual, double threshold, bool pass, const std::string& error) {
    json row;
    row["name"] = name;
    row["max_residual"] = number(residual);
    row["threshold"] = threshold;
    row["pass"] = pass;
    row["error"] = error;
    r.rows.push_back(row);
    all_pass = all_pass && pass;
  };
  if (!suite_names.empty()) {
    for (const qf::IdentityResult& res : qf::identity_suite(s, suite_names, sc))
      add(res.name, res.max_residual, res.threshold, res.pass, res.error);
  }
  if (commutator) {
    qf::EngineCache cache(sc.modes);
    const qf::Probe& p = sc.probes.front();
    try {
      const auto coarse = qf::commutator_check(s, p.x, p.y, p.z, p.w, 2e-2, cache);
      const auto fine = qf::commutator_check(s, p.x, p.y, p.z, p.w, 1e-2, cache);
      const double ratio = coarse.residual / std::max(fine.residual, 1e-300);
      r.summary["commutator_ratio"] = ratio;
      add("commutator", fine.residual, 1e-4, fine.residual < 1e-4 && ratio >= 4.0, "");
    } catch (const qf::Error& err) {
      add("commutator", NAN, 1e-4, false, err.what());
    }
  }
  r.summary["all_pass"] = all_pass;
  return r;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  const auto axes = split(text, ';');
  if (axes.size() != 2) throw ConfigError("grid must be \"x0,x1,nx;y0,y1,ny\"");
  GridSpec g;
  auto axis = [&](const std::string& part, double& lo, double& hi, int& n) {
    const auto f = split(part, ',');
    if (f.size() != 3) throw ConfigError("grid axis must be \"lo,hi,n\": " + part);
    try {
      lo = std::stod(f[0]);
      hi = std::stod(f[1]);
      n = std::stoi(f[2]);
    } catch (const std::exception&) {
      throw ConfigError("grid axis has a non-numeric field: " + part);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || n < 1) throw ConfigError("grid axis out of range: " + part);
  };
  axis(axes[0], g.x0, g.x1, g.nx);
  axis(axes[1], g.y0, g.y1, g.ny);
  return g;
}

std::vector<cplx> grid_points(const GridSpec& g) {
  std::vector<cplx> out;
  auto at = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.emplace_back(at(g.x0, g.x1, g.nx, i), at(g.y0, g.y1, g.ny, j));
  return out;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  const json& surface = require(j, "surface", "");
  const json& handles = require(surface, "handles", "surface");
  if (!handles.is_array() || handles.empty()) throw ConfigError("surface.handles must be a non-empty array");
  for (std::size_t i = 0; i < handles.size(); ++i) {
    const std::string p = "surface.handles[" + std::to_string(i) + "]";
    HandleSpec h{complex_value(require(handles[i], "W_plus", p), p + ".W_plus"),
                 complex_value(require(handles[i], "W_minus", p), p + ".W_minus"),
                 complex_value(require(handles[i], "q", p), p + ".q")};
    const double aq = std::abs(h.q);
    if (!(aq > 0.0 && aq < 1.0)) throw ConfigError(p + ".q must satisfy 0 < |q| < 1");
    if (h.W_plus == h.W_minus) throw ConfigError(p + " has coincident fixed points");
    c.handles.push_back(h);
  }
  optional_field(surface, "genus", [&](const json& v) {
    if (positive_int(v, "surface.genus") != static_cast<int>(c.handles.size()))
      throw ConfigError("surface.genus does not match the number of handles");
  });
  optional_field(j, "weight", [&](const json& v) { c.weight = positive_int(v, "weight"); });
  optional_field(j, "limit_points", [&](const json& v) {
    if (!v.is_array()) throw ConfigError("limit_points must be an array");
    for (std::size_t i = 0; i < v.size(); ++i)
      c.limit_points.push_back(complex_value(v[i], "limit_points[" + std::to_string(i) + "]"));
  });
  optional_field(j, "truncation", [&](const json& t) {
    optional_field(t, "modes", [&](const json& v) { c.modes = positive_int(v, "truncation.modes"); });
    optional_field(t, "word_len", [&](const json& v) { c.word_len = positive_int(v, "truncation.word_len"); });
    optional_field(t, "m_max", [&](const json& v) { c.m_max = positive_int(v, "truncation.m_max", 0); });
  });
  optional_field(j, "quadrature", [&](const json& q) {
    optional_field(q, "circle_nodes", [&](const json& v) { c.circle_nodes = positive_int(v, "quadrature.circle_nodes", 4); });
    optional_field(q, "tol", [&](const json& v) { c.quad_tol = finite_number(v, "quadrature.tol"); });
  });
  optional_field(j, "variation", [&](const json& v) {
    optional_field(v, "h_w", [&](const json& x) { c.h_w = finite_number(x, "variation.h_w"); });
    optional_field(v, "h_rho", [&](const json& x) { c.h_rho = finite_number(x, "variation.h_rho"); });
    optional_field(v, "h_point", [&](const json& x) { c.h_point = finite_number(x, "variation.h_point"); });
    optional_field(v, "scheme", [&](const json& x) {
      if (!x.is_string() || (x != "central2" && x != "central4"))
        throw ConfigError("variation.scheme must be central2 or central4");
      c.scheme = x.get<std::string>();
    });
    optional_field(v, "richardson_levels",
                   [&](const json& x) { c.richardson_levels = positive_int(x, "variation.richardson_levels", 0); });
  });
  optional_field(j, "output", [&](const json& o) {
    optional_field(o, "format", [&](const json& v) {
      if (!v.is_string() || (v != "csv" && v != "json")) throw ConfigError("output.format must be csv or json");
      c.format = v.get<std::string>();
    });
    optional_field(o, "path", [&](const json& v) {
      if (!v.is_string()) throw ConfigError("output.path must be a string");
      c.out_path = v.get<std::string>();
    });
  });
  optional_field(j, "eval", [&](const json& e) {
    optional_field(e, "what", [&](const json& v) {
      if (!v.is_string()) throw ConfigError("eval.what must be a string");
      c.what = v.get<std::string>();
    });
    optional_field(e, "y", [&](const json& v) { c.y = complex_value(v, "eval.y"); });
    optional_field(e, "points", [&](const json& v) {
      if (!v.is_array()) throw ConfigError("eval.points must be an array");
      for (std::size_t i = 0; i < v.size(); ++i)
        c.points.push_back(complex_value(v[i], "eval.points[" + std::to_string(i) + "]"));
    });
    optional_field(e, "grid", [&](const json& v) {
      if (!v.is_string()) throw ConfigError("eval.grid must be a string");
      c.grid = parse_grid(v.get<std::string>());
    });
  });
  optional_field(j, "check", [&](const json& v) {
    if (!v.is_array()) throw ConfigError("check must be an array of names");
    for (const json& n : v) {
      if (!n.is_string()) throw ConfigError("check entries must be strings");
      c.checks.push_back(n.get<std::string>());
    }
  });
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
  json j;
  json handles = json::array();
  for (const HandleSpec& h : c.handles)
    handles.push_back({{"W_plus", complex_json(h.W_plus)}, {"W_minus", complex_json(h.W_minus)}, {"q", complex_json(h.q)}});
  j["surface"] = {{"genus", c.handles.size()}, {"handles", handles}};
  j["weight"] = c.weight;
  json lp = json::array();
  for (cplx a : c.limit_points) lp.push_back(complex_json(a));
  if (!c.limit_points.empty()) j["limit_points"] = lp;
  j["truncation"] = {{"modes", c.modes}, {"word_len", c.word_len}, {"m_max", c.m_max}};
  j["quadrature"] = {{"circle_nodes", c.circle_nodes}, {"tol", c.quad_tol}};
  j["variation"] = {{"h_w", c.h_w},
                    {"h_rho", c.h_rho},
                    {"h_point", c.h_point},
                    {"scheme", c.scheme},
                    {"richardson_levels", c.richardson_levels}};
  j["output"] = {{"format", c.format}, {"path", c.out_path}};
  json pts = json::array();
  for (cplx p : c.points) pts.push_back(complex_json(p));
  j["eval"] = {{"what", c.what}, {"y", complex_json(c.y)}, {"points", pts}};
  if (c.grid) {
    std::ostringstream os;
    os << std::setprecision(17) << c.grid->x0 << "," << c.grid->x1 << "," << c.grid->nx << ";" << c.grid->y0 << ","
       << c.grid->y1 << "," << c.grid->ny;
    j["eval"]["grid"] = os.str();
  }
  j["check"] = c.checks;
  return j.dump(2);
}

qf::SchottkyData make_surface(const RunConfig& cfg) {
  qf::SchottkyData s;
  for (const HandleSpec& h : cfg.handles) s.handles.push_back(qf::derive_handle(h.W_plus, h.W_minus, h.q));
  return s;
}

qf::KernelConfig make_kernel(const RunConfig& cfg, const qf::SchottkyData& s, int N) {
  if (cfg.limit_points.empty() || N != cfg.weight) return qf::default_kernel(s, N);
  if (static_cast<int>(cfg.limit_points.size()) != 2 * N - 1)
    throw ConfigError("limit_points must hold 2N - 1 points for weight N");
  return qf::KernelConfig::make(N, cfg.limit_points);
}

qf::QuadratureConfig make_quadrature(const RunConfig& cfg) {
  qf::QuadratureConfig qc;
  qc.circle_nodes = cfg.circle_nodes;
  qc.tol = cfg.quad_tol;
  return qc;
}

qf::VariationConfig make_variation(const RunConfig& cfg) {
  qf::VariationConfig vc;
  vc.scheme = cfg.scheme == "central4" ? qf::VariationConfig::Scheme::Central4 : qf::VariationConfig::Scheme::Central2;
  vc.h_w = cfg.h_w;
  vc.h_rho = cfg.h_rho;
  vc.h_point = cfg.h_point;
  vc.richardson_levels = cfg.richardson_levels;
  return vc;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasiform and sewing computations on Schottky surfaces"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path, out_path, format, grid, checks, cache_dir;
  int modes = 0, words = 0;
  bool no_cache = false;
  app.add_option("--config", config_path, "Configuration file (JSON)")->required();
  app.add_option("--out", out_path, "Output file; standard output when absent");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--modes", modes, "Mode cutoff M")->check(CLI::PositiveNumber);
  app.add_option("--words", words, "Word length K for products and oracles")->check(CLI::PositiveNumber);
  app.add_option("--check", checks, "Comma-separated identity names for the check command");
  app.add_option("--seed-grid", grid, "Evaluation grid \"x0,x1,nx;y0,y1,ny\"");
  app.add_option("--cache-dir", cache_dir, "Engine artifact directory; defaults to qf-engines beside --out");
  app.add_flag("--no-cache", no_cache, "Do not read or write engine artifacts");
  auto* validate_cmd = app.add_subcommand("validate", "Check the disk configuration");
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate psi, omega, theta, nu, s or the prime form");
  auto* period_cmd = app.add_subcommand("period_matrix", "Period matrix with residuals");
  auto* zeta_cmd = app.add_subcommand("zeta", "Truncated and product determinants");
  auto* check_cmd = app.add_subcommand("check", "Variational identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format;
    if (modes > 0) cfg.modes = modes;
    if (words > 0) cfg.word_len = words;
    if (!grid.empty()) cfg.grid = parse_grid(grid);
    if (!checks.empty()) cfg.checks = split(checks, ',');
  } catch (const ConfigError& e) {
    err << config_path << ": " << e.what() << "\n";
    return kUsage;
  }

  const qf::SchottkyData s = make_surface(cfg);
  bool ok = true;
  Report report;
  try {
    if (validate_cmd->parsed()) {
      report = cmd_validate(s, ok);
    } else {
      const qf::ValidationReport v = qf::validate(s);
      if (!v.ok) {
        err << "invalid surface: disks " << v.worst_a << " and " << v.worst_b << " have gap " << v.min_gap << "\n";
        return kValidation;
      }
      fs::path dir;
      if (!no_cache) {
        if (!cache_dir.empty())
          dir = cache_dir;
        else if (!cfg.out_path.empty())
          dir = fs::absolute(cfg.out_path).parent_path() / "qf-engines";
      }
      EngineStore store(cfg, s, dir);
      if (eval_cmd->parsed()) report = cmd_eval(cfg, store);
      if (period_cmd->parsed()) report = cmd_period_matrix(cfg, store);
      if (zeta_cmd->parsed()) report = cmd_zeta(cfg, store);
      if (check_cmd->parsed()) report = cmd_check(cfg, s, ok);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const qf::Error& e) {
    err << "numerical failure (" << qf::to_string(e.kind()) << "): " << e.what() << "\n";
    return kNumerical;
  }

  if (cfg.out_path.empty()) {
    write_report(report, cfg.format, out);
  } else {
    std::ofstream file(cfg.out_path);
    if (!file) {
      err << "cannot write " << cfg.out_path << "\n";
      return kUsage;
    }
    write_report(report, cfg.format, file);
  }
  if (!ok) {
    if (validate_cmd->parsed()) {
      err << "invalid surface: disks " << report.summary["worst_a"] << " and " << report.summary["worst_b"]
          << " have gap " << report.summary["min_gap"] << "\n";
      return kValidation;
    }
    return kNumerical;
  }
  return kOk;
}

}  // namespace qfcli
