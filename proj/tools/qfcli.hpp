#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quasiform/quadrature.hpp"
#include "quasiform/varops.hpp"

namespace qfcli {

using qf::cplx;

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

// Thrown for malformed or out-of-range configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HandleSpec {
  cplx W_plus, W_minus, q;
  bool operator==(const HandleSpec&) const = default;
};

struct GridSpec {
  double x0 = 0.0, x1 = 0.0;
  int nx = 0;
  double y0 = 0.0, y1 = 0.0;
  int ny = 0;
  bool operator==(const GridSpec&) const = default;
};

// Parses "x0,x1,nx;y0,y1,ny" into a grid of points x + iy.
GridSpec parse_grid(const std::string& text);
std::vector<cplx> grid_points(const GridSpec& g);

struct RunConfig {
  std::vector<HandleSpec> handles;
  int weight = 1;
  std::vector<cplx> limit_points;  // empty selects the defaults
  int modes = 16;
  int word_len = 8;
  int m_max = 0;  // 0 selects the tail bound
  int circle_nodes = 64;
  double quad_tol = 1e-12;
  double h_w = 1e-4;
  double h_rho = 1e-4;
  double h_point = 1e-3;
  std::string scheme = "central2";
  int richardson_levels = 2;
  std::string format = "json";
  std::string out_path;
  // eval section
  std::string what = "psi";
  std::vector<cplx> points;
  std::optional<GridSpec> grid;
  cplx y{0.0, 0.0};
  // check section
  std::vector<std::string> checks;

  bool operator==(const RunConfig&) const = default;
};

// JSON text to config; errors carry the line and column of the problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string emit_config(const RunConfig& cfg);

qf::SchottkyData make_surface(const RunConfig& cfg);
qf::KernelConfig make_kernel(const RunConfig& cfg, const qf::SchottkyData& s, int N);
qf::QuadratureConfig make_quadrature(const RunConfig& cfg);
qf::VariationConfig make_variation(const RunConfig& cfg);

// Entry point shared by the binary and the tests. Returns the exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qfcli
