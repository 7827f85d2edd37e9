#include "quasiform/varops.hpp"

#include <algorithm>
#include <random>

namespace qf {

namespace {

VectorC stencil(const std::function<VectorC(double)>& f, double h, VariationConfig::Scheme scheme) {
  if (scheme == VariationConfig::Scheme::Central2) return (f(h) - f(-h)) / (2.0 * h);
  return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
}

VectorC scalar_vec(cplx v) {
  VectorC out(1);
  out(0) = v;
  return out;
}

cplx point_derivative(const std::function<cplx(cplx)>& f, cplx y, const VariationConfig& vc) {
  return fd_derivative([&](double eps) { return scalar_vec(f(y + eps)); }, vc.h_point, vc)(0);
}

double relative(cplx lhs, cplx rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

cplx poly_eval(const MobiusPolynomial& p, cplx z) { return poly_taylor(p, 0, z); }

SchottkyData mobius_flow(const SchottkyData& s, const MobiusPolynomial& p, double eps) {
  SchottkyData out = s;
  for (HandleParams& h : out.handles)
    h = derive_handle(h.W_plus + eps * poly_eval(p, h.W_plus), h.W_minus + eps * poly_eval(p, h.W_minus), h.q);
  return out;
}

}  // namespace

SchottkyData perturb(const SchottkyData& s, int a, int ell, double eps) {
  if (a < 1 || a > s.genus()) throw Error(ErrorKind::InvalidConfig, "perturb needs a positive handle index");
  SchottkyData out = s;
  HandleParams& h = out.handles[static_cast<std::size_t>(a - 1)];
  cplx wp = h.w_plus, wm = h.w_minus, rho = h.rho;
  switch (ell) {
    case 0: wp += eps; break;
    case 1: rho *= std::exp(eps); break;
    case 2: wm += eps; break;
    default: throw Error(ErrorKind::InvalidConfig, "tangent index must be 0, 1 or 2");
  }
  h = handle_from_sewing(wp, wm, rho);
  return out;
}

VectorC fd_derivative(const std::function<VectorC(double)>& f, double h, const VariationConfig& vc) {
  const int levels = std::max(0, vc.richardson_levels);
  const int order = vc.scheme == VariationConfig::Scheme::Central2 ? 2 : 4;
  std::vector<std::vector<VectorC>> T(static_cast<std::size_t>(levels) + 1);
  for (int i = 0; i <= levels; ++i) {
    T[i].push_back(stencil(f, h / std::ldexp(1.0, i), vc.scheme));
    for (int j = 1; j <= i; ++j) {
      const double factor = std::ldexp(1.0, order + 2 * (j - 1)) - 1.0;
      T[i].push_back(T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / factor);
    }
  }
  const VectorC& best = T[levels][levels];
  if (levels > 0) {
    const double err = (best - T[levels][levels - 1]).norm();
    if (err > vc.tol * std::max(1.0, best.norm()))
      throw Error(ErrorKind::NonConvergentDerivative, "Richardson levels disagree beyond tolerance");
  }
  return best;
}

cplx schottky_derivative(const ModuliFunction& F, int a, int ell, const SchottkyData& s, const VariationConfig& vc) {
  const double h = ell == 1 ? vc.h_rho : vc.h_w;
  const cplx d = fd_derivative([&](double eps) { return scalar_vec(F(perturb(s, a, ell, eps))); }, h, vc)(0);
  return ell == 2 ? s.rho(a) * d : d;
}

MatrixC moduli_gradient(const ModuliVectorFunction& F, const SchottkyData& s, const VariationConfig& vc) {
  const int g = s.genus();
  MatrixC grad;
  for (int a = 1; a <= g; ++a) {
    for (int ell = 0; ell < 3; ++ell) {
      const double h = ell == 1 ? vc.h_rho : vc.h_w;
      VectorC d = fd_derivative([&](double eps) { return F(perturb(s, a, ell, eps)); }, h, vc);
      if (ell == 2) d *= s.rho(a);
      if (grad.size() == 0) grad = MatrixC::Zero(d.size(), 3 * g);
      grad.col((a - 1) * 3 + ell) = d;
    }
  }
  return grad;
}

VectorC nabla_from_gradient(const MatrixC& grad, const QuasiformEngine& e2, cplx x) {
  if (e2.N() != 2) throw Error(ErrorKind::InvalidConfig, "nabla needs the weight-two engine");
  const int g = e2.surface().genus();
  VectorC th(3 * g);
  for (int a = 1; a <= g; ++a)
    for (int ell = 0; ell < 3; ++ell) th((a - 1) * 3 + ell) = theta(e2, a, ell, x).value;
  return grad * th;
}

cplx nabla(const ModuliFunction& F, cplx x, const QuasiformEngine& e2, const VariationConfig& vc) {
  const MatrixC grad = moduli_gradient([&](const SchottkyData& t) { return scalar_vec(F(t)); }, e2.surface(), vc);
  return nabla_from_gradient(grad, e2, x)(0);
}

cplx nabla_forms(const FormFunction& H, const std::vector<int>& m, const std::vector<cplx>& ys, cplx x,
                 const SchottkyData& s, const QuasiformEngine& e2, const VariationConfig& vc) {
  if (m.size() != ys.size()) throw Error(ErrorKind::InvalidConfig, "one weight per point is required");
  for (cplx y : ys)
    if (y == x) throw Error(ErrorKind::PoleEvaluation, "nabla_forms evaluated at x = y_k");
  const MatrixC grad = moduli_gradient([&](const SchottkyData& t) { return scalar_vec(H(t, ys)); }, s, vc);
  cplx out = nabla_from_gradient(grad, e2, x)(0);
  const cplx h0 = H(s, ys);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const cplx dH = point_derivative(
        [&](cplx yk) {
          auto moved = ys;
          moved[k] = yk;
          return H(s, moved);
        },
        ys[k], vc);
    out += e2.psi_coeff(x, ys[k]) * dH + static_cast<double>(m[k]) * e2.psi_coeff(x, ys[k], 1) * h0;
  }
  return out;
}

cplx mobius_flow_derivative(const ModuliFunction& F, const MobiusPolynomial& p, const SchottkyData& s,
                            const VariationConfig& vc) {
  return fd_derivative([&](double eps) { return scalar_vec(F(mobius_flow(s, p, eps))); }, vc.h_w, vc)(0);
}

cplx mobius_cocycle_derivative(const ModuliFunction& F, const MobiusPolynomial& p, const SchottkyData& s,
                               const VariationConfig& vc) {
  cplx out{0.0};
  for (int a = 1; a <= s.genus(); ++a) {
    const auto c = mobius_cocycle_coeffs(p, s.handle(a), 2);
    for (int ell = 0; ell < 3; ++ell) out -= c[ell] * schottky_derivative(F, a, ell, s, vc);
  }
  return out;
}

cplx mobius_annihilator(const FormFunction& H, const std::vector<int>& m, const std::vector<cplx>& ys,
                        const MobiusPolynomial& p, const SchottkyData& s, const VariationConfig& vc) {
  if (m.size() != ys.size()) throw Error(ErrorKind::InvalidConfig, "one weight per point is required");
  cplx out = mobius_flow_derivative([&](const SchottkyData& t) { return H(t, ys); }, p, s, vc);
  const cplx h0 = H(s, ys);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const cplx dH = point_derivative(
        [&](cplx yk) {
          auto moved = ys;
          moved[k] = yk;
          return H(s, moved);
        },
        ys[k], vc);
    out += poly_eval(p, ys[k]) * dH + static_cast<double>(m[k]) * poly_taylor(p, 1, ys[k]) * h0;
  }
  return out;
}

ResidueData residue_data(const std::function<cplx(cplx)>& H, const std::vector<PoleSpec>& poles,
                         const QuasiformEngine& e, const QuadratureConfig& qc) {
  const SchottkyData& s = e.surface();
  const int L = 2 * e.N() - 1;
  std::vector<cplx> pts;
  for (const PoleSpec& p : poles) pts.push_back(p.point);
  ResidueData r;
  for (int a = 1; a <= s.genus(); ++a) {
    const Circle c = alpha_circle(s, a, pts);
    for (int ell = 0; ell < L; ++ell) r.disk.push_back(circle_moment(H, c, -ell - 1, qc));
  }
  for (std::size_t k = 0; k < poles.size(); ++k) {
    std::vector<cplx> others;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != k) others.push_back(pts[j]);
    const Circle c = residue_circle(s, pts[k], others);
    std::vector<cplx> moments;
    for (int j = 0; j < poles[k].order; ++j) moments.push_back(circle_moment(H, c, -j - 1, qc));
    r.pole.push_back(std::move(moments));
  }
  return r;
}

cplx residue_expansion(const ResidueData& r, const std::vector<PoleSpec>& poles, const QuasiformEngine& e, cplx x) {
  const int L = 2 * e.N() - 1;
  const RowVectorC lx = e.left(x);
  cplx out{0.0};
  for (int a = 1; a <= e.surface().genus(); ++a)
    for (int ell = 0; ell < L; ++ell)
      out += e.eval(e.theta_combo(a, ell), x, lx) * r.disk[static_cast<std::size_t>((a - 1) * L + ell)];
  for (std::size_t k = 0; k < poles.size(); ++k)
    for (int j = 0; j < poles[k].order; ++j) out += e.psi_coeff(lx, x, poles[k].point, j) * r.pole[k][j];
  return out;
}

double residue_expansion_residual(const std::function<cplx(cplx)>& H, const std::vector<PoleSpec>& poles,
                                  const QuasiformEngine& e, const std::vector<cplx>& probes,
                                  const QuadratureConfig& qc) {
  const ResidueData r = residue_data(H, poles, e, qc);
  double worst = 0.0;
  for (cplx x : probes) {
    const cplx h = H(x);
    worst = std::max(worst, std::abs(h - residue_expansion(r, poles, e, x)) / std::max(1.0, std::abs(h)));
  }
  return worst;
}

cplx coboundary_sum(const ResidueData& r, const std::vector<PoleSpec>& poles, const MobiusPolynomial& p,
                    const QuasiformEngine& e) {
  const int N = e.N();
  const int L = 2 * N - 1;
  cplx out{0.0};
  for (int a = 1; a <= e.surface().genus(); ++a) {
    const auto c = mobius_cocycle_coeffs(p, e.surface().handle(a), N);
    for (int ell = 0; ell < L; ++ell) out -= c[ell] * r.disk[static_cast<std::size_t>((a - 1) * L + ell)];
  }
  for (std::size_t k = 0; k < poles.size(); ++k)
    for (int ell = 0; ell < poles[k].order; ++ell) out += poly_taylor(p, ell, poles[k].point) * r.pole[k][ell];
  return out;
}

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = {"nabla_omega", "nabla_s",   "nabla_omega_diff", "nabla_nu",
                                                 "nabla_abel",  "rauch",     "nabla_prime_form"};
  return names;
}

double default_identity_threshold(const SchottkyData& s) {
  double qmax = 0.0;
  for (const HandleParams& h : s.handles) qmax = std::max(qmax, std::abs(h.q));
  if (qmax <= 0.03) return 1e-5;
  return 1e-5 * std::pow(10.0, std::log2(qmax / 0.03));
}

std::vector<Probe> default_probes(const SchottkyData& s, int count) {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0, rmax = 0.0;
  bool first = true;
  for (int a : index_set(s.genus())) {
    const Disk d = disk(s, a);
    if (first) {
      xmin = xmax = d.center.real();
      ymin = ymax = d.center.imag();
      first = false;
    }
    xmin = std::min(xmin, d.center.real());
    xmax = std::max(xmax, d.center.real());
    ymin = std::min(ymin, d.center.imag());
    ymax = std::max(ymax, d.center.imag());
    rmax = std::max(rmax, d.radius);
  }
  std::mt19937_64 rng(20240517);
  std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
  auto clear_of_disks = [&](cplx z) {
    for (int a : index_set(s.genus())) {
      const Disk d = disk(s, a);
      if (std::abs(z - d.center) < d.radius + 0.5 * rmax) return false;
    }
    return true;
  };
  std::vector<Probe> out;
  for (int attempt = 0; attempt < 100000 && static_cast<int>(out.size()) < count; ++attempt) {
    cplx pts[4];
    bool ok = true;
    for (cplx& p : pts) {
      p = {ux(rng), uy(rng)};
      ok = ok && clear_of_disks(p);
    }
    for (int i = 0; ok && i < 4; ++i)
      for (int j = i + 1; ok && j < 4; ++j) ok = std::abs(pts[i] - pts[j]) > 0.5 * rmax;
    if (ok) out.push_back({pts[0], pts[1], pts[2], pts[3]});
  }
  if (static_cast<int>(out.size()) < count) throw Error(ErrorKind::InvalidConfig, "could not place probe points");
  return out;
}

std::vector<IdentityResult> identity_suite(const SchottkyData& s, const std::vector<std::string>& names,
                                           const SuiteConfig& cfg) {
  EngineCache cache(cfg.modes);
  const auto& vc = cfg.vc;
  const auto probes = cfg.probes.empty() ? default_probes(s) : cfg.probes;
  const double threshold = cfg.threshold > 0.0 ? cfg.threshold : default_identity_threshold(s);
  const int g = s.genus();
  auto e1 = [&](const SchottkyData& t) -> const QuasiformEngine& { return cache.get(t, 1); };
  const QuasiformEngine& e2 = cache.get(s, 2);
  const QuasiformEngine& b1 = e1(s);

  auto om = [&](const QuasiformEngine& e, cplx u, cplx v) { return e.omega_coeff(u, v); };
  auto odiff = [&](const QuasiformEngine& e, cplx y, cplx z, cplx x) {
    const RowVectorC lx = e.left(x);
    return e.psi_coeff(lx, x, y) - e.psi_coeff(lx, x, z);
  };
  auto nu_at = [&](const QuasiformEngine& e, int a, cplx x) { return -e.theta_coeff(a, 0, x) / kTwoPiI; };

  std::vector<IdentityResult> out;
  for (const std::string& name : names) {
    IdentityResult res;
    res.name = name;
    res.threshold = threshold;
    MatrixC rauch_grad;
    try {
      for (const Probe& pr : probes) {
        double r = 0.0;
        if (name == "nabla_omega") {
          const FormFunction H = [&](const SchottkyData& t, const std::vector<cplx>& p) { return om(e1(t), p[0], p[1]); };
          const cplx lhs = nabla_forms(H, {1, 1}, {pr.y, pr.z}, pr.x, s, e2, vc);
          r = relative(lhs, om(b1, pr.x, pr.y) * om(b1, pr.x, pr.z));
        } else if (name == "nabla_s") {
          const FormFunction H = [&](const SchottkyData& t, const std::vector<cplx>& p) {
            return 6.0 * e1(t).omega_regular_diag(p[0]);
          };
          const cplx lhs = nabla_forms(H, {2}, {pr.y}, pr.x, s, e2, vc);
          const cplx w = om(b1, pr.x, pr.y);
          r = relative(lhs, 6.0 * (w * w - e2.omega_coeff(pr.x, pr.y)));
        } else if (name == "nabla_omega_diff") {
          const FormFunction H = [&](const SchottkyData& t, const std::vector<cplx>& p) {
            return odiff(e1(t), p[1], p[2], p[0]);
          };
          const cplx lhs = nabla_forms(H, {1, 0, 0}, {pr.w, pr.y, pr.z}, pr.x, s, e2, vc);
          r = relative(lhs, odiff(b1, pr.y, pr.z, pr.x) * om(b1, pr.x, pr.w));
        } else if (name == "nabla_nu") {
          for (int a = 1; a <= g; ++a) {
            const FormFunction H = [&](const SchottkyData& t, const std::vector<cplx>& p) { return nu_at(e1(t), a, p[0]); };
            const cplx lhs = nabla_forms(H, {1}, {pr.y}, pr.x, s, e2, vc);
            r = std::max(r, relative(lhs, om(b1, pr.x, pr.y) * nu_at(b1, a, pr.x)));
          }
        } else if (name == "nabla_abel") {
          for (int a = 1; a <= g; ++a) {
            const FormFunction H = [&](const SchottkyData& t, const std::vector<cplx>& p) {
              return abel_integral(e1(t), a, p[0], p[1]);
            };
            const cplx lhs = nabla_forms(H, {0, 0}, {pr.y, pr.z}, pr.x, s, e2, vc);
            r = std::max(r, relative(lhs, odiff(b1, pr.y, pr.z, pr.x) * nu_at(b1, a, pr.x)));
          }
        } else if (name == "rauch") {
          if (rauch_grad.size() == 0) {
            rauch_grad = moduli_gradient(
                [&](const SchottkyData& t) {
                  const MatrixC W = period_matrix(e1(t)).omega;
                  return VectorC(Eigen::Map<const VectorC>(W.data(), W.size()));
                },
                s, vc);
          }
          const VectorC d = nabla_from_gradient(rauch_grad, e2, pr.x);
          for (int a = 1; a <= g; ++a)
            for (int b = 1; b <= g; ++b) {
              const cplx lhs = kTwoPiI * d((b - 1) * g + (a - 1));
              // Right side in the beta-period normalization nu_a = 2 pi i nuhat_a.
              r = std::max(r, relative(lhs, kTwoPiI * kTwoPiI * nu_at(b1, a, pr.x) * nu_at(b1, b, pr.x)));
            }
        } else if (name == "nabla_prime_form") {
          const FormFunction H = [&](const SchottkyData& t, const std::vector<cplx>& p) {
            return log_prime_form(e1(t), p[0], p[1]);
          };
          // E^{-1} nabla_{-1/2,-1/2} E: log E carries the weight terms additively.
          const cplx lhs = nabla_forms(H, {0, 0}, {pr.y, pr.z}, pr.x, s, e2, vc) -
                           0.5 * (e2.psi_coeff(pr.x, pr.y, 1) + e2.psi_coeff(pr.x, pr.z, 1));
          const cplx od = odiff(b1, pr.y, pr.z, pr.x);
          r = relative(lhs, -0.5 * od * od);
        } else {
          throw Error(ErrorKind::InvalidConfig, "unknown identity: " + name);
        }
        res.residuals.push_back(r);
      }
      res.max_residual = *std::max_element(res.residuals.begin(), res.residuals.end());
      res.pass = res.max_residual < threshold;
    } catch (const Error& err) {
      res.error = err.what();
      res.pass = false;
    }
    out.push_back(std::move(res));
  }
  return out;
}

namespace {

// Fixed fourth-order stencil used by the commutativity check.
cplx d4(const std::function<cplx(double)>& f, double h) {
  return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
}

struct CommutatorContext {
  EngineCache& cache;
  double h;
  double h_point;

  // Sum of Theta_{2,a}^l(x) times the fourth-order partial_a^l of F at s.
  cplx nabla4(const std::function<cplx(const SchottkyData&)>& F, const SchottkyData& s, cplx x) {
    const QuasiformEngine& e2 = cache.get(s, 2);
    cplx out{0.0};
    for (int a = 1; a <= s.genus(); ++a)
      for (int ell = 0; ell < 3; ++ell) {
        cplx d = d4([&](double eps) { return F(perturb(s, a, ell, eps)); }, h);
        if (ell == 2) d *= s.rho(a);
        out += e2.theta_coeff(a, ell, x) * d;
      }
    return out;
  }

  cplx dpoint(const std::function<cplx(cplx)>& f, cplx y) {
    return d4([&](double eps) { return f(y + eps); }, h_point);
  }

  // nabla_{m,y}(x) of F(s, y) with Psi_2 from s.
  cplx nabla_m(const FormFunction& F, const std::vector<int>& m, const std::vector<cplx>& ys, cplx x,
               const SchottkyData& s) {
    const QuasiformEngine& e2 = cache.get(s, 2);
    cplx out = nabla4([&](const SchottkyData& t) { return F(t, ys); }, s, x);
    const cplx f0 = F(s, ys);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const cplx dF = dpoint(
          [&](cplx yk) {
            auto moved = ys;
            moved[k] = yk;
            return F(s, moved);
          },
          ys[k]);
      out += e2.psi_coeff(x, ys[k]) * dF + static_cast<double>(m[k]) * e2.psi_coeff(x, ys[k], 1) * f0;
    }
    return out;
  }
};

}  // namespace

CommutatorResult commutator_check(const SchottkyData& s, cplx x, cplx y, cplx z1, cplx z2, double h,
                                  EngineCache& cache) {
  CommutatorContext ctx{cache, h, 1e-3};
  const FormFunction H = [&](const SchottkyData& t, const std::vector<cplx>& p) {
    return cache.get(t, 1).omega_coeff(p[0], p[1]);
  };
  // Inner form G(u; z1, z2) = nabla_{1,1;z}(u) H, weight (2, 1, 1).
  const FormFunction G = [&](const SchottkyData& t, const std::vector<cplx>& p) {
    return ctx.nabla_m(H, {1, 1}, {p[1], p[2]}, p[0], t);
  };
  auto side = [&](cplx inner, cplx outer) { return ctx.nabla_m(G, {2, 1, 1}, {inner, z1, z2}, outer, s); };
  CommutatorResult r;
  r.lhs = side(x, y);
  r.rhs = side(y, x);
  r.residual = relative(r.lhs, r.rhs);
  return r;
}

}  // namespace qf
