#include "quasiform/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>

namespace qf {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

// 20-point Gauss-Legendre on [t0, t1] of a real-parameter integrand.
cplx gauss20(const std::function<cplx(double)>& g, double t0, double t1) {
  const double mid = 0.5 * (t0 + t1);
  const double half = 0.5 * (t1 - t0);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  cplx sum{0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      sum += w[i] * g(mid);
      continue;
    }
    sum += w[i] * (g(mid - half * x[i]) + g(mid + half * x[i]));
  }
  return sum * half;
}

cplx adaptive(const std::function<cplx(double)>& g, double t0, double t1, cplx whole, double tol, int depth) {
  const double mid = 0.5 * (t0 + t1);
  const cplx left = gauss20(g, t0, mid);
  const cplx right = gauss20(g, mid, t1);
  const cplx both = left + right;
  if (std::abs(both - whole) <= tol) return both;
  if (depth <= 0) throw Error(ErrorKind::NonConvergent, "Gauss-Legendre bisection depth exhausted");
  return adaptive(g, t0, mid, left, 0.5 * tol, depth - 1) + adaptive(g, mid, t1, right, 0.5 * tol, depth - 1);
}

cplx piece_integral(const ComplexFn& f, const PathPiece& p, const QuadratureConfig& qc) {
  const std::function<cplx(double)> g = [&](double t) { return f(p.point(t)) * p.derivative(t); };
  const cplx whole = gauss20(g, 0.0, 1.0);
  // Absolute target from a first estimate; the integrands here are O(1) or larger.
  const double tol = qc.tol * std::max(1.0, std::abs(whole));
  return adaptive(g, 0.0, 1.0, whole, tol, qc.max_depth);
}

PathPiece segment(cplx a, cplx b) {
  PathPiece p;
  p.kind = PathPiece::Kind::Segment;
  p.start = a;
  p.end = b;
  return p;
}

PathPiece arc(const Circle& c, cplx from, cplx to) {
  PathPiece p;
  p.kind = PathPiece::Kind::Arc;
  p.center = c.center;
  p.radius = c.radius;
  p.theta0 = std::arg(from - c.center);
  p.theta1 = p.theta0 + std::arg((to - c.center) / (from - c.center));
  p.start = p.point(0.0);
  p.end = p.point(1.0);
  return p;
}

// Parameters t1 < t2 where the line a + t (b - a) meets the circle, if it does.
bool line_hits(const Circle& c, cplx a, cplx b, double& t1, double& t2) {
  const cplx d = b - a;
  const cplx f = a - c.center;
  const double A = std::norm(d);
  const double B = 2.0 * (std::conj(d) * f).real();
  const double C = std::norm(f) - c.radius * c.radius;
  const double disc = B * B - 4.0 * A * C;
  if (A == 0.0 || disc <= 0.0) return false;
  const double sq = std::sqrt(disc);
  t1 = (-B - sq) / (2.0 * A);
  t2 = (-B + sq) / (2.0 * A);
  return t2 > 1e-12 && t1 < 1.0 - 1e-12;
}

// Point of the circle boundary reached by moving radially outward from z.
cplx exit_point(const Circle& c, cplx z) {
  cplx dir = z - c.center;
  if (std::abs(dir) == 0.0) dir = 1.0;
  return c.center + (c.radius * (1.0 + 1e-12)) * dir / std::abs(dir);
}

const Circle* containing(const std::vector<Circle>& obstacles, cplx z) {
  for (const Circle& c : obstacles)
    if (std::abs(z - c.center) <= c.radius) return &c;
  return nullptr;
}

}  // namespace

cplx PathPiece::point(double t) const {
  if (kind == Kind::Segment) return start + t * (end - start);
  return center + std::polar(radius, theta0 + t * (theta1 - theta0));
}

cplx PathPiece::derivative(double t) const {
  if (kind == Kind::Segment) return end - start;
  const double th = theta0 + t * (theta1 - theta0);
  return cplx{0.0, theta1 - theta0} * std::polar(radius, th);
}

double Path::distance_to(cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const PathPiece& p : pieces)
    for (int i = 0; i <= 256; ++i) best = std::min(best, std::abs(p.point(i / 256.0) - z));
  return best;
}

cplx circle_integral(const ComplexFn& f, const Circle& c, const QuadratureConfig& qc) {
  auto node = [&](int k, int n) {
    const cplx u = std::polar(1.0, 2.0 * kPi * k / n);
    return f(c.center + c.radius * u) * (cplx{0.0, c.radius} * u);
  };
  int n = std::max(4, qc.circle_nodes);
  cplx sum{0.0};
  for (int k = 0; k < n; ++k) sum += node(k, n);
  cplx value = sum * (2.0 * kPi / n);
  for (int i = 0; i <= qc.max_doublings; ++i) {
    for (int k = 1; k < 2 * n; k += 2) sum += node(k, 2 * n);
    n *= 2;
    const cplx next = sum * (2.0 * kPi / n);
    if (std::abs(next - value) <= qc.tol * std::max(1.0, std::abs(next))) return next;
    value = next;
  }
  throw Error(ErrorKind::NonConvergent, "trapezoid rule did not converge on circle");
}

cplx circle_moment(const ComplexFn& f, const Circle& c, int k, const QuadratureConfig& qc) {
  return circle_integral([&](cplx z) { return f(z) * ipow(z - c.center, -k - 1); }, c, qc) / kTwoPiI;
}

cplx segment_integral(const ComplexFn& f, cplx a, cplx b, const QuadratureConfig& qc) {
  return piece_integral(f, segment(a, b), qc);
}

cplx path_integral(const ComplexFn& f, const Path& p, const QuadratureConfig& qc) {
  cplx sum{0.0};
  for (const PathPiece& piece : p.pieces) sum += piece_integral(f, piece, qc);
  return sum;
}

Path route_path(cplx a, cplx b, const std::vector<Circle>& obstacles, const std::vector<cplx>& poles,
                double min_distance) {
  Path path;
  cplx from = a;
  cplx to = b;
  if (const Circle* c = containing(obstacles, a)) {
    from = exit_point(*c, a);
    path.pieces.push_back(segment(a, from));
  }
  PathPiece tail;
  bool has_tail = false;
  if (const Circle* c = containing(obstacles, b)) {
    to = exit_point(*c, b);
    tail = segment(to, b);
    has_tail = true;
  }

  struct Hit {
    double t1, t2;
    const Circle* c;
  };
  std::vector<Hit> hits;
  for (const Circle& c : obstacles) {
    double t1 = 0.0, t2 = 0.0;
    if (line_hits(c, from, to, t1, t2)) hits.push_back({std::max(t1, 0.0), std::min(t2, 1.0), &c});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& l, const Hit& r) { return l.t1 < r.t1; });
  cplx cur = from;
  for (const Hit& h : hits) {
    const cplx p1 = from + h.t1 * (to - from);
    const cplx p2 = from + h.t2 * (to - from);
    if (std::abs(p1 - cur) > 0.0) path.pieces.push_back(segment(cur, p1));
    path.pieces.push_back(arc(*h.c, p1, p2));
    cur = path.pieces.back().end;
  }
  if (std::abs(to - cur) > 0.0 || path.pieces.empty()) path.pieces.push_back(segment(cur, to));
  if (has_tail) path.pieces.push_back(tail);

  for (cplx z : poles)
    if (path.distance_to(z) < min_distance) throw Error(ErrorKind::PathThroughPole, "path passes too close to a pole");
  return path;
}

std::vector<Circle> disk_obstacles(const SchottkyData& s, double margin) {
  std::vector<Circle> out;
  for (int a : index_set(s.genus())) {
    const Disk d = disk(s, a);
    out.push_back({d.center, d.radius * (1.0 + margin)});
  }
  return out;
}

namespace {

double distance_to_disks(const SchottkyData& s, cplx z, int skip = 0) {
  double best = std::numeric_limits<double>::infinity();
  for (int b : index_set(s.genus())) {
    if (b == skip) continue;
    const Disk d = disk(s, b);
    best = std::min(best, std::abs(z - d.center) - d.radius);
  }
  return best;
}

}  // namespace

std::vector<Circle> pole_obstacles(const SchottkyData& s, const std::vector<cplx>& poles) {
  std::vector<Circle> out;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    std::vector<cplx> others;
    for (std::size_t j = 0; j < poles.size(); ++j)
      if (j != i) others.push_back(poles[j]);
    out.push_back(residue_circle(s, poles[i], others));
  }
  return out;
}

Circle residue_circle(const SchottkyData& s, cplx z, const std::vector<cplx>& others) {
  double dist = distance_to_disks(s, z);
  for (cplx o : others) dist = std::min(dist, std::abs(o - z));
  if (!(dist > 0.0)) throw Error(ErrorKind::PathThroughPole, "no room for a contour around the point");
  return {z, 0.5 * dist};
}

Circle alpha_circle(const SchottkyData& s, int a, const std::vector<cplx>& poles) {
  const Disk d = disk(s, a);
  double gap = std::numeric_limits<double>::infinity();
  for (int b : index_set(s.genus())) {
    if (b == a) continue;
    const Disk o = disk(s, b);
    gap = std::min(gap, std::abs(o.center - d.center) - o.radius - d.radius);
  }
  for (cplx p : poles) gap = std::min(gap, std::abs(p - d.center) - d.radius);
  if (!(gap > 0.0)) throw Error(ErrorKind::PathThroughPole, "no room for a contour around the disk");
  return {d.center, d.radius + 0.5 * gap};
}

Path beta_path(const SchottkyData& s, int a, const std::vector<cplx>& poles) {
  const Disk da = disk(s, a);
  const Disk db = disk(s, -a);
  const cplx dir = (db.center - da.center) / std::abs(db.center - da.center);
  const cplx z = da.center + da.radius * dir;
  const cplx end = s.generator(a)(z);
  auto obstacles = disk_obstacles(s, 0.02);
  for (const Circle& c : pole_obstacles(s, poles)) obstacles.push_back(c);
  return route_path(z, end, obstacles, poles, 0.0);
}

}  // namespace qf
