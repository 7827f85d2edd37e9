#pragma once

#include <functional>
#include <vector>

#include "quasiform/schottky.hpp"

namespace qf {

using ComplexFn = std::function<cplx(cplx)>;

struct QuadratureConfig {
  int circle_nodes = 64;    // starting node count for the trapezoid rule
  int max_doublings = 3;    // NonConvergent after this many failed doublings
  double tol = 1e-12;       // relative to max(1, |value|)
  int max_depth = 12;       // interval bisection depth for Gauss-Legendre
};

struct Circle {
  cplx center;
  double radius;
};

// One piece of a contour: a segment from start to end, or an arc of the
// circle (center, radius) from angle theta0 to theta1.
struct PathPiece {
  enum class Kind { Segment, Arc } kind = Kind::Segment;
  cplx start{}, end{};
  cplx center{};
  double radius = 0.0;
  double theta0 = 0.0, theta1 = 0.0;
  cplx point(double t) const;       // t in [0, 1]
  cplx derivative(double t) const;  // d point / dt
};

struct Path {
  std::vector<PathPiece> pieces;
  cplx start() const { return pieces.front().start; }
  cplx end() const { return pieces.back().end; }
  // Smallest distance from z to any point of the path, sampled densely.
  double distance_to(cplx z) const;
};

// Counterclockwise integral of f(z) dz; trapezoid rule with node doubling.
cplx circle_integral(const ComplexFn& f, const Circle& c, const QuadratureConfig& qc = {});
// (1/2 pi i) times the circle integral of f(z) (z - c)^{-k-1}: k-th Taylor or
// Laurent coefficient about the circle center.
cplx circle_moment(const ComplexFn& f, const Circle& c, int k, const QuadratureConfig& qc = {});
// Integral of f(z) dz along a straight segment, adaptive 20-point Gauss-Legendre.
cplx segment_integral(const ComplexFn& f, cplx a, cplx b, const QuadratureConfig& qc = {});
cplx path_integral(const ComplexFn& f, const Path& p, const QuadratureConfig& qc = {});

// Straight path from a to b with every crossing of an obstacle circle replaced
// by the shorter arc around it. Endpoints lying on or inside an obstacle leave
// it radially first. Throws PathThroughPole if the result still passes closer
// than min_distance to any point in poles.
Path route_path(cplx a, cplx b, const std::vector<Circle>& obstacles, const std::vector<cplx>& poles = {},
                double min_distance = 0.0);

// Disks of the surface enlarged by the factor (1 + margin).
std::vector<Circle> disk_obstacles(const SchottkyData& s, double margin);
// Small circle around each pole, radius half the distance to the nearest disk or other pole.
std::vector<Circle> pole_obstacles(const SchottkyData& s, const std::vector<cplx>& poles);

// Path beta_a from the point z of C_a nearest the center of C_{-a} to gamma_a z,
// routed around the other disks and the given poles.
Path beta_path(const SchottkyData& s, int a, const std::vector<cplx>& poles = {});
// Circle homotopic to C_a in the fundamental domain, pushed outwards halfway to
// the nearest other disk or pole.
Circle alpha_circle(const SchottkyData& s, int a, const std::vector<cplx>& poles = {});
// Circle about z at half the distance to the nearest disk or listed singularity.
Circle residue_circle(const SchottkyData& s, cplx z, const std::vector<cplx>& others = {});

}  // namespace qf
