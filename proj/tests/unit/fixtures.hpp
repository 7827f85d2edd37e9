#pragma once

#include <random>
#include <vector>

#include "quasiform/sewing.hpp"

namespace fixtures {

using qf::cplx;

// Two handles with |q| = 0.02, well separated disks.
inline qf::SchottkyData genus2() {
  qf::SchottkyData s;
  s.handles.push_back(qf::derive_handle({1.0, 0.2}, {-1.0, 0.1}, {0.02, 0.0}));
  s.handles.push_back(qf::derive_handle({0.1, 1.5}, {-0.2, -1.4}, {0.0, 0.02}));
  return s;
}

inline qf::SchottkyData genus3() {
  qf::SchottkyData s = genus2();
  s.handles.push_back(qf::derive_handle({2.2, -1.6}, {-2.3, 1.7}, {0.015, 0.01}));
  return s;
}

inline qf::SchottkyData genus1(cplx q = {0.01, 0.0}) {
  qf::SchottkyData s;
  s.handles.push_back(qf::derive_handle({1.0, 0.0}, {-1.0, 0.0}, q));
  return s;
}

// Points of the fundamental domain inside |z| < 1.2 staying clear of every disk.
inline std::vector<cplx> domain_points(const qf::SchottkyData& s, int count, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx z{u(rng), u(rng)};
    bool ok = std::abs(z) < 1.2;
    for (int a : qf::index_set(s.genus())) {
      const qf::Disk d = qf::disk(s, a);
      ok = ok && std::abs(z - d.center) > 1.5 * d.radius + 0.05;
    }
    if (ok) out.push_back(z);
  }
  return out;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace fixtures
