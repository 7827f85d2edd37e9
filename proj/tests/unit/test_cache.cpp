#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "quasiform/cache.hpp"

using namespace qf;

TEST_CASE("engine_key is stable and separates inputs") {
  const SchottkyData s = fixtures::genus2();
  const KernelConfig k1 = default_kernel(s, 1);
  CHECK(engine_key(s, k1, 16) == engine_key(s, k1, 16));
  CHECK(engine_key(s, k1, 16) != engine_key(s, k1, 32));
  CHECK(engine_key(s, k1, 16) != engine_key(s, default_kernel(s, 2), 16));
  SchottkyData t = s;
  t.handles[0] = derive_handle(s.W(1), s.W(-1), s.handles[0].q * 1.0000001);
  CHECK(engine_key(s, k1, 16) != engine_key(t, k1, 16));
}

TEST_CASE("engine artifacts round trip exactly") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = QuasiformEngine::assemble(s, default_kernel(s, 2), 12);
  std::stringstream buf;
  save_engine(e, buf);
  const QuasiformEngine r = load_engine(buf);
  CHECK(r.modes() == e.modes());
  CHECK(r.N() == e.N());
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  CHECK(r.psi_coeff(x, y) == e.psi_coeff(x, y));
  CHECK(r.theta_coeff(2, 1, x) == e.theta_coeff(2, 1, x));
}

TEST_CASE("corrupt artifacts are rejected") {
  std::stringstream buf("not an engine");
  CHECK_THROWS(load_engine(buf));
}

TEST_CASE("EngineCache reuses engines and honors per-weight cutoffs") {
  EngineCache cache({24, 12});
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine& a = cache.get(s, 1);
  const QuasiformEngine& b = cache.get(s, 1);
  CHECK(&a == &b);
  CHECK(a.modes() == 24);
  CHECK(cache.get(s, 2).modes() == 12);
  CHECK(cache.modes_for(3) == 12);
  CHECK(cache.size() == 2);
  cache.clear();
  CHECK(cache.size() == 0);
}
