#include <doctest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "quasiform/schottky.hpp"

using namespace qf;

namespace {

// All words of length k over the 2g letters, reduced or not.
std::vector<std::vector<int>> all_words(int g, int k) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 0; i < k; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& w : out)
      for (int a : index_set(g)) {
        auto v = w;
        v.push_back(a);
        next.push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

bool is_reduced(const std::vector<int>& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == -w[i - 1]) return false;
  return true;
}

}  // namespace

TEST_CASE("validate accepts separated disks") {
  CHECK(validate(fixtures::genus2()).ok);
  CHECK(validate(fixtures::genus2()).min_gap > 0.0);
  CHECK(validate(fixtures::genus1()).ok);
}

TEST_CASE("validate rejects duplicated handles") {
  SchottkyData s = fixtures::genus1();
  s.handles.push_back(s.handles.front());
  const ValidationReport v = validate(s);
  CHECK_FALSE(v.ok);
  CHECK(v.min_gap < 0.0);
}

TEST_CASE("disks contain their fixed points and generators swap interior and exterior") {
  const SchottkyData s = fixtures::genus2();
  for (int a : index_set(2)) {
    const Disk d = disk(s, a);
    CHECK(std::abs(s.W(a) - d.center) < d.radius);
    const MobiusMap g = s.generator(a);
    const Disk target = disk(s, -a);
    for (int k = 0; k < 8; ++k) {
      const cplx outside = d.center + std::polar(1.5 * d.radius, 0.8 * k);
      CHECK(std::abs(g(outside) - target.center) < target.radius);
    }
  }
}

TEST_CASE("reduced word counts 2g (2g-1)^(k-1)") {
  const SchottkyData s = fixtures::genus2();
  CHECK(reduced_words(s, 0).size() == 1);
  CHECK(reduced_words(s, 1).size() == 4);
  CHECK(reduced_words(s, 2).size() == 12);
  CHECK(reduced_words(fixtures::genus1(), 3).size() == 2);
  for (int k = 1; k <= 7; ++k) {
    std::size_t brute = 0;
    for (const auto& w : all_words(2, k)) brute += is_reduced(w) ? 1 : 0;
    std::size_t expected = 4;
    for (int i = 1; i < k; ++i) expected *= 3;
    CHECK(reduced_words(s, k).size() == expected);
    CHECK(brute == expected);
  }
}

TEST_CASE("reduced words carry their Moebius maps") {
  const SchottkyData s = fixtures::genus2();
  for (const GroupWord& w : reduced_words(s, 3)) {
    CHECK(w.reduced());
    CHECK(same_map(w.map, word_map(s, w.letters), 1e-12));
  }
}

TEST_CASE("primitive classes for genus one are a and a^-1") {
  const auto reps = primitive_class_reps(fixtures::genus1(), 5);
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].letters == std::vector<int>{1});
  CHECK(reps[1].letters == std::vector<int>{-1});
}

TEST_CASE("primitive class counts for genus two by brute-force necklaces") {
  const SchottkyData s = fixtures::genus2();
  for (int k = 1; k <= 5; ++k) {
    std::set<std::vector<int>> classes;
    for (const auto& w : all_words(2, k)) {
      if (!is_reduced(w) || w.front() == -w.back() || is_proper_power(w)) continue;
      std::vector<int> best = w;
      for (int r = 1; r < k; ++r) {
        const auto v = rotate_letters(w, r);
        if (std::lexicographical_compare(v.begin(), v.end(), best.begin(), best.end(),
                                         [](int x, int y) { return index_position(x) < index_position(y); }))
          best = v;
      }
      classes.insert(best);
    }
    std::size_t emitted = 0;
    for (const GroupWord& w : primitive_class_reps(s, 5)) emitted += w.length() == k ? 1 : 0;
    CHECK(emitted == classes.size());
  }
  std::size_t len2 = 0;
  for (const GroupWord& w : primitive_class_reps(s, 2)) len2 += w.length() == 2 ? 1 : 0;
  CHECK(len2 == 4);
}

TEST_CASE("every cyclically reduced word is conjugate to one emitted class") {
  const SchottkyData s = fixtures::genus2();
  const auto reps = primitive_class_reps(s, 5);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < reps.size(); ++i) index[reps[i].letters] = static_cast<int>(i);
  for (int k = 1; k <= 5; ++k) {
    for (const GroupWord& w : cyclically_reduced_words(s, k)) {
      if (is_proper_power(w.letters)) continue;
      int hits = 0;
      for (int r = 0; r < k; ++r) hits += index.count(rotate_letters(w.letters, r)) ? 1 : 0;
      CHECK(hits == 1);
      CHECK(index.count(canonical_rotation(w.letters, 2)) == 1);
    }
  }
}

TEST_CASE("class multiplier is rotation invariant") {
  const SchottkyData s = fixtures::genus2();
  for (const GroupWord& w : primitive_class_reps(s, 4)) {
    const cplx q = multiplier(w.map);
    for (int r = 1; r < w.length(); ++r)
      CHECK(std::abs(multiplier(word_map(s, rotate_letters(w.letters, r))) - q) < 1e-10);
  }
}

TEST_CASE("reduce_to_fundamental") {
  const SchottkyData s = fixtures::genus2();
  const cplx z0{0.2, -0.3};
  REQUIRE(in_fundamental_domain(s, z0));
  const Reduction id = reduce_to_fundamental(s, z0);
  CHECK(id.point == z0);
  CHECK(id.word.length() == 0);
  for (int a : index_set(2)) {
    const cplx z = s.generator(-a)(z0);
    CHECK_FALSE(in_fundamental_domain(s, z));
    const Reduction r = reduce_to_fundamental(s, z);
    CHECK(std::abs(r.point - z0) < 1e-12);
    CHECK(r.word.letters == std::vector<int>{a});
  }
  try {
    const cplx deep = s.generator(-1)(s.generator(-2)(s.generator(-1)(z0)));
    reduce_to_fundamental(s, deep, 1);
    FAIL("expected IterationCapExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IterationCapExceeded);
  }
}
