#include "quasiform/schottky.hpp"

#include <algorithm>
#include <sstream>

namespace qf {

Disk disk(const SchottkyData& s, int a) { return {s.w(a), std::sqrt(std::abs(s.rho(a)))}; }

ValidationReport validate(const SchottkyData& s) {
  ValidationReport rep;
  const int g = s.genus();
  if (g < 1) {
    rep.ok = false;
    rep.messages.push_back("genus must be at least 1");
    return rep;
  }
  const auto idx = index_set(g);
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const Disk da = disk(s, idx[i]);
      const Disk db = disk(s, idx[j]);
      const double gap = std::abs(da.center - db.center) - da.radius - db.radius;
      if (gap < rep.min_gap) {
        rep.min_gap = gap;
        rep.worst_a = idx[i];
        rep.worst_b = idx[j];
      }
    }
  }
  if (rep.min_gap <= 0.0) {
    rep.ok = false;
    std::ostringstream os;
    os << "disks " << rep.worst_a << " and " << rep.worst_b << " intersect (gap " << rep.min_gap << ")";
    rep.messages.push_back(os.str());
  }
  for (int a = 1; a <= g; ++a) {
    const auto& h = s.handle(a);
    const double aq = std::abs(h.q);
    if (!(aq > 0.0 && aq < 1.0)) {
      rep.ok = false;
      rep.messages.push_back("handle " + std::to_string(a) + ": |q| outside (0,1)");
    }
    for (int sign : {1, -1}) {
      const Disk d = disk(s, sign * a);
      if (!(std::abs(h.W(sign) - d.center) < d.radius)) {
        rep.ok = false;
        rep.messages.push_back("handle " + std::to_string(a) + ": fixed point outside its disk");
      }
    }
    // gamma_a carries C_a onto C_{-a}.
    const MobiusMap ga = s.generator(a);
    const Disk src = disk(s, a);
    const Disk dst = disk(s, -a);
    for (int k = 0; k < 8; ++k) {
      const cplx z = src.center + src.radius * std::polar(1.0, 2.0 * kPi * k / 8.0 + 0.1);
      const double r = std::abs(ga(z) - dst.center);
      if (std::abs(r - dst.radius) > 1e-9 * std::max(1.0, dst.radius)) {
        rep.ok = false;
        rep.messages.push_back("handle " + std::to_string(a) + ": generator does not pair its circles");
        break;
      }
    }
  }
  return rep;
}

bool GroupWord::reduced() const {
  for (std::size_t i = 1; i < letters.size(); ++i)
    if (letters[i] == -letters[i - 1]) return false;
  return true;
}

bool GroupWord::cyclically_reduced() const {
  if (!reduced()) return false;
  if (letters.size() < 2) return true;
  return letters.front() != -letters.back();
}

std::vector<int> letter_order(int genus) { return index_set(genus); }

namespace {

void extend(const SchottkyData& s, const std::vector<int>& order, int k, GroupWord& cur,
            const std::function<void(const GroupWord&)>& visit) {
  if (cur.length() == k) {
    visit(cur);
    return;
  }
  const MobiusMap prefix = cur.map;
  for (int a : order) {
    if (!cur.letters.empty() && cur.letters.back() == -a) continue;
    cur.letters.push_back(a);
    cur.map = prefix * s.generator(a);
    extend(s, order, k, cur, visit);
    cur.letters.pop_back();
  }
  cur.map = prefix;
}

}  // namespace

void for_each_reduced_word(const SchottkyData& s, int k, const std::function<void(const GroupWord&)>& visit) {
  GroupWord cur;
  cur.map = MobiusMap::identity();
  if (k <= 0) {
    visit(cur);
    return;
  }
  extend(s, letter_order(s.genus()), k, cur, visit);
}

std::vector<GroupWord> reduced_words(const SchottkyData& s, int k) {
  std::vector<GroupWord> out;
  for_each_reduced_word(s, k, [&](const GroupWord& w) { out.push_back(w); });
  return out;
}

std::vector<GroupWord> cyclically_reduced_words(const SchottkyData& s, int k) {
  std::vector<GroupWord> out;
  for_each_reduced_word(s, k, [&](const GroupWord& w) {
    if (w.cyclically_reduced()) out.push_back(w);
  });
  return out;
}

std::vector<int> rotate_letters(const std::vector<int>& w, int shift) {
  std::vector<int> out(w.size());
  const int n = static_cast<int>(w.size());
  for (int i = 0; i < n; ++i) out[i] = w[static_cast<std::size_t>((i + shift) % n)];
  return out;
}

bool is_proper_power(const std::vector<int>& w) {
  const int n = static_cast<int>(w.size());
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    if (rotate_letters(w, d) == w) return true;
  }
  return false;
}

std::vector<int> canonical_rotation(const std::vector<int>& w, int /*genus*/) {
  auto rank = [](const std::vector<int>& v) {
    std::vector<int> r(v.size());
    std::transform(v.begin(), v.end(), r.begin(), index_position);
    return r;
  };
  std::vector<int> best = w;
  std::vector<int> best_rank = rank(w);
  for (int s = 1; s < static_cast<int>(w.size()); ++s) {
    auto cand = rotate_letters(w, s);
    auto cr = rank(cand);
    if (cr < best_rank) {
      best = std::move(cand);
      best_rank = std::move(cr);
    }
  }
  return best;
}

MobiusMap word_map(const SchottkyData& s, const std::vector<int>& letters) {
  MobiusMap m = MobiusMap::identity();
  for (int a : letters) m = m * s.generator(a);
  return m;
}

std::vector<GroupWord> primitive_class_reps(const SchottkyData& s, int max_len) {
  std::vector<GroupWord> out;
  for (int k = 1; k <= max_len; ++k) {
    for_each_reduced_word(s, k, [&](const GroupWord& w) {
      if (!w.cyclically_reduced()) return;
      if (is_proper_power(w.letters)) return;
      if (canonical_rotation(w.letters, s.genus()) != w.letters) return;
      out.push_back(w);
    });
  }
  return out;
}

bool in_fundamental_domain(const SchottkyData& s, cplx z) {
  if (is_infinite(z)) return true;
  for (int a : index_set(s.genus())) {
    const Disk d = disk(s, a);
    if (std::abs(z - d.center) < d.radius * (1.0 - 1e-13)) return false;
  }
  return true;
}

Reduction reduce_to_fundamental(const SchottkyData& s, cplx z, int max_steps) {
  Reduction out{z, GroupWord{{}, MobiusMap::identity()}};
  const auto idx = index_set(s.genus());
  for (int step = 0; step <= max_steps; ++step) {
    int inside = 0;
    for (int a : idx) {
      const Disk d = disk(s, a);
      if (std::abs(out.point - d.center) < d.radius * (1.0 - 1e-13)) {
        inside = a;
        break;
      }
    }
    if (inside == 0) return out;
    const MobiusMap g = s.generator(inside);
    out.point = g(out.point);
    out.word.letters.insert(out.word.letters.begin(), inside);
    out.word.map = g * out.word.map;
  }
  throw Error(ErrorKind::IterationCapExceeded, "point did not reach the fundamental domain (too close to the limit set)");
}

}  // namespace qf
