#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quasiform/mobius.hpp"

namespace qf {

struct Disk {
  cplx center;
  double radius;
};

// Isometric circle of gamma_a (a > 0) or gamma_{-a}: center w_a, radius |rho_a|^{1/2}.
Disk disk(const SchottkyData& s, int a);

struct ValidationReport {
  bool ok = true;
  double min_gap = 0.0;  // smallest |c_a - c_b| - r_a - r_b over pairs; negative on overlap
  int worst_a = 0;
  int worst_b = 0;
  std::vector<std::string> messages;
};

ValidationReport validate(const SchottkyData& s);

// Reduced word gamma_{l_1} ... gamma_{l_k}; map(z) applies l_k first.
struct GroupWord {
  std::vector<int> letters;
  MobiusMap map;

  int length() const { return static_cast<int>(letters.size()); }
  bool reduced() const;
  bool cyclically_reduced() const;
};

// Letter order used for enumeration: 1, -1, 2, -2, ...
std::vector<int> letter_order(int genus);

// Visits every reduced word of length k in lexicographic letter order.
void for_each_reduced_word(const SchottkyData& s, int k, const std::function<void(const GroupWord&)>& visit);
std::vector<GroupWord> reduced_words(const SchottkyData& s, int k);
std::vector<GroupWord> cyclically_reduced_words(const SchottkyData& s, int k);

// Word helpers on letter sequences.
std::vector<int> rotate_letters(const std::vector<int>& w, int shift);
bool is_proper_power(const std::vector<int>& w);
std::vector<int> canonical_rotation(const std::vector<int>& w, int genus);
MobiusMap word_map(const SchottkyData& s, const std::vector<int>& letters);

// One cyclically reduced representative (minimal rotation) per primitive
// conjugacy class, for lengths 1..max_len.
std::vector<GroupWord> primitive_class_reps(const SchottkyData& s, int max_len);

bool in_fundamental_domain(const SchottkyData& s, cplx z);

struct Reduction {
  cplx point;
  GroupWord word;  // point = word.map(z)
};

// Maps z into the fundamental domain by repeatedly applying gamma_a when z lies
// inside disk a.
Reduction reduce_to_fundamental(const SchottkyData& s, cplx z, int max_steps = 200);

}  // namespace qf
