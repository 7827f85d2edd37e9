#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include "quasiform/sewing.hpp"

namespace qf {

// Stable hash of the sewing parameters, weight, cutoff and limit points.
std::string engine_key(const SchottkyData& s, const KernelConfig& cfg, int modes);

// Binary artifact holding the assembled engine state, with a version tag.
void save_engine(const QuasiformEngine& e, std::ostream& out);
QuasiformEngine load_engine(std::istream& in);

// In-memory engines keyed by engine_key, built with the default kernel for
// each surface. Engines are never mutated once stored.
class EngineCache {
 public:
  // modes[N - 1] is the cutoff used for weight N; missing weights use the last entry.
  explicit EngineCache(std::vector<int> modes = {32, 16, 16});

  const QuasiformEngine& get(const SchottkyData& s, int N);
  int modes_for(int N) const;
  std::size_t size() const { return engines_.size(); }
  void clear() { engines_.clear(); }

 private:
  std::vector<int> modes_;
  std::map<std::string, std::unique_ptr<QuasiformEngine>> engines_;
};

}  // namespace qf
