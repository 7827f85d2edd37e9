#include "quasiform/cache.hpp"

#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace qf {

namespace {

constexpr char kMagic[8] = {'Q', 'F', 'E', 'N', 'G', '0', '0', '1'};

class Hasher {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 1099511628211ULL;
    }
  }
  void value(cplx z) {
    const double parts[2] = {z.real(), z.imag()};
    bytes(parts, sizeof(parts));
  }
  void value(int v) { bytes(&v, sizeof(v)); }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ULL;
};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorKind::InvalidConfig, "truncated engine artifact");
  return v;
}

void put_matrix(std::ostream& out, const MatrixC& m) {
  put<std::int64_t>(out, m.rows());
  put<std::int64_t>(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(cplx) * m.size()));
}

MatrixC take_matrix(std::istream& in) {
  const auto rows = take<std::int64_t>(in);
  const auto cols = take<std::int64_t>(in);
  if (rows < 0 || cols < 0 || rows > 100000 || cols > 100000) throw Error(ErrorKind::InvalidConfig, "bad matrix shape in engine artifact");
  MatrixC m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(cplx) * m.size()));
  if (!in) throw Error(ErrorKind::InvalidConfig, "truncated engine artifact");
  return m;
}

void put_combos(std::ostream& out, const std::vector<HoloCombo>& v) {
  put<std::int64_t>(out, static_cast<std::int64_t>(v.size()));
  for (const HoloCombo& h : v) {
    put_matrix(out, h.vec);
    put_matrix(out, h.rat);
  }
}

std::vector<HoloCombo> take_combos(std::istream& in) {
  const auto n = take<std::int64_t>(in);
  if (n < 0 || n > 100000) throw Error(ErrorKind::InvalidConfig, "bad combo count in engine artifact");
  std::vector<HoloCombo> v(static_cast<std::size_t>(n));
  for (HoloCombo& h : v) {
    h.vec = take_matrix(in);
    h.rat = take_matrix(in);
  }
  return v;
}

}  // namespace

std::string engine_key(const SchottkyData& s, const KernelConfig& cfg, int modes) {
  Hasher h;
  for (const HandleParams& p : s.handles) {
    h.value(p.w_plus);
    h.value(p.w_minus);
    h.value(p.rho);
  }
  h.value(cfg.N);
  h.value(modes);
  for (cplx a : cfg.limit_points) h.value(a);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h.digest() << "-N" << std::dec << cfg.N << "-M" << modes;
  return os.str();
}

void save_engine(const QuasiformEngine& e, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  put<std::int32_t>(out, e.surface_.genus());
  for (const HandleParams& p : e.surface_.handles) {
    for (cplx z : {p.W_plus, p.W_minus, p.q, p.w_plus, p.w_minus, p.rho, p.sqrt_rho}) put(out, z);
  }
  put<std::int32_t>(out, e.kernel_.N);
  for (cplx a : e.kernel_.limit_points) put(out, a);
  put<std::int32_t>(out, e.modes_);
  for (bool f : e.flips_) put<std::uint8_t>(out, f ? 1 : 0);
  for (cplx b : e.branch_) put(out, b);
  put_matrix(out, e.Atilde_);
  put_matrix(out, e.K_);
  put(out, e.spectral_radius_);
  put(out, e.rcond_);
  put_combos(out, e.theta0_);
  put_combos(out, e.theta_);
  put_combos(out, e.h_);
  if (!out) throw Error(ErrorKind::InvalidConfig, "failed to write engine artifact");
}

QuasiformEngine load_engine(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorKind::InvalidConfig, "not an engine artifact or version mismatch");
  QuasiformEngine e;
  const int g = take<std::int32_t>(in);
  if (g < 1 || g > 64) throw Error(ErrorKind::InvalidConfig, "bad genus in engine artifact");
  for (int i = 0; i < g; ++i) {
    HandleParams p;
    for (cplx* z : {&p.W_plus, &p.W_minus, &p.q, &p.w_plus, &p.w_minus, &p.rho, &p.sqrt_rho}) *z = take<cplx>(in);
    e.surface_.handles.push_back(p);
  }
  const int N = take<std::int32_t>(in);
  if (N < 1 || N > 64) throw Error(ErrorKind::InvalidConfig, "bad weight in engine artifact");
  std::vector<cplx> pts(static_cast<std::size_t>(2 * N - 1));
  for (cplx& a : pts) a = take<cplx>(in);
  e.kernel_ = KernelConfig::make(N, pts);
  e.modes_ = take<std::int32_t>(in);
  e.flips_.resize(static_cast<std::size_t>(2 * g));
  for (std::size_t i = 0; i < e.flips_.size(); ++i) e.flips_[i] = take<std::uint8_t>(in) != 0;
  e.branch_.resize(static_cast<std::size_t>(2 * g));
  for (cplx& b : e.branch_) b = take<cplx>(in);
  e.Atilde_ = take_matrix(in);
  e.K_ = take_matrix(in);
  e.spectral_radius_ = take<double>(in);
  e.rcond_ = take<double>(in);
  e.theta0_ = take_combos(in);
  e.theta_ = take_combos(in);
  e.h_ = take_combos(in);
  return e;
}

EngineCache::EngineCache(std::vector<int> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw Error(ErrorKind::InvalidConfig, "engine cache needs at least one mode cutoff");
}

int EngineCache::modes_for(int N) const {
  const auto i = static_cast<std::size_t>(N - 1);
  return i < modes_.size() ? modes_[i] : modes_.back();
}

const QuasiformEngine& EngineCache::get(const SchottkyData& s, int N) {
  const KernelConfig cfg = default_kernel(s, N);
  const int M = modes_for(N);
  const std::string key = engine_key(s, cfg, M);
  auto it = engines_.find(key);
  if (it == engines_.end())
    it = engines_.emplace(key, std::make_unique<QuasiformEngine>(QuasiformEngine::assemble(s, cfg, M))).first;
  return *it->second;
}

}  // namespace qf
