#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace dsvar {

/// One step of splitmix64; used to derive well-separated child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic child seed from a parent seed and a path of stream indices.
///
/// child_seed(s, {a, b}) == child_seed(child_seed(s, {a}), {b}), so a
/// replication (cell, rep) can be re-run in isolation.
std::uint64_t child_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept;
std::uint64_t child_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// Random source with platform-independent variate generators.
///
/// The standard library's distribution objects are implementation-defined, so
/// every variate here is derived directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, bound) without modulo bias.
  std::uint64_t uniform_index(std::uint64_t bound);

  double exponential() ;
  double normal();
  /// Gamma(shape, 1).
  double gamma(double shape);
  double beta(double a, double b);
  /// Student t with `dof` degrees of freedom (unit scale).
  double student_t(double dof);

  /// Fisher-Yates shuffle of 0..n-1.
  std::vector<int> permutation(int n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace dsvar
