#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace hyperspec {

/// Counter-based Philox4x64-10 stream keyed by (seed, stream_id). Block b of a stream is
/// Philox(counter = {b, 0, 0, 0}, key = {seed, stream_id}); words are consumed in order.
/// All derived variates use only integer arithmetic and libm, so streams are reproducible
/// across platforms with IEEE doubles.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal (Box-Muller, both outputs used).
  double normal();
  /// Standard complex Gaussian: E|a|^2 = 1.
  std::complex<double> complex_normal();
  /// Poisson variate by sequential inversion; large means are split into pieces of at most 16.
  std::uint64_t poisson(double mean);
  bool bernoulli(double p) { return uniform() < p; }

  /// The raw Philox4x64-10 block function.
  static std::array<std::uint64_t, 4> philox(std::array<std::uint64_t, 4> counter, std::array<std::uint64_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace hyperspec
