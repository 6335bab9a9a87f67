#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace diqkd {

/// One splitmix64 step; mutates state and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seedable deterministic generator. The raw stream is std::mt19937_64,
/// whose output sequence is fixed by the standard. Derived draws below
/// avoid std::*_distribution on purpose: those are not bit-stable across
/// standard libraries, and transcripts must replay byte-identically
/// everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent child stream keyed by a label. Depends only on this
  /// stream's seed and the label, never on how much has been drawn, so
  /// subsystems can be split up front and extended independently.
  Rng stream(std::string_view label) const;

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform();

  bool bernoulli(double p);

  /// Uniform over {0, ..., n-1} by rejection. n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// k distinct indices from {0, ..., n-1}, uniformly, in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    Rng& rng);

/// Short stable hex digest of a seed, for key file headers.
std::string seed_fingerprint(std::uint64_t seed);

}  // namespace diqkd
