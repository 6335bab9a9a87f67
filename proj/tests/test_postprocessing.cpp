#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "diqkd/postprocessing.hpp"
#include "diqkd/rng.hpp"

using namespace diqkd;
using namespace diqkd::postprocessing;

namespace {

// Dense GF(2) matrix-vector product straight from the Toeplitz definition,
// used as the oracle for the word-packed implementation.
Bits naive_toeplitz(const Bits& x, const ToeplitzSeed& seed) {
  Bits y(static_cast<size_t>(seed.n_out), 0);
  for (std::int64_t i = 0; i < seed.n_out; ++i) {
    unsigned acc = 0;
    for (std::int64_t j = 0; j < seed.n_in; ++j) {
      acc ^= seed.bits[static_cast<size_t>(i - j + seed.n_in - 1)] &
             x[static_cast<size_t>(j)];
    }
    y[static_cast<size_t>(i)] = static_cast<std::uint8_t>(acc);
  }
  return y;
}

Bits from_uint(std::uint64_t value, std::int64_t n) {
  Bits out(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<size_t>(i)] = (value >> i) & 1u;
  return out;
}

Bits xor_bits(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

}  // namespace

TEST_CASE("random bits mirror the word stream") {
  Rng rng(123);
  Bits bits = random_bits(70, rng);
  REQUIRE(bits.size() == 70);

  Rng ref(123);
  std::uint64_t w0 = ref.next_u64();
  std::uint64_t w1 = ref.next_u64();
  for (int i = 0; i < 64; ++i) CHECK(bits[i] == ((w0 >> i) & 1u));
  for (int i = 64; i < 70; ++i) CHECK(bits[i] == ((w1 >> (i - 64)) & 1u));

  Rng again(123);
  CHECK(random_bits(70, again) == bits);
  Rng empty_rng(5);
  CHECK(random_bits(0, empty_rng).empty());
  CHECK_THROWS_AS(random_bits(-1, empty_rng), std::invalid_argument);
}

TEST_CASE("reconciliation charges the budget and returns the reference") {
  Bits a = {1, 0, 1, 1, 0, 0, 1};
  Bits b = {1, 1, 1, 0, 0, 0, 1};
  ReconcileResult r = reconcile(a, b, 12);
  CHECK(r.corrected == a);
  CHECK(r.leaked_bits == 12);

  Bits shorter = {1, 0};
  CHECK_THROWS_AS(reconcile(a, shorter, 5), std::invalid_argument);
  CHECK_THROWS_AS(reconcile(a, b, -1), std::invalid_argument);
}

TEST_CASE("toeplitz hash on a worked example") {
  // x = (1,0,1,1), seed bits d0..d4 = (1,0,1,1,0), ell = 2. The matrix rows
  // are (d3,d2,d1,d0) = (1,1,0,1) and (d4,d3,d2,d1) = (0,1,1,0), so
  // y = (1+0+0+1, 0+0+1+0) = (0,1) over GF(2).
  ToeplitzSeed seed{4, 2, {1, 0, 1, 1, 0}};
  Bits x = {1, 0, 1, 1};
  Bits want = {0, 1};
  CHECK(toeplitz_hash(x, seed) == want);
  CHECK(naive_toeplitz(x, seed) == want);
}

TEST_CASE("toeplitz hash matches the dense oracle") {
  Rng rng(321);
  for (int trial = 0; trial < 60; ++trial) {
    std::int64_t n_in = 1 + std::int64_t(rng.below(200));
    std::int64_t n_out = 1 + std::int64_t(rng.below(std::uint64_t(std::min<std::int64_t>(n_in, 64))));
    ToeplitzSeed seed = sample_toeplitz_seed(n_in, n_out, rng);
    Bits x = random_bits(n_in, rng);
    CHECK(toeplitz_hash(x, seed) == naive_toeplitz(x, seed));
  }
}

TEST_CASE("toeplitz hash is linear") {
  Rng rng(654);
  for (int trial = 0; trial < 20; ++trial) {
    std::int64_t n_in = 5 + std::int64_t(rng.below(120));
    std::int64_t n_out = 1 + std::int64_t(rng.below(std::uint64_t(std::min<std::int64_t>(n_in, 48))));
    ToeplitzSeed seed = sample_toeplitz_seed(n_in, n_out, rng);
    Bits x = random_bits(n_in, rng);
    Bits y = random_bits(n_in, rng);
    CHECK(toeplitz_hash(xor_bits(x, y), seed) ==
          xor_bits(toeplitz_hash(x, seed), toeplitz_hash(y, seed)));
  }
}

TEST_CASE("toeplitz hash validates its inputs") {
  ToeplitzSeed seed{4, 2, {1, 0, 1, 1, 0}};
  Bits wrong_len = {1, 0, 1};
  CHECK_THROWS_AS(toeplitz_hash(wrong_len, seed), std::invalid_argument);
  Bits bad_value = {1, 0, 2, 1};
  CHECK_THROWS_AS(toeplitz_hash(bad_value, seed), std::invalid_argument);
  ToeplitzSeed bad_seed{4, 2, {1, 0, 1}};
  Bits x = {1, 0, 1, 1};
  CHECK_THROWS_AS(toeplitz_hash(x, bad_seed), std::invalid_argument);
}

TEST_CASE("every nonzero input collides on exactly 2^-ell of the seeds") {
  // Small enough to enumerate: the collision count must be exactly
  // 2^(seed_len - ell) for every nonzero input, the defining property of
  // the family.
  const std::int64_t n_in = 6, n_out = 3;
  const std::int64_t seed_len = n_in + n_out - 1;
  const std::int64_t want = std::int64_t(1) << (seed_len - n_out);
  const Bits zero(static_cast<size_t>(n_out), 0);

  for (std::uint64_t xv = 1; xv < (1u << n_in); ++xv) {
    Bits x = from_uint(xv, n_in);
    std::int64_t collisions = 0;
    for (std::uint64_t sv = 0; sv < (1u << seed_len); ++sv) {
      ToeplitzSeed seed{n_in, n_out, from_uint(sv, seed_len)};
      if (toeplitz_hash(x, seed) == zero) ++collisions;
    }
    CHECK(collisions == want);
  }
}

TEST_CASE("seed sampling sizes and limits") {
  Rng rng(777);
  ToeplitzSeed seed = sample_toeplitz_seed(100, 30, rng);
  CHECK(seed.n_in == 100);
  CHECK(seed.n_out == 30);
  CHECK(seed.bits.size() == 129);

  ToeplitzSeed empty = sample_toeplitz_seed(100, 0, rng);
  CHECK(empty.bits.empty());
  CHECK_THROWS_AS(sample_toeplitz_seed(10, 11, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_toeplitz_seed(-1, 0, rng), std::invalid_argument);
}

TEST_CASE("verification hash length") {
  CHECK(verification_hash_length(1e-12) == 40);
  CHECK(verification_hash_length(9.5367431640625e-07) == 20);  // 2^-20
  CHECK(verification_hash_length(0.015625) == 6);
  CHECK(verification_hash_length(0.5) == 1);
  CHECK(verification_hash_length(0.25) == 2);
  CHECK(verification_hash_length(0.3) == 2);
  CHECK_THROWS_AS(verification_hash_length(0.0), std::invalid_argument);
  CHECK_THROWS_AS(verification_hash_length(1.0), std::invalid_argument);
}

TEST_CASE("verification accepts equal strings and rarely misses") {
  Rng rng(888);
  for (int trial = 0; trial < 50; ++trial) {
    Bits a = random_bits(64, rng);
    CHECK(verify(a, a, 1e-9, rng));
  }

  Bits a = random_bits(50, rng);
  Bits b = a;
  b[3] ^= 1;
  b[17] ^= 1;
  CHECK_FALSE(verify(a, random_bits(49, rng), 0.5, rng));

  // eps = 2^-6: a fixed unequal pair passes on exactly 1/64 of the seeds.
  const double eps = 0.015625;
  const int trials = 200000;
  int passes = 0;
  for (int t = 0; t < trials; ++t) {
    if (verify(a, b, eps, rng)) ++passes;
  }
  double observed = double(passes) / trials;
  double sigma = std::sqrt(eps * (1.0 - eps) / trials);
  CHECK(observed <= eps + 3.5 * sigma);
  CHECK(observed >= eps - 3.5 * sigma);
}

TEST_CASE("privacy amplification basics") {
  Rng rng(999);
  ToeplitzSeed none = sample_toeplitz_seed(40, 0, rng);
  CHECK(privacy_amplify(random_bits(40, rng), none).empty());

  ToeplitzSeed seed = sample_toeplitz_seed(40, 12, rng);
  Bits zeros(40, 0);
  CHECK(privacy_amplify(zeros, seed) == Bits(12, 0));

  Bits x = random_bits(40, rng);
  CHECK(privacy_amplify(x, seed) == toeplitz_hash(x, seed));

  ToeplitzSeed overlong{4, 6, Bits(9, 0)};
  CHECK_THROWS_AS(privacy_amplify(x, overlong), std::invalid_argument);
}

TEST_CASE("collision rate estimate tracks two-universality") {
  Rng rng(1010);
  double half = two_universality_estimate(32, 1, 20000, rng);
  CHECK(half == doctest::Approx(0.5).epsilon(0.05));

  double small = two_universality_estimate(32, 8, 100000, rng);
  double p = std::pow(2.0, -8.0);
  double sigma = std::sqrt(p * (1.0 - p) / 100000.0);
  CHECK(small <= p + 4.0 * sigma);
  CHECK(small >= p - 4.0 * sigma);
}

TEST_CASE("hex formatting") {
  CHECK(to_hex({}) == "");
  CHECK(to_hex({1, 0, 1, 0}) == "a");
  CHECK(to_hex({1, 0, 1, 0, 0}) == "a0");
  CHECK(to_hex({0, 0, 0, 0, 0, 0, 0, 1}) == "01");
  CHECK(to_hex({1, 1, 1, 1, 1, 1, 1, 1}) == "ff");
  CHECK(to_hex({0, 0, 0, 1, 0, 0, 1, 0, 1, 1}) == "12c");
  Bits bad = {0, 3};
  CHECK_THROWS_AS(to_hex(bad), std::invalid_argument);
}

TEST_CASE("key file payload") {
  std::string text = format_key({1, 0, 1, 0}, 42);
  std::string want = "ell=4 seed_fp=" + seed_fingerprint(42) + "\na\n";
  CHECK(text == want);
  CHECK(format_key({}, 7) == "ell=0 seed_fp=" + seed_fingerprint(7) + "\n\n");
}
