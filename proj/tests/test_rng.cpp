#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "diqkd/rng.hpp"

using diqkd::Rng;

// reference outputs of the splitmix64 mixer for state 0, as published with
// the original algorithm
TEST_CASE("splitmix64 known answers") {
  std::uint64_t state = 0;
  CHECK(diqkd::splitmix64(state) == 0xE220A8397B1DCDAFull);
  CHECK(diqkd::splitmix64(state) == 0x6E789E6AA1B965F4ull);
  CHECK(diqkd::splitmix64(state) == 0x06C45D188009454Full);
  std::uint64_t other = 0x123456789ABCDEF0ull;
  CHECK(diqkd::splitmix64(other) == 0x161922C645CE50E8ull);
}

TEST_CASE("raw stream matches the standard engine") {
  // the wrapper must not perturb the mt19937_64 sequence the standard pins
  // down bit for bit
  Rng rng(42);
  std::mt19937_64 reference(42);
  for (int i = 0; i < 1000; ++i) CHECK(rng.next_u64() == reference());
}

TEST_CASE("uniform is the top 53 bits over 2^53") {
  Rng rng(7);
  std::mt19937_64 reference(7);
  for (int i = 0; i < 1000; ++i) {
    const double expected =
        static_cast<double>(reference() >> 11) * 0x1.0p-53;
    const double got = rng.uniform();
    CHECK(got == expected);
    CHECK(got >= 0.0);
    CHECK(got < 1.0);
  }
}

TEST_CASE("same seed, same sequence") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("streams depend on label and parent seed only") {
  Rng parent(99);
  Rng before = parent.stream("charlie");
  for (int i = 0; i < 57; ++i) parent.next_u64();
  Rng after = parent.stream("charlie");
  for (int i = 0; i < 20; ++i) CHECK(before.next_u64() == after.next_u64());

  Rng other = parent.stream("alice");
  Rng charlie = parent.stream("charlie");
  bool all_equal = true;
  for (int i = 0; i < 20; ++i) {
    if (other.next_u64() != charlie.next_u64()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("bernoulli edge probabilities") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    CHECK_FALSE(rng.bernoulli(0.0));
    CHECK(rng.bernoulli(1.0));
  }
  CHECK_THROWS_AS(rng.bernoulli(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(rng.bernoulli(1.1), std::invalid_argument);
}

TEST_CASE("bernoulli frequency is sane") {
  Rng rng(11);
  int hits = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
  const double rate = static_cast<double>(hits) / trials;
  // 5 sigma of sqrt(0.3*0.7/1e5) ~ 0.0072
  CHECK(rate == doctest::Approx(0.3).epsilon(0.03));
}

TEST_CASE("below stays in range and covers it") {
  Rng rng(17);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = rng.below(7);
    CHECK(x < 7);
    seen.insert(x);
  }
  CHECK(seen.size() == 7);
  for (int i = 0; i < 10; ++i) CHECK(rng.below(1) == 0);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("sample_without_replacement yields distinct valid indices") {
  Rng rng(23);
  auto idx = diqkd::sample_without_replacement(50, 20, rng);
  CHECK(idx.size() == 20);
  std::set<std::size_t> uniq(idx.begin(), idx.end());
  CHECK(uniq.size() == 20);
  for (std::size_t i : idx) CHECK(i < 50);

  auto full = diqkd::sample_without_replacement(10, 10, rng);
  std::sort(full.begin(), full.end());
  for (std::size_t i = 0; i < 10; ++i) CHECK(full[i] == i);

  CHECK_THROWS_AS(diqkd::sample_without_replacement(5, 6, rng), std::invalid_argument);
}

TEST_CASE("subset sampling is unbiased enough") {
  Rng rng(31);
  std::vector<int> counts(10, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i : diqkd::sample_without_replacement(10, 3, rng)) {
      counts[i] += 1;
    }
  }
  // every index appears with probability 3/10
  for (int c : counts) {
    CHECK(static_cast<double>(c) / trials == doctest::Approx(0.3).epsilon(0.05));
  }
}

TEST_CASE("seed fingerprint is stable hex") {
  const std::string fp = diqkd::seed_fingerprint(12345);
  CHECK(fp.size() == 16);
  CHECK(fp == diqkd::seed_fingerprint(12345));
  CHECK(fp != diqkd::seed_fingerprint(12346));
  CHECK(fp.find_first_not_of("0123456789abcdef") == std::string::npos);
}
