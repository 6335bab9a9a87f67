#include "diqkd/postprocessing.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

namespace diqkd::postprocessing {

namespace {

// LSB-first packing: bit k of the stream lands in word k/64, position k%64.
// One zero word of slack at the end lets window extraction read past the
// last occupied word without a bounds check.
std::vector<std::uint64_t> pack_bits(const Bits& bits) {
  std::vector<std::uint64_t> words(bits.size() / 64 + 2, 0);
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k]) words[k / 64] |= std::uint64_t{1} << (k % 64);
  }
  return words;
}

void check_bits(const Bits& bits, const char* what) {
  for (std::uint8_t b : bits) {
    if (b > 1) throw std::invalid_argument(std::string(what) + ": bits must be 0 or 1");
  }
}

}  // namespace

Bits random_bits(std::int64_t n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("random_bits: negative length");
  Bits out(static_cast<std::size_t>(n));
  std::uint64_t word = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return out;
}

ReconcileResult reconcile(const Bits& x_a, const Bits& x_b, std::int64_t leak_budget) {
  if (x_a.size() != x_b.size()) {
    throw std::invalid_argument("reconcile: length mismatch");
  }
  if (leak_budget < 0) throw std::invalid_argument("reconcile: negative leak budget");
  ReconcileResult r;
  r.corrected = x_a;
  r.leaked_bits = leak_budget;
  return r;
}

ToeplitzSeed sample_toeplitz_seed(std::int64_t n_in, std::int64_t n_out, Rng& rng) {
  if (n_in < 0 || n_out < 0) {
    throw std::invalid_argument("sample_toeplitz_seed: negative dimension");
  }
  if (n_out > n_in) {
    throw std::invalid_argument("sample_toeplitz_seed: output longer than input");
  }
  ToeplitzSeed seed;
  seed.n_in = n_in;
  seed.n_out = n_out;
  std::int64_t len = (n_out == 0) ? 0 : n_in + n_out - 1;
  seed.bits = random_bits(len, rng);
  return seed;
}

Bits toeplitz_hash(const Bits& x, const ToeplitzSeed& seed) {
  if (static_cast<std::int64_t>(x.size()) != seed.n_in) {
    throw std::invalid_argument("toeplitz_hash: input length mismatch");
  }
  if (seed.n_out == 0) return {};
  if (static_cast<std::int64_t>(seed.bits.size()) != seed.n_in + seed.n_out - 1) {
    throw std::invalid_argument("toeplitz_hash: seed length mismatch");
  }
  check_bits(x, "toeplitz_hash");
  check_bits(seed.bits, "toeplitz_hash");

  // With T[i][j] = s[i - j + n_in - 1], row i reads
  //   y_i = XOR_j s[i + (n_in - 1 - j)] x_j = XOR_k s[i + k] x_rev[k],
  // a dot product of the reversed input against a sliding window of the
  // seed. Word-packed, each row costs about n_in/64 AND+popcount steps.
  Bits x_rev(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) x_rev[j] = x[x.size() - 1 - j];
  const std::vector<std::uint64_t> xw = pack_bits(x_rev);
  const std::vector<std::uint64_t> sw = pack_bits(seed.bits);
  const std::size_t n_words = (static_cast<std::size_t>(seed.n_in) + 63) / 64;

  Bits y(static_cast<std::size_t>(seed.n_out));
  for (std::int64_t i = 0; i < seed.n_out; ++i) {
    const std::size_t woff = static_cast<std::size_t>(i) / 64;
    const unsigned boff = static_cast<unsigned>(i % 64);
    int parity = 0;
    for (std::size_t w = 0; w < n_words; ++w) {
      std::uint64_t window = sw[woff + w] >> boff;
      if (boff != 0) window |= sw[woff + w + 1] << (64 - boff);
      parity ^= std::popcount(window & xw[w]) & 1;
    }
    y[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(parity);
  }
  return y;
}

std::int64_t verification_hash_length(double eps_cor) {
  if (!(eps_cor > 0.0 && eps_cor < 1.0)) {
    throw std::invalid_argument("verification_hash_length: eps_cor must be in (0, 1)");
  }
  return static_cast<std::int64_t>(std::ceil(std::log2(1.0 / eps_cor)));
}

bool verify(const Bits& a, const Bits& b, double eps_cor, Rng& rng) {
  if (a.size() != b.size()) return false;
  std::int64_t ell = verification_hash_length(eps_cor);
  if (ell > static_cast<std::int64_t>(a.size())) ell = static_cast<std::int64_t>(a.size());
  ToeplitzSeed seed =
      sample_toeplitz_seed(static_cast<std::int64_t>(a.size()), ell, rng);
  return toeplitz_hash(a, seed) == toeplitz_hash(b, seed);
}

Bits privacy_amplify(const Bits& x, const ToeplitzSeed& seed) {
  if (seed.n_out > seed.n_in) {
    throw std::invalid_argument("privacy_amplify: output longer than input");
  }
  return toeplitz_hash(x, seed);
}

double two_universality_estimate(std::int64_t n_in, std::int64_t ell,
                                 std::int64_t trials, Rng& rng) {
  if (n_in < 1 || ell < 1 || ell > n_in) {
    throw std::invalid_argument("two_universality_estimate: bad dimensions");
  }
  if (trials < 1) throw std::invalid_argument("two_universality_estimate: bad trials");
  // For linear hashes, x and x' collide exactly when hash(x ^ x') = 0, so a
  // single fixed nonzero difference vector stands in for the pair.
  Bits diff = random_bits(n_in, rng);
  bool any = false;
  for (std::uint8_t b : diff) any = any || (b != 0);
  if (!any) diff[0] = 1;

  std::int64_t collisions = 0;
  const Bits zero(static_cast<std::size_t>(ell), 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    ToeplitzSeed seed = sample_toeplitz_seed(n_in, ell, rng);
    if (toeplitz_hash(diff, seed) == zero) ++collisions;
  }
  return static_cast<double>(collisions) / static_cast<double>(trials);
}

std::string to_hex(const Bits& bits) {
  check_bits(bits, "to_hex");
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  unsigned nibble = 0;
  unsigned fill = 0;
  for (std::uint8_t b : bits) {
    nibble = (nibble << 1) | b;
    if (++fill == 4) {
      out.push_back(digits[nibble]);
      nibble = 0;
      fill = 0;
    }
  }
  if (fill != 0) {
    nibble <<= (4 - fill);
    out.push_back(digits[nibble]);
  }
  return out;
}

std::string format_key(const Bits& key, std::uint64_t session_seed) {
  std::ostringstream out;
  out << "ell=" << key.size() << " seed_fp=" << seed_fingerprint(session_seed) << "\n";
  out << to_hex(key) << "\n";
  return out.str();
}

}  // namespace diqkd::postprocessing
