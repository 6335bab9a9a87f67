#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diqkd/rng.hpp"

namespace diqkd::postprocessing {

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

Bits random_bits(std::int64_t n, Rng& rng);

struct ReconcileResult {
  Bits corrected;
  std::int64_t leaked_bits = 0;
};

/// Ideal reconciliation model: Bob's string is corrected to Alice's and the
/// configured syndrome budget is charged as leakage. Inputs must have equal
/// length.
ReconcileResult reconcile(const Bits& x_a, const Bits& x_b, std::int64_t leak_budget);

/// Bit k holds the Toeplitz entry at (i, j) with i - j + n_in - 1 = k, so
/// the first row (reversed) followed by the first column describes the
/// whole n_out x n_in matrix in n_in + n_out - 1 bits.
struct ToeplitzSeed {
  std::int64_t n_in = 0;
  std::int64_t n_out = 0;
  Bits bits;
};

ToeplitzSeed sample_toeplitz_seed(std::int64_t n_in, std::int64_t n_out, Rng& rng);

/// y_i = sum_j T[i][j] x_j over GF(2). Linear in both the input and, for a
/// fixed input, the seed.
Bits toeplitz_hash(const Bits& x, const ToeplitzSeed& seed);

/// ceil(log2(1 / eps_cor)) bits of verification hash.
std::int64_t verification_hash_length(double eps_cor);

/// Draw a shared Toeplitz seed and compare short hashes of the two
/// strings. Unequal strings pass with probability at most eps_cor over the
/// seed draw; equal strings always pass.
bool verify(const Bits& a, const Bits& b, double eps_cor, Rng& rng);

/// Toeplitz extraction of seed.n_out bits; n_out = 0 yields the empty key.
Bits privacy_amplify(const Bits& x, const ToeplitzSeed& seed);

/// Empirical collision rate of toeplitz_hash on one fixed pair of distinct
/// inputs over `trials` fresh seeds. Around 2^-ell for a two-universal
/// family.
double two_universality_estimate(std::int64_t n_in, std::int64_t ell,
                                 std::int64_t trials, Rng& rng);

/// Lowercase hex, most significant bit first, zero-padded to a whole
/// number of nibbles. Empty input gives the empty string.
std::string to_hex(const Bits& bits);

/// Key file payload: "ell=<n> seed_fp=<hex>" header line plus the hex key.
std::string format_key(const Bits& key, std::uint64_t session_seed);

}  // namespace diqkd::postprocessing
