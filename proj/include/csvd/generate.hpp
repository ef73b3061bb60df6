#pragma once

#include "csvd/conditional.hpp"

namespace csvd {

// SplitMix64 (Steele, Lea & Flood): one additive step of the golden-gamma
// constant followed by two xor-shift multiplies. Chosen over the platform
// generator so seeds reproduce across toolchains; reference outputs are in
// the README and pinned by tests.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 mantissa bits from one word.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (cosine branch; two words).
  double next_normal();

  /// Standard complex normal CN(0,1): both Box-Muller branches over sqrt(2),
  /// exactly two words per value.
  Complex next_complex_normal();

 private:
  std::uint64_t state_;
};

// Spectrum request: explicit descending positive values, or (when values is
// empty) a log-uniform draw from [lo, hi].
struct SpectrumSpec {
  RealVector values;
  double lo = 0.5;
  double hi = 2.0;
};

struct GenSpec {
  Index m = 0, n = 0, k = 0, l = 0;
  std::uint64_t seed = 0;
  SpectrumSpec spectrum_b;  // min(k, l) values
  SpectrumSpec d_spec;      // min(k, l) values
  RealVector tail;          // extra sigma_A values past p; makes the instance inexact
};

// Everything planted in a generated instance, for diagnosing failures
// without re-deriving the construction.
struct Certificate {
  RealVector d;
  RealVector sigma_a;  // full min(m, n) diagonal, head + tail + zeros
  RealVector sigma_b;
  double residual = 0.0;  // sqrt(sum tail^2)
  Case condition = Case::kInfeasible;
};

struct DecomposableInstance {
  ComplexDense a;
  ComplexDense b;
  Certificate certificate;
};

/// Haar-style random unitary: complex Gaussian matrix, Householder QR, then
/// column phases fixed so the triangular factor has a real positive diagonal.
/// Deterministic per (n, seed).
ComplexDense random_unitary(Index n, std::uint64_t seed);

/// Reverses the construction: plants sigma_B and d, builds
/// sigma_A = R sigma_B S*, and wraps both spectra in independent random
/// unitaries. Tail-free instances decompose exactly; planted tails produce a
/// known residual, recorded in the certificate.
DecomposableInstance random_decomposable(const GenSpec& spec);

/// A = G1 G1* (PSD, possibly singular) and B = G2 G2* + eps I with eps chosen
/// so cond(B) <= cond_cap.
std::pair<ComplexDense, ComplexDense> random_psd_pair(Index n, std::uint64_t seed,
                                                      double cond_cap);

/// m x n matrix of CN(0,1) entries, filled row-major; deterministic per seed.
ComplexDense random_general(Index m, Index n, std::uint64_t seed);

/// Parses the key=value GenSpec config format ('#' comments allowed):
///   dims = 5,4,3,3
///   seed = 42
///   spectrum_b = 2,1,0.5      (or: range:0.5,2)
///   d = 1,1,1                 (or: range:0.5,2)
///   tail = 1,0.5
GenSpec parse_genspec(const std::string& text);

}  // namespace csvd
