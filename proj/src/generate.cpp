#include "csvd/generate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Householder>
#include <Eigen/QR>

namespace csvd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

ComplexDense hermitian_part(const ComplexDense& x) {
  return 0.5 * (x + ComplexDense(x.adjoint()));
}

// Resolves a SpectrumSpec to p descending positive values, consuming p
// uniform draws when the spec is a range.
RealVector resolve_spectrum(const SpectrumSpec& spec, Index p, SplitMix64& rng,
                            const char* who) {
  if (spec.values.size() > 0) {
    if (spec.values.size() != p) {
      throw InvalidInputError(std::string(who) + ": expected " +
                              std::to_string(p) + " explicit values, got " +
                              std::to_string(spec.values.size()));
    }
    for (Index i = 0; i < p; ++i) {
      if (!std::isfinite(spec.values[i]) || spec.values[i] <= 0.0) {
        throw InvalidInputError(std::string(who) +
                                ": explicit values must be finite and positive");
      }
      if (i > 0 && spec.values[i] > spec.values[i - 1]) {
        throw InvalidInputError(std::string(who) +
                                ": explicit values must be non-increasing");
      }
    }
    return spec.values;
  }
  if (!(spec.lo > 0.0) || !(spec.hi >= spec.lo) || !std::isfinite(spec.hi)) {
    throw InvalidInputError(std::string(who) +
                            ": range must satisfy 0 < lo <= hi");
  }
  RealVector out(p);
  const double log_lo = std::log(spec.lo);
  const double log_hi = std::log(spec.hi);
  for (Index i = 0; i < p; ++i) {
    out[i] = std::exp(log_lo + rng.next_unit() * (log_hi - log_lo));
  }
  std::sort(out.data(), out.data() + p, std::greater<double>());
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& tok, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("genspec: invalid number '" + tok + "' in " + what);
  }
}

RealVector parse_list(const std::string& value, const std::string& what) {
  const std::vector<std::string> toks = split(value, ',');
  RealVector out(static_cast<Index>(toks.size()));
  for (size_t i = 0; i < toks.size(); ++i) {
    out[static_cast<Index>(i)] = parse_double(toks[i], what);
  }
  return out;
}

SpectrumSpec parse_spectrum(const std::string& value, const std::string& what) {
  SpectrumSpec spec;
  if (value.rfind("range:", 0) == 0) {
    const RealVector r = parse_list(value.substr(6), what);
    if (r.size() != 2) {
      throw InvalidInputError("genspec: " + what + " range needs lo,hi");
    }
    spec.lo = r[0];
    spec.hi = r[1];
  } else {
    spec.values = parse_list(value, what);
  }
  return spec;
}

}  // namespace

double SplitMix64::next_normal() {
  const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Complex SplitMix64::next_complex_normal() {
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-std::log(u1));  // -2 log(u1) over the 1/2 variance
  return Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
}

ComplexDense random_general(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) {
    throw InvalidInputError("random_general: dimensions must be positive, got " +
                            detail::shape_string(m, n));
  }
  SplitMix64 rng(seed);
  ComplexDense a(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = rng.next_complex_normal();
  }
  return a;
}

ComplexDense random_unitary(Index n, std::uint64_t seed) {
  const ComplexDense g = random_general(n, n, seed);
  Eigen::HouseholderQR<ComplexDense> qr(g);
  ComplexDense q = qr.householderQ() * ComplexDense::Identity(n, n);
  for (Index i = 0; i < n; ++i) {
    const Complex rii = qr.matrixQR()(i, i);
    const double mag = std::abs(rii);
    if (mag > 0.0) q.col(i) *= rii / mag;
  }
  return q;
}

DecomposableInstance random_decomposable(const GenSpec& spec) {
  const Index m = spec.m, n = spec.n, k = spec.k, l = spec.l;
  if (m < 1 || n < 1 || k < 1 || l < 1) {
    throw InvalidInputError("random_decomposable: dimensions must be positive");
  }
  const std::optional<Case> dims = dimension_case(m, n, k, l);
  if (!dims) {
    std::vector<std::string> violations{"dims satisfy neither condition"};
    throw InfeasibleError(
        "random_decomposable: refusing dims (m,n,k,l) = (" + std::to_string(m) +
            "," + std::to_string(n) + "," + std::to_string(k) + "," +
            std::to_string(l) + "): neither feasibility condition holds",
        violations);
  }
  const Index p = std::min(k, l);
  const Index rank_room = std::min(m, n);

  // Fixed draw order: four unitary sub-seeds, then sigma_B, then d.
  SplitMix64 rng(spec.seed);
  const std::uint64_t seed_ua = rng.next();
  const std::uint64_t seed_va = rng.next();
  const std::uint64_t seed_ub = rng.next();
  const std::uint64_t seed_vb = rng.next();

  const RealVector sigma_b = resolve_spectrum(spec.spectrum_b, p, rng,
                                              "random_decomposable: spectrum_b");
  const RealVector d = resolve_spectrum(spec.d_spec, p, rng,
                                        "random_decomposable: d");

  RealVector head(p);
  for (Index i = 0; i < p; ++i) head[i] = d[i] * d[i] * sigma_b[i];

  RealVector tail = spec.tail;
  if (tail.size() > 0) {
    if (rank_room == p) {
      throw InvalidInputError(
          "random_decomposable: tail requested but min(m,n) = p leaves no "
          "room past the leading block");
    }
    if (tail.size() > rank_room - p) {
      throw InvalidInputError("random_decomposable: tail has " +
                              std::to_string(tail.size()) +
                              " values but only " +
                              std::to_string(rank_room - p) + " slots exist");
    }
    for (Index i = 0; i < tail.size(); ++i) {
      if (!std::isfinite(tail[i]) || tail[i] < 0.0) {
        throw InvalidInputError(
            "random_decomposable: tail values must be finite and nonnegative");
      }
    }
    std::sort(tail.data(), tail.data() + tail.size(), std::greater<double>());
    if (tail[0] > head[p - 1]) {
      // Larger tail values would outrank head values in the sorted spectrum
      // and the certificate residual would no longer match the construction.
      throw InvalidInputError(
          "random_decomposable: tail values must not exceed the smallest "
          "leading sigma_A value " +
          std::to_string(head[p - 1]));
    }
  }

  RealVector sigma_a = RealVector::Zero(rank_room);
  sigma_a.head(p) = head;
  if (tail.size() > 0) sigma_a.segment(p, tail.size()) = tail;

  const ComplexDense u_a = random_unitary(m, seed_ua);
  const ComplexDense v_a = random_unitary(n, seed_va);
  const ComplexDense u_b = random_unitary(k, seed_ub);
  const ComplexDense v_b = random_unitary(l, seed_vb);

  DecomposableInstance out;
  out.a = u_a * embed(make_rect_diagonal(m, n, sigma_a)) * v_a.adjoint();
  out.b = u_b * embed(make_rect_diagonal(k, l, sigma_b)) * v_b.adjoint();
  out.certificate = Certificate{d, sigma_a, sigma_b, tail.norm(), *dims};
  return out;
}

std::pair<ComplexDense, ComplexDense> random_psd_pair(Index n, std::uint64_t seed,
                                                      double cond_cap) {
  if (n < 1) {
    throw InvalidInputError("random_psd_pair: n must be positive");
  }
  if (!(cond_cap >= 1.0)) {
    throw InvalidInputError("random_psd_pair: cond_cap must be >= 1");
  }
  SplitMix64 rng(seed);
  const std::uint64_t seed1 = rng.next();
  const std::uint64_t seed2 = rng.next();

  const ComplexDense g1 = random_general(n, n, seed1);
  const ComplexDense a = hermitian_part(g1 * g1.adjoint());

  const ComplexDense g2 = random_general(n, n, seed2);
  ComplexDense b = hermitian_part(g2 * g2.adjoint());

  const RealVector sv = full_svd(g2).sigma.diag;
  const double lambda_max = sv[0] * sv[0];
  const double lambda_min = sv[n - 1] * sv[n - 1];
  double shift = 0.0;
  if (lambda_max <= 0.0) {
    shift = 1.0;
  } else if (lambda_max > cond_cap * lambda_min) {
    if (cond_cap <= 1.0) {
      throw InvalidInputError(
          "random_psd_pair: cond_cap = 1 is unsatisfiable for a non-flat "
          "spectrum");
    }
    shift = (lambda_max - cond_cap * lambda_min) / (cond_cap - 1.0);
  }
  if (shift > 0.0) {
    b += shift * ComplexDense::Identity(n, n);
  }
  return {a, b};
}

GenSpec parse_genspec(const std::string& text) {
  GenSpec spec;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("genspec: line " + std::to_string(lineno) +
                              " is not key=value: '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const std::string value = trim(line.substr(eq + 1));
    if (key == "dims") {
      const RealVector v = parse_list(value, "dims");
      if (v.size() != 4) {
        throw InvalidInputError("genspec: dims needs m,n,k,l");
      }
      spec.m = static_cast<Index>(v[0]);
      spec.n = static_cast<Index>(v[1]);
      spec.k = static_cast<Index>(v[2]);
      spec.l = static_cast<Index>(v[3]);
    } else if (key == "seed") {
      try {
        spec.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw InvalidInputError("genspec: invalid seed '" + value + "'");
      }
    } else if (key == "spectrum_b") {
      spec.spectrum_b = parse_spectrum(value, "spectrum_b");
    } else if (key == "d") {
      spec.d_spec = parse_spectrum(value, "d");
    } else if (key == "tail") {
      spec.tail = parse_list(value, "tail");
    } else {
      throw InvalidInputError("genspec: unknown key '" + key + "' on line " +
                              std::to_string(lineno));
    }
  }
  return spec;
}

}  // namespace csvd
