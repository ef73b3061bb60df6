// Acceptance suite: one test case per criterion, each printing a [PASS] line
// once every assertion in it has held.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <vector>

#include <json.hpp>

#include "csvd/conditional.hpp"
#include "csvd/generate.hpp"
#include "csvd/matrix_market.hpp"

#include "cli_runner.hpp"
#include "oracles.hpp"

using namespace csvd;
using nlohmann::json;

namespace {

struct FactorSample {
  ComplexDense a;
  ComplexDense b;
  ComplexDense h;
  ComplexDense m;
  double residual_abs;
  double residual_rel;
  bool exact;
  Index p;
  double a_norm;
  double planted_residual;
};

// Draw (m, n, k, l) <= 20 matching one of the six dimension-order cases:
// case_idx = k_rel * 2 + m_rel with k_rel in {0: k>l, 1: k=l, 2: k<l} and
// m_rel in {0: m>=n, 1: m<n}. Feasibility is required too.
std::array<Index, 4> draw_dims(int case_idx, SplitMix64& rng, Index min_rank_room) {
  const int k_rel = case_idx / 2;
  const int m_rel = case_idx % 2;
  for (;;) {
    const Index m = 1 + static_cast<Index>(rng.next() % 20);
    const Index n = 1 + static_cast<Index>(rng.next() % 20);
    const Index k = 1 + static_cast<Index>(rng.next() % 20);
    const Index l = 1 + static_cast<Index>(rng.next() % 20);
    if (k_rel == 0 && !(k > l)) continue;
    if (k_rel == 1 && !(k == l)) continue;
    if (k_rel == 2 && !(k < l)) continue;
    if (m_rel == 0 && !(m >= n)) continue;
    if (m_rel == 1 && !(m < n)) continue;
    if (!dimension_case(m, n, k, l)) continue;
    if (std::min(m, n) < std::min(k, l) + min_rank_room) continue;
    return {m, n, k, l};
  }
}

std::vector<FactorSample> run_decomposable_batch(int count, std::uint64_t seed0,
                                                 bool with_tail) {
  std::vector<FactorSample> out;
  SplitMix64 rng(seed0);
  for (int t = 0; t < count; ++t) {
    const int case_idx = t % 6;
    GenSpec spec;
    const std::array<Index, 4> dims =
        draw_dims(case_idx, rng, with_tail ? 1 : 0);
    spec.m = dims[0];
    spec.n = dims[1];
    spec.k = dims[2];
    spec.l = dims[3];
    spec.seed = rng.next();
    if (with_tail) {
      const Index p = std::min(spec.k, spec.l);
      const Index room = std::min(spec.m, spec.n) - p;
      const Index tail_len = 1 + static_cast<Index>(rng.next() % 3);
      RealVector tail(std::min(tail_len, room));
      // log-uniform in [0.01, 0.1]: always below the smallest head value,
      // which is at least 0.5^2 * 0.5 = 0.125 for the default spectra
      for (Index i = 0; i < tail.size(); ++i) {
        tail[i] = std::exp(std::log(0.01) +
                           rng.next_unit() * (std::log(0.1) - std::log(0.01)));
      }
      spec.tail = tail;
    }
    const DecomposableInstance inst = random_decomposable(spec);
    const ConditionalFactors cf = conditional_svd(inst.a, inst.b);
    out.push_back(FactorSample{inst.a, inst.b, cf.h, cf.m, cf.residual_abs,
                               cf.residual_rel, cf.exact, cf.report.p,
                               oracle::fro_ref(inst.a),
                               inst.certificate.residual});
  }
  return out;
}

const std::vector<FactorSample>& exact_batch() {
  static const std::vector<FactorSample> batch =
      run_decomposable_batch(100, 20260809, false);
  return batch;
}

const std::vector<FactorSample>& tail_batch() {
  static const std::vector<FactorSample> batch =
      run_decomposable_batch(100, 31337421, true);
  return batch;
}

}  // namespace

TEST_CASE("criterion 1: SVD round-trip on 200 random matrices up to 50x50") {
  SplitMix64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Index m = 1 + static_cast<Index>(rng.next() % 50);
    const Index n = 1 + static_cast<Index>(rng.next() % 50);
    const ComplexDense a = random_general(m, n, rng.next());
    const SvdFactors f = full_svd(a);
    const double na = oracle::fro_ref(a);
    const ComplexDense rebuilt = oracle::mul_ref(
        oracle::mul_ref(f.u, embed(f.sigma)), oracle::adj_ref(f.v));
    REQUIRE(oracle::fro_ref(ComplexDense(a - rebuilt)) <=
            1e-10 * std::max(1.0, na));
    REQUIRE(oracle::gram_defect(f.u) <= 1e-10);
    REQUIRE(oracle::gram_defect(f.v) <= 1e-10);
  }
  std::printf("[PASS] criterion 1: SVD round-trip, 200 matrices in [1,50]^2\n");
}

TEST_CASE("criterion 2: exact decomposition of 100 certified instances") {
  int per_case[6] = {0, 0, 0, 0, 0, 0};
  int idx = 0;
  for (const FactorSample& s : exact_batch()) {
    REQUIRE(s.residual_rel <= 1e-8);
    REQUIRE(s.exact);
    per_case[idx % 6] += 1;
    ++idx;
  }
  for (int c = 0; c < 6; ++c) REQUIRE(per_case[c] >= 16);
  std::printf(
      "[PASS] criterion 2: 100 decomposable instances exact across all six "
      "dimension-order cases\n");
}

TEST_CASE("criterion 3: residual equals the sigma_A tail on 100 planted-tail "
          "instances") {
  for (const FactorSample& s : tail_batch()) {
    const double tol = 1e-8 * std::max(1.0, s.a_norm);
    REQUIRE(std::abs(s.residual_abs - s.planted_residual) <= tol);
    // same identity, measured through the engine's own spectrum
    const RealVector sigma_a = full_svd(s.a).sigma.diag;
    REQUIRE(std::abs(s.residual_abs - residual_tail(sigma_a, s.p)) <= tol);
    const double oracle_residual = oracle::fro_ref(ComplexDense(
        s.a - oracle::mul_ref(oracle::mul_ref(s.h, s.b), oracle::adj_ref(s.m))));
    REQUIRE(std::abs(oracle_residual - s.planted_residual) <= tol);
  }
  std::printf(
      "[PASS] criterion 3: planted-tail residual identity on 100 instances\n");
}

TEST_CASE("criterion 4: HH* and MM* are Hermitian for every factor pair") {
  int checked = 0;
  for (const std::vector<FactorSample>* batch : {&exact_batch(), &tail_batch()}) {
    for (const FactorSample& s : *batch) {
      const ComplexDense hh = oracle::mul_ref(s.h, oracle::adj_ref(s.h));
      const ComplexDense mm = oracle::mul_ref(s.m, oracle::adj_ref(s.m));
      const double h_scale = oracle::fro_ref(s.h);
      const double m_scale = oracle::fro_ref(s.m);
      REQUIRE(oracle::hermitian_defect(hh) <= 1e-10 * h_scale * h_scale);
      REQUIRE(oracle::hermitian_defect(mm) <= 1e-10 * m_scale * m_scale);
      REQUIRE(is_hermitian(hh, 1e-10 * h_scale * h_scale));
      REQUIRE(is_hermitian(mm, 1e-10 * m_scale * m_scale));
      ++checked;
    }
  }
  REQUIRE(checked == 200);
  std::printf(
      "[PASS] criterion 4: Hermitian products for all %d factor pairs\n",
      checked);
}

TEST_CASE("criterion 5: special case on 50 PSD pairs and the B = I identity") {
  SplitMix64 rng(555);
  for (int t = 0; t < 50; ++t) {
    const Index n = 1 + static_cast<Index>(rng.next() % 20);
    const auto [a, b] = random_psd_pair(n, rng.next(), 1e4);
    const SpecialFactors sf = special_case(a, b);
    const double scale = std::max(1.0, oracle::fro_ref(a));
    REQUIRE(oracle::fro_ref(ComplexDense(
                a - oracle::mul_ref(oracle::mul_ref(sf.h, b),
                                    oracle::adj_ref(sf.h)))) <= 1e-8 * scale);

    const ComplexDense identity = ComplexDense::Identity(n, n);
    const SpecialFactors si = special_case(a, identity);
    const ComplexDense hh = oracle::mul_ref(si.h, oracle::adj_ref(si.h));
    REQUIRE(oracle::fro_ref(ComplexDense(hh - a)) <= 1e-8 * scale);
  }
  std::printf(
      "[PASS] criterion 5: special case exact on 50 PSD pairs (cond <= 1e4), "
      "HH* = A under B = I\n");
}

TEST_CASE("criterion 6: feasibility classification sweep over [1,6]^4") {
  SplitMix64 rng(66);
  int feasible_count = 0;
  int infeasible_count = 0;
  for (Index m = 1; m <= 6; ++m) {
    for (Index n = 1; n <= 6; ++n) {
      for (Index k = 1; k <= 6; ++k) {
        for (Index l = 1; l <= 6; ++l) {
          // independent restatement of the feasibility inequalities
          bool expect_c1 = false, expect_c2 = false;
          if (k >= l && m >= l && n >= l) expect_c1 = true;
          if (k <= l && m >= k && n >= k) expect_c2 = true;
          const bool expect_feasible = expect_c1 || expect_c2;

          // nonsingular B with a planted positive spectrum
          const Index p = std::min(k, l);
          RealVector sigma_b(p);
          for (Index i = 0; i < p; ++i) {
            sigma_b[i] = std::exp(std::log(0.5) +
                                  rng.next_unit() * std::log(4.0));
          }
          std::sort(sigma_b.data(), sigma_b.data() + p,
                    std::greater<double>());
          const ComplexDense b = random_unitary(k, rng.next()) *
                                 embed(make_rect_diagonal(k, l, sigma_b)) *
                                 random_unitary(l, rng.next()).adjoint();
          const ComplexDense a = random_general(m, n, rng.next());

          const FeasibilityReport rep = check_conditions(
              m, n, k, l, full_svd(b).sigma.diag, 1e-12);
          if (expect_feasible) {
            REQUIRE(rep.condition != Case::kInfeasible);
            // k = l must tie-break to condition 1
            if (expect_c1) {
              REQUIRE(rep.condition == Case::kCondition1);
            } else {
              REQUIRE(rep.condition == Case::kCondition2);
            }
            const ConditionalFactors cf = conditional_svd(a, b);
            REQUIRE(cf.h.rows() == m);
            REQUIRE(cf.h.cols() == k);
            REQUIRE(cf.m.rows() == n);
            REQUIRE(cf.m.cols() == l);
            ++feasible_count;
          } else {
            REQUIRE(rep.condition == Case::kInfeasible);
            REQUIRE_THROWS_AS(conditional_svd(a, b), InfeasibleError);
            ++infeasible_count;
          }
        }
      }
    }
  }
  REQUIRE(feasible_count + infeasible_count == 6 * 6 * 6 * 6);
  std::printf(
      "[PASS] criterion 6: all 1296 tuples classified per the feasibility "
      "conditions (%d feasible, %d infeasible), no factors on infeasible "
      "tuples\n",
      feasible_count, infeasible_count);
}

TEST_CASE("criterion 7: degenerate B is rejected, never silently absorbed") {
  SplitMix64 rng(77);
  int rejected = 0;
  for (int t = 0; t < 12; ++t) {
    const Index k = 2 + static_cast<Index>(rng.next() % 4);
    const Index l = 2 + static_cast<Index>(rng.next() % 4);
    const Index p = std::min(k, l);
    const Index m = std::max(k, l) + static_cast<Index>(rng.next() % 3);
    const Index n = std::max(k, l) + static_cast<Index>(rng.next() % 3);
    RealVector sigma_b = RealVector::Ones(p);
    sigma_b[p - 1] = (t % 2 == 0) ? 1e-15 : 0.0;  // ratio below zero_tol
    const ComplexDense b = random_unitary(k, rng.next()) *
                           embed(make_rect_diagonal(k, l, sigma_b)) *
                           random_unitary(l, rng.next()).adjoint();
    const ComplexDense a = random_general(m, n, rng.next());
    try {
      conditional_svd(a, b);
      FAIL("degenerate B must not yield factors");
    } catch (const SingularBError& e) {
      REQUIRE(std::string(e.what()).find("B singular within tolerance") !=
              std::string::npos);
      ++rejected;
    }
  }
  // a custom zero_tol moves the threshold
  DecomposeOptions coarse;
  coarse.zero_tol = 1e-4;
  RealVector sigma_b(2);
  sigma_b << 1.0, 1e-6;
  const ComplexDense b = random_unitary(2, 1) *
                         embed(make_rect_diagonal(2, 2, sigma_b)) *
                         random_unitary(2, 2).adjoint();
  const ComplexDense a = random_general(3, 3, 3);
  REQUIRE_THROWS_AS(conditional_svd(a, b, coarse), SingularBError);
  REQUIRE(rejected == 12);
  std::printf(
      "[PASS] criterion 7: B singular within tolerance rejected on all %d "
      "degenerate instances\n",
      rejected + 1);
}

TEST_CASE("criterion 8: CLI pipeline generate -> decompose -> verify") {
  const struct {
    const char* dims;
    std::uint64_t seed;
  } runs[] = {{"5,4,3,3", 42}, {"6,7,4,5", 7}, {"8,8,2,2", 99}};
  for (const auto& run : runs) {
    cli::TempDir dir;
    const std::string gen_cmd =
        "generate --dims " + std::string(run.dims) + " --seed " +
        std::to_string(run.seed) + " --out-prefix " + dir.file("g") +
        " --report " + dir.file("gen.json");
    REQUIRE(cli::run(gen_cmd, dir.file("log1.txt")) == 0);

    const std::string dec_cmd = "decompose " + dir.file("g.A.mtx") + " " +
                                dir.file("g.B.mtx") + " --out-prefix " +
                                dir.file("f") + " --report " +
                                dir.file("dec.json");
    REQUIRE(cli::run(dec_cmd, dir.file("log2.txt")) == 0);

    const std::string ver_cmd = "verify " + dir.file("g.A.mtx") + " " +
                                dir.file("g.B.mtx") + " " + dir.file("f.H.mtx") +
                                " " + dir.file("f.M.mtx") + " --report " +
                                dir.file("ver.json");
    REQUIRE(cli::run(ver_cmd, dir.file("log3.txt")) == 0);

    std::ifstream dec_in(dir.file("dec.json"));
    const json dec = json::parse(dec_in);
    std::ifstream ver_in(dir.file("ver.json"));
    const json ver = json::parse(ver_in);
    REQUIRE(dec["exact"] == true);
    REQUIRE(double(dec["residual_rel"]) <= 1e-8);
    REQUIRE(ver["pass"] == true);

    // report residuals must match the in-process computation at 1e-12 relative
    const ComplexDense a = read_matrix(dir.file("g.A.mtx"));
    const ComplexDense b = read_matrix(dir.file("g.B.mtx"));
    const ConditionalFactors cf = conditional_svd(a, b);
    const double reported = dec["residual_abs"];
    const double verified = ver["residual_abs"];
    const double scale = std::max(1.0, cf.residual_abs);
    REQUIRE(std::abs(reported - cf.residual_abs) <= 1e-12 * scale);
    REQUIRE(std::abs(verified - cf.residual_abs) <= 1e-12 * scale);
  }
  std::printf(
      "[PASS] criterion 8: CLI pipeline round-trips with exit 0 and matching "
      "residuals on 3 seeds\n");
}
