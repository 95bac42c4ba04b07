#include <gtest/gtest.h>

#include <random>

#include "mtsplit/intlinalg.hpp"
#include "oracles.hpp"

using namespace mtsplit;

namespace {

IntMatrix from_oracle(const oracle::Mat& m) {
  IntMatrix r(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      r(i, j) = m[i][j];
  return r;
}

oracle::Mat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  oracle::Mat m(r, std::vector<long long>(c));
  for (auto& row : m)
    for (auto& x : row)
      x = lo + static_cast<long long>(rng() % static_cast<unsigned>(hi - lo + 1));
  return m;
}

// Product of random elementary operations.
IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2)
    return u;
  for (int s = 0; s < 6; ++s) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i == j)
      continue;
    u.add_row(i, j, static_cast<long>(rng() % 5) - 2);
    if (rng() % 3 == 0)
      u.swap_rows(i, j);
  }
  return u;
}

void expect_smith_postconditions(const IntMatrix& a) {
  SmithForm f = smith_normal_form(a);
  ASSERT_EQ(f.U * a * f.V, f.D);
  EXPECT_EQ(abs_value(determinant(f.U)), 1);
  EXPECT_EQ(abs_value(determinant(f.V)), 1);
  const std::size_t k = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < f.D.rows(); ++i)
    for (std::size_t j = 0; j < f.D.cols(); ++j)
      if (i != j)
        EXPECT_EQ(f.D(i, j), 0);
  for (std::size_t i = 0; i < k; ++i) {
    EXPECT_GE(f.D(i, i), 0);
    if (i + 1 < k) {
      if (f.D(i, i) == 0)
        EXPECT_EQ(f.D(i + 1, i + 1), 0);
      else
        EXPECT_EQ(f.D(i + 1, i + 1) % f.D(i, i), 0);
    }
  }
}

}  // namespace

TEST(IntLinAlg, DeterminantMatchesLeibniz) {
  std::mt19937_64 rng(1);
  for (int n = 0; n <= 5; ++n)
    for (int trial = 0; trial < 60; ++trial) {
      auto m = random_mat(rng, static_cast<std::size_t>(n), static_cast<std::size_t>(n), -4, 4);
      EXPECT_EQ(determinant(from_oracle(m)), n == 0 ? 1 : oracle::leibniz_det(m));
    }
}

TEST(IntLinAlg, SmithExamples) {
  SmithForm f = smith_normal_form(IntMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(f.D, (IntMatrix{{1, 0}, {0, 6}}));
  f = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(f.U, IntMatrix::identity(3));
  EXPECT_EQ(f.D, IntMatrix::identity(3));
  EXPECT_EQ(f.V, IntMatrix::identity(3));
  f = smith_normal_form(IntMatrix{{-1, 1}, {1, -1}});
  EXPECT_EQ(f.D, (IntMatrix{{1, 0}, {0, 0}}));
}

TEST(IntLinAlg, SmithPostconditionsOnRandomMatrices) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    expect_smith_postconditions(from_oracle(random_mat(rng, r, c, -9, 9)));
  }
}

TEST(IntLinAlg, SmithIsDeterministic) {
  IntMatrix a{{4, 6, 2}, {6, 9, 3}, {2, 5, 7}};
  SmithForm f = smith_normal_form(a), g = smith_normal_form(a);
  EXPECT_EQ(f.U, g.U);
  EXPECT_EQ(f.V, g.V);
}

TEST(IntLinAlg, SolveExamples) {
  EXPECT_FALSE(solve_integer(IntMatrix{{2}}, {3}));
  auto y = solve_integer(IntMatrix{{2}}, {4});
  ASSERT_TRUE(y);
  EXPECT_EQ((*y)[0], 2);
  EXPECT_FALSE(solve_integer(IntMatrix{{1, -1}, {-1, 1}}, {1, 1}));
  EXPECT_TRUE(solve_integer(IntMatrix{{1, -1}, {-1, 1}}, {3, -3}));
}

TEST(IntLinAlg, SolveAgreesWithBoxSearch) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng() % 2;
    auto a = random_mat(rng, n, n, -3, 3);
    std::vector<long long> b(n);
    for (auto& x : b)
      x = static_cast<long long>(rng() % 13) - 6;
    IntVector bi(b.begin(), b.end());
    auto y = solve_integer(from_oracle(a), bi);
    if (y) {
      IntVector check = from_oracle(a) * *y;
      EXPECT_EQ(check, bi);
    }
    // Box search only certifies solvability; for nonsingular A the Cramer
    // criterion decides it outright.
    if (oracle::box_solvable(a, b, 10))
      EXPECT_TRUE(y);
    if (oracle::leibniz_det(a) != 0)
      EXPECT_EQ(y.has_value(), oracle::cramer_member(a, b));
  }
}

TEST(IntLinAlg, CokernelExamples) {
  auto inv = cokernel_invariants(IntMatrix{{-1, 1}, {1, -1}});
  EXPECT_EQ(inv.free_rank, 1u);
  EXPECT_TRUE(inv.torsion.empty());
  inv = cokernel_invariants(IntMatrix::identity(3));
  EXPECT_EQ(inv.free_rank, 0u);
  EXPECT_TRUE(inv.torsion.empty());
  inv = cokernel_invariants(IntMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(inv.free_rank, 0u);
  ASSERT_EQ(inv.torsion.size(), 1u);
  EXPECT_EQ(inv.torsion[0], 6);
  EXPECT_EQ(format_invariants(inv), "Z/6");
  EXPECT_EQ(format_invariants(cokernel_invariants(IntMatrix(2, 0))), "Z^2");
  EXPECT_EQ(format_invariants(cokernel_invariants(IntMatrix(0, 0))), "0");
}

TEST(IntLinAlg, CokernelUnimodularInvariance) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix a = from_oracle(random_mat(rng, r, c, -6, 6));
    auto base = cokernel_invariants(a);
    EXPECT_EQ(cokernel_invariants(random_unimodular(rng, r) * a), base);
    EXPECT_EQ(cokernel_invariants(a * random_unimodular(rng, c)), base);
  }
}

TEST(IntLinAlg, PowersAndSums) {
  IntMatrix a{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};
  EXPECT_EQ(mat_sum_powers(a, 1), IntMatrix::identity(3));
  EXPECT_EQ(mat_sum_powers(IntMatrix::identity(2), 2), (IntMatrix{{2, 0}, {0, 2}}));
  IntMatrix a3 = mat_power(a, 3);
  EXPECT_EQ(a3(0, 0), 1);
  EXPECT_EQ(a3(1, 0), 1);
  EXPECT_EQ(a3(2, 0), 0);
  // S_k (I - A) = I - A^k
  for (unsigned k = 0; k < 8; ++k)
    EXPECT_EQ(mat_sum_powers(a, k) * (IntMatrix::identity(3) - a), IntMatrix::identity(3) - mat_power(a, k));
}

TEST(IntLinAlg, BigEntriesStayExact) {
  IntMatrix a{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}};
  IntMatrix big = mat_power(a, 300);
  EXPECT_EQ(abs_value(determinant(big)), 1);
  expect_smith_postconditions(IntMatrix::identity(3) - big);
}
