#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ocuflow/csr.hpp"
#include "ocuflow/dense.hpp"
#include "ocuflow/gmres.hpp"
#include "ocuflow/ilu.hpp"

using namespace ocuflow;

namespace {

CsrMatrix tridiagonal(int n, double diag, double off) {
  SparsityPattern sp(n, n);
  for (int i = 0; i < n; ++i) {
    sp.insert(i, i);
    if (i > 0) sp.insert(i, i - 1);
    if (i + 1 < n) sp.insert(i, i + 1);
  }
  CsrMatrix a = sp.build();
  for (int i = 0; i < n; ++i) {
    a.add(i, i, diag);
    if (i > 0) a.add(i, i - 1, off);
    if (i + 1 < n) a.add(i, i + 1, off);
  }
  return a;
}

} // namespace

TEST_CASE("csr add/get/multiply against dense") {
  SparsityPattern sp(3, 3);
  const int rows[3] = {0, 1, 2};
  sp.insert_clique(rows, rows);
  CsrMatrix a = sp.build();
  const double d[9] = {2, -1, 0.5, 1, 3, 0, -2, 0.25, 4};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      a.add(i, j, d[i * 3 + j]);

  CHECK(a.get(2, 1) == doctest::Approx(0.25));
  CHECK(a.get(0, 2) == doctest::Approx(0.5));
  CHECK(a.nnz() == 9);
  const auto dense = a.to_dense();
  for (int k = 0; k < 9; ++k)
    CHECK(dense[static_cast<size_t>(k)] == doctest::Approx(d[k]));

  const std::vector<double> x = {1.0, -2.0, 3.0};
  std::vector<double> y(3), yt(3);
  a.multiply(x, y);
  a.multiply_transpose(x, yt);
  for (int i = 0; i < 3; ++i) {
    double si = 0.0, sti = 0.0;
    for (int j = 0; j < 3; ++j) {
      si += d[i * 3 + j] * x[static_cast<size_t>(j)];
      sti += d[j * 3 + i] * x[static_cast<size_t>(j)];
    }
    CHECK(y[static_cast<size_t>(i)] == doctest::Approx(si));
    CHECK(yt[static_cast<size_t>(i)] == doctest::Approx(sti));
  }

  // Out-of-pattern writes must be loud, reads silent.
  CHECK_THROWS(a.add(0, 3, 1.0));
  SparsityPattern sp2(2, 2);
  sp2.insert(0, 0);
  sp2.insert(1, 1);
  CsrMatrix b = sp2.build();
  CHECK(b.get(0, 1) == 0.0);
  CHECK_THROWS(b.add(0, 1, 1.0));
}

TEST_CASE("csr block extraction and row edits") {
  CsrMatrix a = tridiagonal(5, 4.0, -1.0);
  const CsrMatrix blk = a.extract_block(1, 4, 1, 4);
  CHECK(blk.rows() == 3);
  CHECK(blk.cols() == 3);
  CHECK(blk.get(0, 0) == doctest::Approx(4.0));
  CHECK(blk.get(0, 1) == doctest::Approx(-1.0));
  CHECK(blk.get(2, 1) == doctest::Approx(-1.0));

  a.set_row_identity(2, 3.0);
  CHECK(a.get(2, 2) == doctest::Approx(3.0));
  CHECK(a.get(2, 1) == 0.0);
  a.zero_row(0);
  CHECK(a.get(0, 0) == 0.0);
}

TEST_CASE("dense lu solves the 4x4 hilbert system") {
  // Hilbert matrix H_ij = 1/(i+j+1); its inverse is integer-valued. With
  // b = H * [1,1,1,1]^T the solution must be the all-ones vector.
  std::vector<double> h(16), b(4, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      h[static_cast<size_t>(i * 4 + j)] = 1.0 / (i + j + 1);
      b[static_cast<size_t>(i)] += 1.0 / (i + j + 1);
    }
  const auto x = dense_solve(h, b);
  for (int i = 0; i < 4; ++i)
    CHECK(x[static_cast<size_t>(i)] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gmres on a fixed 2x2 system") {
  // A = [[4,1],[1,3]], b = [1,2]  =>  x = [1/11, 7/11].
  SparsityPattern sp(2, 2);
  const int rows[2] = {0, 1};
  sp.insert_clique(rows, rows);
  CsrMatrix a = sp.build();
  a.add(0, 0, 4.0);
  a.add(0, 1, 1.0);
  a.add(1, 0, 1.0);
  a.add(1, 1, 3.0);

  const std::vector<double> b = {1.0, 2.0};
  std::vector<double> x(2, 0.0);
  const VectorOp op = [&a](std::span<const double> in, std::span<double> out) {
    a.multiply(in, out);
  };
  GmresOptions opt;
  opt.rtol = 1e-12;
  const auto res = gmres(op, b, x, nullptr, opt);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-10));
}

TEST_CASE("gmres handles zero rhs and restarts") {
  CsrMatrix a = tridiagonal(50, 2.0, -1.0);
  const VectorOp op = [&a](std::span<const double> in, std::span<double> out) {
    a.multiply(in, out);
  };

  std::vector<double> x(50, 1.0);
  const std::vector<double> zero(50, 0.0);
  const auto rz = gmres(op, zero, x, nullptr, {});
  CHECK(rz.converged);
  CHECK(norm2(x) == 0.0);

  // Restart shorter than the problem still converges.
  std::vector<double> b(50);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : b) v = u(rng);
  std::fill(x.begin(), x.end(), 0.0);
  GmresOptions opt;
  opt.restart = 10;
  opt.max_iter = 500;
  opt.rtol = 1e-10;
  const auto res = gmres(op, b, x, nullptr, opt);
  CHECK(res.converged);
  std::vector<double> r(50);
  a.multiply(x, r);
  for (int i = 0; i < 50; ++i) r[static_cast<size_t>(i)] -= b[static_cast<size_t>(i)];
  CHECK(norm2(r) <= 1e-9 * norm2(b));
}

TEST_CASE("flexible gmres with an exact preconditioner converges immediately") {
  CsrMatrix a = tridiagonal(30, 3.0, -1.0);
  const auto ad = a.to_dense();
  const VectorOp op = [&a](std::span<const double> in, std::span<double> out) {
    a.multiply(in, out);
  };
  const VectorOp prec = [&ad](std::span<const double> in, std::span<double> out) {
    const std::vector<double> rhs(in.begin(), in.end());
    const auto z = dense_solve(ad, rhs);
    std::copy(z.begin(), z.end(), out.begin());
  };
  std::vector<double> b(30, 1.0), x(30, 0.0);
  GmresOptions opt;
  opt.rtol = 1e-12;
  const auto res = gmres(op, b, x, &prec, opt);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
}

TEST_CASE("ilu0 on a tridiagonal matrix is an exact factorization") {
  // The fill-in of a tridiagonal LU stays tridiagonal, so ILU(0) must equal
  // the exact factorization and apply() must be a direct solve.
  const int n = 20;
  CsrMatrix a = tridiagonal(n, 4.0, -1.0);
  const Ilu0 ilu(a);

  std::vector<double> b(n), x(n), r(n);
  for (int i = 0; i < n; ++i) b[static_cast<size_t>(i)] = std::sin(i + 1.0);
  ilu.apply(b, x);
  a.multiply(x, r);
  double err = 0.0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(r[static_cast<size_t>(i)] - b[static_cast<size_t>(i)]));
  CHECK(err <= 1e-12);
}

TEST_CASE("additive schwarz approximates and accelerates") {
  const int n = 64;
  CsrMatrix a = tridiagonal(n, 2.0, -1.0);
  const auto asm2 = make_local_solver(a, LocalSolverKind::AdditiveSchwarz2, 4);
  const auto ilu = make_local_solver(a, LocalSolverKind::Ilu0);

  std::vector<double> b(n, 1.0), x(n, 0.0);
  const VectorOp op = [&a](std::span<const double> in, std::span<double> out) {
    a.multiply(in, out);
  };
  GmresOptions opt;
  opt.rtol = 1e-10;

  const auto plain = gmres(op, b, x, nullptr, opt);
  std::fill(x.begin(), x.end(), 0.0);
  const VectorOp pa = [&asm2](std::span<const double> in, std::span<double> out) {
    asm2->apply(in, out);
  };
  const auto with_asm = gmres(op, b, x, &pa, opt);
  std::fill(x.begin(), x.end(), 0.0);
  const VectorOp pi = [&ilu](std::span<const double> in, std::span<double> out) {
    ilu->apply(in, out);
  };
  const auto with_ilu = gmres(op, b, x, &pi, opt);

  CHECK(plain.converged);
  CHECK(with_asm.converged);
  CHECK(with_ilu.converged);
  CHECK(with_asm.iterations < plain.iterations);
  CHECK(with_ilu.iterations <= 2); // exact on tridiagonal
}

TEST_CASE("matrix market output round-trips") {
  CsrMatrix a = tridiagonal(4, 2.5, -0.75);
  const std::string path = "mm_roundtrip_test.mtx";
  write_matrix_market(a, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("MatrixMarket") != std::string::npos);
  int rows = 0, cols = 0, nnz = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream(line) >> rows >> cols >> nnz;
    break;
  }
  CHECK(rows == 4);
  CHECK(cols == 4);
  CHECK(nnz == static_cast<int>(a.nnz()));
  double maxerr = 0.0;
  int count = 0;
  int i, j;
  double v;
  while (in >> i >> j >> v) {
    maxerr = std::max(maxerr, std::abs(a.get(i - 1, j - 1) - v));
    ++count;
  }
  CHECK(count == nnz);
  CHECK(maxerr == 0.0); // full round-trip precision required
  std::remove(path.c_str());
}

TEST_CASE("vector kernels") {
  const std::vector<double> a = {3.0, -4.0};
  const std::vector<double> b = {1.0, 2.0};
  CHECK(dot(a, b) == doctest::Approx(-5.0));
  CHECK(norm2(a) == doctest::Approx(5.0));
  std::vector<double> y = b;
  axpy(2.0, a, y);
  CHECK(y[0] == doctest::Approx(7.0));
  CHECK(y[1] == doctest::Approx(-6.0));
  scale(0.5, y);
  CHECK(y[0] == doctest::Approx(3.5));
}
