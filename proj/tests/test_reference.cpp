#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "test_util.hpp"

using namespace kronbatch;
using namespace testutil;

namespace {

DenseMatrix random_dense(index_t rows, index_t cols, std::mt19937_64& g) {
  DenseMatrix m(rows, cols);
  for (auto& e : m.storage) e = next_uniform(g);
  return m;
}

DenseMatrix random_int_dense(index_t rows, index_t cols, std::mt19937_64& g) {
  DenseMatrix m(rows, cols);
  for (auto& e : m.storage) e = static_cast<double>(static_cast<int>(g() % 7) - 3);
  return m;
}

DenseArray3 random_dense3(index_t d1, index_t d2, index_t d3,
                          std::mt19937_64& g) {
  DenseArray3 a(d1, d2, d3);
  for (auto& e : a.storage) e = next_uniform(g);
  return a;
}

DenseMatrix identity(index_t n) {
  DenseMatrix m(n, n);
  for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("kron_matrix block structure") {
  DenseMatrix a(2, 2);
  a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
  const DenseMatrix k = kron_matrix(a.view(), identity(2).view());

  const double want[4][4] = {
      {1, 0, 2, 0}, {0, 1, 0, 2}, {3, 0, 4, 0}, {0, 3, 0, 4}};
  REQUIRE(k.rows == 4);
  REQUIRE(k.cols == 4);
  for (index_t i = 0; i < 4; ++i)
    for (index_t j = 0; j < 4; ++j) CHECK(k(i, j) == want[i][j]);

  // A = I_1 leaves B unchanged
  std::mt19937_64 g(7);
  const DenseMatrix b = random_dense(3, 5, g);
  const DenseMatrix kb = kron_matrix(identity(1).view(), b.view());
  REQUIRE(kb.rows == 3);
  REQUIRE(kb.cols == 5);
  CHECK(kb.storage == b.storage);

  // scalars multiply
  DenseMatrix s2(1, 1), s3(1, 1);
  s2(0, 0) = 2; s3(0, 0) = 3;
  CHECK(kron_matrix(s2.view(), s3.view())(0, 0) == 6);
}

TEST_CASE("kron_matrix rectangular blocks") {
  std::mt19937_64 g(11);
  const DenseMatrix a = random_dense(3, 2, g);
  const DenseMatrix b = random_dense(2, 4, g);
  const DenseMatrix k = kron_matrix(a.view(), b.view());
  REQUIRE(k.rows == 6);
  REQUIRE(k.cols == 8);
  for (index_t i = 0; i < 3; ++i)
    for (index_t j = 0; j < 2; ++j)
      for (index_t ib = 0; ib < 2; ++ib)
        for (index_t jb = 0; jb < 4; ++jb)
          CHECK(k(i * 2 + ib, j * 4 + jb) == a(i, j) * b(ib, jb));
}

TEST_CASE("kron_matrix overflow") {
  // a view can legally claim giant dims; the product size must be rejected
  // before any element is touched
  const index_t huge = index_t(1) << 32;
  const MatrixView<const double> a(nullptr, huge, 1, huge, huge);
  const MatrixView<const double> b(nullptr, huge, 1, huge, huge);
  CHECK_THROWS_AS(kron_matrix(a, b), std::overflow_error);
}

TEST_CASE("vec2") {
  // [[1,3],[2,4]] stored column-major
  std::vector<double> x{1, 2, 3, 4};
  CHECK(vec2(tight_view(x, 2, 2)) == std::vector<double>{1, 2, 3, 4});
  CHECK(vec2(tight_view(x, 1, 4)) == x);
  CHECK(vec2(tight_view(x, 4, 1)) == x);

  // padded view, same logical content
  std::vector<double> xp{1, 2, -9, 3, 4, -9};
  CHECK(vec2(MatrixView<const double>(xp.data(), 2, 2, 3, 6)) ==
        std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("vec3") {
  // 2x1x2 with planes [[1],[2]] and [[3],[4]]
  std::vector<double> x{1, 2, 3, 4};
  CHECK(vec3(Array3View<const double>(x.data(), 2, 1, 2, 2, 2, 4)) ==
        std::vector<double>{1, 2, 3, 4});

  // dim3 = 1 degenerates to vec2 of the single plane
  std::mt19937_64 g(3);
  const auto y = random_vec<double>(6, g);
  CHECK(vec3(Array3View<const double>(y.data(), 2, 3, 1, 2, 6, 6)) ==
        vec2(tight_view(y, 2, 3)));

  // padded vs tight
  std::vector<double> pad(5 * 2 * 11, -1.0);
  const Array3View<double> pv(pad.data(), 4, 2, 3, 5, 11,
                              static_cast<index_t>(pad.size()));
  std::vector<double> tight(4 * 2 * 3);
  const Array3View<double> tv(tight.data(), 4, 2, 3, 4, 8, 24);
  double v = 0.5;
  for (index_t k = 0; k < 3; ++k)
    for (index_t j = 0; j < 2; ++j)
      for (index_t i = 0; i < 4; ++i) pv(i, j, k) = tv(i, j, k) = (v += 1);
  CHECK(vec3(Array3View<const double>(pv)) == vec3(Array3View<const double>(tv)));
}

TEST_CASE("ref_kron2_apply basics") {
  std::mt19937_64 g(17);
  const DenseMatrix x = random_dense(3, 4, g);

  // identity operators
  const DenseMatrix y = ref_kron2_apply(identity(3).view(), identity(4).view(),
                                        x.view());
  CHECK(y.storage == x.storage);

  // all-ones row operators sum every entry
  DenseMatrix ones12(1, 2);
  ones12(0, 0) = ones12(0, 1) = 1;
  DenseMatrix x22(2, 2);
  x22(0, 0) = 1; x22(0, 1) = 2; x22(1, 0) = 3; x22(1, 1) = 4;
  const DenseMatrix s = ref_kron2_apply(ones12.view(), ones12.view(), x22.view());
  REQUIRE(s.rows == 1);
  REQUIRE(s.cols == 1);
  CHECK(s(0, 0) == 10);

  // scaling bilinearity: A = 2I, B = 3I
  DenseMatrix a2 = identity(3), b3 = identity(4);
  for (auto& e : a2.storage) e *= 2;
  for (auto& e : b3.storage) e *= 3;
  const DenseMatrix y6 = ref_kron2_apply(a2.view(), b3.view(), x.view());
  for (std::size_t i = 0; i < x.storage.size(); ++i)
    CHECK(y6.storage[i] == doctest::Approx(6 * x.storage[i]).epsilon(1e-14));

  CHECK_THROWS_AS(ref_kron2_apply(identity(2).view(), identity(4).view(),
                                  x.view()),
                  std::invalid_argument);
}

TEST_CASE("kron-vec identity 2d") {
  std::mt19937_64 g(23);
  for (int rep = 0; rep < 10; ++rep) {
    const index_t ma = 1 + g() % 6, na = 1 + g() % 6;
    const index_t mb = 1 + g() % 6, nb = 1 + g() % 6;
    const DenseMatrix a = random_dense(ma, na, g);
    const DenseMatrix b = random_dense(mb, nb, g);
    const DenseMatrix x = random_dense(na, nb, g);

    const auto lhs = vec2(ref_kron2_apply(a.view(), b.view(), x.view()).view());
    const auto rhs = matvec(kron_matrix(b.view(), a.view()), vec2(x.view()));
    CHECK(rel_err_inf_d(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("ref_kron3_apply basics") {
  std::mt19937_64 g(29);
  const DenseArray3 x = random_dense3(2, 3, 4, g);

  const DenseArray3 y = ref_kron3_apply(identity(2).view(), identity(3).view(),
                                        identity(4).view(), x.view());
  CHECK(y.storage == x.storage);

  // all-ones 1 x n operators produce the grand sum
  DenseMatrix oa(1, 2), ob(1, 3), oc(1, 4);
  for (auto* m : {&oa, &ob, &oc})
    for (auto& e : m->storage) e = 1.0;
  const DenseArray3 s = ref_kron3_apply(oa.view(), ob.view(), oc.view(),
                                        x.view());
  REQUIRE(s.storage.size() == 1);
  double total = 0;
  for (double e : x.storage) total += e;
  CHECK(s(0, 0, 0) == doctest::Approx(total).epsilon(1e-13));

  // C = I with dim3 = 1 degenerates to the 2-D apply
  std::mt19937_64 g2(31);
  const DenseArray3 x1 = random_dense3(3, 4, 1, g2);
  const DenseMatrix a = random_dense(2, 3, g2);
  const DenseMatrix b = random_dense(5, 4, g2);
  const DenseArray3 y3 = ref_kron3_apply(a.view(), b.view(), identity(1).view(),
                                         x1.view());
  DenseMatrix xplane(3, 4);
  for (index_t j = 0; j < 4; ++j)
    for (index_t i = 0; i < 3; ++i) xplane(i, j) = x1(i, j, 0);
  const DenseMatrix y2 = ref_kron2_apply(a.view(), b.view(), xplane.view());
  REQUIRE(y3.storage.size() == y2.storage.size());
  for (std::size_t i = 0; i < y2.storage.size(); ++i)
    CHECK(y3.storage[i] == doctest::Approx(y2.storage[i]).epsilon(1e-13));

  CHECK_THROWS_AS(ref_kron3_apply(a.view(), b.view(), identity(2).view(),
                                  x1.view()),
                  std::invalid_argument);
}

TEST_CASE("kron-vec identity 3d") {
  std::mt19937_64 g(37);
  for (int rep = 0; rep < 6; ++rep) {
    const index_t ma = 1 + g() % 4, na = 1 + g() % 4;
    const index_t mb = 1 + g() % 4, nb = 1 + g() % 4;
    const index_t mc = 1 + g() % 4, nc = 1 + g() % 4;
    const DenseMatrix a = random_dense(ma, na, g);
    const DenseMatrix b = random_dense(mb, nb, g);
    const DenseMatrix c = random_dense(mc, nc, g);
    const DenseArray3 x = random_dense3(na, nb, nc, g);

    const auto lhs =
        vec3(ref_kron3_apply(a.view(), b.view(), c.view(), x.view()).view());
    const DenseMatrix cba =
        kron_matrix(c.view(), kron_matrix(b.view(), a.view()).view());
    const auto rhs = matvec(cba, vec3(x.view()));
    CHECK(rel_err_inf_d(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("kron_matrix associativity and bilinearity") {
  std::mt19937_64 g(41);
  const DenseMatrix a = random_int_dense(2, 3, g);
  const DenseMatrix b = random_int_dense(3, 2, g);
  const DenseMatrix c = random_int_dense(2, 2, g);

  const DenseMatrix left =
      kron_matrix(c.view(), kron_matrix(b.view(), a.view()).view());
  const DenseMatrix right =
      kron_matrix(kron_matrix(c.view(), b.view()).view(), a.view());
  REQUIRE(left.rows == right.rows);
  REQUIRE(left.cols == right.cols);
  CHECK(left.storage == right.storage);

  DenseMatrix sa = a, tb = b;
  for (auto& e : sa.storage) e *= 3;
  for (auto& e : tb.storage) e *= -2;
  const DenseMatrix scaled = kron_matrix(sa.view(), tb.view());
  DenseMatrix expect = kron_matrix(a.view(), b.view());
  for (auto& e : expect.storage) e *= -6;
  CHECK(scaled.storage == expect.storage);
}

TEST_CASE("mixed-product sanity") {
  // kron_matrix(B,A) . vec2(X) == vec2(A X B^T) via two ref_gemm calls
  std::mt19937_64 g(43);
  const DenseMatrix a = random_dense(3, 4, g);
  const DenseMatrix b = random_dense(5, 2, g);
  const DenseMatrix x = random_dense(4, 2, g);

  DenseMatrix ax(3, 2);
  ref_gemm(MatrixOp::NoTranspose, MatrixOp::NoTranspose, 1.0, a.view(),
           x.view(), 0.0, ax.view_mut());
  DenseMatrix axbt(3, 5);
  ref_gemm(MatrixOp::NoTranspose, MatrixOp::Transpose, 1.0, ax.view(),
           b.view(), 0.0, axbt.view_mut());

  const auto direct = matvec(kron_matrix(b.view(), a.view()), vec2(x.view()));
  CHECK(rel_err_inf_d(vec2(axbt.view()), direct) < 1e-12);
}

TEST_CASE("ref_gemm") {
  std::mt19937_64 g(47);
  const DenseMatrix b = random_dense(3, 4, g);

  // A = I passes B through
  DenseMatrix c(3, 4);
  ref_gemm(MatrixOp::NoTranspose, MatrixOp::NoTranspose, 1.0,
           identity(3).view(), b.view(), 0.0, c.view_mut());
  CHECK(c.storage == b.storage);

  // alpha = 0 scales only; A and B are never read (NaN-poisoned)
  DenseMatrix nan_a(3, 3), nan_b(3, 4);
  for (auto& e : nan_a.storage) e = quiet_nan<double>();
  for (auto& e : nan_b.storage) e = quiet_nan<double>();
  ref_gemm(MatrixOp::NoTranspose, MatrixOp::NoTranspose, 0.0, nan_a.view(),
           nan_b.view(), 2.0, c.view_mut());
  CHECK(!has_nan(c.storage));
  for (std::size_t i = 0; i < b.storage.size(); ++i)
    CHECK(c.storage[i] == 2 * b.storage[i]);

  // beta = 0 ignores NaN-poisoned prior contents
  for (auto& e : c.storage) e = quiet_nan<double>();
  ref_gemm(MatrixOp::NoTranspose, MatrixOp::NoTranspose, 1.0,
           identity(3).view(), b.view(), 0.0, c.view_mut());
  CHECK(c.storage == b.storage);

  // transpose example
  DenseMatrix a22(2, 2);
  a22(0, 0) = 1; a22(0, 1) = 2; a22(1, 0) = 3; a22(1, 1) = 4;
  DenseMatrix ct(2, 2);
  ref_gemm(MatrixOp::Transpose, MatrixOp::NoTranspose, 1.0, a22.view(),
           identity(2).view(), 0.0, ct.view_mut());
  CHECK(ct(0, 0) == 1);
  CHECK(ct(0, 1) == 3);
  CHECK(ct(1, 0) == 2);
  CHECK(ct(1, 1) == 4);

  // ConjTranspose behaves as Transpose for real elements
  DenseMatrix cc(2, 2);
  ref_gemm(MatrixOp::ConjTranspose, MatrixOp::NoTranspose, 1.0, a22.view(),
           identity(2).view(), 0.0, cc.view_mut());
  CHECK(cc.storage == ct.storage);

  CHECK_THROWS_AS(ref_gemm(MatrixOp::NoTranspose, MatrixOp::NoTranspose, 1.0,
                           a22.view(), b.view(), 0.0, c.view_mut()),
                  std::invalid_argument);
}
