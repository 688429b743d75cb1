#include <kronbatch/reference.hpp>

#include <stdexcept>

namespace kronbatch {

namespace {

void check_dims(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("reference: ") + what);
}

index_t checked_mul(index_t a, index_t b, const char* what) {
  index_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw std::overflow_error(std::string("reference: ") + what);
  return out;
}

}  // namespace

DenseMatrix kron_matrix(MatrixView<const double> a,
                        MatrixView<const double> b) {
  validate(a, "kron_matrix A");
  validate(b, "kron_matrix B");
  const index_t rows = checked_mul(a.rows, b.rows, "kron_matrix rows overflow");
  const index_t cols = checked_mul(a.cols, b.cols, "kron_matrix cols overflow");
  checked_mul(rows, cols, "kron_matrix size overflow");

  DenseMatrix k(rows, cols);
  for (index_t ja = 0; ja < a.cols; ++ja)
    for (index_t ia = 0; ia < a.rows; ++ia) {
      const double aij = a(ia, ja);
      for (index_t jb = 0; jb < b.cols; ++jb)
        for (index_t ib = 0; ib < b.rows; ++ib)
          k(ia * b.rows + ib, ja * b.cols + jb) = aij * b(ib, jb);
    }
  return k;
}

std::vector<double> vec2(MatrixView<const double> x) {
  validate(x, "vec2");
  std::vector<double> v(static_cast<std::size_t>(x.rows * x.cols));
  for (index_t j = 0; j < x.cols; ++j)
    for (index_t i = 0; i < x.rows; ++i) v[i + j * x.rows] = x(i, j);
  return v;
}

std::vector<double> vec3(Array3View<const double> x) {
  validate(x, "vec3");
  std::vector<double> v(static_cast<std::size_t>(x.dim1 * x.dim2 * x.dim3));
  for (index_t k = 0; k < x.dim3; ++k)
    for (index_t j = 0; j < x.dim2; ++j)
      for (index_t i = 0; i < x.dim1; ++i)
        v[i + j * x.dim1 + k * x.dim1 * x.dim2] = x(i, j, k);
  return v;
}

DenseMatrix ref_kron2_apply(MatrixView<const double> a,
                            MatrixView<const double> b,
                            MatrixView<const double> x) {
  validate(a, "ref_kron2_apply A");
  validate(b, "ref_kron2_apply B");
  validate(x, "ref_kron2_apply X");
  check_dims(a.cols == x.rows, "ref_kron2_apply: cols(A) != rows(X)");
  check_dims(b.cols == x.cols, "ref_kron2_apply: cols(B) != cols(X)");

  DenseMatrix y(a.rows, b.rows);
  for (index_t j = 0; j < b.rows; ++j)
    for (index_t i = 0; i < a.rows; ++i) {
      double sum = 0;
      for (index_t m = 0; m < x.cols; ++m)
        for (index_t l = 0; l < x.rows; ++l)
          sum += a(i, l) * x(l, m) * b(j, m);
      y(i, j) = sum;
    }
  return y;
}

DenseArray3 ref_kron3_apply(MatrixView<const double> a,
                            MatrixView<const double> b,
                            MatrixView<const double> c,
                            Array3View<const double> x) {
  validate(a, "ref_kron3_apply A");
  validate(b, "ref_kron3_apply B");
  validate(c, "ref_kron3_apply C");
  validate(x, "ref_kron3_apply X");
  check_dims(a.cols == x.dim1, "ref_kron3_apply: cols(A) != dim1(X)");
  check_dims(b.cols == x.dim2, "ref_kron3_apply: cols(B) != dim2(X)");
  check_dims(c.cols == x.dim3, "ref_kron3_apply: cols(C) != dim3(X)");

  DenseArray3 y(a.rows, b.rows, c.rows);
  for (index_t k = 0; k < c.rows; ++k)
    for (index_t j = 0; j < b.rows; ++j)
      for (index_t i = 0; i < a.rows; ++i) {
        double sum = 0;
        for (index_t n = 0; n < x.dim3; ++n)
          for (index_t m = 0; m < x.dim2; ++m)
            for (index_t l = 0; l < x.dim1; ++l)
              sum += a(i, l) * b(j, m) * c(k, n) * x(l, m, n);
        y(i, j, k) = sum;
      }
  return y;
}

void ref_gemm(MatrixOp op_a, MatrixOp op_b, double alpha,
              MatrixView<const double> a, MatrixView<const double> b,
              double beta, MatrixView<double> c) {
  validate(a, "ref_gemm A");
  validate(b, "ref_gemm B");
  validate(c, "ref_gemm C");
  const auto [m, ka] = op_dims(op_a, a.rows, a.cols);
  const auto [kb, n] = op_dims(op_b, b.rows, b.cols);
  check_dims(ka == kb, "ref_gemm: inner dimensions disagree");
  check_dims(c.rows == m && c.cols == n, "ref_gemm: C dimensions disagree");

  const bool ta = is_transposed(op_a);
  const bool tb = is_transposed(op_b);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < m; ++i) {
      const double prior = beta == 0 ? 0.0 : beta * c(i, j);
      if (alpha == 0) {  // A and B are not read
        c(i, j) = prior;
        continue;
      }
      double sum = 0;
      for (index_t l = 0; l < ka; ++l) {
        const double av = ta ? a(l, i) : a(i, l);
        const double bv = tb ? b(j, l) : b(l, j);
        sum += av * bv;
      }
      c(i, j) = prior + alpha * sum;
    }
}

}  // namespace kronbatch
