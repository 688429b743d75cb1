#pragma once

#include <vector>

#include <kronbatch/types.hpp>
#include <kronbatch/views.hpp>

namespace kronbatch {

// Brute-force reference implementations used as the ground truth for the
// batched kernels: explicit Kronecker matrix construction, column-major
// vectorization, and literal-sum application. Everything here works in
// double precision regardless of the kernel element type under test, and is
// deliberately naive (the 3-D apply is O(m^6) per entry). None of it is
// called from the production kernels.

// Owned tight column-major matrix (ld = rows).
struct DenseMatrix {
  std::vector<double> storage;
  index_t rows = 0;
  index_t cols = 0;

  DenseMatrix() = default;
  DenseMatrix(index_t r, index_t c)
      : storage(static_cast<std::size_t>(r * c)), rows(r), cols(c) {}

  double& operator()(index_t i, index_t j) { return storage[i + j * rows]; }
  double operator()(index_t i, index_t j) const {
    return storage[i + j * rows];
  }

  MatrixView<const double> view() const {
    return {storage.data(), rows, cols, std::max<index_t>(rows, 1),
            static_cast<index_t>(storage.size())};
  }
  MatrixView<double> view_mut() {
    return {storage.data(), rows, cols, std::max<index_t>(rows, 1),
            static_cast<index_t>(storage.size())};
  }
};

// Owned tight column-major 3-D array (ld = dim1, ld2 = dim1*dim2).
struct DenseArray3 {
  std::vector<double> storage;
  index_t dim1 = 0;
  index_t dim2 = 0;
  index_t dim3 = 0;

  DenseArray3() = default;
  DenseArray3(index_t d1, index_t d2, index_t d3)
      : storage(static_cast<std::size_t>(d1 * d2 * d3)),
        dim1(d1),
        dim2(d2),
        dim3(d3) {}

  double& operator()(index_t i, index_t j, index_t k) {
    return storage[i + j * dim1 + k * dim1 * dim2];
  }
  double operator()(index_t i, index_t j, index_t k) const {
    return storage[i + j * dim1 + k * dim1 * dim2];
  }

  Array3View<const double> view() const {
    return {storage.data(), dim1, dim2, dim3, std::max<index_t>(dim1, 1),
            std::max<index_t>(dim1, 1) * dim2,
            static_cast<index_t>(storage.size())};
  }
};

// Explicit Kronecker product matrix: the (rows_a*rows_b) x (cols_a*cols_b)
// block matrix whose (i, j) block is A(i,j) * B. Throws std::overflow_error
// when the product dimensions overflow.
DenseMatrix kron_matrix(MatrixView<const double> a, MatrixView<const double> b);

// Column-major vectorization: entry i + j*rows of the result is X(i, j).
std::vector<double> vec2(MatrixView<const double> x);

// 3-D vectorization: entry i + j*dim1 + k*dim1*dim2 is X(i, j, k); layout
// padding is skipped.
std::vector<double> vec3(Array3View<const double> x);

// Y(i,j) = sum_l sum_m A(i,l) X(l,m) B(j,m) by the literal double sum;
// requires cols(A) == rows(X) and cols(B) == cols(X). Satisfies
// vec2(result) == kron_matrix(B, A) * vec2(X).
DenseMatrix ref_kron2_apply(MatrixView<const double> a,
                            MatrixView<const double> b,
                            MatrixView<const double> x);

// Y(i,j,k) = sum_l sum_m sum_n A(i,l) B(j,m) C(k,n) X(l,m,n) by the literal
// triple sum. Satisfies vec3(result) == kron_matrix(C, kron_matrix(B, A)) *
// vec3(X).
DenseArray3 ref_kron3_apply(MatrixView<const double> a,
                            MatrixView<const double> b,
                            MatrixView<const double> c,
                            Array3View<const double> x);

// C <- alpha * op(A) * op(B) + beta * C by triple loop. When beta == 0 the
// prior contents of C (including non-finite values) are ignored.
void ref_gemm(MatrixOp op_a, MatrixOp op_b, double alpha,
              MatrixView<const double> a, MatrixView<const double> b,
              double beta, MatrixView<double> c);

}  // namespace kronbatch
