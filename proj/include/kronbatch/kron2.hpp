#pragma once

#include <kronbatch/detail.hpp>
#include <kronbatch/types.hpp>
#include <kronbatch/views.hpp>

namespace kronbatch {

// Description of one batched 2-D Kronecker action. m_a/n_a and m_b/n_b are
// the dimensions of op(A) and op(B); op(X^p) must be n_a x n_b and every
// Y^p is m_a x m_b.
template <Element T>
struct KronProblem2D {
  MatrixOp op_a = MatrixOp::NoTranspose;
  MatrixOp op_b = MatrixOp::NoTranspose;
  MatrixOp op_x = MatrixOp::NoTranspose;
  index_t m_a = 0, n_a = 0;
  index_t m_b = 0, n_b = 0;
  T alpha = T(1);
  T beta = T(0);
};

// Batched 2-D Kronecker action:
//
//   Y^p <- alpha * op(A) * op(X^p) * op(B)^T + beta * Y^p
//
// so that vec(Y^p) = alpha * (op(B) (x) op(A)) vec(op(X^p)) + beta * vec(Y^p).
// Expanded: Y_ij = sum_l sum_m A_il B_jm X_lm (with op applied). A and B are
// constant across the batch; their op-resolved copies are materialized once,
// leaving op_x as the only per-entry variant. X views describe the stored
// matrix (their ld is a stored-layout stride), so stored X^p is n_a x n_b
// when op_x is NoTranspose and n_b x n_a otherwise.
//
// Per entry this runs the sum-factorized pair of small GEMMs
// (A * X, then * B^T) through a worker-private m_a x n_b scratch; no caller
// workspace is required. 4*m^3 flops per entry for square size-m inputs.
template <Element T>
void kron2(const KronProblem2D<T>& pr, MatrixView<const T> a,
           MatrixView<const T> b, BatchView<MatrixView<const T>> x,
           BatchView<MatrixView<T>> y) {
  validate(a, "kron2: A");
  validate(b, "kron2: B");
  validate_batch(x, "kron2: X");
  validate_batch(y, "kron2: Y");

  const auto [ra, ca] = op_dims(pr.op_a, a.rows, a.cols);
  const auto [rb, cb] = op_dims(pr.op_b, b.rows, b.cols);
  detail::require(ra == pr.m_a && ca == pr.n_a, "kron2: A",
                  "op(A) is " + detail::dim2s(ra, ca) + ", expected " +
                      detail::dim2s(pr.m_a, pr.n_a));
  detail::require(rb == pr.m_b && cb == pr.n_b, "kron2: B",
                  "op(B) is " + detail::dim2s(rb, cb) + ", expected " +
                      detail::dim2s(pr.m_b, pr.n_b));
  detail::require(x.batch_count == y.batch_count, "kron2",
                  "X and Y batch_count differ");
  const auto [rx, cx] = op_dims(pr.op_x, x.base.rows, x.base.cols);
  detail::require(rx == pr.n_a && cx == pr.n_b, "kron2: X",
                  "op(X) is " + detail::dim2s(rx, cx) + ", expected " +
                      detail::dim2s(pr.n_a, pr.n_b));
  detail::require(y.base.rows == pr.m_a && y.base.cols == pr.m_b, "kron2: Y",
                  "entry is " + detail::dim2s(y.base.rows, y.base.cols) +
                      ", expected " + detail::dim2s(pr.m_a, pr.m_b));

  const index_t batch = x.batch_count;
  if (batch == 0 || pr.m_a == 0 || pr.m_b == 0) return;

  if (pr.alpha == T(0) || pr.n_a == 0 || pr.n_b == 0) {
    detail::run_chunked<T>(
        batch,
        detail::chunk_entries_for(batch, pr.m_a * pr.m_b * index_t(sizeof(T))),
        0, [&](index_t p0, index_t p1, std::span<T>) {
          for (index_t p = p0; p < p1; ++p) {
            const MatrixView<T> yp = y.entry(p);
            detail::gemm_axpy<false, T>(pr.m_a, pr.m_b, 0, nullptr, 1, nullptr,
                                        1, pr.alpha, pr.beta, yp.data, yp.ld);
          }
        });
    return;
  }

  const std::vector<T> a_r = detail::resolve_op(pr.op_a, a);
  const std::vector<T> b_r = detail::resolve_op(pr.op_b, b);
  const bool x_trans = is_transposed(pr.op_x);

  const index_t entry_bytes =
      (pr.n_a * pr.n_b + pr.m_a * pr.m_b + pr.m_a * pr.n_b) *
      index_t(sizeof(T));
  detail::run_chunked<T>(
      batch, detail::chunk_entries_for(batch, entry_bytes),
      pr.m_a * pr.n_b, [&](index_t p0, index_t p1, std::span<T> scratch) {
        T* tmp = scratch.data();
        for (index_t p = p0; p < p1; ++p) {
          const MatrixView<const T> xp = x.entry(p);
          const MatrixView<T> yp = y.entry(p);
          // tmp = op(A) * op(X^p)
          if (x_trans)
            detail::gemm_axpy<true, T>(pr.m_a, pr.n_b, pr.n_a, a_r.data(),
                                       pr.m_a, xp.data, xp.ld, T(1), T(0), tmp,
                                       pr.m_a);
          else
            detail::gemm_axpy<false, T>(pr.m_a, pr.n_b, pr.n_a, a_r.data(),
                                        pr.m_a, xp.data, xp.ld, T(1), T(0),
                                        tmp, pr.m_a);
          // Y^p = alpha * tmp * op(B)^T + beta * Y^p
          detail::gemm_axpy<true, T>(pr.m_a, pr.m_b, pr.n_b, tmp, pr.m_a,
                                     b_r.data(), pr.m_b, pr.alpha, pr.beta,
                                     yp.data, yp.ld);
        }
      });
}

}  // namespace kronbatch
