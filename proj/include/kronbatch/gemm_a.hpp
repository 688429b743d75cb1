#pragma once

#include <kronbatch/detail.hpp>
#include <kronbatch/types.hpp>
#include <kronbatch/views.hpp>

namespace kronbatch {

// Batched GEMM where the left matrix varies across the batch and the right
// matrix is fixed:
//
//   C^p <- alpha * op(A^p) * op(B) + beta * C^p,   p = 0 .. batch_count-1
//
// op(A^p) is m x k, op(B) is k x n, every C^p is m x n. The A and C batches
// carry their own batch strides; op(B) is materialized once and reused
// across every entry a worker processes. parallel_hint is an advisory
// worker-chunk count; 0 picks the internal default.
template <Element T>
void gemm_a(MatrixOp op_a, MatrixOp op_b, index_t m, index_t n, index_t k,
            T alpha, BatchView<MatrixView<const T>> a, MatrixView<const T> b,
            T beta, BatchView<MatrixView<T>> c, index_t parallel_hint = 0) {
  validate_batch(a, "gemm_a: A");
  validate(b, "gemm_a: B");
  validate_batch(c, "gemm_a: C");

  const auto [ram, rak] = op_dims(op_a, a.base.rows, a.base.cols);
  const auto [rbk, rbn] = op_dims(op_b, b.rows, b.cols);
  detail::require(a.batch_count == c.batch_count, "gemm_a",
                  "A and C batch_count differ");
  detail::require(ram == m && rak == k, "gemm_a: A",
                  "op(A) is " + detail::dim2s(ram, rak) + ", expected " +
                      detail::dim2s(m, k));
  detail::require(rbk == k && rbn == n, "gemm_a: B",
                  "op(B) is " + detail::dim2s(rbk, rbn) + ", expected " +
                      detail::dim2s(k, n));
  detail::require(c.base.rows == m && c.base.cols == n, "gemm_a: C",
                  "entry is " + detail::dim2s(c.base.rows, c.base.cols) +
                      ", expected " + detail::dim2s(m, n));

  const index_t batch = a.batch_count;
  if (batch == 0 || m == 0 || n == 0) return;

  if (alpha == T(0) || k == 0) {
    detail::run_chunked<T>(
        batch,
        detail::chunk_entries_for(batch, m * n * index_t(sizeof(T)),
                                  parallel_hint),
        0, [&](index_t p0, index_t p1, std::span<T>) {
          for (index_t p = p0; p < p1; ++p) {
            const MatrixView<T> cp = c.entry(p);
            detail::gemm_axpy<false, T>(m, n, 0, nullptr, 1, nullptr, 1, alpha,
                                        beta, cp.data, cp.ld);
          }
        });
    return;
  }

  const std::vector<T> b_r = detail::resolve_op(op_b, b);  // k x n, tight
  const bool a_trans = is_transposed(op_a);

  const index_t entry_bytes = (m * k + m * n) * index_t(sizeof(T));
  detail::run_chunked<T>(
      batch, detail::chunk_entries_for(batch, entry_bytes, parallel_hint), 0,
      [&](index_t p0, index_t p1, std::span<T>) {
        for (index_t p = p0; p < p1; ++p) {
          const MatrixView<const T> ap = a.entry(p);
          const MatrixView<T> cp = c.entry(p);
          if (a_trans)
            detail::gemm_dot(m, n, k, ap.data, ap.ld, b_r.data(), k, alpha,
                             beta, cp.data, cp.ld);
          else
            detail::gemm_axpy<false, T>(m, n, k, ap.data, ap.ld, b_r.data(), k,
                                        alpha, beta, cp.data, cp.ld);
        }
      });
}

}  // namespace kronbatch
