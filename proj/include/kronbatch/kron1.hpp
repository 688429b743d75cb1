#pragma once

#include <kronbatch/detail.hpp>
#include <kronbatch/types.hpp>
#include <kronbatch/views.hpp>

namespace kronbatch {

// Batched 1-D Kronecker action (a batched GEMV):
//
//   Y^p <- alpha * op(A) * X^p + beta * Y^p,   p = 0 .. batch_count-1
//
// op(A) is m_a x n_a; every X^p has length n_a and every Y^p length m_a.
// A is constant across the batch. The X and Y batches carry independent
// batch strides. When beta == 0 the prior contents of Y are ignored, so
// NaN-initialized outputs are safe.
template <Element T>
void kron1(MatrixOp op_a, index_t m_a, index_t n_a, T alpha,
           MatrixView<const T> a, BatchView<VectorView<const T>> x, T beta,
           BatchView<VectorView<T>> y) {
  validate(a, "kron1: A");
  validate_batch(x, "kron1: X");
  validate_batch(y, "kron1: Y");
  const auto [ra, ca] = op_dims(op_a, a.rows, a.cols);
  detail::require(ra == m_a && ca == n_a, "kron1: A",
                  "op(A) is " + detail::dim2s(ra, ca) + ", expected " +
                      detail::dim2s(m_a, n_a));
  detail::require(x.batch_count == y.batch_count, "kron1",
                  "X and Y batch_count differ");
  detail::require(x.base.size == n_a, "kron1: X",
                  "entry length " + std::to_string(x.base.size) +
                      ", expected " + std::to_string(n_a));
  detail::require(y.base.size == m_a, "kron1: Y",
                  "entry length " + std::to_string(y.base.size) +
                      ", expected " + std::to_string(m_a));

  const index_t batch = x.batch_count;
  if (batch == 0 || m_a == 0) return;

  // empty sum: Y <- beta*Y, A and X never read
  if (alpha == T(0) || n_a == 0) {
    detail::run_chunked<T>(
        batch, detail::chunk_entries_for(batch, m_a * index_t(sizeof(T))), 0,
        [&](index_t p0, index_t p1, std::span<T>) {
          for (index_t p = p0; p < p1; ++p)
            detail::gemm_axpy<false, T>(m_a, 1, 0, nullptr, 1, nullptr, 1,
                                        alpha, beta, y.entry(p).data, m_a);
        });
    return;
  }

  const std::vector<T> a_r = detail::resolve_op(op_a, a);
  const index_t entry_bytes = (n_a + m_a) * index_t(sizeof(T));
  detail::run_chunked<T>(
      batch, detail::chunk_entries_for(batch, entry_bytes), 0,
      [&](index_t p0, index_t p1, std::span<T>) {
        for (index_t p = p0; p < p1; ++p)
          detail::gemm_axpy<false, T>(m_a, 1, n_a, a_r.data(), m_a,
                                      x.entry(p).data, n_a, alpha, beta,
                                      y.entry(p).data, m_a);
      });
}

}  // namespace kronbatch
