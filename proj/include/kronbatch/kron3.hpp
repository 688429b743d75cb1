#pragma once

#include <span>

#include <kronbatch/detail.hpp>
#include <kronbatch/types.hpp>
#include <kronbatch/views.hpp>

namespace kronbatch {

// Description of one batched 3-D Kronecker action. m_*/n_* are the
// dimensions of op(A), op(B), op(C); X^p is n_a x n_b x n_c and Y^p is
// m_a x m_b x m_c. There is no op on X in 3-D.
template <Element T>
struct KronProblem3D {
  MatrixOp op_a = MatrixOp::NoTranspose;
  MatrixOp op_b = MatrixOp::NoTranspose;
  MatrixOp op_c = MatrixOp::NoTranspose;
  index_t m_a = 0, n_a = 0;
  index_t m_b = 0, n_b = 0;
  index_t m_c = 0, n_c = 0;
  T alpha = T(1);
  T beta = T(0);
};

// Caller-provided scratch consumed by kron3: the tmp array, sliced per batch
// entry at offsets p * (m_a*m_b*n_c). Contents on entry are ignored and
// contents on exit are unspecified.
template <Element T>
struct Workspace {
  T* data = nullptr;
  index_t capacity = 0;

  constexpr Workspace() = default;
  constexpr Workspace(std::span<T> buf)
      : data(buf.data()), capacity(static_cast<index_t>(buf.size())) {}
  constexpr Workspace(T* data_, index_t capacity_)
      : data(data_), capacity(capacity_) {}
};

// Elements of workspace kron3 needs: m_a * m_b * n_c per batch entry.
// Throws std::overflow_error if the product overflows index_t.
template <Element T>
index_t kron3_workspace_size(const KronProblem3D<T>& pr, index_t batch_count) {
  detail::require(pr.m_a >= 0 && pr.m_b >= 0 && pr.n_c >= 0 && batch_count >= 0,
                  "kron3_workspace_size", "negative dimension");
  index_t r = pr.m_a;
  for (index_t f : {pr.m_b, pr.n_c, batch_count})
    if (__builtin_mul_overflow(r, f, &r))
      throw std::overflow_error(
          "kron3_workspace_size: m_a*m_b*n_c*batch_count overflows");
  return r;
}

// Batched 3-D Kronecker action:
//
//   Y^p <- alpha * K(op(A), op(B), op(C))(X^p) + beta * Y^p
//
// i.e. vec(Y^p) = alpha * (op(C) (x) op(B) (x) op(A)) vec(X^p) + beta vec(Y^p),
// expanded Y_ijk = sum_l sum_m sum_n A_il B_jm C_kn X_lmn (ops applied).
// ld/ld2 are the within-entry column and plane strides; batch_stride is the
// element offset between consecutive entries.
//
// Runs as two stages per entry, through the caller workspace slice tmp
// (m_a x m_b x n_c):
//   stage 1: tmp(:,:,N) = op(A) * X^p(:,:,N) * op(B)^T   for each plane N
//   stage 2: Y^p(:,j,:) <- alpha * tmp(:,j,:) * op(C)^T + beta * Y^p(:,j,:)
//            for each j, where tmp(:,j,:) is an m_a x n_c matrix view with
//            column stride m_a*m_b (a zero-copy reshape)
// Scaling by alpha and blending with beta happen exactly once, in stage 2.
// 6*m^4 flops per entry for square size-m inputs.
template <Element T>
void kron3(const KronProblem3D<T>& pr, MatrixView<const T> a,
           MatrixView<const T> b, MatrixView<const T> c,
           BatchView<Array3View<const T>> x, BatchView<Array3View<T>> y,
           Workspace<T> work) {
  validate(a, "kron3: A");
  validate(b, "kron3: B");
  validate(c, "kron3: C");
  validate_batch(x, "kron3: X");
  validate_batch(y, "kron3: Y");

  const auto [ra, ca] = op_dims(pr.op_a, a.rows, a.cols);
  const auto [rb, cb] = op_dims(pr.op_b, b.rows, b.cols);
  const auto [rc, cc] = op_dims(pr.op_c, c.rows, c.cols);
  detail::require(ra == pr.m_a && ca == pr.n_a, "kron3: A",
                  "op(A) is " + detail::dim2s(ra, ca) + ", expected " +
                      detail::dim2s(pr.m_a, pr.n_a));
  detail::require(rb == pr.m_b && cb == pr.n_b, "kron3: B",
                  "op(B) is " + detail::dim2s(rb, cb) + ", expected " +
                      detail::dim2s(pr.m_b, pr.n_b));
  detail::require(rc == pr.m_c && cc == pr.n_c, "kron3: C",
                  "op(C) is " + detail::dim2s(rc, cc) + ", expected " +
                      detail::dim2s(pr.m_c, pr.n_c));
  detail::require(x.batch_count == y.batch_count, "kron3",
                  "X and Y batch_count differ");
  detail::require(
      x.base.dim1 == pr.n_a && x.base.dim2 == pr.n_b && x.base.dim3 == pr.n_c,
      "kron3: X", "entry dims do not match n_a x n_b x n_c");
  detail::require(
      y.base.dim1 == pr.m_a && y.base.dim2 == pr.m_b && y.base.dim3 == pr.m_c,
      "kron3: Y", "entry dims do not match m_a x m_b x m_c");

  const index_t batch = x.batch_count;
  const index_t needed = kron3_workspace_size(pr, batch);
  if (work.capacity < needed)
    detail::layout_error("kron3: workspace",
                         "too small: need " + std::to_string(needed) +
                             " elements, got " + std::to_string(work.capacity));

  if (batch == 0 || pr.m_a == 0 || pr.m_b == 0 || pr.m_c == 0) return;

  if (pr.alpha == T(0) || pr.n_a == 0 || pr.n_b == 0 || pr.n_c == 0) {
    detail::run_chunked<T>(
        batch,
        detail::chunk_entries_for(
            batch, pr.m_a * pr.m_b * pr.m_c * index_t(sizeof(T))),
        0, [&](index_t p0, index_t p1, std::span<T>) {
          for (index_t p = p0; p < p1; ++p) {
            const Array3View<T> yp = y.entry(p);
            for (index_t kk = 0; kk < pr.m_c; ++kk)
              detail::gemm_axpy<false, T>(pr.m_a, pr.m_b, 0, nullptr, 1,
                                          nullptr, 1, pr.alpha, pr.beta,
                                          yp.data + kk * yp.ld2, yp.ld);
          }
        });
    return;
  }

  const std::vector<T> a_r = detail::resolve_op(pr.op_a, a);
  const std::vector<T> b_r = detail::resolve_op(pr.op_b, b);
  const std::vector<T> c_r = detail::resolve_op(pr.op_c, c);

  const index_t tmp_entry = pr.m_a * pr.m_b * pr.n_c;
  const index_t entry_bytes =
      (pr.n_a * pr.n_b * pr.n_c + pr.m_a * pr.m_b * pr.m_c + tmp_entry) *
      index_t(sizeof(T));
  detail::run_chunked<T>(
      batch, detail::chunk_entries_for(batch, entry_bytes), pr.m_a * pr.n_b,
      [&](index_t p0, index_t p1, std::span<T> scratch) {
        T* plane_tmp = scratch.data();  // m_a x n_b
        for (index_t p = p0; p < p1; ++p) {
          const Array3View<const T> xp = x.entry(p);
          const Array3View<T> yp = y.entry(p);
          T* tmp = work.data + p * tmp_entry;  // m_a x m_b x n_c, tight

          // stage 1: tmp(:,:,N) = op(A) * X^p(:,:,N) * op(B)^T
          for (index_t N = 0; N < pr.n_c; ++N) {
            const T* xplane = xp.data + N * xp.ld2;
            detail::gemm_axpy<false, T>(pr.m_a, pr.n_b, pr.n_a, a_r.data(),
                                        pr.m_a, xplane, xp.ld, T(1), T(0),
                                        plane_tmp, pr.m_a);
            detail::gemm_axpy<true, T>(pr.m_a, pr.m_b, pr.n_b, plane_tmp,
                                       pr.m_a, b_r.data(), pr.m_b, T(1), T(0),
                                       tmp + N * pr.m_a * pr.m_b, pr.m_a);
          }

          // stage 2: Y^p(:,j,:) <- alpha * tmp(:,j,:) * op(C)^T + beta * ...
          for (index_t j = 0; j < pr.m_b; ++j)
            detail::gemm_axpy<true, T>(pr.m_a, pr.m_c, pr.n_c, tmp + j * pr.m_a,
                                       pr.m_a * pr.m_b, c_r.data(), pr.m_c,
                                       pr.alpha, pr.beta, yp.data + j * yp.ld,
                                       yp.ld2);
        }
      });
}

}  // namespace kronbatch
