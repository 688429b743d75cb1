#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include <kronbatch/types.hpp>
#include <kronbatch/views.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kronbatch::detail {

// Tight op-resolved copy: returns op(m) as an op_rows x op_cols buffer with
// ld = op_rows. The constant matrices A/B/C are resolved once per kernel call
// so the batch loop runs a single no-transpose code path.
template <Element T>
std::vector<T> resolve_op(MatrixOp op, const MatrixView<const T>& m) {
  const auto [r, c] = op_dims(op, m.rows, m.cols);
  std::vector<T> out(static_cast<std::size_t>(r * c));
  if (op == MatrixOp::NoTranspose) {
    for (index_t j = 0; j < c; ++j)
      for (index_t i = 0; i < r; ++i) out[i + j * r] = m(i, j);
  } else {
    for (index_t j = 0; j < c; ++j)
      for (index_t i = 0; i < r; ++i) out[i + j * r] = m(j, i);
  }
  return out;
}

// Fixed-row-count core of gemm_axpy (see below). With M a compile-time
// constant the column accumulator is promoted to registers across the whole
// k loop instead of round-tripping through the output column per term, which
// is worth ~2x on the size-16 batch. The per-element operation sequence
// (beta scale, then ascending-kk accumulation) matches the generic loop.
template <index_t M, bool RStoredT, Element T>
void gemm_axpy_fixed(index_t n, index_t k, const T* KRONBATCH_RESTRICT s,
                     index_t lds, const T* KRONBATCH_RESTRICT r, index_t ldr,
                     T alpha, T beta, T* KRONBATCH_RESTRICT out, index_t ldo) {
  for (index_t c = 0; c < n; ++c) {
    T* KRONBATCH_RESTRICT outc = out + c * ldo;
    T acc[M];
    if (beta == T(0)) {
      for (index_t i = 0; i < M; ++i) acc[i] = T(0);
    } else if (beta != T(1)) {
      for (index_t i = 0; i < M; ++i) acc[i] = outc[i] * beta;
    } else {
      for (index_t i = 0; i < M; ++i) acc[i] = outc[i];
    }
    for (index_t kk = 0; kk < k; ++kk) {
      const T w = alpha * (RStoredT ? r[c + kk * ldr] : r[kk + c * ldr]);
      const T* KRONBATCH_RESTRICT scol = s + kk * lds;
      for (index_t i = 0; i < M; ++i) acc[i] += scol[i] * w;
    }
    for (index_t i = 0; i < M; ++i) outc[i] = acc[i];
  }
}

// out (m x n, columns ldo apart) <- beta*out + alpha * S * R.
// S is m x k with columns lds apart. R is logically k x n; RStoredT selects
// its storage: element (kk, c) sits at r[kk + c*ldr] when false, at
// r[c + kk*ldr] (i.e. R is a stored n x k matrix used transposed) when true.
//
// Each output element is initialized from beta (prior contents ignored when
// beta == 0) and then accumulates its k terms in ascending kk order. The
// arithmetic per element depends only on (m, n, k) and the operand values,
// never on strides or worker assignment, which is what makes results
// bit-identical across paddings and worker counts. Row counts up to 16
// dispatch to gemm_axpy_fixed; the dispatch key is m alone, so a given
// problem shape always takes the same path and that guarantee is unaffected.
//
// alpha == 0 callers must pass k = 0 so S and R are never dereferenced.
template <bool RStoredT, Element T>
void gemm_axpy(index_t m, index_t n, index_t k, const T* KRONBATCH_RESTRICT s,
               index_t lds, const T* KRONBATCH_RESTRICT r, index_t ldr,
               T alpha, T beta, T* KRONBATCH_RESTRICT out, index_t ldo) {
  switch (m) {
#define KRONBATCH_AXPY_CASE(M)                                              \
  case M:                                                                   \
    return gemm_axpy_fixed<M, RStoredT, T>(n, k, s, lds, r, ldr, alpha,     \
                                           beta, out, ldo);
    KRONBATCH_AXPY_CASE(1)
    KRONBATCH_AXPY_CASE(2)
    KRONBATCH_AXPY_CASE(3)
    KRONBATCH_AXPY_CASE(4)
    KRONBATCH_AXPY_CASE(5)
    KRONBATCH_AXPY_CASE(6)
    KRONBATCH_AXPY_CASE(7)
    KRONBATCH_AXPY_CASE(8)
    KRONBATCH_AXPY_CASE(9)
    KRONBATCH_AXPY_CASE(10)
    KRONBATCH_AXPY_CASE(11)
    KRONBATCH_AXPY_CASE(12)
    KRONBATCH_AXPY_CASE(13)
    KRONBATCH_AXPY_CASE(14)
    KRONBATCH_AXPY_CASE(15)
    KRONBATCH_AXPY_CASE(16)
#undef KRONBATCH_AXPY_CASE
    default:
      break;
  }
  for (index_t c = 0; c < n; ++c) {
    T* KRONBATCH_RESTRICT outc = out + c * ldo;
    if (beta == T(0)) {
      for (index_t i = 0; i < m; ++i) outc[i] = T(0);
    } else if (beta != T(1)) {
      for (index_t i = 0; i < m; ++i) outc[i] *= beta;
    }
    for (index_t kk = 0; kk < k; ++kk) {
      const T w = alpha * (RStoredT ? r[c + kk * ldr] : r[kk + c * ldr]);
      const T* KRONBATCH_RESTRICT scol = s + kk * lds;
      for (index_t i = 0; i < m; ++i) outc[i] += scol[i] * w;
    }
  }
}

// out (m x n) <- beta*out + alpha * (A^T)*R with A stored k x m: column i of
// A holds the k terms of output row i, so both streams are contiguous.
// Ascending-kk accumulation per element, like gemm_axpy.
template <Element T>
void gemm_dot(index_t m, index_t n, index_t k, const T* KRONBATCH_RESTRICT a,
              index_t lda, const T* KRONBATCH_RESTRICT r, index_t ldr, T alpha,
              T beta, T* KRONBATCH_RESTRICT out, index_t ldo) {
  for (index_t c = 0; c < n; ++c) {
    T* KRONBATCH_RESTRICT outc = out + c * ldo;
    const T* KRONBATCH_RESTRICT rc = r + c * ldr;
    for (index_t i = 0; i < m; ++i) {
      const T* KRONBATCH_RESTRICT ai = a + i * lda;
      T acc = T(0);
      for (index_t kk = 0; kk < k; ++kk) acc += ai[kk] * rc[kk];
      outc[i] = (beta == T(0) ? T(0) : beta * outc[i]) + alpha * acc;
    }
  }
}

// Batch entries are processed in contiguous chunks so one chunk's working
// set stays cache-resident next to the resolved constant matrices.
constexpr index_t kChunkTargetBytes = 256 * 1024;

inline index_t chunk_entries_for(index_t batch_count, index_t entry_bytes,
                                 index_t suggested_chunks = 0) {
  if (batch_count <= 0) return 1;
  if (suggested_chunks > 0)
    return std::max<index_t>(1, (batch_count + suggested_chunks - 1) / suggested_chunks);
  if (entry_bytes <= 0) return batch_count;
  return std::clamp<index_t>(kChunkTargetBytes / entry_bytes, 1, batch_count);
}

// Runs fn(p0, p1, scratch) over contiguous chunks [p0, p1) of the batch,
// in parallel over chunks when OpenMP is enabled. `scratch` is a per-worker
// buffer of scratch_elems elements; its contents are unspecified between
// chunks. Entries write disjoint output ranges, so the split never affects
// results.
template <Element T, typename Fn>
void run_chunked(index_t batch_count, index_t chunk_entries,
                 index_t scratch_elems, Fn&& fn) {
  if (batch_count <= 0) return;
  const index_t nchunks = (batch_count + chunk_entries - 1) / chunk_entries;
#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<T> scratch(static_cast<std::size_t>(scratch_elems));
#pragma omp for schedule(static)
    for (index_t c = 0; c < nchunks; ++c) {
      const index_t p0 = c * chunk_entries;
      const index_t p1 = std::min(batch_count, p0 + chunk_entries);
      fn(p0, p1, std::span<T>(scratch));
    }
  }
#else
  std::vector<T> scratch(static_cast<std::size_t>(scratch_elems));
  for (index_t c = 0; c < nchunks; ++c) {
    const index_t p0 = c * chunk_entries;
    const index_t p1 = std::min(batch_count, p0 + chunk_entries);
    fn(p0, p1, std::span<T>(scratch));
  }
#endif
}

inline void require(bool ok, const std::string& context,
                    const std::string& what) {
  if (!ok) layout_error(context, what);
}

inline std::string dim2s(index_t a, index_t b) {
  return std::to_string(a) + " x " + std::to_string(b);
}

}  // namespace kronbatch::detail
