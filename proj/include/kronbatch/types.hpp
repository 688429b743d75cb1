#pragma once

#include <concepts>
#include <cstdint>
#include <type_traits>
#include <utility>

#if defined(_MSC_VER)
#define KRONBATCH_RESTRICT __restrict
#else
#define KRONBATCH_RESTRICT __restrict__
#endif

namespace kronbatch {

// Sizes, leading dimensions and batch strides are all measured in elements.
using index_t = std::int64_t;

// Element types the kernels are instantiated for: real single or double
// precision. All buffers in a single kernel call share one element type.
template <typename T>
concept Element = std::same_as<T, float> || std::same_as<T, double>;

// Element type of a view, with the constness of read-only views stripped.
template <typename T>
concept ViewElement = Element<std::remove_const_t<T>>;

// BLAS-style op selector (the transa/transb/transc/transx arguments).
// For real element types ConjTranspose behaves identically to Transpose.
enum class MatrixOp : char {
  NoTranspose = 'N',
  Transpose = 'T',
  ConjTranspose = 'C',
};

// Dimensions of op(M) given the stored dimensions of M.
constexpr std::pair<index_t, index_t> op_dims(MatrixOp op, index_t stored_rows,
                                              index_t stored_cols) noexcept {
  if (op == MatrixOp::NoTranspose) return {stored_rows, stored_cols};
  return {stored_cols, stored_rows};
}

constexpr bool is_transposed(MatrixOp op) noexcept {
  return op != MatrixOp::NoTranspose;
}

}  // namespace kronbatch
