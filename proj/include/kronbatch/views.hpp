#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <kronbatch/types.hpp>

namespace kronbatch {

// Strided column-major descriptors over caller-owned flat buffers. The
// library never allocates data buffers on behalf of the caller; a view is a
// pointer plus extents. `len` is the number of addressable elements starting
// at `data` (taken from the span the view was built over) and is used only by
// the validation routines. Views over `const T` are read-only; views over a
// mutable T grant exclusive access to their element range for the duration of
// a kernel call. Indexing is 0-based throughout.

// Contiguous vector of `size` elements (a kron1 batch entry).
template <ViewElement T>
struct VectorView {
  T* data = nullptr;
  index_t size = 0;
  index_t len = 0;

  constexpr VectorView() = default;
  constexpr VectorView(std::span<T> buf, index_t size_)
      : data(buf.data()), size(size_), len(static_cast<index_t>(buf.size())) {}
  constexpr VectorView(T* data_, index_t size_, index_t len_)
      : data(data_), size(size_), len(len_) {}

  // read-only view over the same elements
  template <typename U>
    requires std::same_as<const U, T>
  constexpr VectorView(const VectorView<U>& o)
      : data(o.data), size(o.size), len(o.len) {}

  constexpr T& operator[](index_t i) const { return data[i]; }

  constexpr VectorView shifted(index_t offset) const {
    return {data + offset, size, len - offset};
  }
};

// Column-major matrix: element (i, j) lives at flat index i + j*ld. `ld` is
// the BLAS leading dimension (elements between column starts) and always
// describes the stored matrix, before any op is applied.
template <ViewElement T>
struct MatrixView {
  T* data = nullptr;
  index_t rows = 0;
  index_t cols = 0;
  index_t ld = 0;
  index_t len = 0;

  constexpr MatrixView() = default;
  constexpr MatrixView(std::span<T> buf, index_t rows_, index_t cols_,
                       index_t ld_)
      : data(buf.data()),
        rows(rows_),
        cols(cols_),
        ld(ld_),
        len(static_cast<index_t>(buf.size())) {}
  constexpr MatrixView(T* data_, index_t rows_, index_t cols_, index_t ld_,
                       index_t len_)
      : data(data_), rows(rows_), cols(cols_), ld(ld_), len(len_) {}

  template <typename U>
    requires std::same_as<const U, T>
  constexpr MatrixView(const MatrixView<U>& o)
      : data(o.data), rows(o.rows), cols(o.cols), ld(o.ld), len(o.len) {}

  constexpr T& operator()(index_t i, index_t j) const {
    return data[i + j * ld];
  }

  constexpr MatrixView shifted(index_t offset) const {
    return {data + offset, rows, cols, ld, len - offset};
  }
};

// Column-major 3-D array: element (i, j, k) lives at i + j*ld + k*ld2.
// `ld2` is the plane stride: the offset in elements between adjacent
// (:,:,k) planes.
template <ViewElement T>
struct Array3View {
  T* data = nullptr;
  index_t dim1 = 0;
  index_t dim2 = 0;
  index_t dim3 = 0;
  index_t ld = 0;
  index_t ld2 = 0;
  index_t len = 0;

  constexpr Array3View() = default;
  constexpr Array3View(std::span<T> buf, index_t d1, index_t d2, index_t d3,
                       index_t ld_, index_t ld2_)
      : data(buf.data()),
        dim1(d1),
        dim2(d2),
        dim3(d3),
        ld(ld_),
        ld2(ld2_),
        len(static_cast<index_t>(buf.size())) {}
  constexpr Array3View(T* data_, index_t d1, index_t d2, index_t d3,
                       index_t ld_, index_t ld2_, index_t len_)
      : data(data_), dim1(d1), dim2(d2), dim3(d3), ld(ld_), ld2(ld2_),
        len(len_) {}

  template <typename U>
    requires std::same_as<const U, T>
  constexpr Array3View(const Array3View<U>& o)
      : data(o.data), dim1(o.dim1), dim2(o.dim2), dim3(o.dim3), ld(o.ld),
        ld2(o.ld2), len(o.len) {}

  constexpr T& operator()(index_t i, index_t j, index_t k) const {
    return data[i + j * ld + k * ld2];
  }

  constexpr Array3View shifted(index_t offset) const {
    return {data + offset, dim1, dim2, dim3, ld, ld2, len - offset};
  }
};

template <ViewElement T>
using VectorViewMut = VectorView<std::remove_const_t<T>>;
template <ViewElement T>
using MatrixViewMut = MatrixView<std::remove_const_t<T>>;
template <ViewElement T>
using Array3ViewMut = Array3View<std::remove_const_t<T>>;

// Elements an entry occupies, from its first element to one past its last
// addressable element (0 for empty entries).
template <ViewElement T>
constexpr index_t footprint(const VectorView<T>& v) {
  return v.size;
}
template <ViewElement T>
constexpr index_t footprint(const MatrixView<T>& m) {
  return m.cols == 0 ? 0 : m.ld * m.cols;
}
template <ViewElement T>
constexpr index_t footprint(const Array3View<T>& a) {
  return a.dim3 == 0 ? 0 : a.ld2 * a.dim3;
}

// Uniform-stride batch: entry p starts `p * batch_stride` elements after
// entry 0. `base` describes entry 0 and spans the whole buffer; entries
// never alias (batch_stride >= entry footprint). X and Y batches carry
// independent strides.
template <typename V>
struct BatchView {
  V base{};
  index_t batch_count = 0;
  index_t batch_stride = 0;

  constexpr BatchView() = default;
  constexpr BatchView(V base_, index_t count, index_t stride)
      : base(base_), batch_count(count), batch_stride(stride) {}

  template <typename U>
    requires std::convertible_to<U, V> && (!std::same_as<U, V>)
  constexpr BatchView(const BatchView<U>& o)
      : base(o.base), batch_count(o.batch_count), batch_stride(o.batch_stride) {}

  constexpr V entry(index_t p) const { return base.shifted(p * batch_stride); }
};

namespace detail {

[[noreturn]] inline void layout_error(const std::string& context,
                                      const std::string& what) {
  throw std::invalid_argument(context.empty() ? what : context + ": " + what);
}

inline std::string nums(index_t a, index_t b) {
  return "(" + std::to_string(a) + ") < (" + std::to_string(b) + ")";
}

}  // namespace detail

// The validate functions throw std::invalid_argument describing the first
// violated invariant; they accept exactly the views the kernels are defined
// on. `context` is prepended to the message ("kron2: X", ...).

template <ViewElement T>
void validate(const VectorView<T>& v, const std::string& context = {}) {
  if (v.size < 0)
    detail::layout_error(context, "size " + detail::nums(v.size, 0));
  if (v.len < v.size)
    detail::layout_error(context, "buffer length " + detail::nums(v.len, v.size));
}

template <ViewElement T>
void validate(const MatrixView<T>& m, const std::string& context = {}) {
  if (m.rows < 0 || m.cols < 0)
    detail::layout_error(context, "negative rows/cols");
  if (m.ld < std::max<index_t>(m.rows, 1))
    detail::layout_error(context,
                         "ld " + detail::nums(m.ld, std::max<index_t>(m.rows, 1)));
  if (m.len < footprint(m))
    detail::layout_error(
        context, "buffer length " + detail::nums(m.len, footprint(m)));
}

template <ViewElement T>
void validate(const Array3View<T>& a, const std::string& context = {}) {
  if (a.dim1 < 0 || a.dim2 < 0 || a.dim3 < 0)
    detail::layout_error(context, "negative dims");
  if (a.ld < std::max<index_t>(a.dim1, 1))
    detail::layout_error(context,
                         "ld " + detail::nums(a.ld, std::max<index_t>(a.dim1, 1)));
  if (a.ld2 < a.ld * a.dim2)
    detail::layout_error(context,
                         "ld2 " + detail::nums(a.ld2, a.ld * a.dim2));
  if (a.len < footprint(a))
    detail::layout_error(
        context, "buffer length " + detail::nums(a.len, footprint(a)));
}

template <typename V>
void validate_batch(const BatchView<V>& b, const std::string& context = {}) {
  if (b.batch_count < 0)
    detail::layout_error(context, "negative batch_count");
  if (b.batch_count == 0) return;  // legal no-op; nothing else to check
  validate(b.base, context);
  const index_t fp = footprint(b.base);
  if (b.batch_stride < fp)
    detail::layout_error(
        context, "batch_stride " + detail::nums(b.batch_stride, fp) +
                     ", batch_stride < entry footprint");
  const index_t needed = (b.batch_count - 1) * b.batch_stride + fp;
  if (b.base.len < needed)
    detail::layout_error(
        context, "buffer length " + detail::nums(b.base.len, needed) +
                     " for " + std::to_string(b.batch_count) + " entries");
}

}  // namespace kronbatch
