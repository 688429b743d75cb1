#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <kronbatch/kronbatch.hpp>

namespace kronbench {

using kronbatch::index_t;

enum class Precision { Single, Double };
enum class Dims { D2, D3 };

inline constexpr index_t kDefaultBatchSingle = 100000;
inline constexpr index_t kDefaultBatchDouble = 50000;

const char* name(Precision p);
const char* name(Dims d);

inline index_t default_batch(Precision p) {
  return p == Precision::Single ? kDefaultBatchSingle : kDefaultBatchDouble;
}

struct BenchConfig {
  std::vector<int> sizes{1,  2,  3,  4,  5,  6,  7,  8,
                         9, 10, 11, 12, 13, 14, 15, 16};
  bool single = true;
  bool dbl = true;
  bool d2 = true;
  bool d3 = true;
  index_t batch = 0;  // 0 = per-precision default
  int reps = 10;
  double alpha = 1;
  double beta = 0;
  std::uint64_t seed = 1;
  bool csv = false;
  std::string out_path;  // empty = stdout
  bool verify_only = false;
};

struct BenchRecord {
  int size = 0;
  Precision precision = Precision::Single;
  Dims dims = Dims::D2;
  index_t batch = 0;
  double seconds = 0;  // median wall time of one kernel invocation
  double gflops = 0;
  bool verified = false;
};

struct AllocError : std::runtime_error {
  std::size_t bytes;
  AllocError(const std::string& what_, std::size_t bytes_)
      : std::runtime_error(what_), bytes(bytes_) {}
};

struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// flops per batch entry: 4*m^3 for 2-D, 6*m^4 for 3-D
std::int64_t flops_kron(int m, Dims dims);

// "1..16" or a comma list like "1,2,4,8"; values must be >= 1
std::vector<int> parse_sizes(const std::string& spec);

// Bytes the (size, dims, precision, batch) problem needs: component
// matrices, X and Y batches, and the kron3 workspace.
std::size_t problem_bytes(int m, Dims dims, Precision prec, index_t batch);

// Auto-scaling budget: KRONBATCH_MEM_BUDGET_MB if set, else 70% of
// MemAvailable from /proc/meminfo, else 2 GiB.
std::size_t mem_budget_bytes();

// Deterministic uniform in [-1, 1), shared by the generator and tests.
inline double next_uniform(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

// One benchmark problem: square size-m components with tight strides.
// c is empty for 2-D. y holds the beta priors.
template <kronbatch::Element T>
struct KronData {
  int m = 0;
  Dims dims = Dims::D2;
  index_t batch = 0;
  std::vector<T> a, b, c, x, y;

  index_t entry() const {
    const index_t mm = m;
    return dims == Dims::D2 ? mm * mm : mm * mm * mm;
  }

  kronbatch::MatrixView<const T> a_view() const { return mat(a); }
  kronbatch::MatrixView<const T> b_view() const { return mat(b); }
  kronbatch::MatrixView<const T> c_view() const { return mat(c); }

  kronbatch::BatchView<kronbatch::MatrixView<const T>> x2() const {
    return {kronbatch::MatrixView<const T>(x.data(), m, m, lead(),
                                           static_cast<index_t>(x.size())),
            batch, entry()};
  }
  kronbatch::BatchView<kronbatch::MatrixView<T>> y2() {
    return {kronbatch::MatrixView<T>(y.data(), m, m, lead(),
                                     static_cast<index_t>(y.size())),
            batch, entry()};
  }
  kronbatch::BatchView<kronbatch::Array3View<const T>> x3() const {
    return {kronbatch::Array3View<const T>(x.data(), m, m, m, lead(),
                                           lead() * m,
                                           static_cast<index_t>(x.size())),
            batch, entry()};
  }
  kronbatch::BatchView<kronbatch::Array3View<T>> y3() {
    return {kronbatch::Array3View<T>(y.data(), m, m, m, lead(), lead() * m,
                                     static_cast<index_t>(y.size())),
            batch, entry()};
  }

 private:
  index_t lead() const { return std::max<index_t>(m, 1); }
  kronbatch::MatrixView<const T> mat(const std::vector<T>& v) const {
    return {v.data(), m, m, lead(), static_cast<index_t>(v.size())};
  }
};

namespace detail {
template <kronbatch::Element T>
std::vector<T> alloc_vec(std::size_t n, const char* what) {
  try {
    return std::vector<T>(n);
  } catch (const std::bad_alloc&) {
    const std::size_t bytes = n * sizeof(T);
    throw AllocError("allocation of " + std::to_string(bytes) + " bytes for " +
                         what + " failed",
                     bytes);
  }
}
}  // namespace detail

// Same (seed, m, dims, batch) always produces bit-identical buffers.
template <kronbatch::Element T>
KronData<T> generate_batch(std::uint64_t seed, int m, Dims dims,
                           index_t batch) {
  if (m < 0 || batch < 0)
    throw std::invalid_argument("generate_batch: negative size or batch");
  KronData<T> d;
  d.m = m;
  d.dims = dims;
  d.batch = batch;
  const std::size_t mm = static_cast<std::size_t>(m) * m;
  const std::size_t be = static_cast<std::size_t>(d.entry()) * batch;
  d.a = detail::alloc_vec<T>(mm, "A");
  d.b = detail::alloc_vec<T>(mm, "B");
  if (dims == Dims::D3) d.c = detail::alloc_vec<T>(mm, "C");
  d.x = detail::alloc_vec<T>(be, "X batch");
  d.y = detail::alloc_vec<T>(be, "Y batch");

  std::mt19937_64 g(seed + static_cast<std::uint64_t>(m) * 1000003u +
                    (dims == Dims::D3 ? 0x9e3779b97f4a7c15ull : 0));
  for (auto* v : {&d.a, &d.b, &d.c, &d.x, &d.y})
    for (T& e : *v) e = static_cast<T>(next_uniform(g));
  return d;
}

// Runs every selected (size, precision, dims) combination: generate, warm up
// once (also the verification run), time cfg.reps invocations, median, and
// report. Auto-scales batch by halving with a notice on `log` when the
// problem exceeds the memory budget or allocation fails. Verification
// failure throws VerifyError with a diff report. In verify_only mode, prints
// one verification line per combination to `out` and skips timing and report
// emission.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg, std::ostream& out,
                                   std::ostream& log);

// header "size,precision,dims,batch,seconds,gflops,verified"; floats %.6g
void emit_csv(const std::vector<BenchRecord>& records, std::ostream& out);

// one row per size, one GFlop/s column per (precision, dims)
void emit_table(const BenchConfig& cfg, const std::vector<BenchRecord>& records,
                std::ostream& out);

}  // namespace kronbench
