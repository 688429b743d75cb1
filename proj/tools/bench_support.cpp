#include "bench_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace kronbench {

using kronbatch::DenseArray3;
using kronbatch::DenseMatrix;
using kronbatch::kron2;
using kronbatch::kron3;
using kronbatch::kron3_workspace_size;
using kronbatch::ref_kron2_apply;
using kronbatch::ref_kron3_apply;

const char* name(Precision p) {
  return p == Precision::Single ? "single" : "double";
}

const char* name(Dims d) { return d == Dims::D2 ? "2d" : "3d"; }

std::int64_t flops_kron(int m, Dims dims) {
  if (m < 1) throw std::invalid_argument("flops_kron: size must be >= 1");
  const std::int64_t mm = m;
  return dims == Dims::D2 ? 4 * mm * mm * mm : 6 * mm * mm * mm * mm;
}

std::vector<int> parse_sizes(const std::string& spec) {
  auto fail = [&] {
    throw std::invalid_argument("bad --sizes value '" + spec +
                                "': expected \"lo..hi\" or a comma list");
  };
  auto to_int = [&](const std::string& tok) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (...) {
      fail();
    }
    if (pos != tok.size() || v < 1) fail();
    return v;
  };

  std::vector<int> sizes;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto dots = tok.find("..");
    if (dots != std::string::npos) {
      const int lo = to_int(tok.substr(0, dots));
      const int hi = to_int(tok.substr(dots + 2));
      if (lo > hi) fail();
      for (int v = lo; v <= hi; ++v) sizes.push_back(v);
    } else {
      sizes.push_back(to_int(tok));
    }
  }
  if (sizes.empty()) fail();
  return sizes;
}

std::size_t problem_bytes(int m, Dims dims, Precision prec, index_t batch) {
  const std::size_t esize = prec == Precision::Single ? 4 : 8;
  const std::size_t mm = static_cast<std::size_t>(m) * m;
  const std::size_t entry = dims == Dims::D2 ? mm : mm * m;
  const std::size_t mats = (dims == Dims::D2 ? 2 : 3) * mm;
  // X + Y, plus the kron3 workspace (same footprint as X)
  const std::size_t per_entry = entry * (dims == Dims::D2 ? 2 : 3);
  return esize * (mats + per_entry * static_cast<std::size_t>(batch));
}

std::size_t mem_budget_bytes() {
  if (const char* env = std::getenv("KRONBATCH_MEM_BUDGET_MB")) {
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && mb > 0) return mb * 1024ull * 1024ull;
  }
  std::ifstream meminfo("/proc/meminfo");
  std::string key;
  unsigned long long kb = 0;
  while (meminfo >> key >> kb) {
    if (key == "MemAvailable:") return kb * 1024ull * 7 / 10;
    meminfo.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
  }
  return 2ull * 1024 * 1024 * 1024;
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string label(int size, Precision prec, Dims dims, index_t batch) {
  return "size " + std::to_string(size) + " " + name(prec) + " " +
         name(dims) + " batch " + std::to_string(batch);
}

// min(batch, 16) distinct entry indices
std::vector<index_t> sample_entries(std::uint64_t seed, index_t batch) {
  const index_t want = std::min<index_t>(batch, 16);
  if (want == batch) {
    std::vector<index_t> all(static_cast<std::size_t>(batch));
    for (index_t i = 0; i < batch; ++i) all[i] = i;
    return all;
  }
  std::mt19937_64 g(seed ^ 0xc2b2ae3d27d4eb4full);
  std::set<index_t> picked;
  while (static_cast<index_t>(picked.size()) < want)
    picked.insert(static_cast<index_t>(g() % batch));
  return {picked.begin(), picked.end()};
}

template <kronbatch::Element T>
DenseMatrix dense_mat(const std::vector<T>& v, int m) {
  DenseMatrix d(m, m);
  for (std::size_t i = 0; i < d.storage.size(); ++i)
    d.storage[i] = static_cast<double>(v[i]);
  return d;
}

// Oracle check of one entry; returns a diff report on failure, else empty.
template <kronbatch::Element T>
std::string check_entry(const KronData<T>& data, index_t p,
                        const std::vector<double>& prior, double alpha,
                        double beta, double* max_rel) {
  const int m = data.m;
  const index_t entry = data.entry();
  const T* got = data.y.data() + p * entry;

  std::vector<double> want;
  if (data.dims == Dims::D2) {
    DenseMatrix xd(m, m);
    for (index_t i = 0; i < entry; ++i)
      xd.storage[i] = static_cast<double>(data.x[p * entry + i]);
    want = ref_kron2_apply(dense_mat(data.a, m).view(),
                           dense_mat(data.b, m).view(), xd.view())
               .storage;
  } else {
    DenseArray3 xd(m, m, m);
    for (index_t i = 0; i < entry; ++i)
      xd.storage[i] = static_cast<double>(data.x[p * entry + i]);
    want = ref_kron3_apply(dense_mat(data.a, m).view(),
                           dense_mat(data.b, m).view(),
                           dense_mat(data.c, m).view(), xd.view())
               .storage;
  }
  for (index_t i = 0; i < entry; ++i)
    want[i] = alpha * want[i] + (beta == 0 ? 0.0 : beta * prior[i]);

  double scale = 1, max_abs = 0;
  for (index_t i = 0; i < entry; ++i)
    scale = std::max(scale, std::abs(want[i]));
  index_t first_fail = -1;
  const double tol = std::same_as<T, float> ? 1e-5 : 1e-12;
  for (index_t i = 0; i < entry; ++i) {
    const double abs_err = std::abs(static_cast<double>(got[i]) - want[i]);
    max_abs = std::max(max_abs, abs_err);
    if (abs_err > tol * scale && first_fail < 0) first_fail = i;
  }
  *max_rel = std::max(*max_rel, max_abs / scale);
  if (first_fail < 0) return {};
  return "entry " + std::to_string(p) + ": max abs err " + fmt6(max_abs) +
         ", max rel err " + fmt6(max_abs / scale) + ", first failing index " +
         std::to_string(first_fail);
}

template <kronbatch::Element T>
BenchRecord run_one(const BenchConfig& cfg, int size, Dims dims,
                    index_t batch, std::ostream& out) {
  const Precision prec =
      std::same_as<T, float> ? Precision::Single : Precision::Double;
  KronData<T> data = generate_batch<T>(cfg.seed, size, dims, batch);

  std::vector<T> work;
  kronbatch::KronProblem2D<T> p2;
  kronbatch::KronProblem3D<T> p3;
  if (dims == Dims::D2) {
    p2.m_a = p2.n_a = p2.m_b = p2.n_b = size;
    p2.alpha = static_cast<T>(cfg.alpha);
    p2.beta = static_cast<T>(cfg.beta);
  } else {
    p3.m_a = p3.n_a = p3.m_b = p3.n_b = p3.m_c = p3.n_c = size;
    p3.alpha = static_cast<T>(cfg.alpha);
    p3.beta = static_cast<T>(cfg.beta);
    work = detail::alloc_vec<T>(
        static_cast<std::size_t>(kron3_workspace_size(p3, batch)),
        "kron3 workspace");
  }
  auto invoke = [&] {
    if (dims == Dims::D2) {
      kron2<T>(p2, data.a_view(), data.b_view(), data.x2(), data.y2());
    } else {
      kron3<T>(p3, data.a_view(), data.b_view(), data.c_view(), data.x3(),
               data.y3(),
               kronbatch::Workspace<T>(work.data(),
                                       static_cast<index_t>(work.size())));
    }
  };

  // save the sampled entries' priors, then warm up; the warm-up run is the
  // one verified against the oracle
  const std::vector<index_t> sample = sample_entries(cfg.seed, batch);
  const index_t entry = data.entry();
  std::vector<std::vector<double>> priors;
  priors.reserve(sample.size());
  for (index_t p : sample) {
    std::vector<double> prior(static_cast<std::size_t>(entry));
    for (index_t i = 0; i < entry; ++i)
      prior[i] = static_cast<double>(data.y[p * entry + i]);
    priors.push_back(std::move(prior));
  }

  invoke();

  double max_rel = 0;
  for (std::size_t s = 0; s < sample.size(); ++s) {
    const std::string diff = check_entry(data, sample[s], priors[s],
                                         cfg.alpha, cfg.beta, &max_rel);
    if (!diff.empty())
      throw VerifyError("verification failed: " +
                        label(size, prec, dims, batch) + " " + diff);
  }

  BenchRecord rec;
  rec.size = size;
  rec.precision = prec;
  rec.dims = dims;
  rec.batch = batch;
  rec.verified = true;

  if (cfg.verify_only) {
    out << label(size, prec, dims, batch) << ": verified, "
        << sample.size() << " entries, max rel err " << fmt6(max_rel) << "\n";
    return rec;
  }

  std::vector<double> times(static_cast<std::size_t>(cfg.reps));
  for (double& t : times) {
    const auto t0 = std::chrono::steady_clock::now();
    invoke();
    t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }
  rec.seconds = median(times);
  rec.gflops = static_cast<double>(flops_kron(size, dims)) *
               static_cast<double>(batch) / (rec.seconds * 1e9);
  return rec;
}

template <kronbatch::Element T>
BenchRecord run_scaled(const BenchConfig& cfg, int size, Dims dims,
                       std::ostream& out, std::ostream& log,
                       std::size_t budget) {
  const Precision prec =
      std::same_as<T, float> ? Precision::Single : Precision::Double;
  const index_t requested = cfg.batch > 0 ? cfg.batch : default_batch(prec);
  index_t batch = requested;
  auto notice = [&](index_t next, const std::string& why) {
    log << "notice: size " << size << " " << name(prec) << " " << name(dims)
        << ": batch " << batch << " -> " << next << " (" << why << ")\n";
  };

  while (batch > 1 && problem_bytes(size, dims, prec, batch) > budget) {
    const index_t next = batch / 2;
    notice(next, "memory budget " + std::to_string(budget >> 20) + " MiB");
    batch = next;
  }
  for (;;) {
    try {
      return run_one<T>(cfg, size, dims, batch, out);
    } catch (const AllocError& e) {
      if (batch <= 1) throw;
      const index_t next = batch / 2;
      notice(next, std::string(e.what()));
      batch = next;
    }
  }
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& cfg, std::ostream& out,
                                   std::ostream& log) {
  if (cfg.sizes.empty())
    throw std::invalid_argument("run_bench: no sizes selected");
  for (int s : cfg.sizes)
    if (s < 1) throw std::invalid_argument("run_bench: sizes must be >= 1");
  if (cfg.reps < 1)
    throw std::invalid_argument("run_bench: repetitions must be >= 1");
  if (cfg.batch < 0)
    throw std::invalid_argument("run_bench: batch must be >= 1");
  if (!cfg.single && !cfg.dbl)
    throw std::invalid_argument("run_bench: no precision selected");
  if (!cfg.d2 && !cfg.d3)
    throw std::invalid_argument("run_bench: no dims selected");

  std::vector<int> sizes = cfg.sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  const std::size_t budget = mem_budget_bytes();
  std::vector<BenchRecord> records;
  for (int size : sizes)
    for (Precision prec : {Precision::Single, Precision::Double}) {
      if (prec == Precision::Single && !cfg.single) continue;
      if (prec == Precision::Double && !cfg.dbl) continue;
      for (Dims dims : {Dims::D2, Dims::D3}) {
        if (dims == Dims::D2 && !cfg.d2) continue;
        if (dims == Dims::D3 && !cfg.d3) continue;
        records.push_back(prec == Precision::Single
                              ? run_scaled<float>(cfg, size, dims, out, log,
                                                  budget)
                              : run_scaled<double>(cfg, size, dims, out, log,
                                                   budget));
      }
    }

  if (!cfg.verify_only) {
    if (cfg.csv)
      emit_csv(records, out);
    else
      emit_table(cfg, records, out);
  }
  return records;
}

void emit_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "size,precision,dims,batch,seconds,gflops,verified\n";
  for (const BenchRecord& r : records)
    out << r.size << ',' << name(r.precision) << ',' << name(r.dims) << ','
        << r.batch << ',' << fmt6(r.seconds) << ',' << fmt6(r.gflops) << ','
        << (r.verified ? "true" : "false") << '\n';
}

void emit_table(const BenchConfig& cfg, const std::vector<BenchRecord>& records,
                std::ostream& out) {
  struct Column {
    Precision prec;
    Dims dims;
    std::string header;
  };
  std::vector<Column> cols;
  for (Precision prec : {Precision::Single, Precision::Double})
    for (Dims dims : {Dims::D2, Dims::D3}) {
      if (prec == Precision::Single && !cfg.single) continue;
      if (prec == Precision::Double && !cfg.dbl) continue;
      if (dims == Dims::D2 && !cfg.d2) continue;
      if (dims == Dims::D3 && !cfg.d3) continue;
      cols.push_back(
          {prec, dims, std::string(name(prec)) + "-" + name(dims)});
    }

  out << "batched Kronecker action, GFlop/s (median of " << cfg.reps
      << " reps, alpha=" << fmt6(cfg.alpha) << " beta=" << fmt6(cfg.beta)
      << " seed=" << cfg.seed << ")\n\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%5s", "size");
  out << buf;
  for (const Column& c : cols) {
    std::snprintf(buf, sizeof buf, "  %10s", c.header.c_str());
    out << buf;
  }
  out << "\n";

  std::vector<int> sizes;
  for (const BenchRecord& r : records)
    if (sizes.empty() || sizes.back() != r.size) sizes.push_back(r.size);

  std::vector<std::string> notes;
  for (int size : sizes) {
    std::snprintf(buf, sizeof buf, "%5d", size);
    out << buf;
    for (const Column& c : cols) {
      const BenchRecord* rec = nullptr;
      for (const BenchRecord& r : records)
        if (r.size == size && r.precision == c.prec && r.dims == c.dims)
          rec = &r;
      if (!rec) {
        std::snprintf(buf, sizeof buf, "  %10s", "-");
        out << buf;
        continue;
      }
      std::snprintf(buf, sizeof buf, "  %10.3f", rec->gflops);
      out << buf;
      const index_t def =
          cfg.batch > 0 ? cfg.batch : default_batch(rec->precision);
      if (rec->batch != def)
        notes.push_back("size " + std::to_string(size) + " " + c.header +
                        " ran with batch " + std::to_string(rec->batch));
    }
    out << "\n";
  }

  out << "\nbatch: " << (cfg.batch > 0
                             ? std::to_string(cfg.batch)
                             : std::to_string(kDefaultBatchSingle) +
                                   " single / " +
                                   std::to_string(kDefaultBatchDouble) +
                                   " double")
      << "\n";
  for (const std::string& n : notes) out << "note: " << n << "\n";
}

}  // namespace kronbench
