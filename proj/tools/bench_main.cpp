#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bench_support.hpp"

int main(int argc, char** argv) {
  std::string sizes = "1..16";
  std::string precision = "both";
  std::string dims = "both";
  std::string format = "table";
  std::string out_path;
  std::int64_t batch = 0;
  int reps = 10;
  double alpha = 1, beta = 0;
  std::uint64_t seed = 1;
  bool verify_only = false;

  CLI::App app{"batched Kronecker action benchmark"};
  app.add_option("--sizes", sizes,
                 "square sizes, \"lo..hi\" or comma list (default 1..16)");
  app.add_option("--precision", precision, "single|double|both")
      ->check(CLI::IsMember({"single", "double", "both"}));
  app.add_option("--dims", dims, "2d|3d|both")
      ->check(CLI::IsMember({"2d", "3d", "both"}));
  app.add_option("--batch", batch,
                 "batch entries (default 100000 single / 50000 double)")
      ->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "timed repetitions per combination")
      ->check(CLI::PositiveNumber);
  app.add_option("--alpha", alpha, "scale on the Kronecker action");
  app.add_option("--beta", beta, "scale on the Y prior");
  app.add_option("--seed", seed, "data generation seed");
  app.add_option("--format", format, "table|csv")
      ->check(CLI::IsMember({"table", "csv"}));
  app.add_option("--out", out_path, "write the report here not stdout");
  app.add_flag("--verify-only", verify_only,
               "verify each combination against the oracle, skip timing");
  CLI11_PARSE(app, argc, argv);

  try {
    kronbench::BenchConfig cfg;
    cfg.sizes = kronbench::parse_sizes(sizes);
    cfg.single = precision != "double";
    cfg.dbl = precision != "single";
    cfg.d2 = dims != "3d";
    cfg.d3 = dims != "2d";
    cfg.batch = batch;
    cfg.reps = reps;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.seed = seed;
    cfg.csv = format == "csv";
    cfg.out_path = out_path;
    cfg.verify_only = verify_only;

    if (out_path.empty()) {
      kronbench::run_bench(cfg, std::cout, std::cerr);
    } else {
      std::ofstream out(out_path);
      if (!out)
        throw std::runtime_error("cannot open output file " + out_path);
      kronbench::run_bench(cfg, out, std::cerr);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
