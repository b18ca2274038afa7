// Command-line runner: parses a JSON run description and executes one of the
// experiments over the configured cutoff list. Exit codes: 0 all verdicts
// pass, 1 verdict failure, 2 invalid config, 3 runtime error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "CLI11.hpp"
#include "phi4/acceptance.hpp"
#include "phi4/config.hpp"
#include "phi4/dyson.hpp"
#include "phi4/inequalities.hpp"
#include "phi4/ldp.hpp"
#include "phi4/report.hpp"
#include "phi4/sampler.hpp"

namespace {

using namespace phi4;

struct Cell {
  std::unique_ptr<MollifierKernel> kern;
  ActionContext ctx;
};

Cell make_cell(const Grid& grid, const Spectrum& spec, const RunConfig& cfg, int n) {
  Cell cell;
  cell.kern = std::make_unique<MollifierKernel>(grid, spec, n);
  cell.ctx = ActionContext(spec, *cell.kern, cfg.schedule);
  return cell;
}

std::string schedule_id(const RunConfig& cfg, int n) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "g%.6g_m%.6g_a%.6g", cfg.schedule.g_at(n),
                cfg.schedule.m_at(n), cfg.schedule.a_at(n));
  return buf;
}

std::vector<Field> run_chain(const ActionContext& ctx, const RunConfig& cfg, int stream) {
  ChainConfig ch;
  ch.sweeps = cfg.sweeps;
  ch.burn_in = cfg.burn_in;
  ch.thinning = cfg.thinning;
  ch.proposal_width = cfg.proposal_width;
  ch.seed = cfg.seed;
  ch.stream_id = static_cast<std::uint64_t>(stream);
  MetropolisChain chain(ctx, ch);
  std::vector<Field> samples;
  chain.run([&](const Field& phi) { samples.push_back(phi); });
  return samples;
}

std::vector<Field> shape_fields(const Grid& grid, const RunConfig& cfg) {
  std::vector<Field> fs;
  for (const auto& s : cfg.shapes) fs.push_back(build_shape(grid, s));
  if (fs.empty()) {
    // default probes: two offset bumps in the unit cell
    std::vector<double> c1(grid.dim(), 0.5 * grid.length());
    std::vector<double> c2(grid.dim(), 0.3 * grid.length());
    fs.push_back(gaussian_bump(grid, c1, 0.15 * grid.length(), 1.0));
    fs.push_back(gaussian_bump(grid, c2, 0.2 * grid.length(), 1.0));
  }
  return fs;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

int exp_sample(const RunConfig& cfg, const Grid& grid, const Spectrum& spec) {
  CsvWriter w(out_path(cfg, "moments.csv"),
              {"observable", "n", "N", "schedule_id", "mean", "err", "ess", "seed",
               "config_hash"});
  auto fs = shape_fields(grid, cfg);
  std::uint64_t hash = config_hash(cfg);
  int stream = 0;
  for (int n : cfg.n_list) {
    Cell cell = make_cell(grid, spec, cfg, n);
    auto samples = run_chain(cell.ctx, cfg, stream++);
    for (std::size_t si = 0; si < fs.size(); ++si) {
      std::vector<double> second;
      second.reserve(samples.size());
      for (const auto& phi : samples) {
        double v = smear(phi, fs[si]);
        second.push_back(v * v);
      }
      auto est = batch_mean_estimate(second);
      std::string name = cfg.shapes.empty() ? ("shape" + std::to_string(si))
                                            : cfg.shapes[si].name;
      w.row({"second-moment:" + name, std::to_string(n), std::to_string(cfg.N),
             schedule_id(cfg, n), CsvWriter::num(est.mean), CsvWriter::num(est.std_err),
             CsvWriter::num(est.ess), std::to_string(cfg.seed), std::to_string(hash)});
    }
  }
  return 0;
}

int exp_verify_dyson(const RunConfig& cfg, const Grid& grid, const Spectrum& spec) {
  CsvWriter w = make_residual_csv(out_path(cfg, "residuals.csv"));
  auto fs = shape_fields(grid, cfg);
  const Field& f = fs[0];
  const Field& h = fs.size() > 1 ? fs[1] : fs[0];
  std::uint64_t hash = config_hash(cfg);
  bool all_pass = true;
  int stream = 0;
  for (int n : cfg.n_list) {
    Cell cell = make_cell(grid, spec, cfg, n);
    auto samples = run_chain(cell.ctx, cfg, stream++);
    FreeSampler free_sampler(spec, cfg.seed, 0xF4EEull + n);
    std::vector<Field> free_samples;
    free_samples.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) free_samples.push_back(free_sampler.sample());
    std::vector<ResidualReport> reps = {
        residual_mc8(cell.ctx, f, samples),
        residual_mc8b(cell.ctx, f, h, samples),
        residual_mc9(cell.ctx, f, 4, samples),
        residual_mc10(cell.ctx, f, samples),
        residual_moment4(cell.ctx, f, samples),
        residual_if7(cell.ctx, f, h, samples),
        residual_second_dyson(cell.ctx, f, samples),
        generating_functional_check(cell.ctx, f, 0.25, samples, free_samples)};
    for (const auto& rep : reps) {
      append_residual(w, rep, n, cfg.N, schedule_id(cfg, n), cfg.seed, hash);
      all_pass = all_pass && rep.verdict;
    }
  }
  return all_pass ? 0 : 1;
}

int exp_verify_inequalities(const RunConfig& cfg, const Grid& grid, const Spectrum& spec) {
  CsvWriter w = make_verdict_csv(out_path(cfg, "verdicts.csv"));
  auto fs = shape_fields(grid, cfg);
  while (fs.size() < 4) {
    std::vector<double> c(grid.dim(), (0.2 + 0.2 * fs.size()) * grid.length());
    fs.push_back(gaussian_bump(grid, c, 0.18 * grid.length(), 1.0));
  }
  std::vector<Field> f2(fs.begin(), fs.begin() + 2);
  std::uint64_t hash = config_hash(cfg);
  bool all_pass = true;
  int stream = 0;
  for (int n : cfg.n_list) {
    Cell cell = make_cell(grid, spec, cfg, n);
    auto samples = run_chain(cell.ctx, cfg, stream++);
    auto skel = skeleton_bound(cell.ctx, fs, samples);
    std::vector<InequalityVerdict> vs = {check_griffiths1(f2, samples),
                                         check_griffiths1(fs, samples),
                                         check_griffiths2(fs, 2, samples),
                                         check_gaussian_inequality(fs, samples),
                                         skel.first,
                                         skel.second};
    for (const auto& v : vs) {
      append_verdict(w, v, n, cfg.N, schedule_id(cfg, n), cfg.seed, hash);
      all_pass = all_pass && v.verdict;
    }
  }
  return all_pass ? 0 : 1;
}

int exp_scan_renorm(const RunConfig& cfg, const Grid& grid, const Spectrum& spec) {
  CsvWriter w(out_path(cfg, "renorm_scan.csv"),
              {"n", "N", "schedule_id", "c_n", "grad_var", "d_n", "case", "lambda", "alpha",
               "beta", "scale", "config_hash"});
  std::uint64_t hash = config_hash(cfg);
  for (int n : cfg.n_list) {
    Cell cell = make_cell(grid, spec, cfg, n);
    auto cls = classify_case(cfg.schedule, n, cell.ctx.wick);
    w.row({std::to_string(n), std::to_string(cfg.N), schedule_id(cfg, n),
           CsvWriter::num(cell.ctx.wick.c_n), CsvWriter::num(cell.ctx.wick.grad_var),
           CsvWriter::num(cell.ctx.wick.d_n), std::to_string(cls.case_tag),
           CsvWriter::num(cls.lambda_n), CsvWriter::num(cls.alpha_n),
           CsvWriter::num(cls.beta_n), CsvWriter::num(cls.scale), std::to_string(hash)});
  }
  return 0;
}

int exp_rate_function(const RunConfig& cfg, const Grid& grid, const Spectrum& spec) {
  auto fs = shape_fields(grid, cfg);
  bool all_pass = true;
  int stream = 0;
  for (int n : cfg.n_list) {
    Cell cell = make_cell(grid, spec, cfg, n);
    auto samples = run_chain(cell.ctx, cfg, stream++);
    std::vector<double> ys;
    ys.reserve(samples.size());
    for (const auto& phi : samples) ys.push_back(smear(phi, fs[0]));
    std::vector<double> theta_grid;
    for (double th = -3.0; th <= 3.0 + 1e-12; th += 0.05) theta_grid.push_back(th);
    auto table = empirical_logmgf(ys, theta_grid);
    double lo = *std::min_element(ys.begin(), ys.end());
    double hi = *std::max_element(ys.begin(), ys.end());
    std::vector<double> y_grid;
    for (int i = 0; i <= 60; ++i) y_grid.push_back(lo + (hi - lo) * i / 60.0);
    legendre_fenchel(table, y_grid);
    write_rate_table_csv(out_path(cfg, "rate_table_n" + std::to_string(n) + ".csv"), table);
    all_pass = all_pass && is_convex(table.theta_grid, table.logmgf) &&
               is_convex(table.y_grid, table.transform);
  }
  return all_pass ? 0 : 1;
}

int exp_concentration(const RunConfig& cfg, const Grid& grid, const Spectrum& spec) {
  CsvWriter w(out_path(cfg, "concentration.csv"),
              {"n", "N", "schedule_id", "case", "scale", "epsilon", "min_classical",
               "fraction_in_sigma", "log_complement_per_scale", "seed", "config_hash"});
  std::uint64_t hash = config_hash(cfg);
  int stream = 0;
  for (int n : cfg.n_list) {
    Cell cell = make_cell(grid, spec, cfg, n);
    auto cls = classify_case(cfg.schedule, n, cell.ctx.wick);
    auto samples = run_chain(cell.ctx, cfg, stream++);
    double min_cl = classical_constant_minimum(cls.lambda_n, cls.alpha_n, cls.beta_n,
                                               grid.volume());
    auto rep = concentration_probe(cell.ctx, cls, 0.5 * std::fabs(min_cl), samples);
    w.row({std::to_string(n), std::to_string(cfg.N), schedule_id(cfg, n),
           std::to_string(cls.case_tag), CsvWriter::num(rep.scale), CsvWriter::num(rep.epsilon),
           CsvWriter::num(rep.min_classical), CsvWriter::num(rep.fraction_in_sigma),
           CsvWriter::num(rep.log_complement_per_scale), std::to_string(cfg.seed),
           std::to_string(hash)});
  }
  return 0;
}

int exp_acceptance(const RunConfig& cfg) {
  auto results = run_acceptance_suite();
  bool all_pass = true;
  for (const auto& res : results) {
    std::printf("criterion %2d [%s]: %s  (%s) [%.1fs]\n", res.id, res.name.c_str(),
                res.pass ? "PASS" : "FAIL", res.detail.c_str(), res.seconds);
    all_pass = all_pass && res.pass;
  }
  (void)cfg;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"momentum-cutoff quartic lattice field laboratory"};
  std::string config_path;
  app.add_option("config", config_path, "JSON run description")->required();
  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config failure: %s\n", e.what());
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  int code = 3;
  try {
    Grid grid(cfg.d, cfg.N, cfg.L);
    Spectrum spec(grid);
    if (cfg.n_list.empty()) cfg.n_list = {2};
    if (cfg.experiment == "sample")
      code = exp_sample(cfg, grid, spec);
    else if (cfg.experiment == "verify-dyson")
      code = exp_verify_dyson(cfg, grid, spec);
    else if (cfg.experiment == "verify-inequalities")
      code = exp_verify_inequalities(cfg, grid, spec);
    else if (cfg.experiment == "scan-renorm")
      code = exp_scan_renorm(cfg, grid, spec);
    else if (cfg.experiment == "rate-function")
      code = exp_rate_function(cfg, grid, spec);
    else if (cfg.experiment == "concentration")
      code = exp_concentration(cfg, grid, spec);
    else if (cfg.experiment == "acceptance-suite")
      code = exp_acceptance(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 3;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_manifest(out_path(cfg, "manifest.json"), config_hash(cfg), cfg.seed, wall,
                   cfg.experiment, code == 0);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 3;
  }
  return code;
}
