#include "phi4/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace phi4 {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), ncols_(columns.size()) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 == columns.size() ? "\n" : ",");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_) throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 == cells.size() ? "\n" : ",");
  out_.flush();
}

std::string CsvWriter::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter make_residual_csv(const std::string& path) {
  return CsvWriter(path, {"identity", "n", "N", "schedule_id", "lhs", "rhs", "residual", "err",
                          "z", "verdict", "seed", "config_hash"});
}

void append_residual(CsvWriter& w, const ResidualReport& r, int n, int N,
                     const std::string& schedule_id, std::uint64_t seed,
                     std::uint64_t config_hash) {
  w.row({r.identity_name, std::to_string(n), std::to_string(N), schedule_id,
         CsvWriter::num(r.lhs.mean), CsvWriter::num(r.rhs.mean), CsvWriter::num(r.residual),
         CsvWriter::num(r.combined_err), CsvWriter::num(r.z_score),
         r.verdict ? "pass" : "fail", std::to_string(seed), std::to_string(config_hash)});
}

CsvWriter make_verdict_csv(const std::string& path) {
  return CsvWriter(path, {"name", "n", "N", "schedule_id", "margin", "err", "z", "verdict",
                          "seed", "config_hash"});
}

void append_verdict(CsvWriter& w, const InequalityVerdict& v, int n, int N,
                    const std::string& schedule_id, std::uint64_t seed,
                    std::uint64_t config_hash) {
  w.row({v.name, std::to_string(n), std::to_string(N), schedule_id, CsvWriter::num(v.margin),
         CsvWriter::num(v.err), CsvWriter::num(v.z_score), v.verdict ? "pass" : "fail",
         std::to_string(seed), std::to_string(config_hash)});
}

void write_rate_table_csv(const std::string& path, const RateFunctionTable& t) {
  CsvWriter w(path, {"kind", "x", "value"});
  for (std::size_t i = 0; i < t.theta_grid.size(); ++i)
    w.row({"logmgf", CsvWriter::num(t.theta_grid[i]), CsvWriter::num(t.logmgf[i])});
  for (std::size_t i = 0; i < t.y_grid.size(); ++i)
    w.row({"transform", CsvWriter::num(t.y_grid[i]), CsvWriter::num(t.transform[i])});
}

void write_manifest(const std::string& path, std::uint64_t config_hash, std::uint64_t seed,
                    double wall_seconds, const std::string& experiment, bool all_pass) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << "{\n"
      << "  \"config_hash\": " << config_hash << ",\n"
      << "  \"seed\": " << seed << ",\n"
      << "  \"experiment\": \"" << experiment << "\",\n"
      << "  \"wall_seconds\": " << wall_seconds << ",\n"
      << "  \"format_version\": 1,\n"
      << "  \"all_pass\": " << (all_pass ? "true" : "false") << "\n"
      << "}\n";
}

}  // namespace phi4
