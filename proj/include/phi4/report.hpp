#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "phi4/dyson.hpp"
#include "phi4/inequalities.hpp"
#include "phi4/ldp.hpp"

namespace phi4 {

/// Append-only CSV with a fixed header written on first open.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);

private:
  std::ofstream out_;
  std::size_t ncols_;
};

/// Columns: identity,n,N,schedule_id,lhs,rhs,residual,err,z,verdict,seed,config_hash
CsvWriter make_residual_csv(const std::string& path);
void append_residual(CsvWriter& w, const ResidualReport& r, int n, int N,
                     const std::string& schedule_id, std::uint64_t seed,
                     std::uint64_t config_hash);

/// Columns: name,n,N,schedule_id,margin,err,z,verdict,seed,config_hash
CsvWriter make_verdict_csv(const std::string& path);
void append_verdict(CsvWriter& w, const InequalityVerdict& v, int n, int N,
                    const std::string& schedule_id, std::uint64_t seed,
                    std::uint64_t config_hash);

/// Columns: kind,x,value  (kind is "logmgf" or "transform")
void write_rate_table_csv(const std::string& path, const RateFunctionTable& t);

/// Single machine-readable record per run.
void write_manifest(const std::string& path, std::uint64_t config_hash, std::uint64_t seed,
                    double wall_seconds, const std::string& experiment, bool all_pass);

}  // namespace phi4
