#include "phi4/inequalities.hpp"

#include <cmath>
#include <stdexcept>

namespace phi4 {

namespace {

void require_nonneg(const std::vector<Field>& fs) {
  for (const auto& f : fs)
    for (double v : f.values())
      if (v < 0.0)
        throw std::invalid_argument("correlation inequality: test function has negative values");
}

InequalityVerdict finish(std::string name, const JackknifeResult& jk) {
  InequalityVerdict out;
  out.name = std::move(name);
  out.margin = jk.value;
  out.err = std::max(jk.std_err, 1e-15 * (1.0 + std::abs(jk.value)));
  out.z_score = out.margin / out.err;
  out.verdict = out.margin >= -3.0 * out.err;
  return out;
}

}  // namespace

std::vector<std::vector<std::pair<int, int>>> enumerate_pairings(int count) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (count % 2 != 0) throw std::invalid_argument("enumerate_pairings: need an even count");
  std::vector<int> items(count);
  for (int i = 0; i < count; ++i) items[i] = i;
  std::vector<std::pair<int, int>> current;
  std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& rest) {
    if (rest.empty()) {
      out.push_back(current);
      return;
    }
    int first = rest.front();
    for (std::size_t j = 1; j < rest.size(); ++j) {
      std::vector<int> next;
      for (std::size_t k = 1; k < rest.size(); ++k)
        if (k != j) next.push_back(rest[k]);
      current.emplace_back(first, rest[j]);
      rec(next);
      current.pop_back();
    }
  };
  rec(items);
  return out;
}

InequalityVerdict check_griffiths1(const std::vector<Field>& fs,
                                   const std::vector<Field>& samples) {
  require_nonneg(fs);
  if (fs.size() < 2 || fs.size() % 2 != 0)
    throw std::invalid_argument("check_griffiths1: need an even number >= 2 of functions");
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    double p = 1.0;
    for (const auto& f : fs) p *= smear(phi, f);
    prim.push_back({p});
  }
  auto rows = batch_means_joint(prim);
  auto jk = jackknife(rows, [](const std::vector<double>& r) { return r[0]; });
  return finish("griffiths1_p" + std::to_string(fs.size()), jk);
}

InequalityVerdict check_griffiths2(const std::vector<Field>& fs, std::size_t split_index,
                                   const std::vector<Field>& samples) {
  require_nonneg(fs);
  if (split_index == 0 || split_index >= fs.size())
    throw std::invalid_argument("check_griffiths2: split index out of range");
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    double a = 1.0, b = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      double s = smear(phi, fs[i]);
      (i < split_index ? a : b) *= s;
    }
    prim.push_back({a * b, a, b});
  }
  auto rows = batch_means_joint(prim);
  auto jk = jackknife(rows, [](const std::vector<double>& r) { return r[0] - r[1] * r[2]; });
  return finish("griffiths2", jk);
}

InequalityVerdict check_gaussian_inequality(const std::vector<Field>& fs,
                                            const std::vector<Field>& samples) {
  require_nonneg(fs);
  int cnt = static_cast<int>(fs.size());
  if (cnt < 4 || cnt % 2 != 0)
    throw std::invalid_argument("check_gaussian_inequality: need an even number >= 4");
  auto pairings = enumerate_pairings(cnt);
  // primitive layout: all pair products first, full product last
  std::vector<std::pair<int, int>> pair_list;
  for (int i = 0; i < cnt; ++i)
    for (int j = i + 1; j < cnt; ++j) pair_list.emplace_back(i, j);
  auto pair_slot = [cnt](int i, int j) {
    return i * (2 * cnt - i - 1) / 2 + (j - i - 1);
  };
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  std::vector<double> sm(cnt);
  for (const auto& phi : samples) {
    for (int i = 0; i < cnt; ++i) sm[i] = smear(phi, fs[i]);
    std::vector<double> row;
    row.reserve(pair_list.size() + 1);
    for (auto [i, j] : pair_list) row.push_back(sm[i] * sm[j]);
    double full = 1.0;
    for (int i = 0; i < cnt; ++i) full *= sm[i];
    row.push_back(full);
    prim.push_back(std::move(row));
  }
  std::size_t full_slot = pair_list.size();
  auto rows = batch_means_joint(prim);
  auto jk = jackknife(rows, [&](const std::vector<double>& r) {
    double s = 0.0;
    for (const auto& pairing : pairings) {
      double p = 1.0;
      for (auto [i, j] : pairing) p *= r[pair_slot(i, j)];
      s += p;
    }
    return s - r[full_slot];
  });
  return finish("gaussian_inequality_p" + std::to_string(cnt / 2), jk);
}

std::pair<double, double> ursell4(const std::vector<Field>& fs,
                                  const std::vector<Field>& samples) {
  require_nonneg(fs);
  if (fs.size() != 4) throw std::invalid_argument("ursell4: need exactly 4 functions");
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    double s0 = smear(phi, fs[0]), s1 = smear(phi, fs[1]);
    double s2 = smear(phi, fs[2]), s3 = smear(phi, fs[3]);
    prim.push_back({s0 * s1 * s2 * s3, s0 * s1, s2 * s3, s0 * s2, s1 * s3, s0 * s3, s1 * s2});
  }
  auto rows = batch_means_joint(prim);
  auto jk = jackknife(rows, [](const std::vector<double>& r) {
    return r[0] - r[1] * r[2] - r[3] * r[4] - r[5] * r[6];
  });
  return {jk.value, jk.std_err};
}

std::pair<InequalityVerdict, InequalityVerdict> skeleton_bound(
    const ActionContext& ctx, const std::vector<Field>& fs, const std::vector<Field>& samples) {
  require_nonneg(fs);
  if (fs.size() != 4) throw std::invalid_argument("skeleton_bound: need exactly 4 functions");
  const Grid& g = ctx.grid();
  std::size_t nsites = g.sites();
  // primitives: the 7 Ursell products, then for each of the 4 functions the
  // per-site products phi(f_i) * phi_n(x)
  std::vector<std::vector<double>> prim;
  prim.reserve(samples.size());
  for (const auto& phi : samples) {
    Field pn = ctx.kernel->mollify(phi);
    double s0 = smear(phi, fs[0]), s1 = smear(phi, fs[1]);
    double s2 = smear(phi, fs[2]), s3 = smear(phi, fs[3]);
    std::vector<double> row;
    row.reserve(7 + 4 * nsites);
    row.insert(row.end(),
               {s0 * s1 * s2 * s3, s0 * s1, s2 * s3, s0 * s2, s1 * s3, s0 * s3, s1 * s2});
    double sm[4] = {s0, s1, s2, s3};
    for (int i = 0; i < 4; ++i)
      for (std::size_t x = 0; x < nsites; ++x) row.push_back(sm[i] * pn[x]);
    prim.push_back(std::move(row));
  }
  auto rows = batch_means_joint(prim);
  auto minus_u4 = [](const std::vector<double>& r) {
    return -(r[0] - r[1] * r[2] - r[3] * r[4] - r[5] * r[6]);
  };
  auto jk_lower = jackknife(rows, minus_u4);
  double gn = ctx.g;
  double cv = g.cell_volume();
  auto jk_upper = jackknife(rows, [&](const std::vector<double>& r) {
    double integral = 0.0;
    for (std::size_t x = 0; x < nsites; ++x) {
      double p = 1.0;
      for (int i = 0; i < 4; ++i) p *= r[7 + i * nsites + x];
      integral += p;
    }
    integral *= cv;
    return 24.0 * gn * integral - minus_u4(r);
  });
  return {finish("skeleton_lower", jk_lower), finish("skeleton_upper", jk_upper)};
}

}  // namespace phi4
