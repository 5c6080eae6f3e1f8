#include "etalerep/norms.hpp"

#include <algorithm>
#include <cmath>

#include "etalerep/errors.hpp"

namespace etalerep {

namespace {

struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed * 2862933555777941757ULL + 3037000493ULL) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 16;
  }
  double unit() { return static_cast<double>(next() % 1000003) / 1000003.0; }
};

struct DoubleTriplets {
  int rows = 0, cols = 0;
  std::vector<int> i, j;
  std::vector<double> v;

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(rows, 0.0);
    for (size_t t = 0; t < v.size(); ++t) y[i[t]] += v[t] * x[j[t]];
  }
  void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(cols, 0.0);
    for (size_t t = 0; t < v.size(); ++t) y[j[t]] += v[t] * x[i[t]];
  }
};

DoubleTriplets to_triplets(const SparseMat& m) {
  DoubleTriplets t;
  t.rows = m.rows();
  t.cols = m.cols();
  for (const auto& [ij, q] : m.entries()) {
    t.i.push_back(ij.first);
    t.j.push_back(ij.second);
    t.v.push_back(to_double(q));
  }
  return t;
}

double norm2(const std::vector<double>& x) {
  double s = 0;
  for (double a : x) s += a * a;
  return std::sqrt(s);
}

// Rayleigh power iteration for a symmetric PSD operator given as x -> Ax.
template <typename Apply>
double top_eigenvalue(int n, Apply&& apply, std::uint64_t seed) {
  if (n == 0) return 0.0;
  double best = 0.0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<double> x(n);
    if (attempt == 0) {
      std::fill(x.begin(), x.end(), 1.0);
    } else {
      Lcg lcg(seed + 17);
      for (double& a : x) a = 0.25 + lcg.unit();
    }
    double nx = norm2(x);
    if (nx == 0) continue;
    for (double& a : x) a /= nx;

    std::vector<double> y;
    double lambda = 0.0, prev = -1.0;
    int stable = 0;
    for (int iter = 0; iter < 50000; ++iter) {
      apply(x, y);
      lambda = 0.0;
      for (int k = 0; k < n; ++k) lambda += x[k] * y[k];
      double ny = norm2(y);
      if (ny == 0) {
        lambda = 0.0;
        break;
      }
      for (int k = 0; k < n; ++k) x[k] = y[k] / ny;
      if (std::abs(lambda - prev) <= 1e-13 * std::max(1.0, std::abs(lambda))) {
        if (++stable >= 6) break;
      } else {
        stable = 0;
      }
      prev = lambda;
    }
    best = std::max(best, lambda);
  }
  return best;
}

}  // namespace

double operator_norm(const SparseMat& m) {
  if (m.is_zero()) return 0.0;
  DoubleTriplets t = to_triplets(m);
  std::vector<double> mid;
  auto gram = [&t, &mid](const std::vector<double>& x, std::vector<double>& y) {
    t.apply(x, mid);
    t.apply_transpose(mid, y);
  };
  double lambda = top_eigenvalue(t.cols, gram, 7);
  return std::sqrt(std::max(0.0, lambda));
}

double operator_norm(const DirectedGraph& g, const MarkovWeights& w, const KoopmanOp& op) {
  if (op.is_zero()) return 0.0;
  if (op.blocks.size() == 1) return operator_norm(op.blocks.begin()->second);

  // Dense Gram matrix of the output vectors; different output levels overlap
  // on nested cylinders with factor sqrt(mu(finer)/mu(coarser)).
  struct LevelData {
    int degree;
    CylinderBasis basis;
    const SparseMat* mat;
  };
  std::vector<LevelData> levels;
  for (const auto& [k, m] : op.blocks)
    levels.push_back({k, cylinder_basis(g, w, op.domain_depth + k), &m});

  const int n = levels.empty() ? 0 : levels.front().mat->cols();
  std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));

  auto overlap = [&](const Path& a, const Rational& mu_a, const Path& b,
                     const Rational& mu_b) -> double {
    if (a.length() == b.length()) return a == b ? 1.0 : 0.0;
    const Path& coarse = a.length() < b.length() ? a : b;
    const Path& fine = a.length() < b.length() ? b : a;
    if (!coarse.is_prefix_of(fine)) return 0.0;
    const Rational& mu_c = a.length() < b.length() ? mu_a : mu_b;
    const Rational& mu_f = a.length() < b.length() ? mu_b : mu_a;
    return std::sqrt(to_double(mu_f / mu_c));
  };

  for (size_t la = 0; la < levels.size(); ++la) {
    for (size_t lb = la; lb < levels.size(); ++lb) {
      std::vector<Rational> mu_a(levels[la].basis.paths.size()), mu_b(levels[lb].basis.paths.size());
      for (size_t i = 0; i < mu_a.size(); ++i)
        mu_a[i] = cylinder_measure(g, w, levels[la].basis.paths[i]);
      for (size_t i = 0; i < mu_b.size(); ++i)
        mu_b[i] = cylinder_measure(g, w, levels[lb].basis.paths[i]);
      for (const auto& [ij_a, va] : levels[la].mat->entries()) {
        for (const auto& [ij_b, vb] : levels[lb].mat->entries()) {
          double ov;
          if (la == lb) {
            ov = ij_a.first == ij_b.first ? 1.0 : 0.0;
          } else {
            ov = overlap(levels[la].basis.paths[ij_a.first], mu_a[ij_a.first],
                         levels[lb].basis.paths[ij_b.first], mu_b[ij_b.first]);
          }
          if (ov == 0.0) continue;
          double term = to_double(va) * to_double(vb) * ov;
          gram[ij_a.second][ij_b.second] += term;
          if (la != lb) gram[ij_b.second][ij_a.second] += term;
        }
      }
    }
  }

  auto apply = [&gram, n](const std::vector<double>& x, std::vector<double>& y) {
    y.assign(n, 0.0);
    for (int r = 0; r < n; ++r) {
      double s = 0;
      const auto& row = gram[r];
      for (int c = 0; c < n; ++c) s += row[c] * x[c];
      y[r] = s;
    }
  };
  return std::sqrt(std::max(0.0, top_eigenvalue(n, apply, 11)));
}

NormReport compare_norms(const DirectedGraph& g, const MarkovWeights& w, const AlgebraElement& f,
                         const std::vector<int>& schedule, std::uint64_t seed, int sample_count) {
  bool nonneg = true;
  bool homogeneous = true;
  std::optional<int> deg;
  for (const auto& [s, c] : f.terms()) {
    if (c < 0) nonneg = false;
    if (!deg)
      deg = s.degree();
    else if (*deg != s.degree())
      homogeneous = false;
  }
  if (!nonneg && !homogeneous)
    throw input_error("norm comparison needs f nonnegative or gauge-homogeneous");

  const bool full = w.validate(g) == WeightRegime::full_support;
  const int growth = std::max(1, f.max_path_length());

  NormReport report;
  report.seed = seed;

  std::vector<int> depths = schedule;
  std::sort(depths.begin(), depths.end());
  for (int L : depths) {
    if (L < f.max_path_length()) continue;
    NormRow row;
    row.depth = L;
    row.n_kappa = operator_norm(g, w, koopman_matrix(g, w, f, L));

    // Sampled base points: fibers over distinct prefixes; positive-measure
    // ones feed n_ind, all feed n_rho (they coincide with full support).
    std::vector<Path> candidates = paths_of_length(g, L + growth);
    std::vector<Path> samples;
    if (static_cast<int>(candidates.size()) <= sample_count) {
      samples = candidates;
    } else {
      Lcg lcg(seed + static_cast<std::uint64_t>(L) * 101);
      samples.push_back(candidates.front());
      samples.push_back(candidates.back());
      while (static_cast<int>(samples.size()) < sample_count)
        samples.push_back(candidates[lcg.next() % candidates.size()]);
    }
    for (const Path& u : samples) {
      double n = operator_norm(regular_matrix(g, f, u, L).mat);
      row.n_rho = std::max(row.n_rho, n);
      if (cylinder_measure(g, w, u) > 0) row.n_ind = std::max(row.n_ind, n);
    }
    report.rows.push_back(row);
  }

  if (report.rows.size() >= 2) {
    const NormRow& last = report.rows.back();
    const NormRow& prev = report.rows[report.rows.size() - 2];
    report.kappa_stabilized = std::abs(last.n_kappa - prev.n_kappa) < 1e-9;
    report.rho_stabilized = std::abs(last.n_rho - prev.n_rho) < 1e-9;
    report.ind_stabilized = std::abs(last.n_ind - prev.n_ind) < 1e-9;
  }

  if (!report.rows.empty()) {
    const NormRow& last = report.rows.back();
    if (report.kappa_stabilized && report.rho_stabilized && report.ind_stabilized) {
      report.chain_holds = last.n_ind <= last.n_kappa + 1e-9 && last.n_kappa <= last.n_rho + 1e-9;
      if (full) report.equality_holds = std::abs(last.n_kappa - last.n_rho) <= 1e-6;
      bool ok = *report.chain_holds && (!full || *report.equality_holds);
      report.status = ok ? NormStatus::pass : NormStatus::fail;
    } else {
      report.status = NormStatus::inconclusive;
      report.note = "compression norms did not stabilize within the schedule";
    }
  }
  return report;
}

}  // namespace etalerep
