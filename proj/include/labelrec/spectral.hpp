#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelrec/graph.hpp"

namespace labelrec {

// Dense real symmetric matrix, full row-major storage. set() writes both
// mirror entries, so entries(i,j) == entries(j,i) holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(std::size_t(n) * n, 0.0) {
    if (n < 1) throw std::invalid_argument("SymMatrix: need n >= 1");
  }

  int size() const { return n_; }
  double operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }
  void set(int i, int j, double v) {
    a_[std::size_t(i) * n_ + j] = v;
    a_[std::size_t(j) * n_ + i] = v;
  }
  const std::vector<double>& data() const { return a_; }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return std::sqrt(s);
  }
  double inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
      double row = 0.0;
      for (int j = 0; j < n_; ++j) row += std::fabs((*this)(i, j));
      best = std::max(best, row);
    }
    return best;
  }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Full spectrum: values ascending, vectors[k] is the unit eigenvector paired
// with values[k].
struct EigenSystem {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

inline SymMatrix laplacian(const Graph& g) {
  SymMatrix m(g.n);
  for (int v = 0; v < g.n; ++v) m.set(v, v, double(degree(g, v)));
  for (auto [i, j] : g.edges) m.set(i, j, -1.0);
  return m;
}

// D - diag(y) A diag(y): diagonal holds degrees, edge entries are -y_i y_j.
// The labeling is a null vector of the result.
inline SymMatrix signed_laplacian(const Graph& g, const std::vector<int>& y) {
  if (int(y.size()) != g.n)
    throw std::invalid_argument("signed_laplacian: labeling size mismatch");
  for (int v : y)
    if (v != 1 && v != -1)
      throw std::invalid_argument("signed_laplacian: labels must be +1 or -1");
  SymMatrix m(g.n);
  for (int v = 0; v < g.n; ++v) m.set(v, v, double(degree(g, v)));
  for (auto [i, j] : g.edges) m.set(i, j, -double(y[i] * y[j]));
  return m;
}

// Cyclic Jacobi rotations. Sweeps until the largest off-diagonal magnitude
// drops below 1e-11 * ||M||_F, capped at 100 sweeps.
inline EigenSystem symmetric_eigen(const SymMatrix& m) {
  const int n = m.size();
  std::vector<double> a(m.data());
  // vt row k accumulates eigenvector k.
  std::vector<double> vt(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vt[std::size_t(i) * n + i] = 1.0;

  const double tol = 1e-11 * m.frobenius_norm();
  auto max_offdiag = [&]() {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        off = std::max(off, std::fabs(a[std::size_t(p) * n + q]));
    return off;
  };

  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    if (max_offdiag() <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[std::size_t(p) * n + q];
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = a[std::size_t(p) * n + p];
        const double aqq = a[std::size_t(q) * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[std::size_t(p) * n + p] = app - t * apq;
        a[std::size_t(q) * n + q] = aqq + t * apq;
        a[std::size_t(p) * n + q] = 0.0;
        a[std::size_t(q) * n + p] = 0.0;
        double* rowp = &a[std::size_t(p) * n];
        double* rowq = &a[std::size_t(q) * n];
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = rowp[r], arq = rowq[r];
          const double nrp = arp - s * (arq + tau * arp);
          const double nrq = arq + s * (arp - tau * arq);
          rowp[r] = nrp;
          a[std::size_t(r) * n + p] = nrp;
          rowq[r] = nrq;
          a[std::size_t(r) * n + q] = nrq;
        }
        double* vp = &vt[std::size_t(p) * n];
        double* vq = &vt[std::size_t(q) * n];
        for (int r = 0; r < n; ++r) {
          const double xp = vp[r], xq = vq[r];
          vp[r] = xp - s * (xq + tau * xp);
          vq[r] = xq + s * (xp - tau * xq);
        }
      }
    }
  }
  const double off = max_offdiag();
  if (off > tol)
    throw std::runtime_error(
        "symmetric_eigen: Jacobi did not converge in 100 sweeps; off-diagonal residual " +
        std::to_string(off));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    return a[std::size_t(l) * n + l] < a[std::size_t(r) * n + r];
  });
  EigenSystem es;
  es.values.reserve(n);
  es.vectors.reserve(n);
  for (int k : order) {
    es.values.push_back(a[std::size_t(k) * n + k]);
    es.vectors.emplace_back(vt.begin() + std::size_t(k) * n,
                            vt.begin() + std::size_t(k + 1) * n);
  }
  return es;
}

inline double rayleigh(const SymMatrix& m, const std::vector<double>& a) {
  const int n = m.size();
  if (int(a.size()) != n)
    throw std::invalid_argument("rayleigh: vector size mismatch");
  double denom = 0.0;
  for (double x : a) denom += x * x;
  if (denom == 0.0)
    throw std::invalid_argument("rayleigh: vector must be nonzero");
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    double mi = 0.0;
    for (int j = 0; j < n; ++j) mi += m(i, j) * a[j];
    num += a[i] * mi;
  }
  return num / denom;
}

namespace detail {

// Householder reduction of a symmetric matrix (row-major data, destroyed) to
// tridiagonal form with diagonal d and subdiagonal e. Eigenvalues only; no
// transform accumulation.
inline void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                           std::vector<double>& e) {
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);
  std::vector<double> v(n), p(n);
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;
    double sigma2 = 0.0;
    for (int r = 0; r < m; ++r) {
      const double x = a[std::size_t(k + 1 + r) * n + k];
      v[r] = x;
      sigma2 += x * x;
    }
    if (sigma2 == 0.0) {
      e[k] = 0.0;
      continue;
    }
    const double x0 = v[0];
    const double sigma = std::sqrt(sigma2);
    const double alpha = x0 >= 0 ? -sigma : sigma;
    const double beta = 1.0 / (sigma2 - alpha * x0);  // 2 / ||v||^2
    v[0] = x0 - alpha;
    e[k] = alpha;

    // p = beta * B v over the trailing block B = a[k+1.., k+1..].
    double vp = 0.0;
    for (int r = 0; r < m; ++r) {
      const double* row = &a[std::size_t(k + 1 + r) * n + (k + 1)];
      double s = 0.0;
      for (int c = 0; c < m; ++c) s += row[c] * v[c];
      p[r] = beta * s;
      vp += v[r] * p[r];
    }
    const double kappa = 0.5 * beta * vp;
    for (int r = 0; r < m; ++r) p[r] -= kappa * v[r];
    // B -= v p^T + p v^T
    for (int r = 0; r < m; ++r) {
      double* row = &a[std::size_t(k + 1 + r) * n + (k + 1)];
      const double vr = v[r], pr = p[r];
      for (int c = 0; c < m; ++c) row[c] -= vr * p[c] + pr * v[c];
    }
  }
  for (int i = 0; i < n; ++i) d[i] = a[std::size_t(i) * n + i];
  if (n >= 2) e[n - 2] = a[std::size_t(n - 1) * n + (n - 2)];
}

// Number of eigenvalues of the tridiagonal (d, e) strictly below x.
inline int sturm_count(const std::vector<double>& d, const std::vector<double>& e,
                       double x) {
  int cnt = 0;
  double q = d[0] - x;
  if (q < 0) ++cnt;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = (d[i] - x) - e[i - 1] * e[i - 1] / q;
    if (q < 0) ++cnt;
  }
  return cnt;
}

// k-th smallest eigenvalue (0-based) of the tridiagonal (d, e) by bisection.
inline double tridiag_eigenvalue(const std::vector<double>& d,
                                 const std::vector<double>& e, int k) {
  const int n = int(d.size());
  double lo = d[0], hi = d[0];
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::fabs(e[i - 1]) : 0.0) +
                     (i < n - 1 ? std::fabs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double pad = 1e-10 * std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
  lo -= pad;
  hi += pad;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-14 * std::max(1.0, std::max(std::fabs(lo), std::fabs(hi))))
      break;
    if (sturm_count(d, e, mid) >= k + 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Second-smallest eigenvalue. Small matrices go through the Jacobi solver;
// larger ones through Householder tridiagonalization plus Sturm bisection,
// which skips the eigenvector accumulation entirely.
inline double second_smallest_eigenvalue(const SymMatrix& m) {
  const int n = m.size();
  if (n < 2)
    throw std::invalid_argument("second_smallest_eigenvalue: need n >= 2");
  if (n <= 128) return symmetric_eigen(m).values[1];
  std::vector<double> a(m.data());
  std::vector<double> d, e;
  detail::tridiagonalize(a, n, d, e);
  return detail::tridiag_eigenvalue(d, e, 1);
}

// The two Rayleigh quotients compared by the folding identity: the plain
// Laplacian at y .* a + delta * ones versus the signed Laplacian at a.
// For a orthogonal to the labeling, laplacian_quotient <= signed_quotient.
struct FoldedRayleigh {
  double laplacian_quotient = 0.0;
  double signed_quotient = 0.0;
};

inline FoldedRayleigh folded_rayleigh(const Graph& g, const std::vector<int>& y,
                                      const std::vector<double>& a, double delta) {
  if (int(a.size()) != g.n || int(y.size()) != g.n)
    throw std::invalid_argument("folded_rayleigh: vector size mismatch");
  double norm2 = 0.0, dot = 0.0;
  for (int i = 0; i < g.n; ++i) {
    norm2 += a[i] * a[i];
    dot += a[i] * double(y[i]);
  }
  if (norm2 == 0.0)
    throw std::invalid_argument("folded_rayleigh: vector must be nonzero");
  if (std::fabs(dot) > 1e-9 * std::sqrt(norm2))
    throw std::invalid_argument("folded_rayleigh: vector must be orthogonal to the labeling");
  std::vector<double> w(g.n);
  double wnorm2 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    w[i] = a[i] * double(y[i]) + delta;
    wnorm2 += w[i] * w[i];
  }
  if (wnorm2 == 0.0)
    throw std::invalid_argument("folded_rayleigh: folded vector is zero");
  FoldedRayleigh r;
  r.laplacian_quotient = rayleigh(laplacian(g), w);
  r.signed_quotient = rayleigh(signed_laplacian(g, y), a);
  return r;
}

// Lower bound phi^2 / (4 * dmax) for the second eigenvalue of the signed
// Laplacian, alongside the eigenvalue itself. Needs the exact expansion, so
// the same n <= 24 cap as cheeger_exact applies.
struct ExpansionEigenBound {
  double expansion_bound = 0.0;
  double lambda2 = 0.0;
};

inline ExpansionEigenBound expansion_lambda2_bound(const Graph& g,
                                                   const std::vector<int>& y) {
  if (!is_connected(g))
    throw std::invalid_argument("expansion_lambda2_bound: graph must be connected");
  const CutReport cut = cheeger_exact(g);
  const double num = double(cut.expansion_num);
  const double den = double(cut.expansion_den);
  ExpansionEigenBound r;
  r.expansion_bound = (num * num) / (den * den * 4.0 * double(max_degree(g)));
  r.lambda2 = symmetric_eigen(signed_laplacian(g, y)).values[1];
  return r;
}

// Spectral sandwich for the edge expansion: lambda2/2 <= phi <= 2*sqrt(lambda2*dmax).
struct SpectralBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline SpectralBounds cheeger_spectral_bounds(const Graph& g) {
  if (!is_connected(g)) return {0.0, 0.0};
  if (g.n < 2)
    throw std::invalid_argument("cheeger_spectral_bounds: need n >= 2");
  double lambda2 = second_smallest_eigenvalue(laplacian(g));
  lambda2 = std::max(lambda2, 0.0);
  return {lambda2 / 2.0, 2.0 * std::sqrt(lambda2 * double(max_degree(g)))};
}

}  // namespace labelrec
