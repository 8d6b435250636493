#include "specmcd/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specmcd {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr int kMaxSweeps = 60;

// Hestenes one-sided Jacobi on a column-major m x n workspace with n <= m.
// Rotating column pairs (i, j) drives their inner product to zero; on
// convergence the columns are sigma_j * u_j and the accumulated rotations
// form V.
void jacobi_core(std::vector<double>& a, std::vector<double>& v, int m, int n) {
  v.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    v[static_cast<std::size_t>(j) * n + j] = 1.0;
  }

  std::vector<double> norms(n, 0.0);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    // Fresh norms each sweep; the in-sweep analytic updates drift slightly.
    for (int j = 0; j < n; ++j) {
      const double* col = a.data() + static_cast<std::size_t>(j) * m;
      double sum = 0.0;
      for (int k = 0; k < m; ++k) sum += col[k] * col[k];
      norms[j] = sum;
    }

    bool rotated = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double* __restrict ci = a.data() + static_cast<std::size_t>(i) * m;
        double* __restrict cj = a.data() + static_cast<std::size_t>(j) * m;
        double gamma = 0.0;
        for (int k = 0; k < m; ++k) gamma += ci[k] * cj[k];

        const double alpha = norms[i];
        const double beta = norms[j];
        const double denom = std::sqrt(alpha * beta);
        if (denom == 0.0 || std::abs(gamma) <= kOrthoTol * denom) {
          continue;
        }
        rotated = true;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (int k = 0; k < m; ++k) {
          const double x = ci[k];
          const double y = cj[k];
          ci[k] = c * x - s * y;
          cj[k] = s * x + c * y;
        }
        double* __restrict vi = v.data() + static_cast<std::size_t>(i) * n;
        double* __restrict vj = v.data() + static_cast<std::size_t>(j) * n;
        for (int k = 0; k < n; ++k) {
          const double x = vi[k];
          const double y = vj[k];
          vi[k] = c * x - s * y;
          vj[k] = s * x + c * y;
        }
        norms[i] = alpha - t * gamma;
        norms[j] = beta + t * gamma;
      }
    }
    if (!rotated) break;
  }
}

SvdResult finish(std::vector<double>& a, std::vector<double>& v, int m, int n) {
  SvdResult out;
  out.m = m;
  out.n = n;
  out.r = n;
  out.singular_values.resize(n);
  out.u.assign(static_cast<std::size_t>(m) * n, 0.0);
  out.v = std::move(v);

  std::vector<double> sigma(n);
  for (int j = 0; j < n; ++j) {
    const double* col = a.data() + static_cast<std::size_t>(j) * m;
    double sum = 0.0;
    for (int k = 0; k < m; ++k) sum += col[k] * col[k];
    sigma[j] = std::sqrt(sum);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sigma[x] > sigma[y]; });

  std::vector<double> sorted_v(out.v.size());
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    out.singular_values[j] = sigma[src];
    const double* acol = a.data() + static_cast<std::size_t>(src) * m;
    double* ucol = out.u.data() + static_cast<std::size_t>(j) * m;
    if (sigma[src] > 0.0) {
      const double inv = 1.0 / sigma[src];
      for (int k = 0; k < m; ++k) ucol[k] = acol[k] * inv;
    }
    std::copy(out.v.begin() + static_cast<std::size_t>(src) * n,
              out.v.begin() + static_cast<std::size_t>(src + 1) * n,
              sorted_v.begin() + static_cast<std::size_t>(j) * n);
  }
  out.v = std::move(sorted_v);
  return out;
}

}  // namespace

SvdResult jacobi_svd(const double* a, int m, int n) {
  if (m <= 0 || n <= 0) {
    return SvdResult{};
  }
  if (n <= m) {
    // Column-major copy of A.
    std::vector<double> work(static_cast<std::size_t>(m) * n);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) {
        work[static_cast<std::size_t>(c) * m + r] =
            a[static_cast<std::size_t>(r) * n + c];
      }
    }
    std::vector<double> v;
    jacobi_core(work, v, m, n);
    return finish(work, v, m, n);
  }

  // Wide matrix: decompose the transpose and swap the roles of U and V.
  std::vector<double> work(static_cast<std::size_t>(n) * m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) {
      // Transpose is n x m; its column-major layout equals A row-major.
      work[static_cast<std::size_t>(r) * n + c] =
          a[static_cast<std::size_t>(r) * n + c];
    }
  }
  std::vector<double> v;
  jacobi_core(work, v, n, m);
  SvdResult t = finish(work, v, n, m);

  SvdResult out;
  out.m = m;
  out.n = n;
  out.r = t.r;
  out.singular_values = std::move(t.singular_values);
  out.u = std::move(t.v);  // m x r
  out.v = std::move(t.u);  // n x r
  return out;
}

}  // namespace specmcd
