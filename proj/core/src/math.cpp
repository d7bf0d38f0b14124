#include "qcsc/math.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "qcsc/errors.hpp"

namespace qcsc::math {

LowestEigenpair jacobi_lowest_eigenpair(std::vector<double> a, std::size_t n) {
  if (n == 0 || a.size() != n * n) {
    raise(ErrorCode::InvalidSpec, "jacobi: bad matrix shape");
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
  };

  double scale = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) scale = std::max(scale, std::abs(a[i]));
  const double tol = std::max(scale, 1.0) * 1e-14;

  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= tol * 1e-2) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::size_t lowest = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (a[i * n + i] < a[lowest * n + lowest]) lowest = i;
  }
  LowestEigenpair out;
  out.value = a[lowest * n + lowest];
  out.vector.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.vector[k] = v[k * n + lowest];

  // Deterministic sign: make the largest-magnitude component positive.
  std::size_t big = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(out.vector[k]) > std::abs(out.vector[big])) big = k;
  }
  if (out.vector[big] < 0.0) {
    for (double& x : out.vector) x = -x;
  }
  return out;
}

namespace {

// Number of eigenvalues strictly below x (Sturm count via LDL^T recurrence).
int sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta,
                double x) {
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1];
    d = alpha[i] - x - b2 / d;
    if (d == 0.0) d = tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

double tridiag_smallest_eigenvalue(const std::vector<double>& alpha,
                                   const std::vector<double>& beta) {
  if (alpha.empty()) raise(ErrorCode::InvalidSpec, "tridiag: empty matrix");
  if (alpha.size() == 1) return alpha[0];
  double lo = alpha[0], hi = alpha[0];
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                     (i + 1 < alpha.size() ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> tridiag_eigenvector(const std::vector<double>& alpha,
                                        const std::vector<double>& beta,
                                        double eigenvalue) {
  const std::size_t m = alpha.size();
  if (m == 0) raise(ErrorCode::InvalidSpec, "tridiag: empty matrix");
  std::vector<double> w(m, 1.0 / std::sqrt(static_cast<double>(m)));
  if (m == 1) return w;

  // Inverse iteration: solve (T - lambda I) z = w by LU with partial
  // pivoting over the three bands (fill-in adds a second superdiagonal).
  const double shift =
      eigenvalue - 1e-12 * std::max(1.0, std::abs(eigenvalue));
  for (int iter = 0; iter < 4; ++iter) {
    std::vector<double> d(m), e(m, 0.0), f(m, 0.0), z = w;
    for (std::size_t i = 0; i < m; ++i) {
      d[i] = alpha[i] - shift;
      if (i + 1 < m) e[i] = beta[i];
    }
    std::vector<double> sub(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) sub[i + 1] = beta[i];

    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (std::abs(sub[i + 1]) > std::abs(d[i])) {
        std::swap(d[i], sub[i + 1]);
        std::swap(e[i], d[i + 1]);
        if (i + 2 < m) std::swap(f[i], e[i + 1]);
        std::swap(z[i], z[i + 1]);
      }
      if (d[i] == 0.0) d[i] = std::numeric_limits<double>::min();
      const double factor = sub[i + 1] / d[i];
      d[i + 1] -= factor * e[i];
      if (i + 2 < m) e[i + 1] -= factor * f[i];
      z[i + 1] -= factor * z[i];
    }
    if (d[m - 1] == 0.0) d[m - 1] = std::numeric_limits<double>::min();
    for (std::size_t ri = m; ri-- > 0;) {
      double acc = z[ri];
      if (ri + 1 < m) acc -= e[ri] * z[ri + 1];
      if (ri + 2 < m) acc -= f[ri] * z[ri + 2];
      z[ri] = acc / d[ri];
    }
    double norm = 0.0;
    for (const double x : z) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (std::size_t i = 0; i < m; ++i) w[i] = z[i] / norm;
  }
  return w;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

}  // namespace qcsc::math
