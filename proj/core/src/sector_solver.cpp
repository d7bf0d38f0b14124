#include "qcsc/qpu/sector_solver.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "qcsc/math.hpp"
#include "qcsc/sim/rng.hpp"

namespace qcsc::qpu {

namespace {

constexpr int kBlockSize = 40;
constexpr int kMaxRestarts = 200;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

SectorGroundState sector_ground_state(const ToyModel& model) {
  validate_model(model);
  SectorGroundState out;
  out.basis = sector_basis(model.sites, model.magnetization_k);
  const std::size_t dim = out.basis.size();

  if (dim == 1) {
    out.energy = diagonal_element(model, out.basis[0]);
    out.amplitudes = {1.0};
    return out;
  }

  std::unordered_map<Bitstring, std::size_t> index;
  index.reserve(dim * 2);
  for (std::size_t i = 0; i < dim; ++i) index.emplace(out.basis[i], i);

  std::vector<double> diag(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    diag[i] = diagonal_element(model, out.basis[i]);
  }

  auto matvec = [&](const std::vector<double>& in, std::vector<double>& result) {
    for (std::size_t i = 0; i < dim; ++i) result[i] = diag[i] * in[i];
    for (std::size_t i = 0; i < dim; ++i) {
      const double amp_in = in[i];
      if (amp_in == 0.0) continue;
      for_each_offdiagonal(model, out.basis[i], [&](Bitstring y, double amp) {
        result[index.find(y)->second] += amp * amp_in;
      });
    }
  };

  // Deterministic start vector.
  sim::RngStream rng(0x5ec70f5eed, "sector-solver/v0");
  std::vector<double> v(dim);
  for (double& x : v) x = rng.next_double() - 0.5;
  {
    const double n0 = norm(v);
    for (double& x : v) x /= n0;
  }

  const int block = static_cast<int>(std::min<std::size_t>(kBlockSize, dim));
  std::vector<std::vector<double>> krylov;
  std::vector<double> alpha, beta, w(dim);
  double energy = 0.0;
  bool have_energy = false;

  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    krylov.assign(1, v);
    alpha.clear();
    beta.clear();
    for (int j = 0; j < block; ++j) {
      matvec(krylov.back(), w);
      alpha.push_back(dot(krylov.back(), w));
      axpy(-alpha.back(), krylov.back(), w);
      if (krylov.size() > 1) axpy(-beta.back(), krylov[krylov.size() - 2], w);
      // Full reorthogonalization within the block.
      for (const auto& q : krylov) axpy(-dot(q, w), q, w);
      const double b = norm(w);
      if (b < 1e-13 || j == block - 1) break;
      beta.push_back(b);
      std::vector<double> next = w;
      for (double& x : next) x /= b;
      krylov.push_back(std::move(next));
    }

    const double lambda = math::tridiag_smallest_eigenvalue(alpha, beta);
    const std::vector<double> y = math::tridiag_eigenvector(alpha, beta, lambda);
    std::vector<double> ritz(dim, 0.0);
    for (std::size_t j = 0; j < krylov.size(); ++j) axpy(y[j], krylov[j], ritz);
    const double rn = norm(ritz);
    for (double& x : ritz) x /= rn;

    matvec(ritz, w);
    axpy(-lambda, ritz, w);
    const double residual = norm(w);
    const bool converged =
        have_energy && std::abs(lambda - energy) < 1e-14 * (1.0 + std::abs(lambda));
    energy = lambda;
    have_energy = true;
    v = std::move(ritz);
    if (residual < 1e-11 * std::max(1.0, std::abs(lambda)) || converged) break;
  }

  // Deterministic sign: largest-magnitude amplitude positive.
  std::size_t big = 0;
  for (std::size_t i = 1; i < dim; ++i) {
    if (std::abs(v[i]) > std::abs(v[big])) big = i;
  }
  if (v[big] < 0.0) {
    for (double& x : v) x = -x;
  }

  out.energy = energy;
  out.amplitudes = std::move(v);
  return out;
}

}  // namespace qcsc::qpu
