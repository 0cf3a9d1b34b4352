#include "psdft/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psdft {

namespace {
constexpr double kPi = std::numbers::pi;
}

Grid1D cheb_lobatto_grid(int degree) {
  if (degree < 1) throw std::invalid_argument("cheb_lobatto_grid: degree must be >= 1");
  const int N = degree;
  Grid1D g;
  g.kind = NodeKind::ChebyshevLobatto;
  g.nodes.resize(N + 1);
  g.bary_weights.resize(N + 1);
  g.quad_weights.resize(N + 1);

  for (int n = 0; n <= N; ++n) {
    g.nodes[n] = std::cos(kPi * n / N);
  }
  // exact endpoints and midpoint
  g.nodes[0] = 1.0;
  g.nodes[N] = -1.0;
  if (N % 2 == 0) g.nodes[N / 2] = 0.0;

  for (int j = 0; j <= N; ++j) {
    const double d = (j == 0 || j == N) ? 0.5 : 1.0;
    g.bary_weights[j] = ((j % 2 == 0) ? 1.0 : -1.0) * d;
  }

  // Clenshaw-Curtis weights, evaluated directly from the cosine sums.
  for (int j = 0; j <= N; ++j) {
    const double d = (j == 0 || j == N) ? 0.5 : 1.0;
    const double tj = kPi * j / N;
    double s = 1.0;
    if (N % 2 == 0) {
      for (int k = 1; k <= (N - 2) / 2; ++k)
        s -= 2.0 * std::cos(2.0 * k * tj) / (4.0 * k * k - 1.0);
      s -= std::cos(kPi * j) / (static_cast<double>(N) * N - 1.0);
    } else {
      for (int k = 1; k <= (N - 1) / 2; ++k)
        s -= 2.0 * std::cos(2.0 * k * tj) / (4.0 * k * k - 1.0);
    }
    g.quad_weights[j] = 2.0 * d / N * s;
  }
  return g;
}

Grid1D periodic_grid(int n) {
  if (n < 1) throw std::invalid_argument("periodic_grid: n must be >= 1");
  Grid1D g;
  g.kind = NodeKind::PeriodicEquispaced;
  g.nodes.resize(n);
  g.quad_weights.resize(n);
  for (int k = 0; k < n; ++k) {
    g.nodes[k] = static_cast<double>(k) / n;
    g.quad_weights[k] = 1.0 / n;
  }
  return g;
}

Grid1D singleton_grid() {
  Grid1D g;
  g.kind = NodeKind::Singleton;
  g.nodes = Vector::Zero(1);
  g.bary_weights = Vector::Ones(1);
  g.quad_weights = Vector::Ones(1);
  return g;
}

Vector barycentric_row(const Grid1D& grid, double x, double snap_tol) {
  const int n = grid.n_points();
  Vector row = Vector::Zero(n);
  if (grid.kind == NodeKind::Singleton) {
    row[0] = 1.0;
    return row;
  }
  if (grid.kind != NodeKind::ChebyshevLobatto)
    throw std::invalid_argument("barycentric_row: periodic grids are quadrature-only here");

  for (int k = 0; k < n; ++k) {
    if (std::abs(x - grid.nodes[k]) <= snap_tol) {
      row[k] = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int k = 0; k < n; ++k) {
    const double c = grid.bary_weights[k] / (x - grid.nodes[k]);
    row[k] = c;
    denom += c;
  }
  row /= denom;
  return row;
}

Matrix computational_diff_matrix(const Grid1D& grid) {
  const int n = grid.n_points();
  if (grid.kind == NodeKind::Singleton) return Matrix::Zero(1, 1);

  if (grid.kind == NodeKind::ChebyshevLobatto) {
    const int N = n - 1;
    Matrix D(n, n);
    auto c = [&](int i) { return (i == 0 || i == N) ? 2.0 : 1.0; };
    for (int i = 0; i < n; ++i) {
      double rowsum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        D(i, j) = (c(i) / c(j)) * sgn / (grid.nodes[i] - grid.nodes[j]);
        rowsum += D(i, j);
      }
      D(i, i) = -rowsum;  // negative sum trick
    }
    return D;
  }

  // Fourier differentiation for the equispaced periodic grid on [0,1).
  Matrix D = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      const double arg = kPi * k / n;
      if (n % 2 == 0)
        D(i, j) = sgn * 0.5 / std::tan(arg);
      else
        D(i, j) = sgn * 0.5 / std::sin(arg);
    }
  }
  // scale from the 2*pi-periodic convention to period 1
  D *= 2.0 * kPi;
  return D;
}

}  // namespace psdft
