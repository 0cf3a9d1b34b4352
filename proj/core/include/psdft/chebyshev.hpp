#pragma once

#include <Eigen/Dense>
#include <string>

namespace psdft {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class NodeKind { ChebyshevLobatto, PeriodicEquispaced, Singleton };

/// 1D collocation grid on the computational interval: [-1,1] for
/// Chebyshev-Lobatto nodes, [0,1) for periodic equispaced nodes.
/// A Singleton grid carries one node at 0 and is used to collapse a
/// direction the solution is invariant in.
struct Grid1D {
  NodeKind kind = NodeKind::ChebyshevLobatto;
  Vector nodes;         // strictly decreasing for Chebyshev: cos(pi n / N)
  Vector bary_weights;  // barycentric weights (Chebyshev only)
  Vector quad_weights;  // integrate over the computational interval

  int n_points() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Lobatto-Chebyshev grid of polynomial degree `degree` (degree+1
/// nodes). Nodes x_n = cos(pi n / degree) are stored in descending order;
/// quadrature weights are Clenshaw-Curtis.
Grid1D cheb_lobatto_grid(int degree);

/// Equispaced periodic grid k/n, k = 0..n-1, with trapezoidal weights 1/n.
Grid1D periodic_grid(int n);

/// Single-node grid for invariant directions.
Grid1D singleton_grid();

/// Barycentric interpolation row: weights applied to nodal values give the
/// interpolant at `x`. Targets within `snap_tol` of a node yield the unit
/// row for that node (no cancellation in the denominator).
Vector barycentric_row(const Grid1D& grid, double x, double snap_tol = 1e-14);

/// Spectral differentiation matrix on the computational interval
/// (Chebyshev collocation form, or the Fourier form for periodic grids).
Matrix computational_diff_matrix(const Grid1D& grid);

}  // namespace psdft
