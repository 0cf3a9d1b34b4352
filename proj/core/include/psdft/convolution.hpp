#pragma once

#include "psdft/grid2d.hpp"
#include "psdft/kernels.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace psdft {

/// Dense real-space convolution operator: one matrix per kernel component,
/// rows indexed by target points, columns by source points. Row k is the
/// quadrature of the kernel over the intersection of its support with the
/// shifted source domain, composed with interpolation from the source grid.
struct ConvolutionOperator {
  std::string kernel_name;
  std::uint64_t source_id = 0, target_id = 0;
  int M = 0;
  std::vector<Matrix> comp;

  const Matrix& mat(int c = 0) const { return comp.at(c); }
  Vector apply(const Vector& values, int c = 0) const;

  /// Max-row-sum operator norm of the difference, maximized over components.
  static double increment_norm(const ConvolutionOperator& a, const ConvolutionOperator& b);
};

struct BuildOptions {
  double L_unbounded = -1.0;  // < 0: pick from {0.5,1,2,4} by kernel interpolation error
  bool parallel = true;
};

ConvolutionOperator build_operator(const CompositeGrid2D& source,
                                   const CompositeGrid2D& target, const Kernel& kernel,
                                   int M, const BuildOptions& opts = {});

/// Operator increments between consecutive intersection resolutions.
struct ProbeRow {
  int M_lo = 0, M_hi = 0;
  double increment = 0;
};
std::vector<ProbeRow> convergence_probe(const CompositeGrid2D& source,
                                        const CompositeGrid2D& target,
                                        const Kernel& kernel,
                                        const std::vector<int>& M_list,
                                        const BuildOptions& opts = {});

/// Keyed store so each geometry/kernel/resolution triple is built once.
class OperatorCache {
 public:
  std::shared_ptr<const ConvolutionOperator> get(const CompositeGrid2D& source,
                                                 const CompositeGrid2D& target,
                                                 const Kernel& kernel, int M,
                                                 const BuildOptions& opts = {});
  void clear();

 private:
  using Key = std::tuple<std::uint64_t, std::uint64_t, std::string, int>;
  std::map<Key, std::shared_ptr<const ConvolutionOperator>> store_;
  std::mutex mutex_;
};

/// Default intersection resolutions: M = 20 + N/4 for the finite-support
/// weights, M = 20 + N/2 for the cutoff attraction, N the per-direction
/// point count of the main grid.
inline int default_M_fmt(int N) { return 20 + N / 4; }
inline int default_M_attr(int N) { return 20 + N / 2; }

}  // namespace psdft
