#include "psdft/convolution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace psdft {

Vector ConvolutionOperator::apply(const Vector& values, int c) const {
  const Matrix& A = mat(c);
  if (values.size() != A.cols())
    throw std::invalid_argument("ConvolutionOperator::apply: dimension mismatch");
  return A * values;
}

double ConvolutionOperator::increment_norm(const ConvolutionOperator& a,
                                           const ConvolutionOperator& b) {
  double norm = 0.0;
  for (size_t c = 0; c < a.comp.size(); ++c)
    norm = std::max(norm, (a.comp[c] - b.comp[c]).cwiseAbs().rowwise().sum().maxCoeff());
  return norm;
}

namespace {

// Map length for unbounded radial patches, chosen to minimize the maximum
// interpolation error of the kernel profile on the patch discretization.
double choose_map_length(const KernelPiece& piece, int M) {
  const double R =
      (piece.support.kind == SupportKind::AnnulusExterior) ? piece.support.R : 1.0;
  const Grid1D g = cheb_lobatto_grid(std::max(M - 1, 1));
  auto radial = [&](double r) {
    double out[4] = {0, 0, 0, 0};
    piece.eval(r, 0.0, out);
    return out[0];
  };
  double best_L = 0.5, best_err = kInf;
  for (double L : {0.5, 1.0, 2.0, 4.0}) {
    const DomainMap1D map = DomainMap1D::algebraic_finite_skew(R, kInf, L);
    MappedGrid1D mg = make_mapped_grid(g, map);
    Vector nodal(mg.n_points());
    for (int k = 0; k < mg.n_points(); ++k)
      nodal[k] = std::isfinite(mg.phys_nodes[k]) ? radial(mg.phys_nodes[k]) : 0.0;
    double err = 0.0;
    for (int j = 0; j < 200; ++j) {
      const double r = R + 1e-3 * std::pow(30.0 / 1e-3, j / 199.0);
      const double approx = interpolation_row(mg, r).dot(nodal);
      err = std::max(err, std::abs(approx - radial(r)));
    }
    if (err < best_err - 1e-15) {
      best_err = err;
      best_L = L;
    }
  }
  return best_L;
}

struct PartScratch {
  std::vector<int> idx;  // quadrature point indices landing in this part
};

}  // namespace

ConvolutionOperator build_operator(const CompositeGrid2D& source,
                                   const CompositeGrid2D& target, const Kernel& kernel,
                                   int M, const BuildOptions& opts) {
  ConvolutionOperator op;
  op.kernel_name = kernel.name;
  op.source_id = source.id;
  op.target_id = target.id;
  op.M = M;
  const int rows = target.size();
  const int cols = source.size();
  op.comp.assign(kernel.ncomp, Matrix::Zero(rows, cols));

  // resolve map lengths for unbounded pieces once
  std::vector<double> piece_L(kernel.pieces.size(), 1.0);
  for (size_t p = 0; p < kernel.pieces.size(); ++p) {
    if (kernel.pieces[p].support.kind == SupportKind::AnnulusExterior)
      piece_L[p] = (opts.L_unbounded > 0) ? opts.L_unbounded
                                          : choose_map_length(kernel.pieces[p], M);
  }

  const auto& sup = source.support;

  auto build_row = [&](int k) {
    const Point2 t = target.point(k);

    std::vector<Shape> pieces;
    std::vector<const KernelPiece*> piece_kernels;
    for (size_t p = 0; p < kernel.pieces.size(); ++p) {
      const KernelPiece& kp = kernel.pieces[p];
      if (sup.kind == SupportRegion::Kind::Box) {
        if (kp.support.kind != SupportKind::Everything)
          throw std::runtime_error("build_operator: only full-plane kernels on box domains");
        pieces.push_back(shape_rect(sup.a - t.y1, sup.b - t.y1, sup.c - t.y2,
                                    sup.d - t.y2, M));
        piece_kernels.push_back(&kp);
        continue;
      }
      double offset = kInf;
      if (sup.kind == SupportRegion::Kind::HalfSpace)
        offset = std::isfinite(t.y2) ? (t.y2 - sup.y2min) : kInf;
      Intersection in = assemble_intersection(kp.support, offset, M, piece_L[p]);
      for (auto& s : in.pieces) {
        pieces.push_back(std::move(s));
        piece_kernels.push_back(&kp);
      }
    }

    std::vector<PartScratch> parts(source.n_parts());
    std::vector<double> chi(kernel.ncomp);

    for (size_t pi = 0; pi < pieces.size(); ++pi) {
      const Shape& sh = pieces[pi];
      const KernelPiece& kp = *piece_kernels[pi];
      for (auto& ps : parts) ps.idx.clear();

      for (int m = 0; m < sh.size(); ++m) {
        if (!std::isfinite(sh.w[m])) continue;  // decaying kernel at infinity
        if (sh.w[m] == 0.0) continue;
        double y2s = std::isfinite(t.y2) ? t.y2 + sh.pts(m, 1) : t.y2;
        if (sup.kind == SupportRegion::Kind::HalfSpace && y2s < sup.y2min) {
          if (y2s > sup.y2min - 1e-9)
            y2s = sup.y2min;
          else {
            std::ostringstream os;
            os << "build_operator: shifted point y2 = " << y2s << " below source support "
               << sup.y2min << " (target " << k << ", piece " << sh.label << ")";
            throw std::runtime_error(os.str());
          }
        }
        parts[source.part_for_y2(y2s)].idx.push_back(m);
      }

      for (int q = 0; q < source.n_parts(); ++q) {
        const auto& idx = parts[q].idx;
        if (idx.empty()) continue;
        const Grid2D& sg = source.parts[q];
        const int mp = static_cast<int>(idx.size());
        Matrix U(sg.n1(), mp), V(sg.n2(), mp);
        Matrix coef(kernel.ncomp, mp);
        for (int j = 0; j < mp; ++j) {
          const int m = idx[j];
          const double y1s = std::isfinite(t.y1) ? t.y1 + sh.pts(m, 0) : t.y1;
          double y2s = std::isfinite(t.y2) ? t.y2 + sh.pts(m, 1) : t.y2;
          if (sup.kind == SupportRegion::Kind::HalfSpace)
            y2s = std::max(y2s, sup.y2min);
          U.col(j) = interpolation_row(sg.g1, y1s);
          V.col(j) = interpolation_row(sg.g2, y2s);
          kp.eval(sh.pts(m, 0), sh.pts(m, 1), chi.data());
          for (int c = 0; c < kernel.ncomp; ++c) coef(c, j) = sh.w[m] * chi[c];
        }
        for (int c = 0; c < kernel.ncomp; ++c) {
          const Matrix block = U * coef.row(c).asDiagonal() * V.transpose();
          for (int i1 = 0; i1 < sg.n1(); ++i1)
            op.comp[c].row(k).segment(source.offsets[q] + i1 * sg.n2(), sg.n2()) +=
                block.row(i1);
        }
      }
    }
  };

  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
  for (int k = 0; k < rows; ++k) {
    try {
      build_row(k);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  return op;
}

std::vector<ProbeRow> convergence_probe(const CompositeGrid2D& source,
                                        const CompositeGrid2D& target,
                                        const Kernel& kernel,
                                        const std::vector<int>& M_list,
                                        const BuildOptions& opts) {
  std::vector<ProbeRow> rows;
  ConvolutionOperator prev;
  bool have_prev = false;
  for (int M : M_list) {
    ConvolutionOperator cur = build_operator(source, target, kernel, M, opts);
    if (have_prev) {
      ProbeRow r;
      r.M_lo = prev.M;
      r.M_hi = M;
      r.increment = ConvolutionOperator::increment_norm(cur, prev);
      rows.push_back(r);
    }
    prev = std::move(cur);
    have_prev = true;
  }
  return rows;
}

std::shared_ptr<const ConvolutionOperator> OperatorCache::get(
    const CompositeGrid2D& source, const CompositeGrid2D& target, const Kernel& kernel,
    int M, const BuildOptions& opts) {
  const Key key{source.id, target.id, kernel.name, M};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = store_.find(key);
    if (it != store_.end()) return it->second;
  }
  auto op = std::make_shared<ConvolutionOperator>(
      build_operator(source, target, kernel, M, opts));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = store_.emplace(key, std::move(op));
  return it->second;
}

void OperatorCache::clear() {
  std::lock_guard<std::mutex> lock(mutex_);
  store_.clear();
}

}  // namespace psdft
