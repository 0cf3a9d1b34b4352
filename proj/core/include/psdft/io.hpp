#pragma once

#include "psdft/grid2d.hpp"
#include "psdft/convolution.hpp"

#include <string>
#include <vector>

namespace psdft {

/// Round-trippable number formatting shared by all writers so repeated
/// runs produce byte-identical files.
std::string format_double(double v);

/// Profile CSV: y1,y2,<name0>,<name1>,... one row per grid point (block
/// order). Infinite coordinates are written as inf/-inf.
void write_profile_csv(const std::string& path, const CompositeGrid2D& grid,
                       const std::vector<std::string>& names,
                       const std::vector<Vector>& columns);

/// Column CSV with an explicit abscissa.
void write_table_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<Vector>& columns);

void write_matrix_csv(const std::string& path, const Matrix& m);
void write_matrix_binary(const std::string& path, const Matrix& m);
void dump_operator(const std::string& dir, const std::string& tag,
                   const ConvolutionOperator& op, bool binary);

}  // namespace psdft
