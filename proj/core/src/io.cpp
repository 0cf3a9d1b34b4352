#include "psdft/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace psdft {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::ofstream open_or_throw(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}
}  // namespace

void write_profile_csv(const std::string& path, const CompositeGrid2D& grid,
                       const std::vector<std::string>& names,
                       const std::vector<Vector>& columns) {
  auto os = open_or_throw(path);
  os << "y1,y2";
  for (const auto& n : names) os << "," << n;
  os << "\n";
  for (int i = 0; i < grid.size(); ++i) {
    const Point2 p = grid.point(i);
    os << format_double(p.y1) << "," << format_double(p.y2);
    for (const auto& c : columns) os << "," << format_double(c[i]);
    os << "\n";
  }
}

void write_table_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<Vector>& columns) {
  auto os = open_or_throw(path);
  for (size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
  os << "\n";
  const int rows = columns.empty() ? 0 : static_cast<int>(columns[0].size());
  for (int i = 0; i < rows; ++i) {
    for (size_t j = 0; j < columns.size(); ++j)
      os << (j ? "," : "") << format_double(columns[j][i]);
    os << "\n";
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto os = open_or_throw(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j));
    os << "\n";
  }
}

void write_matrix_binary(const std::string& path, const Matrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  const std::int64_t r = m.rows(), c = m.cols();
  os.write(reinterpret_cast<const char*>(&r), sizeof(r));
  os.write(reinterpret_cast<const char*>(&c), sizeof(c));
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void dump_operator(const std::string& dir, const std::string& tag,
                   const ConvolutionOperator& op, bool binary) {
  for (size_t c = 0; c < op.comp.size(); ++c) {
    const std::string base =
        dir + "/op_" + tag + "_c" + std::to_string(c) + (binary ? ".bin" : ".csv");
    if (binary)
      write_matrix_binary(base, op.comp[c]);
    else
      write_matrix_csv(base, op.comp[c]);
  }
}

}  // namespace psdft
