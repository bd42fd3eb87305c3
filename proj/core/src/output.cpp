#include "porous/output.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace porous {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_write(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "w"));
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

void write_cell_field_csv(const std::string& path, const StaggeredGrid& g,
                          const CellField& f) {
  validate_cell_field(g, f, "write_cell_field_csv");
  FilePtr out = open_for_write(path);
  std::fputs("i,j,x,y,value\n", out.get());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      std::fprintf(out.get(), "%d,%d,%.16e,%.16e,%.16e\n", i, j, g.cell_x(i),
                   g.cell_y(j), f[g.cell(i, j)]);
    }
  }
}

void write_face_field_csv(const std::string& path, const StaggeredGrid& g,
                          const FaceField& f) {
  validate_face_field(g, f, "write_face_field_csv");
  FilePtr out = open_for_write(path);
  std::fputs("i,j,x,y,component,value\n", out.get());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double ux = 0.5 * (f.x[g.xface(i, j)] + f.x[g.xface(i + 1, j)]);
      const double uy = 0.5 * (f.y[g.yface(i, j)] + f.y[g.yface(i, j + 1)]);
      std::fprintf(out.get(), "%d,%d,%.16e,%.16e,x,%.16e\n", i, j, g.cell_x(i),
                   g.cell_y(j), ux);
      std::fprintf(out.get(), "%d,%d,%.16e,%.16e,y,%.16e\n", i, j, g.cell_x(i),
                   g.cell_y(j), uy);
    }
  }
}

CellField read_cell_field_csv(const std::string& path,
                              const StaggeredGrid& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError("'" + path + "': empty file");
  }
  if (line.rfind("i,j,x,y,value", 0) != 0) {
    throw InputError("'" + path + "': expected header i,j,x,y,value");
  }
  CellField f(g);
  std::vector<bool> seen(static_cast<std::size_t>(g.num_cells()), false);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int i = 0, j = 0;
    double x = 0, y = 0, value = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &i, &j, &x, &y,
                    &value) != 5) {
      throw InputError("'" + path + "': malformed row '" + line + "'");
    }
    if (i < 0 || i >= g.nx || j < 0 || j >= g.ny) {
      throw InputError("'" + path + "': cell index out of range");
    }
    f[g.cell(i, j)] = value;
    seen[static_cast<std::size_t>(g.cell(i, j))] = true;
    ++rows;
  }
  if (rows != g.num_cells()) {
    throw InputError("'" + path + "': expected " +
                     std::to_string(g.num_cells()) + " rows, got " +
                     std::to_string(rows));
  }
  for (bool s : seen) {
    if (!s) throw InputError("'" + path + "': missing cells");
  }
  return f;
}

void write_vtk(const std::string& path, const StaggeredGrid& g,
               const CellField& pressure, const FaceField& velocity,
               const std::string& title) {
  validate_cell_field(g, pressure, "write_vtk pressure");
  validate_face_field(g, velocity, "write_vtk velocity");
  FilePtr out = open_for_write(path);
  std::fputs("# vtk DataFile Version 3.0\n", out.get());
  std::fprintf(out.get(), "%s\n", title.c_str());
  std::fputs("ASCII\n", out.get());
  std::fputs("DATASET STRUCTURED_POINTS\n", out.get());
  std::fprintf(out.get(), "DIMENSIONS %d %d 1\n", g.nx, g.ny);
  std::fprintf(out.get(), "ORIGIN %.16e %.16e 0\n", g.cell_x(0), g.cell_y(0));
  std::fprintf(out.get(), "SPACING %.16e %.16e 1\n", g.hx, g.hy);
  std::fprintf(out.get(), "POINT_DATA %d\n", g.num_cells());
  std::fputs("SCALARS pressure double 1\n", out.get());
  std::fputs("LOOKUP_TABLE default\n", out.get());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      std::fprintf(out.get(), "%.16e\n", pressure[g.cell(i, j)]);
    }
  }
  std::fputs("VECTORS velocity double\n", out.get());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double ux =
          0.5 * (velocity.x[g.xface(i, j)] + velocity.x[g.xface(i + 1, j)]);
      const double uy =
          0.5 * (velocity.y[g.yface(i, j)] + velocity.y[g.yface(i, j + 1)]);
      std::fprintf(out.get(), "%.16e %.16e 0\n", ux, uy);
    }
  }
}

}  // namespace porous
