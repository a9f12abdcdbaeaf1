#include "vtk.hpp"

#include <cstdio>

#include "common.hpp"

namespace vesicle {

namespace {

void write_vertex_scalar(std::FILE* f, const char* name, const Mesh& mesh,
                         const ScalarField& field) {
  std::fprintf(f, "SCALARS %s double 1\nLOOKUP_TABLE default\n", name);
  for (int i = 0; i < mesh.num_vertices(); ++i) std::fprintf(f, "%.9g\n", field.coeffs[i]);
}

}  // namespace

void write_vtk_snapshot(const std::string& path, const Mesh& mesh, const ScalarField& phi,
                        const ScalarField& c, const ScalarField& lambda_local,
                        const ScalarField& pressure, const VectorField& v) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open snapshot for writing: " + path);
  std::fprintf(f, "# vtk DataFile Version 3.0\nvesicle2d snapshot\nASCII\n");
  std::fprintf(f, "DATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f, "POINTS %d double\n", mesh.num_vertices());
  for (const Vec2& p : mesh.vertices) std::fprintf(f, "%.9g %.9g 0\n", p[0], p[1]);
  std::fprintf(f, "CELLS %d %d\n", mesh.num_triangles(), 4 * mesh.num_triangles());
  for (const auto& t : mesh.triangles) std::fprintf(f, "3 %d %d %d\n", t[0], t[1], t[2]);
  std::fprintf(f, "CELL_TYPES %d\n", mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) std::fprintf(f, "5\n");

  std::fprintf(f, "POINT_DATA %d\n", mesh.num_vertices());
  write_vertex_scalar(f, "phi", mesh, phi);
  write_vertex_scalar(f, "c", mesh, c);
  write_vertex_scalar(f, "lambda_local", mesh, lambda_local);
  write_vertex_scalar(f, "pressure", mesh, pressure);
  std::fprintf(f, "VECTORS velocity double\n");
  for (int i = 0; i < mesh.num_vertices(); ++i)
    std::fprintf(f, "%.9g %.9g 0\n", v.x.coeffs[i], v.y.coeffs[i]);
  std::fclose(f);
}

}  // namespace vesicle
