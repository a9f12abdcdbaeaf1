#pragma once

#include <string>

#include "fields.hpp"

namespace vesicle {

// Legacy ASCII VTK snapshot (UNSTRUCTURED_GRID, triangle cells, point data at
// the mesh vertices).
void write_vtk_snapshot(const std::string& path, const Mesh& mesh, const ScalarField& phi,
                        const ScalarField& c, const ScalarField& lambda_local,
                        const ScalarField& pressure, const VectorField& v);

}  // namespace vesicle
