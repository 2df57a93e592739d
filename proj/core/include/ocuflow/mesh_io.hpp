#pragma once

#include <iosfwd>
#include <string>

#include "ocuflow/mesh.hpp"

namespace ocuflow {

/// Reads an ASCII MSH 4.1 file. Physical names select the region / boundary
/// ids; every referenced name must match one of this project's region or
/// boundary names, and only simplex elements (lines, triangles) are accepted.
Mesh read_msh(const std::string& path);
Mesh parse_msh(std::istream& in);

/// Writes an ASCII MSH 4.1 file with one surface entity per region and one
/// curve entity per boundary tag, each carrying its physical name.
void write_msh(const Mesh& mesh, const std::string& path);
void print_msh(const Mesh& mesh, std::ostream& out);

} // namespace ocuflow
