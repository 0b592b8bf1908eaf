#pragma once

#include <string>

#include "fvlab/mesh.hpp"

namespace fvlab {

/// Mesh text format:
///   dim <d>
///   axis <M>
///   <M+1 whitespace-separated coordinates>
///   ... repeated per axis ...
/// Lines starting with '#' are ignored. Coordinates may wrap across lines.
/// Throws ParseError (with line number) on malformed input.
TensorMesh read_mesh_file(const std::string& path);

/// Writes the format above with 17 significant digits, so read(write(m))
/// reproduces the coordinates bit-exactly.
void write_mesh_file(const TensorMesh& mesh, const std::string& path);

}  // namespace fvlab
