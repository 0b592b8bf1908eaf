#pragma once

#include <vector>

#include "fvlab/mesh.hpp"
#include "fvlab/sparse.hpp"

namespace fvlab {

/// Backward divided difference along `axis`:
/// (D- v)_i = (v_i - v_{i-1}) / h_i, defined for axis index i = 1..M.
/// Stored in a MeshFunction at the node with the same multi-index; entries at
/// axis index 0 are zero.
MeshFunction backward_diff(const MeshFunction& v, int axis);

/// Forward divided difference along `axis`:
/// (D+ v)_i = (v_{i+1} - v_i) / hbar_i, defined for axis index i = 1..M-1
/// (the half-step denominator does not exist at the boundary).
MeshFunction forward_diff(const MeshFunction& v, int axis);

/// Transverse averaging operator. `axis` names the direction that is NOT
/// averaged; the operator averages over the other d-1 axes. In 3D with
/// axis = x this is the mu_yz operator: central weight 3/4, plus 2^{d-1}
/// transverse-corner terms weighted by products of the adjacent steps over
/// 2^{d+1} times the product of half-steps.
///
/// The result is defined at every node whose transverse indices are interior
/// (the index along `axis` may be anything, including the boundary); other
/// entries are zero.
MeshFunction mu_transverse(const MeshFunction& v, int axis);

/// Matrix-free application of the discrete operator
///   L^h v = -sum_over_axes D+ D- mu_transverse v
/// at every interior node, returned in the interior ordering.
std::vector<double> apply_Lh(const MeshFunction& v);

/// Assembles L^h over interior DOFs as a CSR matrix. Boundary columns are
/// dropped (admissible mesh functions vanish there). If volume_scaled, each
/// row is multiplied by the cell volume (product of half-steps), which makes
/// the row the conservative flux balance of the cell.
SparseOperator assemble_Lh(const TensorMesh& mesh, bool volume_scaled);

}  // namespace fvlab
