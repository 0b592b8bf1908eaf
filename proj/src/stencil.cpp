#include "fvlab/stencil.hpp"

#include <algorithm>
#include <stdexcept>

namespace fvlab {

namespace {

std::vector<std::size_t> node_strides(const TensorMesh& mesh) {
  const int d = mesh.dim();
  std::vector<std::size_t> s(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a) {
    s[static_cast<std::size_t>(a)] =
        s[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(mesh.axis(a + 1).segments() + 1);
  }
  return s;
}

void check_axis(const TensorMesh& mesh, int axis) {
  if (axis < 0 || axis >= mesh.dim()) throw std::invalid_argument("axis out of range");
}

}  // namespace

MeshFunction backward_diff(const MeshFunction& v, int axis) {
  const TensorMesh& mesh = v.mesh();
  check_axis(mesh, axis);
  const int d = mesh.dim();
  const Axis& ax = mesh.axis(axis);
  const std::vector<std::size_t> strides = node_strides(mesh);
  const std::size_t stride = strides[static_cast<std::size_t>(axis)];

  MeshFunction out(mesh);
  std::vector<int> lo(static_cast<std::size_t>(d), 0);
  std::vector<int> hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments();
  lo[static_cast<std::size_t>(axis)] = 1;
  for_each_index(lo, hi, [&](std::span<const int> idx) {
    const std::size_t n = mesh.node_index(idx);
    const int i = idx[static_cast<std::size_t>(axis)];
    out[n] = (v[n] - v[n - stride]) / ax.step(i);
  });
  return out;
}

MeshFunction forward_diff(const MeshFunction& v, int axis) {
  const TensorMesh& mesh = v.mesh();
  check_axis(mesh, axis);
  const int d = mesh.dim();
  const Axis& ax = mesh.axis(axis);
  const std::vector<std::size_t> strides = node_strides(mesh);
  const std::size_t stride = strides[static_cast<std::size_t>(axis)];

  MeshFunction out(mesh);
  std::vector<int> lo(static_cast<std::size_t>(d), 0);
  std::vector<int> hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments();
  lo[static_cast<std::size_t>(axis)] = 1;
  hi[static_cast<std::size_t>(axis)] = ax.segments() - 1;
  for_each_index(lo, hi, [&](std::span<const int> idx) {
    const std::size_t n = mesh.node_index(idx);
    const int i = idx[static_cast<std::size_t>(axis)];
    out[n] = (v[n + stride] - v[n]) / ax.half_step(i);
  });
  return out;
}

MeshFunction mu_transverse(const MeshFunction& v, int axis) {
  const TensorMesh& mesh = v.mesh();
  check_axis(mesh, axis);
  const int d = mesh.dim();
  if (d < 2) throw std::invalid_argument("mu_transverse needs d >= 2");
  const std::vector<std::size_t> strides = node_strides(mesh);

  std::vector<int> trans;
  trans.reserve(static_cast<std::size_t>(d - 1));
  for (int a = 0; a < d; ++a) {
    if (a != axis) trans.push_back(a);
  }
  const int nt = d - 1;
  const int corners = 1 << nt;
  const double prefactor = 1.0 / static_cast<double>(1 << (d + 1));

  MeshFunction out(mesh);
  std::vector<int> lo(static_cast<std::size_t>(d), 1);
  std::vector<int> hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments() - 1;
  lo[static_cast<std::size_t>(axis)] = 0;
  hi[static_cast<std::size_t>(axis)] = mesh.axis(axis).segments();

  for_each_index(lo, hi, [&](std::span<const int> idx) {
    const std::size_t n = mesh.node_index(idx);
    // Product of transverse half-steps at this node.
    double hbar_prod = 1.0;
    for (int t : trans) hbar_prod *= mesh.axis(t).half_step(idx[static_cast<std::size_t>(t)]);

    double acc = 0.75 * v[n];  // 3*2^{d-1} * hbar_prod / (2^{d+1} * hbar_prod)
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      std::ptrdiff_t off = 0;
      for (int b = 0; b < nt; ++b) {
        const int t = trans[static_cast<std::size_t>(b)];
        const int it = idx[static_cast<std::size_t>(t)];
        const auto st = static_cast<std::ptrdiff_t>(strides[static_cast<std::size_t>(t)]);
        if (c & (1 << b)) {
          w *= mesh.axis(t).step(it + 1);
          off += st;
        } else {
          w *= mesh.axis(t).step(it);
          off -= st;
        }
      }
      acc += prefactor * (w / hbar_prod) * v[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(n) + off)];
    }
    out[n] = acc;
  });
  return out;
}

std::vector<double> apply_Lh(const MeshFunction& v) {
  const TensorMesh& mesh = v.mesh();
  const int d = mesh.dim();
  const std::vector<std::size_t> strides = node_strides(mesh);

  std::vector<double> out(mesh.interior_count(), 0.0);
  for (int a = 0; a < d; ++a) {
    const MeshFunction w = mu_transverse(v, a);
    const Axis& ax = mesh.axis(a);
    const std::size_t stride = strides[static_cast<std::size_t>(a)];
    for_each_interior(mesh, [&](std::span<const int> idx) {
      const int i = idx[static_cast<std::size_t>(a)];
      const std::size_t n = mesh.node_index(idx);
      const double dplus = (w[n + stride] - w[n]) / ax.step(i + 1);
      const double dminus = (w[n] - w[n - stride]) / ax.step(i);
      out[mesh.interior_index(idx)] -= (dplus - dminus) / ax.half_step(i);
    });
  }
  return out;
}

SparseOperator assemble_Lh(const TensorMesh& mesh, bool volume_scaled) {
  const int d = mesh.dim();
  const int corners = 1 << (d - 1);
  const double prefactor = 1.0 / static_cast<double>(1 << (d + 1));

  SparseBuilder builder(mesh.interior_count(), mesh.interior_count());
  std::vector<std::pair<std::int32_t, double>> row;
  std::vector<int> col(static_cast<std::size_t>(d));
  std::vector<int> trans;
  trans.reserve(static_cast<std::size_t>(d - 1));

  for_each_interior(mesh, [&](std::span<const int> idx) {
    row.clear();
    const double scale = volume_scaled ? mesh.cell_volume(idx) : 1.0;

    for (int a = 0; a < d; ++a) {
      const Axis& ax = mesh.axis(a);
      const int i = idx[static_cast<std::size_t>(a)];
      const double hbar = ax.half_step(i);
      // L^h = -D+ D- mu, so the weights of mu at axis offsets -1, 0, +1 are:
      const double c_minus = -1.0 / (hbar * ax.step(i));
      const double c_plus = -1.0 / (hbar * ax.step(i + 1));
      const double c_center = -(c_minus + c_plus);

      trans.clear();
      for (int b = 0; b < d; ++b) {
        if (b != a) trans.push_back(b);
      }
      double hbar_prod = 1.0;
      for (int t : trans) hbar_prod *= mesh.axis(t).half_step(idx[static_cast<std::size_t>(t)]);

      for (int o = -1; o <= 1; ++o) {
        const double c_o = (o == -1) ? c_minus : (o == 1) ? c_plus : c_center;
        const int j = i + o;
        const bool j_boundary = (j == 0 || j == ax.segments());

        // Central term of mu at axis index j.
        if (!j_boundary) {
          std::copy(idx.begin(), idx.end(), col.begin());
          col[static_cast<std::size_t>(a)] = j;
          row.emplace_back(static_cast<std::int32_t>(mesh.interior_index(col)), scale * c_o * 0.75);
        }
        if (j_boundary) continue;  // all corner columns share axis index j

        for (int c = 0; c < corners; ++c) {
          std::copy(idx.begin(), idx.end(), col.begin());
          col[static_cast<std::size_t>(a)] = j;
          double w = 1.0;
          bool dropped = false;
          for (std::size_t b = 0; b < trans.size(); ++b) {
            const int t = trans[b];
            const int it = idx[static_cast<std::size_t>(t)];
            if (c & (1 << b)) {
              w *= mesh.axis(t).step(it + 1);
              col[static_cast<std::size_t>(t)] = it + 1;
              if (it + 1 >= mesh.axis(t).segments()) dropped = true;
            } else {
              w *= mesh.axis(t).step(it);
              col[static_cast<std::size_t>(t)] = it - 1;
              if (it - 1 <= 0) dropped = true;
            }
          }
          if (dropped) continue;
          row.emplace_back(static_cast<std::int32_t>(mesh.interior_index(col)),
                           scale * c_o * prefactor * w / hbar_prod);
        }
      }
    }
    builder.add_row(row);
  });
  return builder.finish(volume_scaled);
}

}  // namespace fvlab
