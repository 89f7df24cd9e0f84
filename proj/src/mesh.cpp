#include "qgrad/mesh.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qgrad/error.hpp"

namespace qgrad {

Mesh::Mesh(int dim, std::array<Axis, 2> axes) : dim_(dim), axes_(axes) {
  size_ = axes_[0].count * (dim_ == 2 ? axes_[1].count : 1);
}

std::array<int, 2> Mesh::multi_index(int k) const {
  const int nx = axes_[0].count;
  return {k % nx, k / nx};
}

std::array<double, 2> Mesh::coords(int k) const {
  const auto [i, j] = multi_index(k);
  return {axes_[0].node(i), dim_ == 2 ? axes_[1].node(j) : 0.0};
}

double Mesh::cell_measure() const {
  return dim_ == 2 ? axes_[0].spacing * axes_[1].spacing : axes_[0].spacing;
}

bool Mesh::boundary_adjacent(int k) const {
  const auto [i, j] = multi_index(k);
  if (i == 0 || i == axes_[0].count - 1) return true;
  return dim_ == 2 && (j == 0 || j == axes_[1].count - 1);
}

Mesh build_mesh(int dim, std::span<const std::array<double, 2>> bounds,
                std::span<const int> counts) {
  if (dim != 1 && dim != 2) throw InvalidMeshError("mesh dimension must be 1 or 2");
  if (static_cast<int>(bounds.size()) != dim || static_cast<int>(counts.size()) != dim)
    throw InvalidMeshError("expected one bound pair and one count per axis");
  std::array<Axis, 2> axes{};
  for (int k = 0; k < dim; ++k) {
    const auto [lo, hi] = bounds[k];
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
      throw InvalidMeshError("degenerate interval on axis " + std::to_string(k));
    if (counts[k] < 3)
      throw InvalidMeshError("axis " + std::to_string(k) + " needs at least 3 interior nodes");
    axes[k] = Axis{lo, hi, counts[k], (hi - lo) / (counts[k] + 1)};
  }
  return Mesh(dim, axes);
}

Operators::Operators(Mesh mesh) : mesh_(std::move(mesh)) {
  const int n = mesh_.size();
  const int dim = mesh_.dim();
  std::vector<Eigen::Triplet<double>> lap;
  lap.reserve(static_cast<std::size_t>(n) * (2 * dim + 1));
  std::array<std::vector<Eigen::Triplet<double>>, 2> grad;

  for (int k = 0; k < n; ++k) {
    const auto ij = mesh_.multi_index(k);
    for (int a = 0; a < dim; ++a) {
      const double h = mesh_.axis(a).spacing;
      const double inv_h2 = 1.0 / (h * h);
      lap.emplace_back(k, k, 2.0 * inv_h2);
      auto neighbour = ij;
      for (int step : {-1, 1}) {
        neighbour[a] = ij[a] + step;
        if (neighbour[a] < 0 || neighbour[a] >= mesh_.axis(a).count) continue;
        const int kn = mesh_.index(neighbour[0], neighbour[1]);
        lap.emplace_back(k, kn, -inv_h2);
        grad[a].emplace_back(k, kn, step / (2.0 * h));
      }
    }
  }

  stiffness_.resize(n, n);
  stiffness_.setFromTriplets(lap.begin(), lap.end());
  stiffness_.makeCompressed();
  for (int a = 0; a < dim; ++a) {
    diff_[a].resize(n, n);
    diff_[a].setFromTriplets(grad[a].begin(), grad[a].end());
    diff_[a].makeCompressed();
  }
  cell_measure_ = mesh_.cell_measure();
  weights_ = Field::Constant(n, cell_measure_);

  SparseMatrix riesz = cell_measure_ * stiffness_;
  riesz_factor_.compute(riesz);
  if (riesz_factor_.info() != Eigen::Success)
    throw InvalidMeshError("stiffness matrix is not positive definite");
}

Field Operators::riesz(const Field& rhs) const { return riesz_factor_.solve(rhs); }

OperatorsPtr assemble_operators(const Mesh& mesh) {
  return std::make_shared<const Operators>(mesh);
}

void check_size(const Operators& ops, const Field& u) {
  if (u.size() != ops.size())
    throw DimensionError("field has " + std::to_string(u.size()) + " values, mesh has " +
                         std::to_string(ops.size()) + " interior nodes");
}

double h1_norm(const Operators& ops, const Field& u) {
  check_size(ops, u);
  const double quad = ops.cell_measure() * u.dot(ops.stiffness() * u);
  return std::sqrt(std::max(quad, 0.0));
}

double integrate(const Operators& ops, const Field& f) {
  check_size(ops, f);
  return ops.weights().dot(f);
}

Field grad_squared(const Operators& ops, const Field& u) {
  check_size(ops, u);
  Field out = Field::Zero(u.size());
  for (int a = 0; a < ops.mesh().dim(); ++a) {
    const Field d = ops.diff(a) * u;
    out += d.cwiseProduct(d);
  }
  return out;
}

double dual_norm(const Operators& ops, const Field& g) {
  check_size(ops, g);
  return std::sqrt(std::max(g.dot(ops.riesz(g)), 0.0));
}

Field sine_bump(const Mesh& mesh) {
  Field out(mesh.size());
  for (int k = 0; k < mesh.size(); ++k) {
    const auto x = mesh.coords(k);
    double v = 1.0;
    for (int a = 0; a < mesh.dim(); ++a) {
      const auto& ax = mesh.axis(a);
      v *= std::sin(std::numbers::pi * (x[a] - ax.lo) / (ax.hi - ax.lo));
    }
    out[k] = v;
  }
  return out;
}

}  // namespace qgrad
