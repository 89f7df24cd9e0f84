#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace qgrad {

/// Node-indexed values on the interior nodes of a mesh. Homogeneous Dirichlet
/// data is implied on the boundary.
using Field = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 0;       // interior nodes
  double spacing = 0;  // (hi - lo) / (count + 1)

  double node(int i) const { return lo + (i + 1) * spacing; }
};

/// Uniform interval (dim 1) or rectangle (dim 2). Interior node (i, j) maps to
/// the linear index i + nx * j.
class Mesh {
 public:
  Mesh() = default;
  Mesh(int dim, std::array<Axis, 2> axes);

  int dim() const { return dim_; }
  const Axis& axis(int k) const { return axes_[k]; }
  int size() const { return size_; }

  int index(int i, int j = 0) const { return i + axes_[0].count * j; }
  std::array<int, 2> multi_index(int k) const;
  std::array<double, 2> coords(int k) const;

  /// Measure of the cell owned by each interior node (lumped quadrature weight).
  double cell_measure() const;

  bool boundary_adjacent(int k) const;

 private:
  int dim_ = 0;
  std::array<Axis, 2> axes_{};
  int size_ = 0;
};

/// Bounds are (lo, hi) pairs per axis; counts are interior node counts.
Mesh build_mesh(int dim, std::span<const std::array<double, 2>> bounds,
                std::span<const int> counts);

/// Finite-difference realization of -Laplace and grad on a mesh.
///
/// `stiffness` is the 3/5-point negative Laplacian divided by spacing^2 (strong
/// form). The quadrature-weighted stiffness q * stiffness is the Riesz map of the
/// discrete H^1_0 inner product; its Cholesky factor is kept for dual norms.
class Operators {
 public:
  explicit Operators(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  int size() const { return mesh_.size(); }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const SparseMatrix& diff(int k) const { return diff_[k]; }
  const Field& weights() const { return weights_; }
  double cell_measure() const { return cell_measure_; }

  /// Solves (q * stiffness) x = rhs.
  Field riesz(const Field& rhs) const;

 private:
  Mesh mesh_;
  SparseMatrix stiffness_;
  std::array<SparseMatrix, 2> diff_;
  Field weights_;
  double cell_measure_;
  Eigen::SimplicialLLT<SparseMatrix> riesz_factor_;
};

using OperatorsPtr = std::shared_ptr<const Operators>;

OperatorsPtr assemble_operators(const Mesh& mesh);

void check_size(const Operators& ops, const Field& u);

/// Discrete H^1_0 norm, sqrt(q u^T A u).
double h1_norm(const Operators& ops, const Field& u);

/// Lumped quadrature sum_i q_i f_i.
double integrate(const Operators& ops, const Field& f);

/// Nodewise |grad u|^2 from centered differences with zero boundary neighbours.
Field grad_squared(const Operators& ops, const Field& u);

/// Dual (H^-1) norm sqrt(g^T (qA)^-1 g) of a quadrature-weighted residual g.
double dual_norm(const Operators& ops, const Field& g);

/// Samples of prod_k sin(pi (x_k - lo_k) / (hi_k - lo_k)): positive interior bump.
Field sine_bump(const Mesh& mesh);

}  // namespace qgrad
