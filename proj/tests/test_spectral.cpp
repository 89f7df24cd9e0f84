#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "oracles.hpp"
#include "qgrad/error.hpp"
#include "qgrad/linalg.hpp"
#include "qgrad/spectral.hpp"

using namespace qgrad;
using std::numbers::pi;
using testing::field;
using testing::line;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

// Dense oracle for md: restrict to {d = 0} and solve (K - mu H) w = md K w.
double md_oracle(const Operators& ops, const Field& d, const Field& h, double mu, bool l2) {
  std::vector<int> idx;
  for (int i = 0; i < d.size(); ++i)
    if (d[i] <= 0.0) idx.push_back(i);
  const Eigen::MatrixXd a = dense(ops.stiffness());
  Eigen::MatrixXd k(idx.size(), idx.size()), hh = Eigen::MatrixXd::Zero(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    hh(r, r) = h[idx[r]];
    for (std::size_t c = 0; c < idx.size(); ++c) k(r, c) = a(idx[r], idx[c]);
  }
  const Eigen::MatrixXd b = l2 ? Eigen::MatrixXd::Identity(idx.size(), idx.size()) : k;
  return oracle::smallest_pencil(k - mu * hh, b);
}

}  // namespace

TEST_CASE("coercivity constant") {
  const auto ops = line(0, 1, 100);
  const Mesh& m = ops->mesh();
  const Field zero = Field::Zero(m.size());

  SUBCASE("excluded everywhere") {
    const MdResult r = compute_md(*ops, Field::Ones(m.size()), zero, 1.0);
    CHECK(std::isinf(r.value));
    CHECK(r.subspace_dim == 0);
    CHECK_FALSE(r.minimizer.has_value());
    CHECK(std::isinf(compute_md_l2(*ops, Field::Ones(m.size()), zero, 1.0)));
  }
  SUBCASE("no forcing") {
    const MdResult r = compute_md(*ops, zero, zero, 1.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("constant forcing") {
    const Field h = Field::Ones(m.size());
    const MdResult r = compute_md(*ops, zero, h, 1.0);
    const double lam = stiffness_lambda_min(m);
    CHECK(r.value == doctest::Approx(1.0 - 1.0 / lam).epsilon(1e-10));
    CHECK(r.value == doctest::Approx(md_oracle(*ops, zero, h, 1.0, false)).epsilon(1e-10));
    CHECK(r.value == doctest::Approx(1.0 - 1.0 / (pi * pi)).epsilon(1e-3));
    CHECK(compute_md_l2(*ops, zero, h, 1.0) ==
          doctest::Approx(md_oracle(*ops, zero, h, 1.0, true)).epsilon(1e-10));
    REQUIRE(r.minimizer.has_value());
    CHECK(h1_norm(*ops, *r.minimizer) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.minimizer->minCoeff() > 0.0);
  }
  SUBCASE("minimizer vanishes on the excluded set") {
    const Field d = field(m, "if x < 0.3 then 1 else 0");
    const Field h = field(m, "2 + sin(5*x)");
    const MdResult r = compute_md(*ops, d, h, 1.5);
    REQUIRE(r.minimizer.has_value());
    for (int i = 0; i < m.size(); ++i)
      if (d[i] > 0) CHECK((*r.minimizer)[i] == 0.0);
    CHECK(r.value == doctest::Approx(md_oracle(*ops, d, h, 1.5, false)).epsilon(1e-9));
  }
  SUBCASE("both normalizations turn negative together") {
    const Field h = Field::Constant(m.size(), 2 * pi * pi);
    CHECK(compute_md(*ops, zero, h, 1.0).value < 0.0);
    CHECK(compute_md_l2(*ops, zero, h, 1.0) < 0.0);
    CHECK(md_sign_equivalence(*ops, zero, h, 1.0));
  }
  SUBCASE("shrinking the admissible set raises md") {
    const Field h = field(m, "20*x*(1 - x)");
    double prev = -HUGE_VAL;
    for (double cut : {0.0, 0.2, 0.4, 0.6}) {
      const Field d = field(m, "if x < " + std::to_string(cut) + " then 1 else 0");
      const double v = compute_md(*ops, d, h, 1.0).value;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("md sign equivalence on random instances") {
  const auto ops = line(0, 1, 100);
  const Mesh& m = ops->mesh();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  int agree = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = a + 0.3 + 0.6 * u(rng) * (1 - a);
    Field d(m.size()), h(m.size());
    const double amp = 40 * u(rng), shift = 20 * (u(rng) - 0.5), freq = 1 + 6 * u(rng);
    for (int i = 0; i < m.size(); ++i) {
      const double x = m.coords(i)[0];
      d[i] = (x > a && x < b) ? 0.0 : u(rng);
      h[i] = shift + amp * std::sin(freq * x);
    }
    agree += md_sign_equivalence(*ops, d, h, 0.5 + u(rng));
  }
  CHECK(agree == 50);
}

TEST_CASE("linearized operator") {
  const auto ops = line(0, 1, 60);
  const Mesh& m = ops->mesh();
  const double dx = m.axis(0).spacing;
  const auto spec = testing::problem(ops, 1.3, "1", "0", "0.2");
  CHECK((dense(assemble_linearized(spec, Field::Zero(m.size()))) - dense(ops->stiffness()))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // Stencil oracle: (L w)_i = (2 w_i - w_{i-1} - w_{i+1}) / dx^2 - 2 mu u0'_i w'_i.
  const Field u0 = field(m, "sin(3*x) + x^2");
  const Field w = field(m, "exp(x) - 1 + cos(7*x)");
  const Field lw = assemble_linearized(spec, u0) * w;
  auto at = [&](const Field& f, int i) { return i < 0 || i >= f.size() ? 0.0 : f[i]; };
  for (int i = 0; i < m.size(); ++i) {
    const double du = (at(u0, i + 1) - at(u0, i - 1)) / (2 * dx);
    const double dw = (at(w, i + 1) - at(w, i - 1)) / (2 * dx);
    const double ref = (2 * w[i] - at(w, i - 1) - at(w, i + 1)) / (dx * dx) - 2 * 1.3 * du * dw;
    CHECK(lw[i] == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("principal eigenvalue") {
  SUBCASE("unit interval") {
    const auto ops = line(0, 1, 400);
    const Field one = Field::Ones(ops->size());
    const EigenPair ep = principal_eigenvalue(*ops, ops->stiffness(), one);
    CHECK(std::abs(ep.gamma1 - pi * pi) <= 5e-3 * pi * pi);
    CHECK(ep.phi1.minCoeff() > 0.0);
    CHECK(h1_norm(*ops, ep.phi1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ep.residual <= kTolEig);
    CHECK(ep.concave);
    CHECK(ep.mu1_curve.size() == 21);
  }
  SUBCASE("dense match") {
    const auto ops = line(0, 1, 100);
    const Mesh& m = ops->mesh();
    const Field w = field(m, "1 + x*(1 - x)");
    const SparseMatrix l = ops->stiffness();
    const Eigen::MatrixXd mm = w.asDiagonal();
    const double ref = oracle::smallest_pencil(dense(l), mm);
    CHECK(principal_eigenvalue(*ops, l, w).gamma1 == doctest::Approx(ref).epsilon(1e-6));
    CHECK(principal_eigenvalue(*ops, l, 2.0 * w).gamma1 == doctest::Approx(ref / 2).epsilon(1e-8));
  }
  SUBCASE("absorption shifts by its level") {
    const auto ops = line(0, 1, 100);
    const Field one = Field::Ones(ops->size());
    SparseMatrix l = ops->stiffness();
    const EigenPair ep = principal_eigenvalue(*ops, SparseMatrix(l + diagonal(one)), one);
    CHECK(ep.gamma1 == doctest::Approx(stiffness_lambda_min(ops->mesh()) + 1.0).epsilon(1e-8));
  }
  SUBCASE("indefinite weight") {
    const auto ops = line(0, 1, 100);
    const Field w = field(ops->mesh(), "if x < 0.5 then 0 else 1");
    const EigenPair ep = principal_eigenvalue(*ops, ops->stiffness(), w);
    CHECK(ep.gamma1 > pi * pi);
    CHECK(ep.phi1.minCoeff() > 0.0);
  }
  SUBCASE("no weight") {
    const auto ops = line(0, 1, 20);
    CHECK_THROWS_AS(principal_eigenvalue(*ops, ops->stiffness(), Field::Zero(20)), NoEigenvalueError);
    CHECK_THROWS_AS(principal_eigenvalue(*ops, ops->stiffness(), -Field::Ones(20)), NoEigenvalueError);
  }
}

TEST_CASE("max and anti-max probe") {
  const auto ops = line(0, 1, 100);
  const Mesh& m = ops->mesh();
  const Field one = Field::Ones(m.size());
  const SparseMatrix& a = ops->stiffness();
  const double g1 = principal_eigenvalue(*ops, a, one).gamma1;

  CHECK(max_antimax_probe(m, a, one, 0.0, one) == ProbeSign::positive);
  CHECK(max_antimax_probe(m, a, one, 0.5 * g1, field(m, "exp(x)")) == ProbeSign::positive);
  CHECK(max_antimax_probe(m, a, one, 1.05 * g1, one) == ProbeSign::negative);
  CHECK(max_antimax_probe(m, a, one, g1, one) == ProbeSign::no_solution_like);
  CHECK_THROWS_AS(max_antimax_probe(m, a, one, 0.0, -one), PreconditionError);
  CHECK_THROWS_AS(max_antimax_probe(m, a, one, 0.0, Field::Zero(m.size())), PreconditionError);

  // Independent dense solve confirms the anti-maximum sign just above gamma1.
  const Eigen::MatrixXd op = dense(a) - 1.05 * g1 * Eigen::MatrixXd::Identity(m.size(), m.size());
  const Eigen::VectorXd w = op.partialPivLu().solve(Eigen::VectorXd::Ones(m.size()));
  CHECK(w.maxCoeff() < 0.0);
}
