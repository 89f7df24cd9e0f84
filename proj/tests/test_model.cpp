#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "oracles.hpp"
#include "qgrad/error.hpp"
#include "qgrad/model.hpp"

using namespace qgrad;
using testing::field;
using testing::line;
using testing::problem;

namespace {

constexpr double e = std::numbers::e;

// Frozen from oracle::integrate of g over [0, -1] with mu = 1.
constexpr double kGminus1 = 0.25;

Barrier flat(const ProblemSpec& spec, double level) {
  return make_barrier(spec, Field::Constant(spec.size(), level), BarrierSource::constant_fallback);
}

}  // namespace

TEST_CASE("g and G closed forms") {
  CHECK(g_fun(0.0, 1.0) == 0.0);
  CHECK(g_fun(e - 1.0, 1.0) == doctest::Approx(e).epsilon(1e-15));
  CHECK(g_fun(-5.0, 1.0) == 0.0);
  CHECK(G_fun(0.0, 1.0) == 0.0);
  CHECK(G_fun(e - 1.0, 1.0) == doctest::Approx((e * e + 1.0) / 4.0).epsilon(1e-15));
  CHECK(G_fun(-1.0, 1.0) == doctest::Approx(kGminus1).epsilon(1e-15));
  CHECK(G_fun(-7.0, 1.0) == doctest::Approx(kGminus1).epsilon(1e-15));

  const double golden = -oracle::integrate([](double t) { return g_fun(t, 1.0); }, -1.0, 0.0);
  CHECK(golden == doctest::Approx(kGminus1).epsilon(1e-12));

  for (double mu : {0.5, 1.0, 3.0})
    for (double s : {-0.3 / mu, 0.2, 1.7, 12.0}) {
      const double q = oracle::integrate([mu](double t) { return g_fun(t, mu); }, 0.0, s);
      CHECK(G_fun(s, mu) == doctest::Approx(q).epsilon(1e-11));
      const double d = 1e-6 * std::max(1.0, std::abs(s));
      const double fd = (g_fun(s + d, mu) - g_fun(s - d, mu)) / (2 * d);
      CHECK(g_prime(s, mu) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("growth and sign properties of g and G") {
  for (double mu : {0.5, 1.0, 2.0}) {
    double dmax = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double s = -10.0 + 20.0 * k / 10000;
      const double g = g_fun(s, mu);
      CHECK(g - s >= 0.0);
      CHECK(G_fun(s, mu) >= 0.0);
      if (s > 0) CHECK(g > 0.0);
      if (s > -1.0 / mu && s <= 0) {
        CHECK(g <= 0.0);
        dmax = std::max(dmax, -g);
      }
    }
    CHECK(dmax == doctest::Approx(1.0 / (e * mu)).epsilon(1e-3));
    double prev = 0.0;
    for (double s : {10.0, 100.0, 1000.0}) {
      CHECK(G_fun(s, mu) / (s * s) > prev);
      prev = G_fun(s, mu) / (s * s);
    }
  }
}

TEST_CASE("Cole-Hopf transform") {
  const Field zero = Field::Zero(4);
  CHECK(cole_hopf(zero, 1.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(cole_hopf(Field::Constant(1, std::log(2.0)), 1.0)[0] == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (double mu : {0.25, 1.0, 4.0}) {
    Field x(1000);
    for (auto& v : x) v = u(rng) / mu;
    CHECK((inverse_cole_hopf(cole_hopf(x, mu), mu) - x).cwiseAbs().maxCoeff() <= 1e-12);
  }

  Field bad = Field::Zero(5);
  bad[3] = -1.0;
  try {
    inverse_cole_hopf(bad, 1.0);
    FAIL("expected a transform error");
  } catch (const TransformDomainError& err) {
    CHECK(err.node() == 3);
  }
}

TEST_CASE("assumption checks") {
  const auto ops = line(0, 1, 10);
  const auto& m = ops->mesh();
  CHECK(check_spec(1.0, field(m, "1"), field(m, "0"), field(m, "x")).empty());
  const auto both = check_spec(1.0, field(m, "1"), field(m, "1"), field(m, "0"));
  REQUIRE(both.size() == 1);
  CHECK(both[0].nodes.size() == 10);
  CHECK(!check_spec(1.0, field(m, "0"), field(m, "0"), field(m, "0")).empty());
  CHECK(!check_spec(0.0, field(m, "1"), field(m, "0"), field(m, "0")).empty());
  CHECK(!check_spec(1.0, field(m, "x - 0.5"), field(m, "0"), field(m, "0")).empty());
  CHECK_THROWS_AS(problem(ops, 1.0, "1", "1", "0"), SpecError);

  const auto spec = problem(ops, 2.0, "1", "0", "0");
  CHECK_THROWS_AS(flat(spec, -0.5), BarrierError);
  CHECK(flat(spec, -0.4).margin > 0.0);
}

TEST_CASE("truncated nonlinearity") {
  const auto ops = line(0, 1, 20);
  const auto h0 = problem(ops, 1.0, "1 + x", "0", "0", 2.0);
  const Barrier b = flat(h0, -0.5);
  CHECK(f_lambda(h0, b, Field::Zero(20)).cwiseAbs().maxCoeff() == 0.0);

  const auto spec = problem(ops, 1.0, "if x < 0.5 then 1 else 0", "if x < 0.5 then 0 else 2",
                            "sin(7*x)", 3.0);
  const Barrier lowb = flat(spec, -0.2);
  const Field f1 = f_lambda(spec, lowb, Field::Constant(20, -0.5));
  const Field f2 = f_lambda(spec, lowb, Field::Constant(20, -0.9));
  CHECK((f1 - f2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f_lambda_prime(spec, lowb, Field::Constant(20, -0.5)).cwiseAbs().maxCoeff() == 0.0);

  const auto unit = problem(ops, 1.0, "1", "0", "1", 0.0);
  const Field two = f_lambda(unit, flat(unit, -0.5), Field::Ones(20));
  CHECK((two.array() - 2.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("primitive is affine below the barrier") {
  const auto ops = line(0, 1, 30);
  const auto spec = problem(ops, 1.5, "1", "0", "cos(3*x)", 4.0);
  const Barrier b = flat(spec, -0.3);
  const Field s0 = Field::Constant(30, -0.62), s1 = Field::Constant(30, -0.5);
  const Field s2 = Field::Constant(30, -0.38);
  const Field dd = F_lambda(spec, b, s0) - 2.0 * F_lambda(spec, b, s1) + F_lambda(spec, b, s2);
  const double scale = F_lambda(spec, b, s0).cwiseAbs().maxCoeff();
  CHECK(dd.cwiseAbs().maxCoeff() <= 8.0 * std::numeric_limits<double>::epsilon() * scale);
}

TEST_CASE("energy values and gradient") {
  const auto ops = line(0, 1, 40);
  const auto zero_h = problem(ops, 1.0, "1", "0", "0", 3.0);
  const Barrier b0 = flat(zero_h, -0.5);
  const EnergyReport r0 = energy(zero_h, b0, Field::Zero(40));
  CHECK(r0.value == 0.0);
  CHECK(r0.gradient.cwiseAbs().maxCoeff() == 0.0);

  const auto spec = problem(ops, 2.0, "x", "0", "1 + sin(5*x)", 3.0);
  const Barrier b = flat(spec, -0.3);
  CHECK(energy_value(spec, b, Field::Zero(40)) ==
        doctest::Approx(-integrate(*ops, spec.h) / (2.0 * spec.mu)).epsilon(1e-14));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Field v(40), w(40);
    for (int i = 0; i < 40; ++i) {
      v[i] = 0.2 + 0.45 * u(rng);  // some nodes fall below the barrier
      w[i] = u(rng);
    }
    const double eps = 1e-6;
    const double fd =
        (energy_value(spec, b, v + eps * w) - energy_value(spec, b, v - eps * w)) / (2 * eps);
    const double exact = energy_gradient(spec, b, v).dot(w);
    CHECK(std::abs(fd - exact) <= 1e-5 * std::abs(exact));
  }
}

TEST_CASE("untransformed residual") {
  const auto ops = line(0, 1, 25);
  const auto h0 = problem(ops, 1.0, "1", "0", "0", 2.0);
  CHECK(residual_p(h0, Field::Zero(25)).cwiseAbs().maxCoeff() == 0.0);
  const auto spec = problem(ops, 1.0, "1", "0", "x^2", 2.0);
  CHECK((residual_p(spec, Field::Zero(25)) + ops->cell_measure() * spec.h).cwiseAbs().maxCoeff() ==
        0.0);

  // The exact solution sampled on the grid leaves an O(h^2) residual.
  const double pi = std::numbers::pi;
  double prev = 0.0;
  for (int n : {100, 200, 400}) {
    const auto o = line(-2 * pi, 2 * pi, n);
    const auto ex = problem(o, 1.0, "if x < 0 then 0 else cos(x) + 1", "0",
                            "if x < 0 then cos(x) - sin(x)^2 else 0");
    const Field u0 = field(o->mesh(), "if x < 0 then cos(x) - 1 else 0");
    const double r = dual_norm(*o, residual_p(ex, u0));
    if (prev > 0) CHECK(std::log2(prev / r) == doctest::Approx(2.0).epsilon(0.15));
    prev = r;
  }
}

TEST_CASE("ordering surrogate") {
  const auto ops = line(0, 1, 50);
  const auto& m = ops->mesh();
  const Field zero = Field::Zero(50);
  const Field s1 = field(m, "sin(pi*x)"), s2 = field(m, "sin(2*pi*x)");
  CHECK(check_ordering(zero, zero, m) == Ordering::leq);
  CHECK(check_ordering(zero, s1, m) == Ordering::much_less);
  CHECK(check_ordering(s1, zero, m) == Ordering::incomparable);
  CHECK(check_ordering(s1, s2, m) == Ordering::incomparable);
  CHECK(check_ordering(s2, s1, m) == Ordering::incomparable);
  // Contact at an interior node: strict nowhere, so only leq.
  Field touch = s1;
  touch[25] = 0.0;
  CHECK(check_ordering(zero, touch, m) == Ordering::leq);
  CHECK(ordered(Ordering::much_less, Ordering::strictly_less));
  CHECK(!ordered(Ordering::leq, Ordering::strictly_less));
}
