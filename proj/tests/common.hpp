#pragma once

#include <array>
#include <string>

#include "qgrad/expr.hpp"
#include "qgrad/model.hpp"

namespace testing {

inline qgrad::OperatorsPtr line(double lo, double hi, int n) {
  const std::array<std::array<double, 2>, 1> b{{{lo, hi}}};
  const std::array<int, 1> c{n};
  return qgrad::assemble_operators(qgrad::build_mesh(1, b, c));
}

inline qgrad::Field field(const qgrad::Mesh& m, const std::string& text) {
  return qgrad::expr::sample(qgrad::expr::parse(text), m);
}

inline qgrad::ProblemSpec problem(const qgrad::OperatorsPtr& ops, double mu, const std::string& cplus,
                                  const std::string& cminus, const std::string& h,
                                  double lambda = 0.0) {
  const auto& m = ops->mesh();
  return qgrad::make_problem(ops, mu, field(m, cplus), field(m, cminus), field(m, h), lambda);
}

}  // namespace testing
