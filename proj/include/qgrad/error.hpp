#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace qgrad {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMeshError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalDomainError : public Error {
 public:
  EvalDomainError(const std::string& what, double x, double y)
      : Error(what), x_(x), y_(y) {}
  double x() const { return x_; }
  double y() const { return y_; }

 private:
  double x_, y_;
};

/// Violation of the structural assumptions on (mu, c+, c-, h).
class SpecError : public Error {
 public:
  SpecError(const std::string& what, std::vector<int> nodes = {})
      : Error(what), nodes_(std::move(nodes)) {}
  const std::vector<int>& nodes() const { return nodes_; }

 private:
  std::vector<int> nodes_;
};

class TransformDomainError : public Error {
 public:
  TransformDomainError(const std::string& what, int node) : Error(what), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, double cond_estimate)
      : Error(what), cond_(cond_estimate) {}
  double cond_estimate() const { return cond_; }

 private:
  double cond_;
};

/// Iterative method failed to converge; carries the last iterate for inspection.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last = {}, int iterations = 0)
      : Error(what), last_(std::move(last)), iterations_(iterations) {}
  const Eigen::VectorXd& last_iterate() const { return last_; }
  int iterations() const { return iterations_; }

 private:
  Eigen::VectorXd last_;
  int iterations_;
};

class NoEigenvalueError : public Error {
 public:
  using Error::Error;
};

class BarrierError : public Error {
 public:
  using Error::Error;
};

class MonotonicityError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class UnboundedError : public Error {
 public:
  using Error::Error;
};

class BlowdownError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgrad
