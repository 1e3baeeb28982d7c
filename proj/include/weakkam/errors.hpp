#pragma once

#include <stdexcept>
#include <string>

namespace weakkam {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvaluationError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct CoercivityError : Error {
  using Error::Error;
};

// Signals that the queried level lies below the local minimum of G(x,.),
// i.e. the sublevel set at (x, a) is empty.
struct EmptySublevel : Error {
  double x;
  double level;
  double min_value;
  EmptySublevel(double x_, double level_, double min_value_)
      : Error("empty sublevel at x=" + std::to_string(x_) +
              ", a=" + std::to_string(level_) +
              ", min_p=" + std::to_string(min_value_)),
        x(x_), level(level_), min_value(min_value_) {}
};

struct UnboundedSearch : Error {
  using Error::Error;
};

struct ClassificationError : Error {
  double c_f_H, c_H, c_f_G, c_G;
  ClassificationError(const std::string& msg, double cfh, double ch, double cfg, double cg)
      : Error(msg + " (c_f_H=" + std::to_string(cfh) + ", c_H=" + std::to_string(ch) +
              ", c_f_G=" + std::to_string(cfg) + ", c_G=" + std::to_string(cg) + ")"),
        c_f_H(cfh), c_H(ch), c_f_G(cfg), c_G(cg) {}
};

struct CaseError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  double residual;
  ConvergenceError(const std::string& msg, double residual_)
      : Error(msg + " (residual=" + std::to_string(residual_) + ")"), residual(residual_) {}
};

struct InternalError : Error {
  using Error::Error;
};

}  // namespace weakkam
