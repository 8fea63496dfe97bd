#pragma once

#include <stdexcept>
#include <string>

namespace polyscat {

// Base class for all domain errors; the CLI maps these to exit code 1
// (numerical failure) or 2 (invalid input).
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

struct DegeneratePolytope : InvalidInput {
  explicit DegeneratePolytope(const std::string& msg) : InvalidInput(msg) {}
};

struct NotAVertex : InvalidInput {
  explicit NotAVertex(const std::string& msg) : InvalidInput(msg) {}
};

struct SupportOutsideGrid : InvalidInput {
  explicit SupportOutsideGrid(const std::string& msg) : InvalidInput(msg) {}
};

struct EvaluationAtSingularity : Error {
  explicit EvaluationAtSingularity(const std::string& msg) : Error(msg) {}
};

struct NonConvergent : Error {
  explicit NonConvergent(const std::string& msg) : Error(msg) {}
};

struct NoSeparatingVector : Error {
  explicit NoSeparatingVector(const std::string& msg) : Error(msg) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

struct DivergentSeries : Error {
  explicit DivergentSeries(const std::string& msg) : Error(msg) {}
};

struct DirectionMismatch : InvalidInput {
  explicit DirectionMismatch(const std::string& msg) : InvalidInput(msg) {}
};

struct ZeroDenominator : Error {
  explicit ZeroDenominator(const std::string& msg) : Error(msg) {}
};

struct RegionNotLipschitzRepresentable : InvalidInput {
  explicit RegionNotLipschitzRepresentable(const std::string& msg)
      : InvalidInput(msg) {}
};

struct ExtrapolationUnstable : Error {
  explicit ExtrapolationUnstable(const std::string& msg) : Error(msg) {}
};

struct HypothesisViolated : Error {
  explicit HypothesisViolated(const std::string& msg) : Error(msg) {}
};

struct StalledOptimization : Error {
  explicit StalledOptimization(const std::string& msg) : Error(msg) {}
};

struct UnknownResultType : InvalidInput {
  explicit UnknownResultType(const std::string& msg) : InvalidInput(msg) {}
};

}  // namespace polyscat
