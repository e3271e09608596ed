#pragma once

#include <cstddef>
#include <functional>

#include "hypervar/tail_estimate.hpp"

namespace hypervar {

using TailFunction = std::function<TailEstimate(double)>;

/// Direction in which G moves as R grows.
enum class Monotonicity { Nonincreasing, Nondecreasing };

struct RootResult {
    double R = 0.0;
    TailEstimate gAtR;
    std::size_t iterations = 0;
};

/// Finds R >= 0 with |g(R) - alpha| <= tol.
///
/// The bracket grows by doubling from [0, 1] until it straddles alpha, then
/// Brent's method (inverse quadratic / secant steps guarded by bisection)
/// shrinks it. `g` must be a deterministic monotone function; Monte Carlo
/// evaluators satisfy this by reusing one sample set.
///
/// Throws NoSolution when g(0) is already on the wrong side of alpha, and
/// BracketOverflow when the upper end passes 1e6 without crossing.
RootResult solveR(double alpha, const TailFunction& g, double tol,
                  Monotonicity direction = Monotonicity::Nonincreasing);

/// V = R^2 / 2 - theta.
double varFromR(double R, double theta);

/// Solver tolerance on |g(R) - alpha|: 1e-4 for deterministic paths,
/// max(1e-4, SE / 2) for Monte Carlo paths.
double defaultTolerance(double standardError);

}  // namespace hypervar
