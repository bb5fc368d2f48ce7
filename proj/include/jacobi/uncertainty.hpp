#pragma once

#include <cstddef>

#include "jacobi/glm.hpp"
#include "jacobi/rng.hpp"

namespace jacobi {

struct BetaDraws {
  Matrix draws;  // N x p, row r is the projection of the r-th latent draw
  SeedSpec seed;
};

/// One draw of the natural parameter from its conjugate posterior, returned
/// on the link scale: logit and probit draw theta ~ Beta(y + a, 1 - y + b)
/// and return log-odds or Phi^{-1}(theta); poisson draws
/// lambda ~ Gamma(y + a, rate 1 + b) and returns log(lambda).
double draw_latent(Family family, double y, Shapes shapes, RandomStream& rng);

/// The same draw on the natural-parameter scale (theta or lambda).
double draw_natural(Family family, double y, Shapes shapes, RandomStream& rng);

/// Latent vector for replicate r, drawn from stream derive_rng(seed, r).
Vector draw_latent_vector(const Vector& y, Family family, Shapes shapes, const SeedSpec& seed,
                          std::size_t replicate);

/// Monte Carlo draws of beta: each replicate samples a latent vector and
/// projects it with a factorization of X computed once. Replicates are
/// independent and run on `threads` workers; the output depends only on
/// (inputs, seed).
BetaDraws sample_beta(const Matrix& X, const Vector& y, Family family, const JacobiHyper& hyper,
                      std::size_t num_draws, const SeedSpec& seed, std::size_t threads = 1);

struct CoefficientSummary {
  Vector mean;
  Vector sd;
  Vector lower;
  Vector upper;
  double level = 0.0;
};

/// Empirical mean, SD (n - 1 denominator) and equal-tailed interval per
/// coefficient. Quantiles use linear interpolation between order statistics.
CoefficientSummary summarize(const BetaDraws& draws, double level);

}  // namespace jacobi
