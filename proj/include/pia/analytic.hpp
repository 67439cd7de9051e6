#pragma once

#include "pia/curves.hpp"
#include "pia/mechanisms.hpp"
#include "pia/quadrature.hpp"

namespace pia {

// Exact expected revenues in quantile space. Every integral is split at the
// curve's kinks and at the points where a composed quantile map changes
// regime, then handled by adaptive quadrature.
//
// Atom coupling: on curves with point masses (triangle, truncated equal
// revenue, piecewise linear) these integrals evaluate the mechanisms exactly
// as implemented, with the strict comparison of the inflated auction and the
// weak acceptance of posted prices, so they agree with the Monte-Carlo
// oracle in expectation.

// Second price auction, no reserve: n(n-1) * Int_0^1 R(q) (1-q)^(n-2) dq.
// Also evaluates the slope form n * Int_0^1 R'(q) (1-q)^(n-1) dq and throws
// if the two disagree beyond 10 * abs_tol.
double spa_revenue(const RevenueCurve& curve, int n, const QuadratureConfig& cfg = {});

// Second price auction with reserve r (sells when the top bid is >= r).
double reserve_spa_revenue(const RevenueCurve& curve, double reserve, int n,
                           const QuadratureConfig& cfg = {});

// Myerson-optimal revenue: reserve at the monopoly price; R* for n = 1.
double optimal_revenue(const RevenueCurve& curve, int n, const QuadratureConfig& cfg = {});

// Inflated second price auction: the highest bidder buys at (1+delta) times
// the second bid only if strictly above it.
double inflated_spa_revenue(const RevenueCurve& curve, int n, double delta,
                            const QuadratureConfig& cfg = {});

double mixed_inflated_spa_revenue(const RevenueCurve& curve, int n, double epsilon, double delta,
                                  const QuadratureConfig& cfg = {});

// Posting alpha * s to a single buyer, sample and value i.i.d. from the curve:
// Int_0^1 R(quantile_of(alpha * v(q))) dq.
double pts_revenue(const RevenueCurve& curve, double alpha, const QuadratureConfig& cfg = {});

double randomized_pts_revenue(const RevenueCurve& curve, double zeta, double rho, double epsilon,
                              double delta, const QuadratureConfig& cfg = {});

// Area under the revenue curve, Int_0^1 R(q) dq.
double curve_area(const RevenueCurve& curve, const QuadratureConfig& cfg = {});

double revenue_ratio(double mech_revenue, double opt_revenue);

// Dispatch on a mechanism description; post-the-sample variants require n = 1.
double mechanism_revenue(const MechanismSpec& spec, const RevenueCurve& curve, int n,
                         const QuadratureConfig& cfg = {});

} // namespace pia
