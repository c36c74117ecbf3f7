#pragma once

#include "freepoints/lattices.hpp"

namespace freepoints {

inline constexpr double kDefaultThetaTol = 1e-10;

struct ThetaValue {
  double value = 0;
  double truncation_radius = 0;
  double tail_bound = 0;  // certified bound on the omitted mass
};

// θ_Λ(R) = Σ_{y∈Λ} exp(−π‖y‖²/R²), truncated at a radius where the certified
// tail bound drops below tol.
ThetaValue ThetaSum(Lattice const& lattice, double radius, double tol, Budget& budget);
ThetaValue ThetaSum(Lattice const& lattice, double radius, double tol = kDefaultThetaTol);

// Upper bound for Σ_{‖y‖>t} exp(−π‖y‖²/R²), non-increasing in t.  Point
// counts come from N(ρ) ≤ Π_i (2ρ/‖b*_i‖ + 1) on an LLL-reduced basis.
double ThetaTailBound(Lattice const& lattice, double radius, double t);

// |θ_Λ(R) − (R^r/det Λ)·θ_{Λ*}(1/R)|; both sides accurate to tol.
double PoissonResidual(Lattice const& lattice, double radius, double tol, Budget& budget);
double PoissonResidual(Lattice const& lattice, double radius,
                       double tol = kDefaultThetaTol);

// exp(πr²)·(det Λ/R^r)·(θ_Λ(R) − R^r/det Λ), evaluated through the dual series
// exp(πr²)·Σ_{z∈Λ*∖0} exp(−πR²‖z‖²).  Every term is non-negative and the
// truncation always keeps ‖z‖ ≤ (r + 1/2)/R, so the returned partial sum is a
// lower estimate within exp(πr²)·tol of the true value.
double SkewMajorant(Lattice const& lattice, double radius, double tol, Budget& budget);
double SkewMajorant(Lattice const& lattice, double radius,
                    double tol = kDefaultThetaTol);

// 𝟏_R(Λ): 1 when s_r(Λ) > R, from exact minima.
bool SkewIndicator(Lattice const& lattice, double radius, Budget& budget);
bool SkewIndicator(Lattice const& lattice, double radius);

}  // namespace freepoints
