// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/besov.hpp"
#include "torus/fluid.hpp"

#include <complex>
#include <optional>

namespace torus {

using ScalarForcing = std::function<SpectralField(double)>;
using VectorForcing = std::function<VectorField(double)>;
using VelocityField = std::function<VectorField(double)>;

// ---------------------------------------------------------------- heat

// d_t u - mu Lap u = f; exact per-mode integrating factor, trapezoid
// Duhamel quadrature for the forcing. Emits steps/snap_stride snapshots.
ScalarSeries heat_solve(const SpectralField& u0, const ScalarForcing& f,
                        double mu, double T, int steps, int snap_stride = 1);

// ------------------------------------------------------ damped transport

// d_t q + u . grad q + alpha q = F; exact damping factor, exponential
// midpoint stepping for the dealiased advection term.
ScalarSeries damped_transport_solve(const SpectralField& q0, const VelocityField& u,
                                    double alpha, const ScalarForcing& F, double T,
                                    int steps, int snap_stride = 1);

// ----------------------------------------------------- linearized system

// d_t q + div u = F - v.grad q
// d_t u - A u + P'(1) grad q = G - v.grad u
// per-mode exact propagator (Helmholtz split: solenoidal heat + 2x2
// compressible block), trapezoid Duhamel for pure forcing, exponential
// midpoint when a convection field v is present.
struct LinearTrajectory {
    std::vector<double> times;
    std::vector<SpectralField> q;
    std::vector<VectorField> u;
};

LinearTrajectory linearized_solve(const SpectralField& q0, const VectorField& u0,
                                  const ScalarForcing& F, const VectorForcing& G,
                                  double mu, double lambda, double p1, double T,
                                  int steps, const VelocityField& conv = nullptr,
                                  int snap_stride = 1);

// ------------------------------------------------------------ Green matrix

enum class SpectralRegime { ComplexPair, DoubleRoot, RealBranches };

// per-mode generator of the linearized density/velocity system at |xi|
struct LinearModeMatrix {
    double xi;
    double nu;
    double p1;
    // acts on (q, div-u amplitude)
    std::array<std::array<double, 2>, 2> generator;
    std::complex<double> lambda_plus;  // larger real part
    std::complex<double> lambda_minus;
    double solenoidal_rate; // -mu |xi|^2, multiplicity N-1
    SpectralRegime regime;
    double xi_star; // 2 sqrt(P'(1)) / nu, regime boundary
};

LinearModeMatrix green_matrix_eigen(double xi, double mu, double lambda, double p1);

// propagator of the 2x2 block over time t
std::array<std::array<double, 2>, 2> green_propagator(double xi, double nu,
                                                      double p1, double t);

// -------------------------------------------------------- effective velocity

// v = grad Lap^{-1} (P(rho) - P(1) - mean); div v = P(rho) - P(1) - mean
VectorField effective_velocity(const SpectralField& rho, const PressureLaw& P);

// v1 = u - v / nu
VectorField effective_velocity_v1(const VectorField& u, const SpectralField& q,
                                  const PressureLaw& P, double nu);

struct BdSolution {
    VectorField v;        // scaled by mu(1) + lambda(1); matches the
                          // constant-coefficient effective velocity when the
                          // viscosity does not vary
    VectorField raw;      // solution of the elliptic equation itself
    double residual;      // L2 residual of the elliptic equation at raw
    int iterations;
};

// variable-coefficient elliptic equation for v, solved by fixed point on
// the constant-coefficient Lame inversion
BdSolution effective_velocity_bd(const SpectralField& rho, const ViscosityModel& model,
                                 const PressureLaw& P);

// --------------------------------------------------------- nonlinear system

VectorField advect(const VectorField& u, const VectorField& w);

// momentum-only forcing wrapped with the model
struct FluidRhs {
    SpectralField dq;
    VectorField du;
};

// right side of the (q,u) formulation; throws VacuumApproach when
// min(1+q) <= 0.1
FluidRhs nonlinear_rhs(const FluidState& state, const ViscosityModel& model,
                       const PressureLaw& P, const VectorField* f = nullptr);

// right side of the effective-velocity formulation; state.u carries v1
FluidRhs reformulated_rhs(const FluidState& state, const ViscosityModel& model,
                          const PressureLaw& P, const VectorField* f = nullptr);

// ------------------------------------------------------------------ simulate

enum class Formulation { Original, EffectiveVelocity };

struct Trajectory {
    Formulation formulation;
    std::vector<double> times;
    std::vector<SpectralField> q;
    std::vector<VectorField> u;  // physical velocity (reconstructed when needed)
    std::vector<VectorField> v1; // effective velocity (reformulated runs only)
};

// test hook: extra sources on both equations (manufactured solutions)
using ExtraSource = std::function<FluidRhs(const FluidState&, double)>;

Trajectory simulate(const FluidState& state0, const ViscosityModel& model,
                    const PressureLaw& P, const VectorForcing& f, double T, int steps,
                    Formulation formulation, int snap_stride = 1,
                    const ExtraSource& extra = nullptr);

// min over the grid of 1 + q
double min_density(const SpectralField& q);

} // namespace torus
