// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/field.hpp"

#include <functional>

namespace torus {

struct NonPositiveViscosity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct CFLViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VacuumApproach : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FixedPointDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroWavenumber : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// barotropic pressure law with reference density 1 and P'(1) > 0
struct PressureLaw {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    double p1() const { return derivative(1.0); }

    // P(rho) = rho^gamma; gamma = 1 is the isothermal law
    static PressureLaw power_law(double gamma);
};

struct ViscosityModel {
    enum class Kind { Constant, BD };
    Kind kind = Kind::Constant;

    double mu = 1.0;
    double lambda = 0.0;

    // BD case: mu(rho) profile; lambda(rho) = rho mu'(rho) - mu(rho)
    std::function<double(double)> mu_of_rho;
    std::function<double(double)> mu_prime;

    static ViscosityModel constant(double mu, double lambda);
    static ViscosityModel bd(std::function<double(double)> mu_of_rho,
                             std::function<double(double)> mu_prime);

    double mu_at(double rho) const;
    double lambda_at(double rho) const;
    // nu = 2 mu + lambda at the reference state
    double nu() const { return 2.0 * mu_at(1.0) + lambda_at(1.0); }
};

// (q, u) with q the relative density deviation, rho = 1 + q
struct FluidState {
    SpectralField q;
    VectorField u;
    double t = 0.0;
};

} // namespace torus
