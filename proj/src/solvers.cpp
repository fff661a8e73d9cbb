// SPDX-License-Identifier: Apache-2.0
#include "torus/solvers.hpp"

#include "torus/kernels.hpp"

#include <cmath>
#include <numbers>

namespace torus {

// ------------------------------------------------------------------ model

PressureLaw PressureLaw::power_law(double gamma)
{
    return {[gamma](double rho) { return std::pow(rho, gamma); },
            [gamma](double rho) { return gamma * std::pow(rho, gamma - 1.0); }};
}

ViscosityModel ViscosityModel::constant(double mu, double lambda)
{
    if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
        throw EllipticityViolation("viscosity: need mu > 0 and lambda + 2 mu > 0");
    ViscosityModel m;
    m.kind = Kind::Constant;
    m.mu = mu;
    m.lambda = lambda;
    return m;
}

ViscosityModel ViscosityModel::bd(std::function<double(double)> mu_of_rho,
                                  std::function<double(double)> mu_prime)
{
    ViscosityModel m;
    m.kind = Kind::BD;
    m.mu_of_rho = std::move(mu_of_rho);
    m.mu_prime = std::move(mu_prime);
    if (!(m.mu_at(1.0) > 0.0) || !(m.mu_at(1.0) + m.lambda_at(1.0) > 0.0))
        throw EllipticityViolation("BD viscosity: need mu(1) > 0 and mu(1)+lambda(1) > 0");
    return m;
}

double ViscosityModel::mu_at(double rho) const
{
    return kind == Kind::Constant ? mu : mu_of_rho(rho);
}

double ViscosityModel::lambda_at(double rho) const
{
    return kind == Kind::Constant ? lambda : rho * mu_prime(rho) - mu_of_rho(rho);
}

// -------------------------------------------------------------- helpers

namespace {

const kernels::Table& K() { return kernels::active(); }

std::vector<double> density_samples(const SpectralField& q)
{
    auto phys = inverse_transform(q);
    for (auto& v : phys)
        v += 1.0;
    return phys;
}

VectorField multiply_pointwise(const VectorField& u, const std::vector<double>& w)
{
    VectorField out(u.grid());
    for (int d = 0; d < u.dim(); ++d)
        out[d] = multiply_pointwise(u[d], w);
    return out;
}

// div((1+q) u), conservation form with dealiased flux
SpectralField mass_flux_divergence(const SpectralField& q, const VectorField& u)
{
    SpectralField rho(q);
    rho[0] += 1.0;
    VectorField flux(u.grid());
    for (int d = 0; d < u.dim(); ++d)
        flux[d] = product(rho, u[d]);
    return divergence(flux);
}

// div(mu(rho) grad u_i) + grad(lambda(rho) div u) with pointwise coefficients
VectorField variable_lame(const VectorField& u, const std::vector<double>& mu_phys,
                          const std::vector<double>& lambda_phys)
{
    VectorField out(u.grid());
    for (int i = 0; i < u.dim(); ++i) {
        SpectralField acc(u.grid());
        for (int j = 0; j < u.dim(); ++j)
            acc += derivative(multiply_pointwise(derivative(u[i], j), mu_phys), j);
        out[i] = std::move(acc);
    }
    VectorField gd = gradient(multiply_pointwise(divergence(u), lambda_phys));
    out += gd;
    return out;
}

double cfl_number(const VectorField& u, double dt)
{
    const int m = u.grid().points_per_dim();
    return lp_norm(u, infinity) * dt * double(m) / (2.0 * std::numbers::pi);
}

// 2x2 matrix applied to a complex pair
inline void apply2(const std::array<std::array<double, 2>, 2>& M, cplx& a, cplx& b)
{
    const cplx na = M[0][0] * a + M[0][1] * b;
    const cplx nb = M[1][0] * a + M[1][1] * b;
    a = na;
    b = nb;
}

// exact per-mode propagator of the frozen-coefficient linear parts
class Propagator {
public:
    enum class Kind { PH, EffVel };

    Propagator(const TorusGrid& g, double mu, double lambda, double p1, double dt,
               Kind kind)
        : grid_(g), kind_(kind), qfactor_(1.0)
    {
        const double nu = 2.0 * mu + lambda;
        const std::size_t n = g.size();
        e_sol_.resize(n);
        if (kind == Kind::PH)
            mats_.resize(n);
        else
            e_comp_.resize(n);
        if (kind == Kind::EffVel)
            qfactor_ = std::exp(-p1 / nu * dt);
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = g.wavevector(i);
            const double k2 = double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            e_sol_[i] = std::exp(-mu * k2 * dt);
            if (kind == Kind::PH) {
                if (k2 == 0.0)
                    mats_[i] = {{{1.0, 0.0}, {0.0, 1.0}}};
                else
                    mats_[i] = green_propagator(std::sqrt(k2), nu, p1, dt);
            } else {
                e_comp_[i] = std::exp(-nu * k2 * dt);
            }
        }
    }

    void apply(SpectralField& q, VectorField& u) const
    {
        const TorusGrid& g = grid_;
        const int dim = g.dim();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto k = g.wavevector(i);
            const double k2 = double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            if (kind_ == Kind::EffVel)
                q[i] *= qfactor_;
            if (k2 == 0.0)
                continue; // no linear action on the mean modes
            cplx kdotu = 0.0;
            for (int d = 0; d < dim; ++d)
                kdotu += double(k[d]) * u[d][i];
            // split off the compressible (along-k) part
            if (kind_ == Kind::PH) {
                cplx b = cplx(0.0, 1.0) * kdotu; // div u amplitude
                apply2(mats_[i], q[i], b);
                const cplx s_new = cplx(0.0, -1.0) * b;
                for (int d = 0; d < dim; ++d) {
                    const cplx comp = kdotu * double(k[d]) / k2;
                    u[d][i] = e_sol_[i] * (u[d][i] - comp) + s_new * double(k[d]) / k2;
                }
            } else {
                for (int d = 0; d < dim; ++d) {
                    const cplx comp = kdotu * double(k[d]) / k2;
                    u[d][i] = e_sol_[i] * (u[d][i] - comp) + e_comp_[i] * comp;
                }
            }
        }
    }

private:
    TorusGrid grid_;
    Kind kind_;
    double qfactor_;
    std::vector<double> e_sol_;
    std::vector<double> e_comp_;
    std::vector<std::array<std::array<double, 2>, 2>> mats_;
};

} // namespace

// ------------------------------------------------------------------- heat

ScalarSeries heat_solve(const SpectralField& u0, const ScalarForcing& f, double mu,
                        double T, int steps, int snap_stride)
{
    if (!(mu > 0.0))
        throw NonPositiveViscosity("heat_solve: mu must be positive");
    if (steps < 1)
        throw std::invalid_argument("heat_solve: steps must be >= 1");
    const TorusGrid& g = u0.grid();
    const double dt = T / steps;
    std::vector<double> factor(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.wavevector(i);
        const double k2 = double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        factor[i] = std::exp(-mu * k2 * dt);
    }
    ScalarSeries out;
    SpectralField u(u0);
    out.push(0.0, u);
    SpectralField fprev = f ? f(0.0) : zero_field(g);
    for (int n = 0; n < steps; ++n) {
        K().cmul_real(u.coeffs().data(), factor.data(), u.size());
        if (f) {
            SpectralField fnext = f((n + 1) * dt);
            SpectralField fp(fprev);
            K().cmul_real(fp.coeffs().data(), factor.data(), fp.size());
            u.axpby(0.5 * dt, fp, 1.0);
            u.axpby(0.5 * dt, fnext, 1.0);
            fprev = std::move(fnext);
        }
        if ((n + 1) % snap_stride == 0 || n + 1 == steps)
            out.push((n + 1) * dt, u);
    }
    return out;
}

// ------------------------------------------------------- damped transport

ScalarSeries damped_transport_solve(const SpectralField& q0, const VelocityField& u,
                                    double alpha, const ScalarForcing& F, double T,
                                    int steps, int snap_stride)
{
    if (alpha < 0.0)
        throw std::invalid_argument("damped_transport_solve: alpha must be >= 0");
    const TorusGrid& g = q0.grid();
    const double dt = T / steps;
    const double e_full = std::exp(-alpha * dt);
    const double e_half = std::exp(-alpha * dt / 2.0);

    auto rhs = [&](const SpectralField& q, double t) {
        SpectralField r = F ? F(t) : zero_field(g);
        if (u) {
            VectorField vel = u(t);
            if (cfl_number(vel, dt) > 1.0)
                throw CFLViolation("damped_transport_solve: advective CFL exceeded");
            r -= advect(vel, q);
        }
        return r;
    };

    ScalarSeries out;
    SpectralField q(q0);
    out.push(0.0, q);
    for (int n = 0; n < steps; ++n) {
        const double t = n * dt;
        SpectralField k1 = rhs(q, t);
        SpectralField half(q);
        half.axpby(0.5 * dt, k1, 1.0);
        half *= e_half;
        SpectralField k2 = rhs(half, t + 0.5 * dt);
        q *= e_full;
        q.axpby(dt * e_half, k2, 1.0);
        if ((n + 1) % snap_stride == 0 || n + 1 == steps)
            out.push((n + 1) * dt, q);
    }
    return out;
}

// ------------------------------------------------------------ Green matrix

std::array<std::array<double, 2>, 2> green_propagator(double xi, double nu, double p1,
                                                      double t)
{
    const double b = nu * xi * xi;       // -trace
    const double c = p1 * xi * xi;       // determinant
    const double m = -0.5 * b;
    const double delta = 0.25 * b * b - c;
    double ch, sn; // cosh(sqrt(delta) t), sinh(sqrt(delta) t)/sqrt(delta)
    if (delta > 1e-300) {
        const double s = std::sqrt(delta);
        ch = std::cosh(s * t);
        sn = std::sinh(s * t) / s;
    } else if (delta < -1e-300) {
        const double w = std::sqrt(-delta);
        ch = std::cos(w * t);
        sn = std::sin(w * t) / w;
    } else {
        ch = 1.0;
        sn = t;
    }
    const double e = std::exp(m * t);
    // generator A = m I + B with B = [[b/2, -1], [c, -b/2]], B^2 = delta I
    return {{{e * (ch + sn * 0.5 * b), e * (-sn)},
             {e * (sn * c), e * (ch - sn * 0.5 * b)}}};
}

LinearModeMatrix green_matrix_eigen(double xi, double mu, double lambda, double p1)
{
    if (!(xi > 0.0))
        throw ZeroWavenumber("green_matrix_eigen: |xi| must be positive");
    if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
        throw EllipticityViolation("green_matrix_eigen: ellipticity violated");
    if (!(p1 > 0.0))
        throw std::invalid_argument("green_matrix_eigen: P'(1) must be positive");
    LinearModeMatrix r;
    r.xi = xi;
    r.nu = 2.0 * mu + lambda;
    r.p1 = p1;
    const double b = r.nu * xi * xi;
    const double c = p1 * xi * xi;
    r.generator = {{{0.0, -1.0}, {c, -b}}};
    r.solenoidal_rate = -mu * xi * xi;
    r.xi_star = 2.0 * std::sqrt(p1) / r.nu;
    const double delta = 0.25 * b * b - c;
    if (delta > 0.0) {
        const double s = std::sqrt(delta);
        r.lambda_plus = -0.5 * b + s;
        r.lambda_minus = -0.5 * b - s;
        r.regime = SpectralRegime::RealBranches;
    } else if (delta < 0.0) {
        const double w = std::sqrt(-delta);
        r.lambda_plus = {-0.5 * b, w};
        r.lambda_minus = {-0.5 * b, -w};
        r.regime = SpectralRegime::ComplexPair;
    } else {
        r.lambda_plus = r.lambda_minus = -0.5 * b;
        r.regime = SpectralRegime::DoubleRoot;
    }
    return r;
}

// ------------------------------------------------------- linearized system

LinearTrajectory linearized_solve(const SpectralField& q0, const VectorField& u0,
                                  const ScalarForcing& F, const VectorForcing& G,
                                  double mu, double lambda, double p1, double T,
                                  int steps, const VelocityField& conv,
                                  int snap_stride)
{
    if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
        throw EllipticityViolation("linearized_solve: ellipticity violated");
    if (!(p1 > 0.0))
        throw std::invalid_argument("linearized_solve: P'(1) must be positive");
    const TorusGrid& g = q0.grid();
    const double dt = T / steps;
    const Propagator e_full(g, mu, lambda, p1, dt, Propagator::Kind::PH);
    const Propagator e_half(g, mu, lambda, p1, 0.5 * dt, Propagator::Kind::PH);

    LinearTrajectory out;
    SpectralField q(q0);
    VectorField u(u0);
    out.times.push_back(0.0);
    out.q.push_back(q);
    out.u.push_back(u);

    auto rhs = [&](const SpectralField& qs, const VectorField& us, double t) {
        SpectralField dq = F ? F(t) : zero_field(g);
        VectorField du = G ? G(t) : VectorField(g);
        if (conv) {
            VectorField vel = conv(t);
            if (cfl_number(vel, dt) > 1.0)
                throw CFLViolation("linearized_solve: advective CFL exceeded");
            dq -= advect(vel, qs);
            for (int d = 0; d < g.dim(); ++d)
                du[d] -= advect(vel, us[d]);
        }
        return std::pair{std::move(dq), std::move(du)};
    };

    for (int n = 0; n < steps; ++n) {
        const double t = n * dt;
        if (!conv && (F || G)) {
            // trapezoid Duhamel: forcing is a pure function of time
            auto [f0, g0] = rhs(q, u, t);
            auto [f1, g1] = rhs(q, u, t + dt);
            e_full.apply(q, u);
            e_full.apply(f0, g0);
            q.axpby(0.5 * dt, f0, 1.0);
            q.axpby(0.5 * dt, f1, 1.0);
            u.axpby(0.5 * dt, g0, 1.0);
            u.axpby(0.5 * dt, g1, 1.0);
        } else if (!conv) {
            e_full.apply(q, u);
        } else {
            auto [k1q, k1u] = rhs(q, u, t);
            SpectralField hq(q);
            VectorField hu(u);
            hq.axpby(0.5 * dt, k1q, 1.0);
            hu.axpby(0.5 * dt, k1u, 1.0);
            e_half.apply(hq, hu);
            auto [k2q, k2u] = rhs(hq, hu, t + 0.5 * dt);
            e_full.apply(q, u);
            e_half.apply(k2q, k2u);
            q.axpby(dt, k2q, 1.0);
            u.axpby(dt, k2u, 1.0);
        }
        if ((n + 1) % snap_stride == 0 || n + 1 == steps) {
            out.times.push_back((n + 1) * dt);
            out.q.push_back(q);
            out.u.push_back(u);
        }
    }
    return out;
}

// ----------------------------------------------------- effective velocity

VectorField effective_velocity(const SpectralField& rho, const PressureLaw& P)
{
    auto phys = inverse_transform(rho);
    for (auto& v : phys)
        v = P.value(v);
    SpectralField pp = forward_transform(rho.grid(), phys);
    pp[0] = 0.0; // removes P(1) and the fluctuation mean in one stroke
    return gradient(inverse_laplacian(pp));
}

VectorField effective_velocity_v1(const VectorField& u, const SpectralField& q,
                                  const PressureLaw& P, double nu)
{
    SpectralField rho(q);
    rho[0] += 1.0;
    VectorField v = effective_velocity(rho, P);
    VectorField v1(u);
    v1.axpby(-1.0 / nu, v, 1.0);
    return v1;
}

BdSolution effective_velocity_bd(const SpectralField& rho, const ViscosityModel& model,
                                 const PressureLaw& P)
{
    const TorusGrid& g = rho.grid();
    const double mu1 = model.mu_at(1.0);
    const double la1 = model.lambda_at(1.0);
    if (!(mu1 > 0.0) || !(mu1 + la1 > 0.0))
        throw EllipticityViolation("effective_velocity_bd: need mu(1)>0, mu(1)+lambda(1)>0");

    // pointwise coefficient perturbations f1(q) = mu(1) - mu(1+q),
    // f2(q) = lambda(1) - lambda(1+q)
    auto rho_phys = inverse_transform(rho);
    const std::size_t n = rho_phys.size();
    std::vector<double> f1(n), f2(n);
    for (std::size_t i = 0; i < n; ++i) {
        f1[i] = mu1 - model.mu_at(rho_phys[i]);
        f2[i] = la1 - model.lambda_at(rho_phys[i]);
    }

    // right side grad P(rho)
    std::vector<double> pphys(n);
    for (std::size_t i = 0; i < n; ++i)
        pphys[i] = P.value(rho_phys[i]);
    SpectralField pfield = forward_transform(g, pphys);
    VectorField gradp = gradient(pfield);

    // constant-coefficient Lame inversion, per mode
    auto l0_inverse = [&](const VectorField& rhsv) {
        VectorField w(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto k = g.wavevector(i);
            const double k2 = double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            if (k2 == 0.0)
                continue;
            cplx kdot = 0.0;
            for (int d = 0; d < g.dim(); ++d)
                kdot += double(k[d]) * rhsv[d][i];
            for (int d = 0; d < g.dim(); ++d) {
                const cplx comp = kdot * double(k[d]) / k2;
                const cplx sol = rhsv[d][i] - comp;
                w[d][i] = sol / (-mu1 * k2) + comp / (-(mu1 + la1) * k2);
            }
        }
        return w;
    };

    auto perturbation = [&](const VectorField& w) {
        VectorField out(g);
        for (int i = 0; i < g.dim(); ++i) {
            SpectralField acc(g);
            for (int j = 0; j < g.dim(); ++j)
                acc += derivative(multiply_pointwise(derivative(w[i], j), f1), j);
            out[i] = std::move(acc);
        }
        out += gradient(multiply_pointwise(divergence(w), f2));
        return out;
    };

    auto l2 = [](const VectorField& w) {
        double acc = 0.0;
        for (int d = 0; d < w.dim(); ++d)
            acc += K().sum_abs2(w[d].coeffs().data(), w[d].size());
        return std::sqrt(acc);
    };

    VectorField w = l0_inverse(gradp);
    double prev_dist = infinity;
    int it = 0;
    for (; it < 100; ++it) {
        VectorField next = l0_inverse(gradp + perturbation(w));
        VectorField diff = next - w;
        const double dist = l2(diff);
        w = std::move(next);
        if (dist < 1e-10)
            break;
        if (dist > 2.0 * prev_dist)
            throw FixedPointDiverged("effective_velocity_bd: fixed point diverging");
        prev_dist = dist;
    }
    if (it == 100)
        throw FixedPointDiverged("effective_velocity_bd: no convergence in 100 iterations");

    // residual of the elliptic equation at the solution
    VectorField lhs = variable_lame(
        w,
        [&] {
            std::vector<double> m(n);
            for (std::size_t i = 0; i < n; ++i)
                m[i] = model.mu_at(rho_phys[i]);
            return m;
        }(),
        [&] {
            std::vector<double> l(n);
            for (std::size_t i = 0; i < n; ++i)
                l[i] = model.lambda_at(rho_phys[i]);
            return l;
        }());
    VectorField res = lhs - gradp;
    // grad P carries the full spectrum; compare on the dealiased band
    for (int d = 0; d < g.dim(); ++d)
        res[d] = dealias(res[d]);
    BdSolution out{w, w, l2(res), it + 1};
    out.v *= (mu1 + la1);
    return out;
}

// --------------------------------------------------------- nonlinear system

VectorField advect(const VectorField& u, const VectorField& w)
{
    VectorField out(u.grid());
    for (int d = 0; d < u.dim(); ++d)
        out[d] = advect(u, w[d]);
    return out;
}

double min_density(const SpectralField& q)
{
    auto phys = inverse_transform(q);
    double m = infinity;
    for (double v : phys)
        m = std::min(m, 1.0 + v);
    return m;
}

namespace {

struct CommonRhs {
    std::vector<double> rho_phys;
    std::vector<double> rho_inv;
    SpectralField pfield; // P(1+q), spectral
};

CommonRhs prepare_rhs(const SpectralField& q, const PressureLaw& P)
{
    CommonRhs c{density_samples(q), {}, SpectralField(q.grid())};
    double mn = infinity;
    for (double v : c.rho_phys)
        mn = std::min(mn, v);
    if (mn <= 0.1)
        throw VacuumApproach("min(1+q) <= 0.1: simulation left the validated regime");
    c.rho_inv.resize(c.rho_phys.size());
    std::vector<double> pphys(c.rho_phys.size());
    for (std::size_t i = 0; i < c.rho_phys.size(); ++i) {
        c.rho_inv[i] = 1.0 / c.rho_phys[i];
        pphys[i] = P.value(c.rho_phys[i]);
    }
    c.pfield = forward_transform(q.grid(), pphys);
    return c;
}

VectorField momentum_rhs(const VectorField& u, const CommonRhs& c,
                         const ViscosityModel& model, const VectorField* f)
{
    VectorField au(u.grid());
    if (model.kind == ViscosityModel::Kind::Constant) {
        au = lame_operator(u, model.mu, model.lambda);
    } else {
        const std::size_t n = c.rho_phys.size();
        std::vector<double> mu_phys(n), la_phys(n);
        for (std::size_t i = 0; i < n; ++i) {
            mu_phys[i] = model.mu_at(c.rho_phys[i]);
            la_phys[i] = model.lambda_at(c.rho_phys[i]);
        }
        au = variable_lame(u, mu_phys, la_phys);
    }
    VectorField du = multiply_pointwise(au, c.rho_inv);
    du -= advect(u, u);
    du -= gradient(c.pfield);
    if (f)
        du += *f;
    // keep the state inside the 2/3 band: the pressure gradient (and any
    // user forcing) carries a spectral tail, and a tail mode surviving here
    // would see the negated frozen-coefficient viscosity in the explicit
    // stage of the integrator
    for (int d = 0; d < u.dim(); ++d)
        du[d] = dealias(du[d]);
    return du;
}

} // namespace

FluidRhs nonlinear_rhs(const FluidState& state, const ViscosityModel& model,
                       const PressureLaw& P, const VectorField* f)
{
    CommonRhs c = prepare_rhs(state.q, P);
    SpectralField dq = mass_flux_divergence(state.q, state.u);
    dq *= -1.0;
    return {std::move(dq), momentum_rhs(state.u, c, model, f)};
}

FluidRhs reformulated_rhs(const FluidState& state, const ViscosityModel& model,
                          const PressureLaw& P, const VectorField* f)
{
    if (model.kind != ViscosityModel::Kind::Constant)
        throw std::invalid_argument("reformulated_rhs: constant viscosity required");
    const double nu = model.nu();
    CommonRhs c = prepare_rhs(state.q, P);

    // reconstruct u = v1 + v/nu with div v = P(rho) - P(1) - mean
    SpectralField pp(c.pfield);
    pp[0] = 0.0;
    VectorField v = gradient(inverse_laplacian(pp));
    VectorField u(state.u); // carries v1
    u.axpby(1.0 / nu, v, 1.0);

    SpectralField div_rho_u = mass_flux_divergence(state.q, u);
    SpectralField dq(div_rho_u);
    dq *= -1.0;

    // dv1 = du + (1/nu) grad Lap^{-1}(P'(rho) div(rho u) - mean)
    VectorField dv1 = momentum_rhs(u, c, model, f);
    std::vector<double> pprime(c.rho_phys.size());
    for (std::size_t i = 0; i < c.rho_phys.size(); ++i)
        pprime[i] = P.derivative(c.rho_phys[i]);
    SpectralField s = multiply_pointwise(div_rho_u, pprime);
    s[0] = 0.0;
    dv1.axpby(1.0 / nu, gradient(inverse_laplacian(s)), 1.0);
    for (int d = 0; d < dv1.dim(); ++d)
        dv1[d] = dealias(dv1[d]);
    return {std::move(dq), std::move(dv1)};
}

// ------------------------------------------------------------------ simulate

Trajectory simulate(const FluidState& state0, const ViscosityModel& model,
                    const PressureLaw& P, const VectorForcing& f, double T, int steps,
                    Formulation formulation, int snap_stride, const ExtraSource& extra)
{
    if (steps < 1)
        throw std::invalid_argument("simulate: steps must be >= 1");
    const TorusGrid& g = state0.q.grid();
    const double dt = T / steps;
    const double p1 = P.p1();
    const double mu = model.mu_at(1.0);
    const double lambda = model.lambda_at(1.0);
    const double nu = 2.0 * mu + lambda;
    const bool original = formulation == Formulation::Original;

    const auto kind = original ? Propagator::Kind::PH : Propagator::Kind::EffVel;
    const Propagator e_full(g, mu, lambda, p1, dt, kind);
    const Propagator e_half(g, mu, lambda, p1, 0.5 * dt, kind);

    FluidState s{state0.q, state0.u, 0.0};
    if (!original)
        s.u = effective_velocity_v1(state0.u, state0.q, P, nu);
    // the rhs operators keep their output in the 2/3 band; start there too
    s.q = dealias(s.q);
    for (int d = 0; d < g.dim(); ++d)
        s.u[d] = dealias(s.u[d]);

    auto reconstruct_u = [&](const FluidState& st) {
        if (original)
            return st.u;
        SpectralField rho(st.q);
        rho[0] += 1.0;
        VectorField u(st.u);
        u.axpby(1.0 / nu, effective_velocity(rho, P), 1.0);
        return u;
    };

    // stiff linear part removed from the explicit stage
    auto linear_part = [&](const FluidState& st) {
        FluidRhs l{SpectralField(g), VectorField(g)};
        if (original) {
            l.dq = divergence(st.u);
            l.dq *= -1.0;
            l.du = lame_operator(st.u, mu, lambda);
            l.du.axpby(-p1, gradient(st.q), 1.0);
        } else {
            l.dq = st.q;
            l.dq *= -p1 / nu;
            l.du = lame_operator(st.u, mu, lambda);
        }
        return l;
    };

    auto explicit_rhs = [&](const FluidState& st, double t) {
        VectorField fv = f ? f(t) : VectorField(g);
        FluidRhs full = original ? nonlinear_rhs(st, model, P, &fv)
                                 : reformulated_rhs(st, model, P, &fv);
        if (extra) {
            FluidRhs e = extra(st, t);
            full.dq += dealias(e.dq);
            for (int d = 0; d < g.dim(); ++d)
                full.du[d] += dealias(e.du[d]);
        }
        FluidRhs lin = linear_part(st);
        full.dq -= lin.dq;
        full.du -= lin.du;
        return full;
    };

    Trajectory out;
    out.formulation = formulation;
    auto emit = [&](double t) {
        out.times.push_back(t);
        out.q.push_back(s.q);
        out.u.push_back(reconstruct_u(s));
        if (!original)
            out.v1.push_back(s.u);
    };
    emit(0.0);

    for (int n = 0; n < steps; ++n) {
        const double t = n * dt;
        if (cfl_number(reconstruct_u(s), dt) > 1.0)
            throw CFLViolation("simulate: advective CFL exceeded");
        FluidRhs k1 = explicit_rhs(s, t);
        FluidState half{s.q, s.u, t + 0.5 * dt};
        half.q.axpby(0.5 * dt, k1.dq, 1.0);
        half.u.axpby(0.5 * dt, k1.du, 1.0);
        e_half.apply(half.q, half.u);
        FluidRhs k2 = explicit_rhs(half, t + 0.5 * dt);
        e_full.apply(s.q, s.u);
        e_half.apply(k2.dq, k2.du);
        s.q.axpby(dt, k2.dq, 1.0);
        s.u.axpby(dt, k2.du, 1.0);
        s.t = (n + 1) * dt;
        if ((n + 1) % snap_stride == 0 || n + 1 == steps)
            emit(s.t);
    }
    return out;
}

} // namespace torus
