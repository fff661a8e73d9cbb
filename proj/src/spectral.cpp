// SPDX-License-Identifier: Apache-2.0
#include "torus/operators.hpp"

#include "torus/fft.hpp"
#include "torus/kernels.hpp"

#include <cmath>
#include <cstdio>

namespace torus {

namespace {
const kernels::Table& K() { return kernels::active(); }
} // namespace

TorusGrid::TorusGrid(int dim, int m) : dim_(dim), m_(m)
{
    if (dim != 2 && dim != 3)
        throw DimensionMismatch("TorusGrid: dim must be 2 or 3");
    if (m < 4 || (m & (m - 1)) != 0)
        throw DimensionMismatch("TorusGrid: points per dim must be a power of two >= 4");
    size_ = 1;
    for (int d = 0; d < dim; ++d)
        size_ *= std::size_t(m);
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b)
{
    if (!(a == b))
        throw DimensionMismatch("fields live on different grids");
}

SpectralField& SpectralField::operator+=(const SpectralField& o)
{
    require_same_grid(grid_, o.grid_);
    K().caxpby(1.0, o.coeffs_.data(), 1.0, coeffs_.data(), coeffs_.size());
    is_real_ = is_real_ && o.is_real_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o)
{
    require_same_grid(grid_, o.grid_);
    K().caxpby(-1.0, o.coeffs_.data(), 1.0, coeffs_.data(), coeffs_.size());
    is_real_ = is_real_ && o.is_real_;
    return *this;
}

SpectralField& SpectralField::operator*=(double a)
{
    K().caxpby(0.0, coeffs_.data(), a, coeffs_.data(), coeffs_.size());
    return *this;
}

SpectralField& SpectralField::axpby(cplx alpha, const SpectralField& o, cplx beta)
{
    require_same_grid(grid_, o.grid_);
    K().caxpby(alpha, o.coeffs_.data(), beta, coeffs_.data(), coeffs_.size());
    if (alpha.imag() != 0.0 || beta.imag() != 0.0)
        is_real_ = false;
    else
        is_real_ = is_real_ && o.is_real_;
    return *this;
}

VectorField& VectorField::operator+=(const VectorField& o)
{
    for (int d = 0; d < dim(); ++d)
        components_[d] += o[d];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o)
{
    for (int d = 0; d < dim(); ++d)
        components_[d] -= o[d];
    return *this;
}

VectorField& VectorField::operator*=(double a)
{
    for (auto& c : components_)
        c *= a;
    return *this;
}

VectorField& VectorField::axpby(cplx alpha, const VectorField& o, cplx beta)
{
    for (int d = 0; d < dim(); ++d)
        components_[d].axpby(alpha, o[d], beta);
    return *this;
}

// transforms --------------------------------------------------------------

SpectralField forward_transform(const TorusGrid& grid,
                                const std::vector<double>& samples)
{
    if (samples.size() != grid.size())
        throw DimensionMismatch("forward_transform: sample count does not match grid");
    SpectralField u(grid, true);
    auto& c = u.coeffs();
    for (std::size_t i = 0; i < samples.size(); ++i)
        c[i] = samples[i];
    fft::cube(c.data(), std::size_t(grid.points_per_dim()), grid.dim(), -1);
    const double scale = 1.0 / double(grid.size());
    for (auto& v : c)
        v *= scale;
    return u;
}

std::vector<cplx> inverse_transform_complex(const SpectralField& u)
{
    std::vector<cplx> phys(u.coeffs());
    fft::cube(phys.data(), std::size_t(u.grid().points_per_dim()), u.grid().dim(), +1);
    return phys;
}

std::vector<double> inverse_transform(const SpectralField& u)
{
    auto phys = inverse_transform_complex(u);
    std::vector<double> out(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i)
        out[i] = phys[i].real();
    return out;
}

// multipliers ---------------------------------------------------------------

SpectralField apply_radial_multiplier(const SpectralField& u, const RadialSymbol& m)
{
    const TorusGrid& g = u.grid();
    std::vector<double> sym(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.wavevector(i);
        const double kn = std::sqrt(double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
        sym[i] = m(kn);
    }
    SpectralField out(u);
    K().cmul_real(out.coeffs().data(), sym.data(), out.size());
    return out;
}

SpectralField apply_multiplier(const SpectralField& u,
                               const std::function<double(const std::array<int, 3>&)>& m,
                               bool even_symbol)
{
    const TorusGrid& g = u.grid();
    std::vector<double> sym(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        sym[i] = m(g.wavevector(i));
    SpectralField out(u);
    K().cmul_real(out.coeffs().data(), sym.data(), out.size());
    if (!even_symbol)
        out.set_real(false);
    return out;
}

// derivatives ---------------------------------------------------------------

SpectralField derivative(const SpectralField& u, int axis)
{
    const TorusGrid& g = u.grid();
    const int m = g.points_per_dim();
    std::vector<double> sym(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.wavevector(i);
        // the Nyquist mode has no well-defined odd symbol; drop it
        sym[i] = (k[axis] == m / 2) ? 0.0 : double(k[axis]);
    }
    SpectralField out(u);
    K().cmul_imag(out.coeffs().data(), sym.data(), out.size());
    return out;
}

VectorField gradient(const SpectralField& u)
{
    VectorField w(u.grid());
    for (int d = 0; d < u.grid().dim(); ++d)
        w[d] = derivative(u, d);
    return w;
}

SpectralField divergence(const VectorField& w)
{
    SpectralField out = derivative(w[0], 0);
    for (int d = 1; d < w.dim(); ++d)
        out += derivative(w[d], d);
    return out;
}

SpectralField laplacian(const SpectralField& u)
{
    return apply_radial_multiplier(u, [](double k) { return -k * k; });
}

VectorField laplacian(const VectorField& u)
{
    VectorField out(u.grid());
    for (int d = 0; d < u.dim(); ++d)
        out[d] = laplacian(u[d]);
    return out;
}

SpectralField inverse_laplacian(const SpectralField& u)
{
    const double scale = std::sqrt(K().sum_abs2(u.coeffs().data(), u.size()));
    if (std::abs(u.mean()) > 1e-12 * std::max(scale, 1e-300))
        throw NonZeroMean("inverse_laplacian: field has nonzero mean");
    SpectralField out =
        apply_radial_multiplier(u, [](double k) { return k > 0 ? -1.0 / (k * k) : 0.0; });
    out[0] = 0.0;
    return out;
}

VectorField lame_operator(const VectorField& w, double mu, double lambda)
{
    if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
        throw EllipticityViolation("lame_operator: need mu > 0 and lambda + 2 mu > 0");
    VectorField out = laplacian(w);
    out *= mu;
    VectorField gd = gradient(divergence(w));
    out.axpby(mu + lambda, gd, 1.0);
    return out;
}

double curl_linf(const VectorField& w)
{
    double m = 0.0;
    for (int i = 0; i < w.dim(); ++i)
        for (int j = i + 1; j < w.dim(); ++j) {
            SpectralField c = derivative(w[j], i) - derivative(w[i], j);
            auto phys = inverse_transform(c);
            m = std::max(m, K().max_abs(phys.data(), phys.size()));
        }
    return m;
}

// norms ----------------------------------------------------------------------

double lp_norm(const SpectralField& u, double p)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
    auto phys = inverse_transform_complex(u);
    const std::size_t n = phys.size();
    if (p == infinity) {
        double m = 0.0;
        for (const auto& v : phys)
            m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 2.0) {
        return std::sqrt(K().sum_abs2(phys.data(), n) / double(n));
    }
    double acc = 0.0;
    for (const auto& v : phys)
        acc += std::pow(std::abs(v), p);
    return std::pow(acc / double(n), 1.0 / p);
}

double lp_norm(const VectorField& u, double p)
{
    const std::size_t n = u.grid().size();
    std::vector<double> mag(n, 0.0);
    for (int d = 0; d < u.dim(); ++d) {
        auto phys = inverse_transform_complex(u[d]);
        for (std::size_t i = 0; i < n; ++i)
            mag[i] += std::norm(phys[i]);
    }
    for (auto& v : mag)
        v = std::sqrt(v);
    if (p == infinity)
        return K().max_abs(mag.data(), n);
    if (p == 2.0)
        return std::sqrt(K().sum_sq(mag.data(), n) / double(n));
    double acc = 0.0;
    for (double v : mag)
        acc += std::pow(v, p);
    return std::pow(acc / double(n), 1.0 / p);
}

double l2_norm(const SpectralField& u)
{
    return std::sqrt(K().sum_abs2(u.coeffs().data(), u.size()));
}

// products --------------------------------------------------------------------

SpectralField dealias(const SpectralField& u)
{
    const TorusGrid& g = u.grid();
    const int cut = g.points_per_dim() / 3;
    SpectralField out(u);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto k = g.wavevector(i);
        for (int d = 0; d < g.dim(); ++d)
            if (std::abs(k[d]) > cut) {
                out[i] = 0.0;
                break;
            }
    }
    return out;
}

SpectralField product(const SpectralField& u, const SpectralField& v)
{
    require_same_grid(u.grid(), v.grid());
    auto pu = inverse_transform_complex(dealias(u));
    auto pv = inverse_transform_complex(dealias(v));
    const std::size_t n = pu.size();
    if (u.is_real() && v.is_real()) {
        std::vector<double> a(n), b(n), c(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = pu[i].real();
            b[i] = pv[i].real();
        }
        K().mul(c.data(), a.data(), b.data(), n);
        SpectralField out = forward_transform(u.grid(), c);
        return dealias(out);
    }
    std::vector<cplx> c(n);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = pu[i] * pv[i];
    fft::cube(c.data(), std::size_t(u.grid().points_per_dim()), u.grid().dim(), -1);
    SpectralField out(u.grid(), false);
    const double scale = 1.0 / double(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = c[i] * scale;
    return dealias(out);
}

SpectralField multiply_pointwise(const SpectralField& u, const std::vector<double>& w_phys)
{
    auto pu = inverse_transform(dealias(u));
    std::vector<double> c(pu.size());
    K().mul(c.data(), pu.data(), w_phys.data(), pu.size());
    return dealias(forward_transform(u.grid(), c));
}

SpectralField zero_field(const TorusGrid& grid) { return SpectralField(grid, true); }

SpectralField constant_field(const TorusGrid& grid, double c)
{
    SpectralField u(grid, true);
    u[0] = c;
    return u;
}

SpectralField advect(const VectorField& u, const SpectralField& a)
{
    require_same_grid(u.grid(), a.grid());
    SpectralField out = product(u[0], derivative(a, 0));
    for (int d = 1; d < u.dim(); ++d)
        out += product(u[d], derivative(a, d));
    return out;
}

} // namespace torus
