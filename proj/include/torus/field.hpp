// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace torus {

using cplx = std::complex<double>;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Uniform grid on the periodic box [0, 2pi)^N. Wavenumbers are integer
// vectors with components in (-m/2, m/2].
class TorusGrid {
public:
    TorusGrid(int dim, int m);

    int dim() const { return dim_; }
    int points_per_dim() const { return m_; }
    std::size_t size() const { return size_; }

    // component k_j from the storage index along one axis
    int wavenumber(int idx) const { return idx <= m_ / 2 ? idx : idx - m_; }

    std::array<int, 3> wavevector(std::size_t flat) const
    {
        std::array<int, 3> k{0, 0, 0};
        for (int d = dim_ - 1; d >= 0; --d) {
            k[d] = wavenumber(int(flat % m_));
            flat /= m_;
        }
        return k;
    }

    friend bool operator==(const TorusGrid& a, const TorusGrid& b)
    {
        return a.dim_ == b.dim_ && a.m_ == b.m_;
    }

private:
    int dim_;
    int m_;
    std::size_t size_;
};

// Fourier coefficients c_k of a scalar function, u(x) = sum_k c_k e^{ik.x}.
class SpectralField {
public:
    explicit SpectralField(const TorusGrid& grid, bool is_real = true)
        : grid_(grid), coeffs_(grid.size()), is_real_(is_real)
    {
    }

    const TorusGrid& grid() const { return grid_; }
    std::vector<cplx>& coeffs() { return coeffs_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx& operator[](std::size_t i) { return coeffs_[i]; }
    const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const { return coeffs_.size(); }

    bool is_real() const { return is_real_; }
    void set_real(bool r) { is_real_ = r; }

    cplx mean() const { return coeffs_[0]; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);
    // *this = beta * *this + alpha * o
    SpectralField& axpby(cplx alpha, const SpectralField& o, cplx beta);

    friend SpectralField operator+(SpectralField a, const SpectralField& b)
    {
        return a += b;
    }
    friend SpectralField operator-(SpectralField a, const SpectralField& b)
    {
        return a -= b;
    }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    TorusGrid grid_;
    std::vector<cplx> coeffs_;
    bool is_real_;
};

// N spectral fields on a shared grid.
class VectorField {
public:
    explicit VectorField(const TorusGrid& grid)
        : components_(grid.dim(), SpectralField(grid))
    {
    }

    const TorusGrid& grid() const { return components_.front().grid(); }
    int dim() const { return int(components_.size()); }
    SpectralField& operator[](int d) { return components_[d]; }
    const SpectralField& operator[](int d) const { return components_[d]; }

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double a);
    VectorField& axpby(cplx alpha, const VectorField& o, cplx beta);

    friend VectorField operator+(VectorField a, const VectorField& b)
    {
        return a += b;
    }
    friend VectorField operator-(VectorField a, const VectorField& b)
    {
        return a -= b;
    }
    friend VectorField operator*(double s, VectorField a) { return a *= s; }

private:
    std::vector<SpectralField> components_;
};

void require_same_grid(const TorusGrid& a, const TorusGrid& b);

} // namespace torus
