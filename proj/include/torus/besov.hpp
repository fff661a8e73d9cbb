// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "torus/littlewood_paley.hpp"

#include <cmath>
#include <vector>

namespace torus {

struct InsufficientSnapshots : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// B^s_{p,r}
struct BesovIndex {
    double s;
    double p = 2.0;
    double r = 1.0;
};

// tilde-B^{s,t}_{p,q,1}: regularity s / integrability p for levels l <= 0,
// regularity t / integrability q for l > 0
struct HybridIndex {
    double s;
    double t;
    double p = 2.0;
    double q = 2.0;
};

// time snapshots of a field on a shared grid, strictly increasing times
template <class F>
struct Series {
    std::vector<double> times;
    std::vector<F> values;

    void push(double t, F v)
    {
        if (!times.empty() && t <= times.back())
            throw std::invalid_argument("Series: times must be strictly increasing");
        times.push_back(t);
        values.push_back(std::move(v));
    }
    std::size_t size() const { return times.size(); }
};

using ScalarSeries = Series<SpectralField>;
using VectorSeries = Series<VectorField>;

namespace detail {

// ell^r accumulation of weighted block norms
class LrAccumulator {
public:
    explicit LrAccumulator(double r) : r_(r) {}
    void add(double v)
    {
        if (r_ == infinity)
            acc_ = std::max(acc_, v);
        else
            acc_ += std::pow(v, r_);
    }
    double value() const { return r_ == infinity ? acc_ : std::pow(acc_, 1.0 / r_); }

private:
    double r_;
    double acc_ = 0.0;
};

inline double time_lr_norm(const std::vector<double>& t, const std::vector<double>& y,
                           double rho)
{
    if (rho == infinity) {
        double m = 0.0;
        for (double v : y)
            m = std::max(m, v);
        return m;
    }
    double acc = 0.0; // trapezoid on y^rho
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        acc += 0.5 * (t[i + 1] - t[i]) * (std::pow(y[i], rho) + std::pow(y[i + 1], rho));
    return std::pow(acc, 1.0 / rho);
}

template <class F>
std::vector<double> block_series(const Series<F>& s, int j, double p)
{
    std::vector<double> y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        y[i] = lp_norm(dyadic_block(s.values[i], j), p);
    return y;
}

} // namespace detail

// homogeneous Besov norm; the mean mode is excluded
template <class F>
double besov_norm(const F& u, const BesovIndex& idx)
{
    detail::LrAccumulator acc(idx.r);
    for (int j = dyadic_j_min(u.grid()); j <= dyadic_j_max(u.grid()); ++j)
        acc.add(std::exp2(j * idx.s) * lp_norm(dyadic_block(u, j), idx.p));
    return acc.value();
}

// hybrid low/high-frequency norm, ell^1 over levels on both branches
template <class F>
double hybrid_norm(const F& u, const HybridIndex& idx, int threshold = 0)
{
    double acc = 0.0;
    for (int j = dyadic_j_min(u.grid()); j <= dyadic_j_max(u.grid()); ++j) {
        if (j <= threshold)
            acc += std::exp2(j * idx.s) * lp_norm(dyadic_block(u, j), idx.p);
        else
            acc += std::exp2(j * idx.t) * lp_norm(dyadic_block(u, j), idx.q);
    }
    return acc;
}

// Chemin-Lerner norm: per-level time L^rho first, then ell^r over levels
template <class F>
double chemin_lerner_norm(const Series<F>& series, const BesovIndex& idx, double rho)
{
    if (series.size() < 2)
        throw InsufficientSnapshots("chemin_lerner_norm: need at least 2 snapshots");
    const auto& g = series.values.front().grid();
    detail::LrAccumulator acc(idx.r);
    for (int j = dyadic_j_min(g); j <= dyadic_j_max(g); ++j) {
        auto y = detail::block_series(series, j, idx.p);
        acc.add(std::exp2(j * idx.s) * detail::time_lr_norm(series.times, y, rho));
    }
    return acc.value();
}

template <class F>
double hybrid_chemin_lerner_norm(const Series<F>& series, const HybridIndex& idx,
                                 double rho, int threshold = 0)
{
    if (series.size() < 2)
        throw InsufficientSnapshots("hybrid_chemin_lerner_norm: need at least 2 snapshots");
    const auto& g = series.values.front().grid();
    double acc = 0.0;
    for (int j = dyadic_j_min(g); j <= dyadic_j_max(g); ++j) {
        const double w = j <= threshold ? idx.s : idx.t;
        const double p = j <= threshold ? idx.p : idx.q;
        auto y = detail::block_series(series, j, p);
        acc += std::exp2(j * w) * detail::time_lr_norm(series.times, y, rho);
    }
    return acc;
}

// plain (non-tilde) L^rho-in-time Besov norm, for Minkowski-ordering checks
template <class F>
double time_lp_besov_norm(const Series<F>& series, const BesovIndex& idx, double rho)
{
    if (series.size() < 2)
        throw InsufficientSnapshots("time_lp_besov_norm: need at least 2 snapshots");
    std::vector<double> y(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        y[i] = besov_norm(series.values[i], idx);
    return detail::time_lr_norm(series.times, y, rho);
}

} // namespace torus
