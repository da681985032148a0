#pragma once

// Restructured + specialized + privatized (RSP) code shape: RS's math with
// the chunk dimension dropped. Every intermediate is a per-iteration local
// of fixed size, so nothing but the inputs and the scatter touches memory.

#include "context.hpp"

#include <array>
#include <cmath>

namespace tal::detail {

/// All per-element intermediates of the privatized kernel.
template <class Real>
struct PrivateState {
    std::array<Real, 3> x0;
    std::array<std::array<Real, 3>, 3> jac;
    std::array<std::array<Real, 3>, 4> grad;
    Real det, rdet, vol;
    std::array<std::array<Real, 3>, 4> u;
    std::array<std::array<Real, 3>, 3> du;
    Mat3T<Real> g;
    Real delta, nut, mue;
    std::array<Real, 3> usum, uq;
    std::array<std::array<Real, 3>, 4> adv;
    std::array<Real, 3> advsum;
    Real cv, dv;
    std::array<std::array<Real, 3>, 4> rhs;
};

inline constexpr std::size_t kPrivateDoubles = sizeof(PrivateState<double>) / sizeof(double);

/// Element RHS of element e. The state is a local so it can live in registers.
template <class Real>
inline std::array<std::array<Real, 3>, 4> privatized_element(const ChunkContext& ctx, ElemIndex e)
{
    PrivateState<Real> s;
    using std::abs;
    using std::cbrt;
    constexpr double kShapeOther = kQuadB;
    constexpr double kShapeDiff = kQuadA - kQuadB;
    const auto& coords = ctx.mesh->coords;
    const auto& vel = ctx.u->values;
    const Tet& t = ctx.mesh->elems[e];
    const Real rho = ctx.params->rho;

    for (int i = 0; i < 3; ++i)
        s.x0[i] = Real(coords[t[0]][i]);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            s.jac[j][i] = Real(coords[t[j + 1]][i]) - s.x0[i];

    // cofactors straight into the gradient rows, scaled once det is known
    for (int j = 0; j < 3; ++j) {
        const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        for (int i = 0; i < 3; ++i) {
            const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
            s.grad[j + 1][i] = s.jac[j1][i1] * s.jac[j2][i2] - s.jac[j1][i2] * s.jac[j2][i1];
        }
    }
    s.det = s.jac[0][0] * s.grad[1][0] + s.jac[0][1] * s.grad[1][1] + s.jac[0][2] * s.grad[1][2];
    s.vol = abs(s.det) * (1.0 / 6.0);
    s.rdet = 1.0 / s.det;
    for (int j = 1; j < 4; ++j)
        for (int i = 0; i < 3; ++i)
            s.grad[j][i] = s.grad[j][i] * s.rdet;
    for (int i = 0; i < 3; ++i)
        s.grad[0][i] = -(s.grad[1][i] + s.grad[2][i] + s.grad[3][i]);

    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 3; ++i)
            s.u[a][i] = Real(vel[t[a]][i]);
    for (int b = 0; b < 3; ++b)
        for (int j = 0; j < 3; ++j)
            s.du[b][j] = s.u[b + 1][j] - s.u[0][j];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            s.g[i][j] = s.grad[1][i] * s.du[0][j] + s.grad[2][i] * s.du[1][j] + s.grad[3][i] * s.du[2][j];

    s.delta = cbrt(6.0 * s.vol);
    s.nut = vreman_viscosity<Real>(s.g, s.delta, ctx.params->c_vreman);
    s.mue = Real(ctx.params->mu) + rho * s.nut;

    for (int j = 0; j < 3; ++j)
        s.usum[j] = s.u[0][j] + s.u[1][j] + s.u[2][j] + s.u[3][j];
    for (int q = 0; q < 4; ++q) {
        for (int k = 0; k < 3; ++k)
            s.uq[k] = kShapeOther * s.usum[k] + kShapeDiff * s.u[q][k];
        for (int i = 0; i < 3; ++i)
            s.adv[q][i] = s.uq[0] * s.g[0][i] + s.uq[1] * s.g[1][i] + s.uq[2] * s.g[2][i];
    }
    for (int i = 0; i < 3; ++i)
        s.advsum[i] = s.adv[0][i] + s.adv[1][i] + s.adv[2][i] + s.adv[3][i];

    s.cv = rho * s.vol * 0.25;
    s.dv = s.mue * s.vol;
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 3; ++i)
            s.rhs[a][i] = -(s.cv * (kShapeOther * s.advsum[i] + kShapeDiff * s.adv[a][i])) -
                          s.dv * (s.grad[a][0] * s.g[0][i] + s.grad[a][1] * s.g[1][i] + s.grad[a][2] * s.g[2][i]);
    return s.rhs;
}

} // namespace tal::detail
