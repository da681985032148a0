#pragma once

// Restructured + specialized (RS) code shape. Same interleaved chunk arrays
// as the baseline, but linear-tet constants are folded in: 4 nodes and 4
// Gauss points are compile-time constants, shape-function gradients and the
// eddy viscosity are computed once per element, and every RHS entry is
// computed directly (no elemental matrix) with all of its contributions in
// one statement.

#include "chunk_array.hpp"
#include "context.hpp"

#include <cmath>
#include <span>

namespace tal::detail {

std::vector<ArraySpec> restructured_arrays();

template <class Real>
struct RestructuredWorkspace {
    explicit RestructuredWorkspace(std::size_t vd) : RestructuredWorkspace(restructured_arrays(), vd) {}

    ChunkArray<Real> elcod, elvel, eljac, elcof, eldet, gpcar, gpvol, gpgve, gpmue, gpvel, gpadv, elrhs;

private:
    RestructuredWorkspace(const std::vector<ArraySpec>& l, std::size_t vd)
        : elcod(l[0].doubles_per_elem, vd), elvel(l[1].doubles_per_elem, vd), eljac(l[2].doubles_per_elem, vd),
          elcof(l[3].doubles_per_elem, vd), eldet(l[4].doubles_per_elem, vd), gpcar(l[5].doubles_per_elem, vd),
          gpvol(l[6].doubles_per_elem, vd), gpgve(l[7].doubles_per_elem, vd), gpmue(l[8].doubles_per_elem, vd),
          gpvel(l[9].doubles_per_elem, vd), gpadv(l[10].doubles_per_elem, vd), elrhs(l[11].doubles_per_elem, vd)
    {
    }
};

template <class Real>
void restructured_chunk(const ChunkContext& ctx, std::span<const ElemIndex> elems, RestructuredWorkspace<Real>& w)
{
    using std::abs;
    using std::cbrt;
    constexpr int kNodes = 4;
    constexpr int kGauss = 4;
    constexpr double kShapeOther = kQuadB;           // N_a at a Gauss point other than a's
    constexpr double kShapeDiff = kQuadA - kQuadB;   // extra weight of N_a at its own Gauss point
    const std::size_t nv = elems.size();
    const auto& coords = ctx.mesh->coords;
    const auto& conn = ctx.mesh->elems;
    const auto& vel = ctx.u->values;
    const Real rho = ctx.params->rho;
    const Real mu = ctx.params->mu;
    const double cvre = ctx.params->c_vreman;

    for (std::size_t iv = 0; iv < nv; ++iv) {
        const Tet& t = conn[elems[iv]];
        for (int a = 0; a < kNodes; ++a)
            for (int i = 0; i < 3; ++i) {
                w.elcod(a * 3 + i, iv) = Real(coords[t[a]][i]);
                w.elvel(a * 3 + i, iv) = Real(vel[t[a]][i]);
            }
    }

    // edge matrix, rows x_{j+1} - x_0
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.eljac(j * 3 + i, iv) = w.elcod((j + 1) * 3 + i, iv) - w.elcod(i, iv);

    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            const int j1 = (j + 1) % 3, j2 = (j + 2) % 3, i1 = (i + 1) % 3, i2 = (i + 2) % 3;
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.elcof(j * 3 + i, iv) = w.eljac(j1 * 3 + i1, iv) * w.eljac(j2 * 3 + i2, iv) -
                                         w.eljac(j1 * 3 + i2, iv) * w.eljac(j2 * 3 + i1, iv);
        }

    for (std::size_t iv = 0; iv < nv; ++iv)
        w.eldet(0, iv) = w.eljac(0, iv) * w.elcof(0, iv) + w.eljac(1, iv) * w.elcof(1, iv) +
                         w.eljac(2, iv) * w.elcof(2, iv);

    // constant shape-function gradients and volume
    for (std::size_t iv = 0; iv < nv; ++iv) {
        const Real rdet = 1.0 / w.eldet(0, iv);
        for (int k = 0; k < 9; ++k)
            w.gpcar(3 + k, iv) = w.elcof(k, iv) * rdet;
        for (int i = 0; i < 3; ++i)
            w.gpcar(i, iv) = -(w.gpcar(3 + i, iv) + w.gpcar(6 + i, iv) + w.gpcar(9 + i, iv));
        w.gpvol(0, iv) = abs(w.eldet(0, iv)) * (1.0 / 6.0);
    }

    // velocity gradient G[i][j] = du_j/dx_i, constant over the element
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.gpgve(i * 3 + j, iv) = w.gpcar(3 + i, iv) * (w.elvel(3 + j, iv) - w.elvel(j, iv)) +
                                         w.gpcar(6 + i, iv) * (w.elvel(6 + j, iv) - w.elvel(j, iv)) +
                                         w.gpcar(9 + i, iv) * (w.elvel(9 + j, iv) - w.elvel(j, iv));

    // one eddy viscosity per element
    for (std::size_t iv = 0; iv < nv; ++iv) {
        const Real delta = cbrt(6.0 * w.gpvol(0, iv));
        Mat3T<Real> grad;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                grad[i][j] = w.gpgve(i * 3 + j, iv);
        w.gpmue(0, iv) = mu + rho * vreman_viscosity<Real>(grad, delta, cvre);
    }

    for (int q = 0; q < kGauss; ++q)
        for (int j = 0; j < 3; ++j)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.gpvel(q * 3 + j, iv) =
                    kShapeOther * (w.elvel(j, iv) + w.elvel(3 + j, iv) + w.elvel(6 + j, iv) + w.elvel(9 + j, iv)) +
                    kShapeDiff * w.elvel(q * 3 + j, iv);

    for (int q = 0; q < kGauss; ++q)
        for (int i = 0; i < 3; ++i)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.gpadv(q * 3 + i, iv) = w.gpvel(q * 3, iv) * w.gpgve(i, iv) +
                                         w.gpvel(q * 3 + 1, iv) * w.gpgve(3 + i, iv) +
                                         w.gpvel(q * 3 + 2, iv) * w.gpgve(6 + i, iv);

    // all contributions to one RHS entry at once
    for (int a = 0; a < kNodes; ++a)
        for (int i = 0; i < 3; ++i)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.elrhs(a * 3 + i, iv) =
                    -(rho * w.gpvol(0, iv) * 0.25) *
                        (kShapeOther * (w.gpadv(i, iv) + w.gpadv(3 + i, iv) + w.gpadv(6 + i, iv) + w.gpadv(9 + i, iv)) +
                         kShapeDiff * w.gpadv(a * 3 + i, iv)) -
                    (w.gpmue(0, iv) * w.gpvol(0, iv)) *
                        (w.gpcar(a * 3, iv) * w.gpgve(i, iv) + w.gpcar(a * 3 + 1, iv) * w.gpgve(3 + i, iv) +
                         w.gpcar(a * 3 + 2, iv) * w.gpgve(6 + i, iv));
}

} // namespace tal::detail
