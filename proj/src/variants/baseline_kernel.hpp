#pragma once

// Baseline (B) code shape: every intermediate is a heap array with the
// chunk element index innermost, every physical contribution is its own
// whole-chunk statement, node and Gauss-point loops have runtime trip
// counts, and the element RHS is the product of a dense 12x12 elemental
// matrix with the element unknowns. Arrays are updated in the
// load/compute/store style, a(k) = a(k) + ..., one statement per update.

#include "chunk_array.hpp"
#include "context.hpp"

#include <cmath>
#include <span>

namespace tal::detail {

std::vector<ArraySpec> baseline_arrays(int pnode, int pgaus);

template <class Real>
struct BaselineWorkspace {
    BaselineWorkspace(const ElementType& et, std::size_t vd)
        : BaselineWorkspace(baseline_arrays(et.pnode, et.pgaus), vd)
    {
    }

    ChunkArray<Real> elcod, elvel, elunk, gpjac, gpdet, gpinv, gpvol, gpcar, gpvel, gpgve, elvol, elfil, gpnut,
        gpmut, elmat, gpadv, factr, elrhs;

private:
    BaselineWorkspace(const std::vector<ArraySpec>& l, std::size_t vd)
        : elcod(l[0].doubles_per_elem, vd), elvel(l[1].doubles_per_elem, vd), elunk(l[2].doubles_per_elem, vd),
          gpjac(l[3].doubles_per_elem, vd), gpdet(l[4].doubles_per_elem, vd), gpinv(l[5].doubles_per_elem, vd),
          gpvol(l[6].doubles_per_elem, vd), gpcar(l[7].doubles_per_elem, vd), gpvel(l[8].doubles_per_elem, vd),
          gpgve(l[9].doubles_per_elem, vd), elvol(l[10].doubles_per_elem, vd), elfil(l[11].doubles_per_elem, vd),
          gpnut(l[12].doubles_per_elem, vd), gpmut(l[13].doubles_per_elem, vd), elmat(l[14].doubles_per_elem, vd),
          gpadv(l[15].doubles_per_elem, vd), factr(l[16].doubles_per_elem, vd), elrhs(l[17].doubles_per_elem, vd)
    {
    }
};

template <class Real>
void baseline_chunk(const ChunkContext& ctx, std::span<const ElemIndex> elems, BaselineWorkspace<Real>& w)
{
    using std::abs;
    using std::cbrt;
    constexpr int ndime = 3;
    const ElementType& et = *ctx.etype;
    const int pnode = et.pnode;
    const int pgaus = et.pgaus;
    const int nevat = pnode * ndime;
    const std::size_t nv = elems.size();
    const auto& coords = ctx.mesh->coords;
    const auto& conn = ctx.mesh->elems;
    const auto& vel = ctx.u->values;
    const Real rho = ctx.params->rho;
    const Real mu = ctx.params->mu;
    const double cvre = ctx.params->c_vreman;

    auto jx = [&](int g, int i, int j) { return std::size_t((g * ndime + i) * ndime + j); };
    auto gx = [&](int g, int a, int i) { return std::size_t((g * pnode + a) * ndime + i); };

    // gather
    for (int a = 0; a < pnode; ++a)
        for (int i = 0; i < ndime; ++i)
            for (std::size_t iv = 0; iv < nv; ++iv) {
                const NodeIndex n = conn[elems[iv]][a];
                w.elcod(a * ndime + i, iv) = Real(coords[n][i]);
                w.elvel(a * ndime + i, iv) = Real(vel[n][i]);
                w.elunk(a * ndime + i, iv) = Real(vel[n][i]);
            }

    // Jacobian dx_i/dxi_j at every Gauss point
    for (int g = 0; g < pgaus; ++g)
        for (int i = 0; i < ndime; ++i)
            for (int j = 0; j < ndime; ++j)
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.gpjac(jx(g, i, j), iv) = Real(0.0);
    for (int g = 0; g < pgaus; ++g)
        for (int a = 0; a < pnode; ++a)
            for (int i = 0; i < ndime; ++i)
                for (int j = 0; j < ndime; ++j)
                    for (std::size_t iv = 0; iv < nv; ++iv)
                        w.gpjac(jx(g, i, j), iv) = w.gpjac(jx(g, i, j), iv) + w.elcod(a * ndime + i, iv) * et.der(g, a, j);

    for (int g = 0; g < pgaus; ++g)
        for (std::size_t iv = 0; iv < nv; ++iv)
            w.gpdet(g, iv) =
                w.gpjac(jx(g, 0, 0), iv) * (w.gpjac(jx(g, 1, 1), iv) * w.gpjac(jx(g, 2, 2), iv) -
                                            w.gpjac(jx(g, 1, 2), iv) * w.gpjac(jx(g, 2, 1), iv)) -
                w.gpjac(jx(g, 0, 1), iv) * (w.gpjac(jx(g, 1, 0), iv) * w.gpjac(jx(g, 2, 2), iv) -
                                            w.gpjac(jx(g, 1, 2), iv) * w.gpjac(jx(g, 2, 0), iv)) +
                w.gpjac(jx(g, 0, 2), iv) * (w.gpjac(jx(g, 1, 0), iv) * w.gpjac(jx(g, 2, 1), iv) -
                                            w.gpjac(jx(g, 1, 1), iv) * w.gpjac(jx(g, 2, 0), iv));

    // inverse Jacobian, dxi_j/dx_i stored at (j, i)
    for (int g = 0; g < pgaus; ++g)
        for (int j = 0; j < ndime; ++j)
            for (int i = 0; i < ndime; ++i) {
                // cofactor (i, j) of the Jacobian, cyclic index form
                const int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.gpinv(jx(g, j, i), iv) = (w.gpjac(jx(g, i1, j1), iv) * w.gpjac(jx(g, i2, j2), iv) -
                                                w.gpjac(jx(g, i1, j2), iv) * w.gpjac(jx(g, i2, j1), iv)) /
                                               w.gpdet(g, iv);
            }

    for (int g = 0; g < pgaus; ++g)
        for (std::size_t iv = 0; iv < nv; ++iv)
            w.gpvol(g, iv) = et.weight[g] * abs(w.gpdet(g, iv));

    // Cartesian shape-function derivatives at every Gauss point
    for (int g = 0; g < pgaus; ++g)
        for (int a = 0; a < pnode; ++a)
            for (int i = 0; i < ndime; ++i)
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.gpcar(gx(g, a, i), iv) = Real(0.0);
    for (int g = 0; g < pgaus; ++g)
        for (int a = 0; a < pnode; ++a)
            for (int i = 0; i < ndime; ++i)
                for (int j = 0; j < ndime; ++j)
                    for (std::size_t iv = 0; iv < nv; ++iv)
                        w.gpcar(gx(g, a, i), iv) = w.gpcar(gx(g, a, i), iv) + et.der(g, a, j) * w.gpinv(jx(g, j, i), iv);

    // velocity and velocity gradient at every Gauss point
    for (int g = 0; g < pgaus; ++g)
        for (int i = 0; i < ndime; ++i)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.gpvel(g * ndime + i, iv) = Real(0.0);
    for (int g = 0; g < pgaus; ++g)
        for (int i = 0; i < ndime; ++i)
            for (int a = 0; a < pnode; ++a)
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.gpvel(g * ndime + i, iv) = w.gpvel(g * ndime + i, iv) + et.sha(g, a) * w.elvel(a * ndime + i, iv);

    for (int g = 0; g < pgaus; ++g)
        for (int i = 0; i < ndime; ++i)
            for (int j = 0; j < ndime; ++j)
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.gpgve(jx(g, i, j), iv) = Real(0.0);
    for (int g = 0; g < pgaus; ++g)
        for (int i = 0; i < ndime; ++i)
            for (int j = 0; j < ndime; ++j)
                for (int a = 0; a < pnode; ++a)
                    for (std::size_t iv = 0; iv < nv; ++iv)
                        w.gpgve(jx(g, i, j), iv) =
                            w.gpgve(jx(g, i, j), iv) + w.gpcar(gx(g, a, i), iv) * w.elvel(a * ndime + j, iv);

    // element volume and filter width
    for (std::size_t iv = 0; iv < nv; ++iv)
        w.elvol(0, iv) = Real(0.0);
    for (int g = 0; g < pgaus; ++g)
        for (std::size_t iv = 0; iv < nv; ++iv)
            w.elvol(0, iv) = w.elvol(0, iv) + w.gpvol(g, iv);
    for (std::size_t iv = 0; iv < nv; ++iv)
        w.elfil(0, iv) = cbrt(6.0 * w.elvol(0, iv));

    // Vreman eddy viscosity at every Gauss point
    for (int g = 0; g < pgaus; ++g)
        for (std::size_t iv = 0; iv < nv; ++iv) {
            Mat3T<Real> grad;
            for (int i = 0; i < ndime; ++i)
                for (int j = 0; j < ndime; ++j)
                    grad[i][j] = w.gpgve(jx(g, i, j), iv);
            w.gpnut(g, iv) = vreman_viscosity<Real>(grad, w.elfil(0, iv), cvre);
        }
    for (int g = 0; g < pgaus; ++g)
        for (std::size_t iv = 0; iv < nv; ++iv)
            w.gpmut(g, iv) = mu + rho * w.gpnut(g, iv);

    // elemental matrix
    for (int r = 0; r < nevat * nevat; ++r)
        for (std::size_t iv = 0; iv < nv; ++iv)
            w.elmat(r, iv) = Real(0.0);

    // convection: rho N_a (u . grad N_b)
    for (int g = 0; g < pgaus; ++g)
        for (int b = 0; b < pnode; ++b)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.gpadv(g * pnode + b, iv) = Real(0.0);
    for (int g = 0; g < pgaus; ++g)
        for (int b = 0; b < pnode; ++b)
            for (int k = 0; k < ndime; ++k)
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.gpadv(g * pnode + b, iv) =
                        w.gpadv(g * pnode + b, iv) + w.gpvel(g * ndime + k, iv) * w.gpcar(gx(g, b, k), iv);
    for (int g = 0; g < pgaus; ++g)
        for (int a = 0; a < pnode; ++a)
            for (int b = 0; b < pnode; ++b) {
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.factr(0, iv) = rho * w.gpvol(g, iv) * et.sha(g, a) * w.gpadv(g * pnode + b, iv);
                for (int i = 0; i < ndime; ++i) {
                    const int r = (a * ndime + i) * nevat + b * ndime + i;
                    for (std::size_t iv = 0; iv < nv; ++iv)
                        w.elmat(r, iv) = w.elmat(r, iv) + w.factr(0, iv);
                }
            }

    // diffusion: (mu + rho nu_t) grad N_a . grad N_b
    for (int g = 0; g < pgaus; ++g)
        for (int a = 0; a < pnode; ++a)
            for (int b = 0; b < pnode; ++b) {
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.factr(0, iv) = Real(0.0);
                for (int k = 0; k < ndime; ++k)
                    for (std::size_t iv = 0; iv < nv; ++iv)
                        w.factr(0, iv) = w.factr(0, iv) + w.gpcar(gx(g, a, k), iv) * w.gpcar(gx(g, b, k), iv);
                for (std::size_t iv = 0; iv < nv; ++iv)
                    w.factr(0, iv) = w.factr(0, iv) * w.gpmut(g, iv) * w.gpvol(g, iv);
                for (int i = 0; i < ndime; ++i) {
                    const int r = (a * ndime + i) * nevat + b * ndime + i;
                    for (std::size_t iv = 0; iv < nv; ++iv)
                        w.elmat(r, iv) = w.elmat(r, iv) + w.factr(0, iv);
                }
            }

    // elemental RHS = -elmat * unknowns
    for (int r = 0; r < nevat; ++r)
        for (std::size_t iv = 0; iv < nv; ++iv)
            w.elrhs(r, iv) = Real(0.0);
    for (int r = 0; r < nevat; ++r)
        for (int c = 0; c < nevat; ++c)
            for (std::size_t iv = 0; iv < nv; ++iv)
                w.elrhs(r, iv) = w.elrhs(r, iv) - w.elmat(r * nevat + c, iv) * w.elunk(c, iv);
}

} // namespace tal::detail
