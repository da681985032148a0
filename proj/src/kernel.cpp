#include "tal/kernel.hpp"

#include <cmath>
#include <sstream>

namespace tal {

void validate(const PhysParams& p)
{
    if (!(p.rho > 0.0) || !std::isfinite(p.rho))
        throw InvalidArgument("density must be finite and > 0");
    if (!(p.mu >= 0.0) || !std::isfinite(p.mu))
        throw InvalidArgument("viscosity must be finite and >= 0");
    if (!(p.c_vreman >= 0.0) || !std::isfinite(p.c_vreman))
        throw InvalidArgument("Vreman constant must be finite and >= 0");
}

QuadratureRule quadrature_tet4()
{
    QuadratureRule q;
    for (int g = 0; g < 4; ++g) {
        for (int a = 0; a < 4; ++a)
            q.points[g][a] = (a == g) ? kQuadA : kQuadB;
        q.weights[g] = 0.25;
    }
    return q;
}

Mat3 velocity_gradient(const ElementGeometry& geom, const std::array<Vec3, 4>& u)
{
    Mat3 g{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int a = 1; a < 4; ++a)
                s += geom.grad_n[a][i] * (u[a][j] - u[0][j]);
            g[i][j] = s;
        }
    return g;
}

double filter_width(double volume, FilterWidthRule rule)
{
    switch (rule) {
    case FilterWidthRule::cbrt_volume:
        return std::cbrt(6.0 * volume);
    }
    return std::cbrt(6.0 * volume);
}

LocalRhs element_rhs(const ElementGeometry& geom, const std::array<Vec3, 4>& u, const PhysParams& params,
                     const QuadratureRule& quad)
{
    const Mat3 g = velocity_gradient(geom, u);
    const double nu_t = vreman_viscosity(g, filter_width(geom.volume, params.filter_width_rule), params.c_vreman);
    const double mu_eff = params.mu + params.rho * nu_t;

    // (u.grad)u_i at each Gauss point, u interpolated with the shape functions
    std::array<Vec3, 4> adv{};
    for (int q = 0; q < 4; ++q) {
        Vec3 uq{0.0, 0.0, 0.0};
        for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 3; ++k)
                uq[k] += quad.points[q][b] * u[b][k];
        for (int i = 0; i < 3; ++i)
            adv[q][i] = uq[0] * g[0][i] + uq[1] * g[1][i] + uq[2] * g[2][i];
    }

    LocalRhs rhs{};
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 3; ++i) {
            double conv = 0.0;
            for (int q = 0; q < 4; ++q)
                conv += quad.weights[q] * quad.points[q][a] * adv[q][i];
            double diff = 0.0;
            for (int k = 0; k < 3; ++k)
                diff += geom.grad_n[a][k] * g[k][i];
            rhs[a][i] = -params.rho * geom.volume * conv - mu_eff * geom.volume * diff;
        }
    return rhs;
}

void validate_velocity(const Mesh& mesh, const NodalVelocity& u)
{
    if (u.values.size() != mesh.n_nodes()) {
        std::ostringstream os;
        os << "velocity has " << u.values.size() << " entries but the mesh has " << mesh.n_nodes() << " nodes";
        throw InvalidArgument(os.str());
    }
    for (std::size_t n = 0; n < u.values.size(); ++n)
        for (double v : u.values[n])
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "non-finite velocity at node " << n;
                throw ValidationError(os.str());
            }
}

GlobalRhs assemble_reference(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params)
{
    validate(params);
    validate_velocity(mesh, u);
    const QuadratureRule quad = quadrature_tet4();
    GlobalRhs rhs(mesh.n_nodes());
    for (ElemIndex e = 0; e < mesh.n_elems(); ++e) {
        const Tet& t = mesh.elems[e];
        const std::array<Vec3, 4> ue{u.values[t[0]], u.values[t[1]], u.values[t[2]], u.values[t[3]]};
        const LocalRhs local = element_rhs(element_geometry(mesh, e), ue, params, quad);
        for (int a = 0; a < 4; ++a)
            for (int i = 0; i < 3; ++i)
                rhs.values[t[a]][i] += local[a][i];
    }
    return rhs;
}

} // namespace tal
