#include "tal/variants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tal {

RhsDiff compare_rhs(const GlobalRhs& reference, const GlobalRhs& candidate, double zero_rhs_scale)
{
    if (reference.size() != candidate.size())
        throw InvalidArgument("compare_rhs: size mismatch (" + std::to_string(reference.size()) + " vs " +
                              std::to_string(candidate.size()) + ")");
    RhsDiff d;
    double ref_max = 0.0;
    for (std::size_t n = 0; n < reference.size(); ++n) {
        for (int i = 0; i < 3; ++i) {
            const double r = reference.values[n][i];
            const double c = candidate.values[n][i];
            if (!std::isfinite(c)) {
                if (!d.nonfinite_node)
                    d.nonfinite_node = static_cast<NodeIndex>(n);
                continue;
            }
            ref_max = std::max(ref_max, std::abs(r));
            const double diff = std::abs(c - r);
            if (diff > d.max_abs) {
                d.max_abs = diff;
                d.worst_node = static_cast<NodeIndex>(n);
                d.worst_component = i;
            }
        }
    }
    if (d.nonfinite_node) {
        d.max_abs = std::numeric_limits<double>::infinity();
        d.max_rel = std::numeric_limits<double>::infinity();
        d.worst_node = *d.nonfinite_node;
        return d;
    }
    const double denom = ref_max > 0.0 ? ref_max : zero_rhs_scale;
    if (denom > 0.0)
        d.max_rel = d.max_abs / denom;
    else
        d.max_rel = d.max_abs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return d;
}

double rhs_magnitude_scale(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params)
{
    double scale = 0.0;
    for (ElemIndex e = 0; e < mesh.n_elems(); ++e) {
        const ElementGeometry geom = element_geometry(mesh, e);
        double grad = 0.0, umax = 0.0;
        for (int a = 0; a < 4; ++a) {
            const Vec3& gn = geom.grad_n[a];
            grad = std::max(grad, std::sqrt(gn[0] * gn[0] + gn[1] * gn[1] + gn[2] * gn[2]));
            const Vec3& v = u.values[mesh.elems[e][a]];
            umax = std::max(umax, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
        }
        scale = std::max(scale, geom.volume * grad * umax * (params.rho * umax + params.mu * grad));
    }
    return scale;
}

VerifyReport verify_variants(const Mesh& mesh, const NodalVelocity& u, const PhysParams& params,
                             const RunConfig& cfg, std::span<const VariantId> variants,
                             const RhsPerturbation& perturb)
{
    validate(cfg);
    const GlobalRhs ref = assemble_reference(mesh, u, params);
    const double scale = rhs_magnitude_scale(mesh, u, params);
    VerifyReport report;
    report.pass = true;
    for (VariantId id : variants) {
        AssemblyResult r = assemble(id, mesh, u, params, cfg);
        if (perturb)
            perturb(id, r.rhs);
        VariantCheck c;
        c.id = id;
        c.diff = compare_rhs(ref, r.rhs, scale);
        c.pass = !c.diff.nonfinite_node && c.diff.max_rel <= report.tolerance;
        report.pass = report.pass && c.pass;
        report.checks.push_back(c);
    }
    return report;
}

} // namespace tal
