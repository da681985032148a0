#pragma once

#include "tal/kernel.hpp"
#include "tal/mesh.hpp"
#include "tal/variants.hpp"

#include <vector>

namespace tal::detail {

/// Runtime element description used by the generic baseline: node and
/// Gauss-point counts plus tabulated reference shape functions.
struct ElementType {
    int pnode = 0;
    int pgaus = 0;
    std::vector<double> shape;  ///< [g][a]
    std::vector<double> deriv;  ///< [g][a][j], d N_a / d xi_j
    std::vector<double> weight; ///< [g], reference-element weights

    double sha(int g, int a) const { return shape[g * pnode + a]; }
    double der(int g, int a, int j) const { return deriv[(g * pnode + a) * 3 + j]; }
};

/// Linear tet on the reference element (0,0,0),(1,0,0),(0,1,0),(0,0,1).
ElementType tet4_element_type();

/// Read-only inputs shared by all workers.
struct ChunkContext {
    const Mesh* mesh = nullptr;
    const NodalVelocity* u = nullptr;
    const PhysParams* params = nullptr;
    const ElementType* etype = nullptr;
};

} // namespace tal::detail

namespace tal::detail {

/// Chunk-array accesses per element of a variant, as counted by ChunkArray.
std::uint64_t counted_array_accesses(VariantId id);

} // namespace tal::detail
