#pragma once

#include "tal/flop_counter.hpp"
#include "tal/variants.hpp"

#include <cstddef>
#include <vector>

namespace tal::detail {

/// Heap-allocated intermediate with the element index innermost: entry k of
/// chunk element iv lives at k * vector_dim + iv (interleaved element data).
template <class Real>
class ChunkArray {
public:
    ChunkArray(std::size_t per_elem, std::size_t vector_dim)
        : data_(per_elem * vector_dim), per_elem_(per_elem), vd_(vector_dim)
    {
    }

    Real& operator()(std::size_t k, std::size_t iv)
    {
        if constexpr (is_counted_v<Real>)
            ++g_op_counts.array_accesses;
        return data_[k * vd_ + iv];
    }

    std::size_t per_elem() const noexcept { return per_elem_; }

private:
    std::vector<Real> data_;
    std::size_t per_elem_;
    std::size_t vd_;
};

inline std::size_t total_doubles(const std::vector<ArraySpec>& arrays)
{
    std::size_t n = 0;
    for (const auto& a : arrays)
        n += a.doubles_per_elem;
    return n;
}

} // namespace tal::detail
