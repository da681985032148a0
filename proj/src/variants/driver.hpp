#pragma once

#include "tal/variants.hpp"

#include <algorithm>
#include <span>
#include <thread>
#include <vector>

namespace tal::detail {

/// Runs make_processor() once per worker and feeds it element chunks of at
/// most cfg.vector_dim. A processor provides
///   void process(std::span<const ElemIndex> chunk, double* rhs)
/// which computes the chunk and scatter-adds it into rhs (3 doubles per node).
///
/// private_accumulators: worker t owns elements [n t / T, n (t+1) / T) and a
/// private RHS; the private RHS are summed in worker order afterwards.
/// colored: color classes run one after another, each split across the
/// workers, which scatter straight into the shared RHS.
template <class MakeProcessor>
GlobalRhs run_chunked(const Mesh& mesh, const RunConfig& cfg, MakeProcessor&& make_processor)
{
    const std::size_t vd = cfg.vector_dim;
    const auto n_threads = static_cast<std::size_t>(cfg.n_threads);
    GlobalRhs rhs(mesh.n_nodes());

    auto work = [&](std::span<const ElemIndex> elems, double* out) {
        if (elems.empty())
            return;
        auto proc = make_processor();
        for (std::size_t off = 0; off < elems.size(); off += vd)
            proc.process(elems.subspan(off, std::min(vd, elems.size() - off)), out);
    };

    auto split = [&](std::span<const ElemIndex> elems, auto&& per_worker) {
        const std::size_t n = elems.size();
        std::vector<std::jthread> workers;
        workers.reserve(n_threads - 1);
        for (std::size_t t = 1; t < n_threads; ++t)
            workers.emplace_back([&, t] { per_worker(t, elems.subspan(n * t / n_threads, n * (t + 1) / n_threads - n * t / n_threads)); });
        per_worker(0, elems.first(n / n_threads));
    };

    if (cfg.scatter == ScatterStrategy::colored) {
        const ColorClasses classes = color_classes(mesh);
        for (std::size_t c = 0; c < classes.size(); ++c)
            split(classes[c], [&](std::size_t, std::span<const ElemIndex> part) { work(part, rhs.data()); });
        return rhs;
    }

    std::vector<ElemIndex> order(mesh.n_elems());
    for (ElemIndex e = 0; e < order.size(); ++e)
        order[e] = e;
    if (n_threads == 1) {
        work(order, rhs.data());
        return rhs;
    }
    std::vector<GlobalRhs> acc(n_threads - 1);
    split(order, [&](std::size_t t, std::span<const ElemIndex> part) {
        if (t == 0) {
            work(part, rhs.data());
        } else {
            acc[t - 1] = GlobalRhs(mesh.n_nodes());
            work(part, acc[t - 1].data());
        }
    });
    double* out = rhs.data();
    const std::size_t len = 3 * mesh.n_nodes();
    for (const GlobalRhs& a : acc) {
        const double* in = a.data();
        for (std::size_t k = 0; k < len; ++k)
            out[k] += in[k];
    }
    return rhs;
}

} // namespace tal::detail
