#include "tal/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace tal {

using nlohmann::json;

std::string MeshSource::describe() const
{
    if (!file.empty())
        return "file " + file;
    if (box) {
        std::ostringstream os;
        os << "box " << (*box)[0] << "x" << (*box)[1] << "x" << (*box)[2];
        return os.str();
    }
    return "none";
}

Mesh build_mesh(const MeshSource& src)
{
    if (!src.file.empty())
        return load_mesh(src.file);
    if (!src.box)
        throw InvalidArgument("no mesh given");
    return generate_box_mesh((*src.box)[0], (*src.box)[1], (*src.box)[2], src.extents);
}

double rhs_checksum(const GlobalRhs& rhs)
{
    double sum = 0.0, abs_sum = 0.0;
    for (const Vec3& v : rhs.values)
        for (double x : v) {
            sum += x;
            abs_sum += std::abs(x);
        }
    return sum + abs_sum;
}

std::string format_checksum(double checksum)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", checksum);
    return buf;
}

// ---- JSON ----

namespace {

json ledger_json(const CounterLedger& l)
{
    return {{"flops_per_elem", l.flops_per_elem},
            {"loadstore_per_elem", l.loadstore_per_elem},
            {"intermediate_doubles_per_elem", l.intermediate_doubles_per_elem},
            {"intermediate_arrays", l.intermediate_arrays},
            {"bytes_dram_est", l.bytes_dram_est}};
}

json record_json(const BenchRecord& r)
{
    json mesh = {{"extents", r.mesh.extents}};
    mesh["box"] = r.mesh.box ? json(*r.mesh.box) : json(nullptr);
    mesh["file"] = r.mesh.file;
    return {{"variant", r.variant},
            {"mesh", mesh},
            {"n_elems", r.n_elems},
            {"n_nodes", r.n_nodes},
            {"init", r.init},
            {"scatter", r.scatter},
            {"n_threads", r.n_threads},
            {"vector_dim", r.vector_dim},
            {"reps", r.reps},
            {"median_time_s", r.median_time},
            {"min_time_s", r.min_time},
            {"max_time_s", r.max_time},
            {"melems_per_s", r.melems_per_s},
            {"checksum", r.checksum},
            {"verified", r.verified ? json(*r.verified) : json(nullptr)},
            {"verify_max_rel", r.verify_max_rel ? json(*r.verify_max_rel) : json(nullptr)},
            {"ledger", ledger_json(r.ledger)}};
}

BenchRecord record_from(const json& j)
{
    BenchRecord r;
    r.variant = j.at("variant").get<std::string>();
    const json& m = j.at("mesh");
    if (!m.at("box").is_null())
        r.mesh.box = m.at("box").get<std::array<int, 3>>();
    r.mesh.extents = m.at("extents").get<Vec3>();
    r.mesh.file = m.at("file").get<std::string>();
    r.n_elems = j.at("n_elems").get<std::size_t>();
    r.n_nodes = j.at("n_nodes").get<std::size_t>();
    r.init = j.at("init").get<std::string>();
    r.scatter = j.at("scatter").get<std::string>();
    r.n_threads = j.at("n_threads").get<int>();
    r.vector_dim = j.at("vector_dim").get<std::size_t>();
    r.reps = j.at("reps").get<int>();
    r.median_time = j.at("median_time_s").get<double>();
    r.min_time = j.at("min_time_s").get<double>();
    r.max_time = j.at("max_time_s").get<double>();
    r.melems_per_s = j.at("melems_per_s").get<double>();
    r.checksum = j.at("checksum").get<double>();
    if (!j.at("verified").is_null())
        r.verified = j.at("verified").get<bool>();
    if (!j.at("verify_max_rel").is_null())
        r.verify_max_rel = j.at("verify_max_rel").get<double>();
    const json& l = j.at("ledger");
    r.ledger.flops_per_elem = l.at("flops_per_elem").get<std::uint64_t>();
    r.ledger.loadstore_per_elem = l.at("loadstore_per_elem").get<std::uint64_t>();
    r.ledger.intermediate_doubles_per_elem = l.at("intermediate_doubles_per_elem").get<std::uint64_t>();
    r.ledger.intermediate_arrays = l.at("intermediate_arrays").get<std::uint64_t>();
    r.ledger.bytes_dram_est = l.at("bytes_dram_est").get<std::uint64_t>();
    return r;
}

} // namespace

std::string to_json(const std::vector<BenchRecord>& records)
{
    json arr = json::array();
    for (const BenchRecord& r : records)
        arr.push_back(record_json(r));
    return json{{"records", arr}}.dump(2) + "\n";
}

std::vector<BenchRecord> records_from_json(const std::string& text, const std::string& source)
{
    std::vector<BenchRecord> out;
    try {
        const json doc = json::parse(text);
        for (const json& j : doc.at("records"))
            out.push_back(record_from(j));
    } catch (const json::exception& e) {
        throw ParseError(source, 0, std::string("malformed bench JSON: ") + e.what());
    }
    return out;
}

std::vector<BenchRecord> load_records(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return records_from_json(ss.str(), path);
}

// ---- bench and sweep ----

BenchRecord run_bench(const Mesh& mesh_in, const MeshSource& src, const InitSpec& init, const NodalVelocity& u,
                      const BenchOptions& opts)
{
    validate(opts.cfg);
    const Mesh* mesh = &mesh_in;
    Mesh colored;
    if (opts.cfg.scatter == ScatterStrategy::colored && !mesh_in.has_colors()) {
        colored = color_elements(mesh_in);
        mesh = &colored;
    }

    BenchRecord r;
    r.variant = std::string(variant_label(opts.variant));
    r.mesh = src;
    r.n_elems = mesh->n_elems();
    r.n_nodes = mesh->n_nodes();
    r.init = init.to_string();
    r.scatter = opts.cfg.scatter == ScatterStrategy::colored ? "colored" : "private";
    r.n_threads = opts.cfg.n_threads;
    r.vector_dim = opts.cfg.vector_dim;
    r.reps = opts.cfg.reps;

    AssemblyResult warm = assemble(opts.variant, *mesh, u, opts.params, opts.cfg);
    r.ledger = warm.ledger;
    std::vector<double> times;
    for (int k = 0; k < opts.cfg.reps; ++k)
        times.push_back(assemble(opts.variant, *mesh, u, opts.params, opts.cfg).wall_time);
    std::sort(times.begin(), times.end());
    const std::size_t n = times.size();
    r.median_time = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
    r.min_time = times.front();
    r.max_time = times.back();
    r.melems_per_s = r.median_time > 0.0 ? double(r.n_elems) / r.median_time / 1e6 : 0.0;

    if (opts.perturb)
        opts.perturb(opts.variant, warm.rhs);
    r.checksum = rhs_checksum(warm.rhs);
    if (opts.verify) {
        const VariantId ids[] = {opts.variant};
        const VerifyReport v = verify_variants(*mesh, u, opts.params, opts.cfg, ids, opts.perturb);
        r.verified = v.pass;
        r.verify_max_rel = v.checks.front().diff.max_rel;
    }
    if (opts.stable_output) {
        r.median_time = r.min_time = r.max_time = 0.0;
        r.melems_per_s = 0.0;
    }
    return r;
}

std::vector<SweepRow> run_sweep(const Mesh& mesh, const MeshSource& src, const InitSpec& init,
                                const NodalVelocity& u, const SweepSpec& spec, BenchOptions opts)
{
    if (spec.threads.empty() || spec.variants.empty())
        throw InvalidArgument("sweep needs at least one thread count and one variant");
    std::vector<int> threads = spec.threads;
    std::sort(threads.begin(), threads.end());
    threads.erase(std::unique(threads.begin(), threads.end()), threads.end());

    std::vector<SweepRow> rows;
    for (VariantId id : spec.variants) {
        double base = 0.0;
        for (int t : threads) {
            opts.variant = id;
            opts.cfg.n_threads = t;
            SweepRow row;
            row.record = run_bench(mesh, src, init, u, opts);
            if (t == threads.front())
                base = row.record.melems_per_s / t;
            row.perfect_scaling_melems_per_s = base * t;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::ostringstream out;
    for (std::size_t k = 0; k < kSweepColumns.size(); ++k)
        out << (k ? "," : "") << kSweepColumns[k];
    out << '\n';
    char buf[512];
    for (const SweepRow& row : rows) {
        const BenchRecord& r = row.record;
        std::snprintf(buf, sizeof buf, "%s,%d,%zu,%zu,%.9g,%.9g,%.9g,%.6g,%.6g\n", r.variant.c_str(), r.n_threads,
                      r.n_elems, r.vector_dim, r.median_time, r.min_time, r.max_time, r.melems_per_s,
                      row.perfect_scaling_melems_per_s);
        out << buf;
    }
    return out.str();
}

// ---- roofline and report ----

CodePoint code_point(const BenchRecord& r)
{
    CodePoint p;
    p.label = r.variant;
    p.flops_per_elem = double(r.ledger.flops_per_elem);
    p.bytes_per_elem = double(r.ledger.bytes_dram_est);
    if (r.melems_per_s > 0.0)
        p.measured_gflops = r.melems_per_s * 1e6 * p.flops_per_elem / 1e9;
    return p;
}

namespace {

std::string num(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

constexpr const char* kMissing = "—";

} // namespace

std::string render_report(const std::vector<BenchRecord>& records, const MachineSpec& machine)
{
    if (records.empty())
        throw InvalidArgument("report needs at least one bench record");
    // last record per variant wins
    std::map<std::string, BenchRecord> by;
    for (const BenchRecord& r : records)
        by[r.variant] = r;
    auto find = [&](VariantId id) -> const BenchRecord* {
        auto it = by.find(std::string(variant_label(id)));
        return it == by.end() ? nullptr : &it->second;
    };

    std::ostringstream out;
    const BenchRecord& first = records.front();
    out << "# Element assembly report\n\n";
    out << "Mesh " << first.mesh.describe() << " (" << first.n_elems << " elements), init " << first.init
        << ", " << first.n_threads << " thread(s), vector_dim " << first.vector_dim << ".\n\n";

    const BenchRecord* base = find(VariantId::B);
    out << "## Speedup vs B\n\n";
    out << "| variant | median time, s | min, s | max, s | Melem/s | speedup vs B |\n";
    out << "|---|---|---|---|---|---|\n";
    for (VariantId id : kAllVariants) {
        const BenchRecord* r = find(id);
        out << "| " << variant_label(id) << " | ";
        if (!r) {
            out << kMissing << " | " << kMissing << " | " << kMissing << " | " << kMissing << " | " << kMissing
                << " |\n";
            continue;
        }
        out << num("%.4g", r->median_time) << " | " << num("%.4g", r->min_time) << " | "
            << num("%.4g", r->max_time) << " | " << num("%.4g", r->melems_per_s) << " | ";
        if (base && base->median_time > 0.0 && r->median_time > 0.0)
            out << num("%.2f", base->median_time / r->median_time) << "× |\n";
        else
            out << kMissing << " |\n";
    }

    out << "\n## Ledger\n\n";
    out << "| variant | Flop/elem | load/store/elem | intermediate doubles/elem | chunk arrays | DRAM B/elem (model) "
           "|\n";
    out << "|---|---|---|---|---|---|\n";
    for (VariantId id : kAllVariants) {
        const BenchRecord* r = find(id);
        out << "| " << variant_label(id) << " | ";
        if (!r) {
            out << kMissing << " | " << kMissing << " | " << kMissing << " | " << kMissing << " | " << kMissing
                << " |\n";
            continue;
        }
        const CounterLedger& l = r->ledger;
        out << l.flops_per_elem << " | " << l.loadstore_per_elem << " | " << l.intermediate_doubles_per_elem
            << " | " << l.intermediate_arrays << " | " << l.bytes_dram_est << " |\n";
    }
    const BenchRecord* rs = find(VariantId::RS);
    const BenchRecord* rsp = find(VariantId::RSP);
    out << "\nFlop reduction B/RS: ";
    if (base && rs && rs->ledger.flops_per_elem > 0)
        out << num("%.2f", double(base->ledger.flops_per_elem) / double(rs->ledger.flops_per_elem)) << "×\n";
    else
        out << kMissing << "\n";
    out << "Intermediate reduction B/RSP: ";
    if (base && rsp && rsp->ledger.intermediate_doubles_per_elem > 0)
        out << num("%.2f", double(base->ledger.intermediate_doubles_per_elem) /
                               double(rsp->ledger.intermediate_doubles_per_elem))
            << "×\n";
    else
        out << kMissing << "\n";

    out << "\n## Roofline (" << machine.name << ", balance " << num("%.3g", machine_balance(machine))
        << " Flop/B)\n\n";
    out << "| variant | AI, Flop/B | bound | attainable GFlop/s | measured GFlop/s | utilization |\n";
    out << "|---|---|---|---|---|---|\n";
    for (VariantId id : kAllVariants) {
        const BenchRecord* r = find(id);
        out << "| " << variant_label(id) << " | ";
        if (!r) {
            out << kMissing << " | " << kMissing << " | " << kMissing << " | " << kMissing << " | " << kMissing
                << " |\n";
            continue;
        }
        const CodePoint p = code_point(*r);
        const RooflineReport rep = classify(machine, p);
        out << num("%.3g", rep.code_ai) << " | " << to_string(rep.bound) << " | "
            << num("%.4g", rep.attainable_gflops) << " | "
            << (p.measured_gflops ? num("%.3g", *p.measured_gflops) : kMissing) << " | "
            << (rep.utilization ? num("%.1f%%", 100.0 * *rep.utilization) : kMissing) << " |\n";
    }
    return out.str();
}

} // namespace tal
