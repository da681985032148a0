#include "tal/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace tal {

namespace {

struct Args {
    std::vector<int> box;
    std::vector<double> extents;
    std::string mesh_file;
    std::string init = "taylor-green";
    std::vector<std::string> variants;
    std::size_t vector_dim = 16;
    std::optional<int> threads;
    int reps = 5;
    std::string json_path;
    std::string csv_path;
    std::uint64_t seed = 0;
    bool no_verify = false;
    bool stable_output = false;
    std::string scatter = "private";
    PhysParams params;
    // sweep
    std::vector<int> thread_list{1, 2, 4};
    // roofline
    std::string paper_preset;
    std::string from_bench;
    std::string machine;
    std::string level = "dram";
    std::optional<double> extra_roof;
    std::string gnuplot_path;
    // report
    std::vector<std::string> inputs;
    std::string output_path;
};

void add_mesh_options(CLI::App* c, Args& a)
{
    c->add_option("--box", a.box, "Structured box mesh with NX NY NZ cells (default 32 32 32)")->expected(3);
    c->add_option("--extents", a.extents, "Box size X Y Z (default 1 1 1)")->expected(3);
    c->add_option("--mesh", a.mesh_file, "Mesh file to load instead of a box");
    c->add_option("--init", a.init, "Velocity initializer NAME[:ARGS]: zero, constant:VX,VY,VZ, shear:G, "
                                    "taylor-green, random[:SEED]");
    c->add_option("--seed", a.seed, "Seed for the random initializer");
    c->add_option("--rho", a.params.rho, "Density");
    c->add_option("--mu", a.params.mu, "Dynamic viscosity");
    c->add_option("--c-vreman", a.params.c_vreman, "Vreman model constant");
}

void add_run_options(CLI::App* c, Args& a)
{
    c->add_option("--variant", a.variants, "Variant(s): b, rs, rsp (default all)")->delimiter(',');
    c->add_option("--vector-dim", a.vector_dim, "Elements per chunk");
    c->add_option("--threads", a.threads, "Worker threads (fallback: TAL_THREADS, then 1)");
    c->add_option("--scatter", a.scatter, "Parallel scatter: private or colored");
}

MeshSource mesh_source(const Args& a)
{
    MeshSource src;
    if (!a.mesh_file.empty() && !a.box.empty())
        throw InvalidArgument("--box and --mesh are mutually exclusive");
    if (!a.mesh_file.empty()) {
        src.file = a.mesh_file;
        return src;
    }
    src.box = a.box.empty() ? std::array<int, 3>{32, 32, 32} : std::array<int, 3>{a.box[0], a.box[1], a.box[2]};
    if (!a.extents.empty())
        src.extents = {a.extents[0], a.extents[1], a.extents[2]};
    return src;
}

std::vector<VariantId> variants(const Args& a, std::vector<VariantId> fallback)
{
    if (a.variants.empty())
        return fallback;
    std::vector<VariantId> out;
    for (const std::string& s : a.variants) {
        const auto id = parse_variant(s);
        if (!id)
            throw InvalidArgument("unknown variant '" + s + "' (expected b, rs or rsp)");
        out.push_back(*id);
    }
    return out;
}

RunConfig run_config(const Args& a)
{
    RunConfig cfg;
    cfg.vector_dim = a.vector_dim;
    cfg.reps = a.reps;
    if (a.threads) {
        cfg.n_threads = *a.threads;
    } else if (const char* env = std::getenv("TAL_THREADS"); env && *env && !a.stable_output) {
        int t = 0;
        const char* end = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, end, t);
        if (ec != std::errc() || ptr != end)
            throw InvalidArgument(std::string("invalid TAL_THREADS '") + env + "'");
        cfg.n_threads = t;
    }
    if (a.scatter == "private")
        cfg.scatter = ScatterStrategy::private_accumulators;
    else if (a.scatter == "colored")
        cfg.scatter = ScatterStrategy::colored;
    else
        throw InvalidArgument("unknown scatter strategy '" + a.scatter + "' (expected private or colored)");
    validate(cfg);
    return cfg;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text))
        throw InvalidArgument("cannot write '" + path + "'");
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Problem {
    MeshSource src;
    Mesh mesh;
    InitSpec init;
    NodalVelocity u;
};

Problem problem(const Args& a)
{
    Problem p;
    p.src = mesh_source(a);
    p.mesh = build_mesh(p.src);
    p.init = parse_init(a.init, a.seed);
    p.u = make_velocity(p.mesh, p.init);
    validate(a.params);
    return p;
}

int cmd_verify(const Args& a, std::ostream& out, const CliHooks& hooks)
{
    const Problem p = problem(a);
    const RunConfig cfg = run_config(a);
    const std::vector<VariantId> ids = variants(a, {kAllVariants.begin(), kAllVariants.end()});
    const VerifyReport rep = verify_variants(p.mesh, p.u, a.params, cfg, ids, hooks.perturb);

    out << "mesh " << p.src.describe() << " (" << p.mesh.n_elems() << " elements), init " << p.init.to_string()
        << ", tolerance " << fmt("%.1e", rep.tolerance) << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-12s %-12s %-12s %s\n", "variant", "max_abs", "max_rel", "worst",
                  "status");
    out << line;
    for (const VariantCheck& c : rep.checks) {
        std::string worst = std::to_string(c.diff.worst_node) + "." + "xyz"[c.diff.worst_component];
        if (c.diff.nonfinite_node)
            worst = std::to_string(*c.diff.nonfinite_node) + " (non-finite)";
        std::snprintf(line, sizeof line, "%-8s %-12.3e %-12.3e %-12s %s\n", std::string(variant_label(c.id)).c_str(),
                      c.diff.max_abs, c.diff.max_rel, worst.c_str(), c.pass ? "PASS" : "FAIL");
        out << line;
    }
    out << (rep.pass ? "all variants match the reference\n" : "verification FAILED\n");
    return rep.pass ? 0 : 1;
}

void print_record(std::ostream& out, const BenchRecord& r)
{
    out << r.variant << ": " << r.mesh.describe() << ", " << r.n_elems << " elements, " << r.n_threads
        << " thread(s), vector_dim " << r.vector_dim << ", " << r.scatter << " scatter\n";
    out << "  median " << fmt("%.6f", r.median_time) << " s  min " << fmt("%.6f", r.min_time) << " s  max "
        << fmt("%.6f", r.max_time) << " s  (" << r.reps << " reps)  " << fmt("%.3f", r.melems_per_s)
        << " Melem/s\n";
    out << "  ledger: " << r.ledger.flops_per_elem << " Flop/elem, " << r.ledger.loadstore_per_elem
        << " load/store/elem, " << r.ledger.intermediate_doubles_per_elem << " intermediate doubles/elem\n";
    out << "  checksum " << format_checksum(r.checksum) << "  verify ";
    if (!r.verified)
        out << "skipped\n";
    else
        out << (*r.verified ? "PASS" : "FAIL") << " (max rel " << fmt("%.3e", *r.verify_max_rel) << ")\n";
}

BenchOptions bench_options(const Args& a, const CliHooks& hooks)
{
    BenchOptions o;
    o.cfg = run_config(a);
    o.params = a.params;
    o.verify = !a.no_verify;
    o.stable_output = a.stable_output;
    o.perturb = hooks.perturb;
    return o;
}

int cmd_bench(const Args& a, std::ostream& out, std::ostream& err, const CliHooks& hooks)
{
    const Problem p = problem(a);
    BenchOptions o = bench_options(a, hooks);
    const std::vector<VariantId> ids = variants(a, {kAllVariants.begin(), kAllVariants.end()});
    if (o.cfg.reps < 3)
        err << "warning: fewer than 3 reps make the median unreliable\n";
    std::vector<BenchRecord> records;
    bool ok = true;
    for (VariantId id : ids) {
        o.variant = id;
        records.push_back(run_bench(p.mesh, p.src, p.init, p.u, o));
        print_record(out, records.back());
        ok = ok && records.back().verified.value_or(true);
    }
    if (!a.json_path.empty())
        write_file(a.json_path, to_json(records));
    return ok ? 0 : 1;
}

int cmd_sweep(const Args& a, std::ostream& out, const CliHooks& hooks)
{
    const Problem p = problem(a);
    SweepSpec spec;
    spec.threads = a.thread_list;
    spec.variants = variants(a, {VariantId::RSP});
    for (int t : spec.threads)
        if (t < 1)
            throw InvalidArgument("thread counts must be >= 1");
    const std::vector<SweepRow> rows = run_sweep(p.mesh, p.src, p.init, p.u, spec, bench_options(a, hooks));
    const std::string csv = sweep_csv(rows);
    if (a.csv_path.empty())
        out << csv;
    else
        write_file(a.csv_path, csv);
    if (!a.json_path.empty()) {
        std::vector<BenchRecord> records;
        for (const SweepRow& r : rows)
            records.push_back(r.record);
        write_file(a.json_path, to_json(records));
    }
    for (const SweepRow& r : rows)
        if (!r.record.verified.value_or(true))
            return 1;
    return 0;
}

int cmd_roofline(const Args& a, std::ostream& out)
{
    if (!a.paper_preset.empty() && !a.from_bench.empty())
        throw InvalidArgument("--paper-preset and --from-bench are mutually exclusive");
    MemoryLevel level;
    if (a.level == "dram")
        level = MemoryLevel::dram;
    else if (a.level == "l2")
        level = MemoryLevel::l2;
    else
        throw InvalidArgument("unknown memory level '" + a.level + "' (expected dram or l2)");

    std::string machine_name = a.machine.empty() ? "icelake-8360y-socket" : a.machine;
    std::vector<CodePoint> points;
    if (!a.paper_preset.empty()) {
        const auto preset = paper_preset(a.paper_preset);
        if (!preset)
            throw InvalidArgument("unknown paper preset '" + a.paper_preset + "'");
        if (a.machine.empty())
            machine_name = preset->machine;
        points = code_points(*preset, level);
    } else {
        if (level != MemoryLevel::dram)
            throw InvalidArgument("--level l2 needs a published counter preset (the ledger models DRAM traffic only)");
        if (!a.from_bench.empty()) {
            for (const BenchRecord& r : load_records(a.from_bench))
                points.push_back(code_point(r));
        } else {
            for (VariantId id : kAllVariants) {
                const CounterLedger l = make_ledger(id, RunConfig{});
                points.push_back({std::string(variant_label(id)), double(l.flops_per_elem),
                                  double(l.bytes_dram_est), std::nullopt});
            }
        }
    }
    const auto machine = machine_preset(machine_name);
    if (!machine)
        throw InvalidArgument("unknown machine preset '" + machine_name + "'");
    if (points.empty())
        throw InvalidArgument("no code points to plot");

    const RooflineDataset data = roofline_dataset(*machine, points, a.extra_roof);
    out << "machine " << machine->name << ": " << fmt("%g", machine->mem_bandwidth) << " GB/s, "
        << fmt("%g", machine->fp_peak) << " GFlop/s, balance " << fmt("%.3g", machine_balance(*machine))
        << " Flop/B\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %10s %-8s %12s %12s\n", "label", "AI", "bound", "attainable", "measured");
    out << line;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const RooflineReport& r = data.reports[k];
        const std::string measured = points[k].measured_gflops ? fmt("%.4g", *points[k].measured_gflops) : "-";
        std::snprintf(line, sizeof line, "%-10s %10.3g %-8s %12.4g %12s\n", points[k].label.c_str(), r.code_ai,
                      std::string(to_string(r.bound)).c_str(), r.attainable_gflops, measured.c_str());
        out << line;
    }
    if (!a.gnuplot_path.empty())
        write_file(a.gnuplot_path, to_gnuplot(data));
    if (a.csv_path.empty())
        out << "\n" << to_csv(data);
    else
        write_file(a.csv_path, to_csv(data));
    return 0;
}

int cmd_report(const Args& a, std::ostream& out)
{
    std::vector<BenchRecord> records;
    for (const std::string& path : a.inputs) {
        std::vector<BenchRecord> r = load_records(path);
        records.insert(records.end(), r.begin(), r.end());
    }
    const std::string name = a.machine.empty() ? "icelake-8360y-socket" : a.machine;
    const auto machine = machine_preset(name);
    if (!machine)
        throw InvalidArgument("unknown machine preset '" + name + "'");
    const std::string md = render_report(records, *machine);
    if (a.output_path.empty())
        out << md;
    else
        write_file(a.output_path, md);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliHooks& hooks)
{
    Args a;
    CLI::App app{"Element RHS assembly variants: verification, benchmarks and roofline analysis",
                 "tet-assembly-lab"};
    app.require_subcommand(1);

    CLI::App* verify = app.add_subcommand("verify", "Compare every variant against the reference assembly");
    add_mesh_options(verify, a);
    add_run_options(verify, a);

    CLI::App* bench = app.add_subcommand("bench", "Time variants (median of reps after one warm-up)");
    add_mesh_options(bench, a);
    add_run_options(bench, a);
    bench->add_option("--reps", a.reps, "Timed repetitions");
    bench->add_option("--json", a.json_path, "Write records as JSON");
    bench->add_flag("--no-verify", a.no_verify, "Skip the oracle check");
    bench->add_flag("--stable-output", a.stable_output, "Zero timing fields for reproducible output");

    CLI::App* sweep = app.add_subcommand("sweep", "Thread-count scaling sweep");
    add_mesh_options(sweep, a);
    add_run_options(sweep, a);
    sweep->add_option("--threads-list", a.thread_list, "Thread counts (default 1,2,4)")->delimiter(',');
    sweep->add_option("--reps", a.reps, "Timed repetitions");
    sweep->add_option("--csv", a.csv_path, "Write the CSV here instead of stdout");
    sweep->add_option("--json", a.json_path, "Also write records as JSON");
    sweep->add_flag("--no-verify", a.no_verify, "Skip the oracle check");
    sweep->add_flag("--stable-output", a.stable_output, "Zero timing fields for reproducible output");

    CLI::App* roof = app.add_subcommand("roofline", "Roofline data from the ledger, bench JSON or published counter tables");
    roof->add_option("--paper-preset", a.paper_preset, "cpu-table1 or gpu-table2");
    roof->add_option("--from-bench", a.from_bench, "Bench JSON file");
    roof->add_option("--machine", a.machine, "icelake-8360y-socket or a100-sxm4-40g");
    roof->add_option("--level", a.level, "Memory level for the intensity: dram or l2");
    roof->add_option("--extra-roof", a.extra_roof, "Additional compute roof, GFlop/s");
    roof->add_option("--csv", a.csv_path, "Write the CSV here instead of stdout");
    roof->add_option("--gnuplot", a.gnuplot_path, "Write gnuplot data blocks");

    CLI::App* report = app.add_subcommand("report", "Markdown summary of bench JSON files");
    report->add_option("inputs", a.inputs, "Bench JSON files")->required();
    report->add_option("--machine", a.machine, "Machine preset for the roofline section");
    report->add_option("--output", a.output_path, "Write the report here instead of stdout");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (sub == verify)
            return cmd_verify(a, out, hooks);
        if (sub == bench)
            return cmd_bench(a, out, err, hooks);
        if (sub == sweep)
            return cmd_sweep(a, out, hooks);
        if (sub == roof)
            return cmd_roofline(a, out);
        return cmd_report(a, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n" << "run 'tet-assembly-lab " << sub->get_name()
            << " --help' for usage\n";
        return 2;
    }
}

} // namespace tal
