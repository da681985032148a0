#include "tal/harness.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace tal;

namespace {

struct Setup {
    MeshSource src;
    Mesh mesh;
    InitSpec init;
    NodalVelocity u;

    explicit Setup(int n, const char* init_text = "random:1")
    {
        src.box = std::array<int, 3>{n, n, n};
        mesh = build_mesh(src);
        init = parse_init(init_text);
        u = make_velocity(mesh, init);
    }
};

BenchOptions options(VariantId id, int reps = 3)
{
    BenchOptions o;
    o.variant = id;
    o.cfg.reps = reps;
    return o;
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("tal_test_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST_CASE("checksum")
{
    GlobalRhs r(2);
    r.values[0] = {1.0, -2.0, 0.5};
    r.values[1] = {0.0, 0.25, -0.25};
    CHECK(rhs_checksum(r) == doctest::Approx(-0.5 + 4.0));
    CHECK(format_checksum(0.1) == "0.10000000000000001");
}

TEST_CASE("bench record invariants")
{
    const Setup s(6);
    for (VariantId id : kAllVariants) {
        const BenchRecord r = run_bench(s.mesh, s.src, s.init, s.u, options(id));
        CHECK(r.variant == variant_label(id));
        CHECK(r.n_elems == s.mesh.n_elems());
        CHECK(r.min_time <= r.median_time);
        CHECK(r.median_time <= r.max_time);
        CHECK(r.min_time > 0.0);
        CHECK(r.melems_per_s == doctest::Approx(double(r.n_elems) / r.median_time / 1e6));
        REQUIRE(r.verified);
        CHECK(*r.verified);
        CHECK(r.ledger == make_ledger(id, RunConfig{}));
    }
}

TEST_CASE("bench checksums are deterministic and agree across variants")
{
    const Setup s(5, "random:1");
    BenchOptions o = options(VariantId::RSP);
    o.verify = false;
    const BenchRecord a = run_bench(s.mesh, s.src, s.init, s.u, o);
    const BenchRecord b = run_bench(s.mesh, s.src, s.init, s.u, o);
    CHECK(a.checksum == b.checksum);
    CHECK_FALSE(a.verified);
    o.variant = VariantId::B;
    const BenchRecord c = run_bench(s.mesh, s.src, s.init, s.u, o);
    CHECK(c.checksum == doctest::Approx(a.checksum).epsilon(1e-12));
}

TEST_CASE("stable output zeroes timings")
{
    const Setup s(3);
    BenchOptions o = options(VariantId::RS);
    o.stable_output = true;
    const BenchRecord a = run_bench(s.mesh, s.src, s.init, s.u, o);
    const BenchRecord b = run_bench(s.mesh, s.src, s.init, s.u, o);
    CHECK(a.median_time == 0.0);
    CHECK(a.melems_per_s == 0.0);
    CHECK(a == b);
    CHECK(to_json({a}) == to_json({b}));
}

TEST_CASE("perturbation fails verification")
{
    const Setup s(3);
    BenchOptions o = options(VariantId::RSP);
    o.perturb = [](VariantId, GlobalRhs& r) { r.values[0][0] += 1.0; };
    const BenchRecord r = run_bench(s.mesh, s.src, s.init, s.u, o);
    REQUIRE(r.verified);
    CHECK_FALSE(*r.verified);
}

TEST_CASE("JSON round trip is lossless")
{
    const Setup s(3);
    std::vector<BenchRecord> recs;
    for (VariantId id : kAllVariants)
        recs.push_back(run_bench(s.mesh, s.src, s.init, s.u, options(id)));
    recs[1].verified.reset();
    recs[1].verify_max_rel.reset();
    recs[2].mesh = MeshSource{std::nullopt, {1, 1, 1}, "some/file.mesh"};
    const std::string text = to_json(recs);
    const std::vector<BenchRecord> back = records_from_json(text, "mem");
    REQUIRE(back.size() == recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k)
        CHECK(back[k] == recs[k]);
    CHECK(to_json(back) == text);
}

TEST_CASE("malformed JSON")
{
    CHECK_THROWS_AS(records_from_json("{", "x.json"), ParseError);
    CHECK_THROWS_AS(records_from_json("{\"records\": [{\"variant\": 3}]}", "x.json"), ParseError);
    CHECK_THROWS_AS(records_from_json("[]", "x.json"), ParseError);
    try {
        records_from_json("nope", "path/to/x.json");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("path/to/x.json") != std::string::npos);
    }
    CHECK_THROWS_AS(load_records("/nonexistent/dir/x.json"), InvalidArgument);
}

TEST_CASE("sweep")
{
    const Setup s(4);
    SweepSpec spec;
    spec.threads = {2, 1, 2};
    spec.variants = {VariantId::RS, VariantId::RSP};
    const std::vector<SweepRow> rows = run_sweep(s.mesh, s.src, s.init, s.u, spec, options(VariantId::B));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].record.variant == "RS");
    CHECK(rows[0].record.n_threads == 1);
    CHECK(rows[1].record.n_threads == 2);
    CHECK(rows[2].record.variant == "RSP");
    CHECK(rows[0].perfect_scaling_melems_per_s == doctest::Approx(rows[0].record.melems_per_s));
    CHECK(rows[1].perfect_scaling_melems_per_s == doctest::Approx(2.0 * rows[0].record.melems_per_s));

    const std::string csv = sweep_csv(rows);
    std::istringstream in(csv);
    std::string line;
    int n_lines = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
        ++n_lines;
    }
    CHECK(n_lines == 5);
    CHECK(csv.rfind("variant,threads,n_elems,vector_dim,median_s,min_s,max_s,melems_per_s,perfect_scaling_melems_per_s\n",
                    0) == 0);
    CHECK_THROWS_AS(run_sweep(s.mesh, s.src, s.init, s.u, SweepSpec{{}, {VariantId::B}}, options(VariantId::B)),
                    InvalidArgument);
}

TEST_CASE("code point from a bench record")
{
    BenchRecord r;
    r.variant = "RSP";
    r.ledger = make_ledger(VariantId::RSP, RunConfig{});
    CHECK_FALSE(code_point(r).measured_gflops);
    r.melems_per_s = 10.0;
    const CodePoint p = code_point(r);
    CHECK(p.flops_per_elem == 452);
    CHECK(p.bytes_per_elem == 400);
    REQUIRE(p.measured_gflops);
    CHECK(*p.measured_gflops == doctest::Approx(4.52));
}

TEST_CASE("report")
{
    const Setup s(3);
    std::vector<BenchRecord> recs;
    for (VariantId id : kAllVariants)
        recs.push_back(run_bench(s.mesh, s.src, s.init, s.u, options(id)));
    const MachineSpec m = *machine_preset("icelake-8360y-socket");

    const std::string full = render_report(recs, m);
    CHECK(full.find("| B | ") != std::string::npos);
    CHECK(full.find("| 1.00× |") != std::string::npos);
    CHECK(full.find("Flop reduction B/RS: 5.27×") != std::string::npos);
    CHECK(full.find("| 2938 | 5555 | 395 | 18 | 400 |") != std::string::npos);

    const std::string partial = render_report({recs[0], recs[2]}, m);
    CHECK(partial.find("| RS | — | — | — | — | — |") != std::string::npos);
    CHECK(partial.find("Flop reduction B/RS: —") != std::string::npos);

    const std::string no_base = render_report({recs[1]}, m);
    CHECK(no_base.find("| RS | ") != std::string::npos);
    CHECK(no_base.find("× |") == std::string::npos);
    CHECK_THROWS_AS(render_report({}, m), InvalidArgument);
}

TEST_CASE("mesh sources")
{
    MeshSource src;
    CHECK_THROWS_AS(build_mesh(src), InvalidArgument);
    src.box = std::array<int, 3>{1, 2, 1};
    CHECK(build_mesh(src).n_elems() == 12);
    CHECK(src.describe() == "box 1x2x1");

    const auto path = temp_path("m.mesh");
    save_mesh(build_mesh(src), path);
    MeshSource file;
    file.file = path.string();
    CHECK(build_mesh(file).n_elems() == 12);
    CHECK(file.describe() == "file " + path.string());
    std::filesystem::remove(path);
}
