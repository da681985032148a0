#include "tal/mesh.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string_view>
#include <utility>

namespace tal {

namespace {

// Splits the stream into whitespace tokens, skipping '#' comments, and keeps
// track of the line each token came from.
class Tokenizer {
public:
    Tokenizer(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    bool next(std::string& tok)
    {
        while (pos_ >= tokens_.size()) {
            std::string line;
            if (!std::getline(in_, line))
                return false;
            ++line_;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.resize(hash);
            std::istringstream ls(line);
            tokens_.clear();
            pos_ = 0;
            for (std::string t; ls >> t;)
                tokens_.push_back(std::move(t));
        }
        tok = tokens_[pos_++];
        return true;
    }

    std::string expect(const char* what)
    {
        std::string tok;
        if (!next(tok))
            fail(std::string("unexpected end of file, expected ") + what);
        return tok;
    }

    template <class T>
    T number(const char* what)
    {
        const std::string tok = expect(what);
        T value{};
        const char* end = tok.data() + tok.size();
        auto [ptr, ec] = std::from_chars(tok.data(), end, value);
        if (ec != std::errc() || ptr != end)
            fail("expected " + std::string(what) + ", got '" + tok + "'");
        return value;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::string source_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

} // namespace

void write_mesh(const Mesh& mesh, std::ostream& out)
{
    out << "# tet-assembly-lab mesh\n";
    out << "nodes " << mesh.n_nodes() << "\n";
    out << std::setprecision(17);
    for (const Vec3& x : mesh.coords)
        out << x[0] << " " << x[1] << " " << x[2] << "\n";
    out << "elems " << mesh.n_elems() << "\n";
    for (const Tet& t : mesh.elems)
        out << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_mesh(mesh, out);
    if (!out)
        throw std::runtime_error("error writing " + path.string());
}

Mesh read_mesh(std::istream& in, const std::string& source, std::size_t* n_reoriented)
{
    Tokenizer tok(in, source);
    Mesh mesh;

    if (tok.expect("'nodes'") != "nodes")
        tok.fail("expected 'nodes' header");
    const auto n_nodes = tok.number<std::size_t>("node count");
    mesh.coords.resize(n_nodes);
    for (Vec3& x : mesh.coords)
        for (double& v : x)
            v = tok.number<double>("coordinate");

    if (tok.expect("'elems'") != "elems")
        tok.fail("expected 'elems' header");
    const auto n_elems = tok.number<std::size_t>("element count");
    mesh.elems.resize(n_elems);
    for (std::size_t e = 0; e < n_elems; ++e) {
        for (NodeIndex& n : mesh.elems[e]) {
            const auto idx = tok.number<std::uint64_t>("node index");
            if (idx >= n_nodes) {
                std::ostringstream os;
                os << source << ":" << tok.line() << ": element " << e << " references node " << idx
                   << " but the mesh has " << n_nodes << " nodes";
                throw ValidationError(os.str());
            }
            n = static_cast<NodeIndex>(idx);
        }
    }
    std::string extra;
    if (tok.next(extra))
        tok.fail("unexpected trailing token '" + extra + "'");

    std::size_t flipped = 0;
    for (ElemIndex e = 0; e < mesh.n_elems(); ++e) {
        const double v = signed_volume(mesh, e);
        if (std::abs(v) <= kVolumeEpsilon)
            throw DegenerateElementError(e, v);
        if (v < 0.0) {
            std::swap(mesh.elems[e][1], mesh.elems[e][2]);
            ++flipped;
        }
    }
    if (flipped > 0)
        std::cerr << "warning: " << source << ": re-oriented " << flipped << " inverted element(s)\n";
    if (n_reoriented)
        *n_reoriented = flipped;
    return mesh;
}

Mesh load_mesh(const std::filesystem::path& path, std::size_t* n_reoriented)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open mesh file " + path.string());
    return read_mesh(in, path.string(), n_reoriented);
}

} // namespace tal
