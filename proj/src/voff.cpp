#include "axw/error.hpp"
#include "axw/mesh.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace axw {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next line that is neither blank nor a comment.
    bool next(std::string& line)
    {
        while (std::getline(in_, line)) {
            ++number_;
            auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#')
                continue;
            return true;
        }
        return false;
    }

    std::string where() const { return "line " + std::to_string(number_); }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

std::vector<std::string> tokenize(const std::string& line)
{
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    for (std::string t; ss >> t;)
        tokens.push_back(t);
    return tokens;
}

template <typename T>
T parse_number(const std::string& token, const std::string& where)
{
    T value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(where + ": bad number '" + token + "'");
    return value;
}

std::string fixed(double x, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, quantize(x, precision));
    return buf;
}

} // namespace

MeshWithFunction read_voff(std::istream& in, int precision)
{
    LineReader reader(in);
    std::string line;

    if (!reader.next(line))
        throw ParseError("empty VOFF input");
    auto header = tokenize(line);
    if (header.size() != 2 || header[0] != "VOFF")
        throw ParseError(reader.where() + ": expected 'VOFF k'");
    auto k = parse_number<std::size_t>(header[1], reader.where());
    if (k == 0)
        throw ParseError(reader.where() + ": k must be positive");

    if (!reader.next(line))
        throw ParseError("missing vertex/cell counts");
    auto counts = tokenize(line);
    if (counts.size() != 2)
        throw ParseError(reader.where() + ": expected 'nv nc'");
    auto nv = parse_number<std::size_t>(counts[0], reader.where());
    auto nc = parse_number<std::size_t>(counts[1], reader.where());

    std::vector<std::vector<double>> coords;
    std::vector<double> values;
    values.reserve(nv * k);
    std::size_t embed_dim = 0;
    for (std::size_t v = 0; v < nv; ++v) {
        if (!reader.next(line))
            throw ParseError("expected " + std::to_string(nv) + " vertex lines, got " + std::to_string(v));
        auto bar = line.find('|');
        if (bar == std::string::npos)
            throw ParseError(reader.where() + ": vertex line lacks '|' separator");
        auto left = tokenize(line.substr(0, bar));
        auto right = tokenize(line.substr(bar + 1));
        if (v == 0)
            embed_dim = left.size();
        else if (left.size() != embed_dim)
            throw ParseError(reader.where() + ": inconsistent embedding dimension");
        if (right.size() != k)
            throw DimensionMismatch(reader.where() + ": header declares k=" + std::to_string(k) +
                                    " but vertex has " + std::to_string(right.size()) + " values");
        if (embed_dim > 0) {
            std::vector<double> row;
            for (const auto& t : left)
                row.push_back(quantize(parse_number<double>(t, reader.where()), precision));
            coords.push_back(std::move(row));
        }
        for (const auto& t : right)
            values.push_back(parse_number<double>(t, reader.where()));
    }

    std::vector<std::vector<VertexId>> cells;
    cells.reserve(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        if (!reader.next(line))
            throw ParseError("expected " + std::to_string(nc) + " cell lines, got " + std::to_string(c));
        auto tokens = tokenize(line);
        auto m = parse_number<long>(tokens.at(0), reader.where());
        if (m < 0 || tokens.size() != static_cast<std::size_t>(m) + 2)
            throw ParseError(reader.where() + ": cell of dimension " + tokens[0] + " needs " +
                             std::to_string(m + 1) + " vertex ids");
        std::vector<VertexId> cell;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            auto id = parse_number<long>(tokens[i], reader.where());
            if (id < 0 || static_cast<std::size_t>(id) >= nv)
                throw ValidationError(reader.where() + ": vertex id " + tokens[i] + " out of range");
            cell.push_back(static_cast<VertexId>(id));
        }
        cells.push_back(std::move(cell));
    }
    if (reader.next(line))
        throw ParseError(reader.where() + ": trailing content after the declared cells");

    return MeshWithFunction(SimplicialComplex::from_cells(nv, cells, std::move(coords)),
                            VertexFunction(k, std::move(values), precision, true));
}

MeshWithFunction load_voff(const std::filesystem::path& path, int precision)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());
    return read_voff(in, precision);
}

void write_voff(std::ostream& out, const MeshWithFunction& mesh)
{
    const auto& K = mesh.complex();
    const auto& phi = mesh.function();
    const int p = phi.precision();

    std::vector<SimplexId> cells;
    for (auto s : K.maximal_simplices())
        if (K.dim_of(s) > 0)
            cells.push_back(s);

    out << "VOFF " << phi.components() << '\n';
    out << K.num_vertices() << ' ' << cells.size() << '\n';
    for (VertexId v = 0; v < static_cast<VertexId>(K.num_vertices()); ++v) {
        std::string row;
        if (!K.coordinates().empty())
            for (double x : K.coordinates()[static_cast<std::size_t>(v)])
                row += fixed(x, p) + ' ';
        row += '|';
        for (double x : phi[v])
            row += ' ' + fixed(x, p);
        out << row << '\n';
    }
    for (auto s : cells) {
        out << K.dim_of(s);
        for (auto v : K.vertices_of(s))
            out << ' ' << v;
        out << '\n';
    }
}

void save_voff(const std::filesystem::path& path, const MeshWithFunction& mesh)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    write_voff(out, mesh);
}

} // namespace axw
