#include "pdprobe/matrix_market.hpp"

#include "pdprobe/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace pdprobe {

Index dim(const LoadedMatrix& m)
{
    return std::visit([](const auto& x) { return x.dim(); }, m);
}

SymmetricOperator make_operator(const LoadedMatrix& m)
{
    return std::visit([](const auto& x) { return make_operator(x); }, m);
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size())
    {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no, const char* what)
{
    T value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("invalid " + std::string(what) + " '" + std::string(token) + "'", line_no);
    return value;
}

double parse_value(std::string_view token, std::size_t line_no)
{
    const double v = parse_number<double>(token, line_no, "value");
    if (!std::isfinite(v))
        throw ParseError("non-finite value", line_no);
    return v;
}

/// Yields data lines, skipping comments and blank lines, tracking line numbers.
class LineReader
{
public:
    explicit LineReader(std::istream& in) : m_in(in) {}

    bool next(std::string& line)
    {
        while (std::getline(m_in, line))
        {
            ++m_line;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '%')
                continue;
            return true;
        }
        return false;
    }

    std::size_t line() const { return m_line; }

    bool raw(std::string& line)
    {
        if (!std::getline(m_in, line))
            return false;
        ++m_line;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return true;
    }

private:
    std::istream& m_in;
    std::size_t m_line = 0;
};

struct Entry
{
    Index row;
    Index col;
    double value;
    std::size_t line;
};

}  // namespace

LoadedMatrix read_matrix_market(std::istream& in)
{
    LineReader reader(in);
    std::string line;
    if (!reader.raw(line))
        throw ParseError("empty input", 1);

    const auto banner = split(line);
    if (banner.size() != 5 || lower(std::string(banner[0])) != "%%matrixmarket")
        throw ParseError("malformed header, expected '%%MatrixMarket matrix <format> real symmetric'", reader.line());
    const std::string object = lower(std::string(banner[1]));
    const std::string format = lower(std::string(banner[2]));
    const std::string field = lower(std::string(banner[3]));
    const std::string symmetry = lower(std::string(banner[4]));
    if (object != "matrix")
        throw ParseError("unsupported object '" + object + "'", reader.line());
    if (format != "coordinate" && format != "array")
        throw ParseError("unsupported format '" + format + "'", reader.line());
    if (field != "real" && field != "double" && field != "integer")
        throw ParseError("unsupported field '" + field + "', expected real", reader.line());
    if (symmetry != "symmetric")
        throw ParseError("non-symmetric field '" + symmetry + "', expected symmetric", reader.line());

    if (!reader.next(line))
        throw ParseError("missing size line", reader.line() + 1);
    const auto size = split(line);
    const std::size_t size_line = reader.line();

    if (format == "array")
    {
        if (size.size() != 2)
            throw ParseError("array size line must hold 'rows cols'", size_line);
        const auto rows = parse_number<long long>(size[0], size_line, "row count");
        const auto cols = parse_number<long long>(size[1], size_line, "column count");
        if (rows != cols || rows < 1)
            throw ParseError("matrix must be square with positive dimension", size_line);
        if (rows > default_dense_cap)
            throw ParseError("array matrix exceeds the dense dimension cap", size_line);
        const auto n = static_cast<Index>(rows);
        Matrix values = Matrix::Zero(n, n);
        for (Index j = 0; j < n; ++j)
        {
            for (Index i = j; i < n; ++i)
            {
                if (!reader.next(line))
                    throw ParseError("unexpected end of file, " + std::to_string(n * (n + 1) / 2) + " values expected",
                                     reader.line() + 1);
                const auto tokens = split(line);
                if (tokens.size() != 1)
                    throw ParseError("expected one value per line", reader.line());
                values(i, j) = values(j, i) = parse_value(tokens[0], reader.line());
            }
        }
        if (reader.next(line))
            throw ParseError("trailing data after the last value", reader.line());
        return DenseSymmetricMatrix(std::move(values));
    }

    if (size.size() != 3)
        throw ParseError("coordinate size line must hold 'rows cols entries'", size_line);
    const auto rows = parse_number<long long>(size[0], size_line, "row count");
    const auto cols = parse_number<long long>(size[1], size_line, "column count");
    const auto nnz = parse_number<long long>(size[2], size_line, "entry count");
    if (rows != cols || rows < 1)
        throw ParseError("matrix must be square with positive dimension", size_line);
    if (nnz < 0 || nnz > rows * (rows + 1) / 2)
        throw ParseError("entry count out of range", size_line);
    const auto n = static_cast<Index>(rows);

    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    for (long long e = 0; e < nnz; ++e)
    {
        if (!reader.next(line))
            throw ParseError("unexpected end of file, " + std::to_string(nnz) + " entries expected",
                             reader.line() + 1);
        const auto tokens = split(line);
        if (tokens.size() != 3)
            throw ParseError("expected 'row col value'", reader.line());
        const auto i = parse_number<long long>(tokens[0], reader.line(), "row index");
        const auto j = parse_number<long long>(tokens[1], reader.line(), "column index");
        if (i < 1 || i > rows || j < 1 || j > rows)
            throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range", reader.line());
        if (j > i)
            throw ParseError("entry above the diagonal in a symmetric file", reader.line());
        entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), parse_value(tokens[2], reader.line()),
                           reader.line()});
    }
    if (reader.next(line))
        throw ParseError("trailing data after the last entry", reader.line());

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.row, a.col, a.line) < std::tie(b.row, b.col, b.line);
    });
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k)
    {
        if (k > 0 && entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col)
            throw ParseError("duplicate entry (" + std::to_string(entries[k].row + 1) + ", " +
                                 std::to_string(entries[k].col + 1) + ")",
                             entries[k].line);
        triplets.emplace_back(entries[k].row, entries[k].col, entries[k].value);
    }
    return SparseSymmetricMatrix::from_triangle(n, triplets);
}

LoadedMatrix load_matrix_market(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    return read_matrix_market(in);
}

namespace {

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw IoError("cannot format value");
    return std::string(buf.data(), ptr);
}

void write_lower(Index n, const std::vector<Entry>& lower, std::ostream& out)
{
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << n << ' ' << n << ' ' << lower.size() << '\n';
    for (const auto& e : lower)
        out << (e.row + 1) << ' ' << (e.col + 1) << ' ' << format_double(e.value) << '\n';
    if (!out)
        throw IoError("write failed");
}

}  // namespace

void write_matrix_market(const SparseSymmetricMatrix& m, std::ostream& out)
{
    // Column-major order of the lower triangle.
    const SparseSymmetricMatrix::Storage& csr = m.csr();
    std::vector<Entry> lower;
    for (Index r = 0; r < csr.outerSize(); ++r)
        for (SparseSymmetricMatrix::Storage::InnerIterator it(csr, r); it; ++it)
            if (it.col() <= r && it.value() != 0.0)
                lower.push_back({r, it.col(), it.value(), 0});
    std::sort(lower.begin(), lower.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.col, a.row) < std::tie(b.col, b.row); });
    write_lower(m.dim(), lower, out);
}

void write_matrix_market(const DenseSymmetricMatrix& m, std::ostream& out)
{
    std::vector<Entry> lower;
    for (Index j = 0; j < m.dim(); ++j)
        for (Index i = j; i < m.dim(); ++i)
            if (m(i, j) != 0.0)
                lower.push_back({i, j, m(i, j), 0});
    write_lower(m.dim(), lower, out);
}

namespace {

template <typename M>
void save_impl(const M& m, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    write_matrix_market(m, out);
    out.close();
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

void save_matrix_market(const SparseSymmetricMatrix& m, const std::filesystem::path& path)
{
    save_impl(m, path);
}

void save_matrix_market(const DenseSymmetricMatrix& m, const std::filesystem::path& path)
{
    save_impl(m, path);
}

}  // namespace pdprobe
