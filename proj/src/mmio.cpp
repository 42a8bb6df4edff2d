#include "hpsparse/mmio.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hps {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

struct Banner {
    std::string object, format, field, symmetry;
};

Banner read_banner(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::istringstream ls(line);
    std::string tag;
    Banner b;
    ls >> tag >> b.object >> b.format >> b.field >> b.symmetry;
    if (tag != "%%MatrixMarket" || ls.fail())
        throw std::runtime_error(path + ": malformed Matrix Market banner: " + line);
    b.object = lower(b.object);
    b.format = lower(b.format);
    b.field = lower(b.field);
    b.symmetry = lower(b.symmetry);
    if (b.object != "matrix") throw std::runtime_error(path + ": unsupported object " + b.object);
    return b;
}

void skip_comments(std::istream& in, std::string& line, const std::string& path) {
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '%') continue;
        return;
    }
    throw std::runtime_error(path + ": missing size line");
}

}  // namespace

CsrMatrix load_matrix_market(const std::string& path, bool symmetry_expand) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Banner b = read_banner(in, path);
    if (b.format != "coordinate")
        throw std::runtime_error(path + ": only coordinate format supported, got " + b.format);
    if (b.field == "complex")
        throw std::runtime_error(path + ": complex field not supported");
    if (b.field == "pattern")
        throw std::runtime_error(path + ": pattern field not supported");
    if (b.field != "real" && b.field != "integer" && b.field != "double")
        throw std::runtime_error(path + ": unsupported field " + b.field);
    const bool symmetric = b.symmetry == "symmetric";
    if (!symmetric && b.symmetry != "general")
        throw std::runtime_error(path + ": unsupported symmetry " + b.symmetry);

    std::string line;
    skip_comments(in, line, path);
    long long rows, cols, nnz;
    {
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz))
            throw std::runtime_error(path + ": malformed size line: " + line);
    }
    if (rows < 0 || cols < 0 || nnz < 0)
        throw std::runtime_error(path + ": negative size");

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(symmetric && symmetry_expand ? 2 * nnz : nnz));
    for (long long e = 0; e < nnz; ++e) {
        long long i, j;
        double v;
        if (!(in >> i >> j >> v))
            throw std::runtime_error(path + ": malformed entry " + std::to_string(e + 1));
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw std::runtime_error(path + ": entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") outside declared " +
                                     std::to_string(rows) + "x" + std::to_string(cols));
        const int r = static_cast<int>(i - 1), c = static_cast<int>(j - 1);
        trips.push_back({r, c, v});
        if (symmetric && symmetry_expand && r != c) trips.push_back({c, r, v});
    }
    return csr_from_triplets(static_cast<int>(rows), static_cast<int>(cols), std::move(trips));
}

void write_matrix_market(const std::string& path, const CsrMatrix& m) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
    std::fprintf(f, "%d %d %d\n", m.n_rows, m.n_cols, m.nnz());
    for (int r = 0; r < m.n_rows; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
            std::fprintf(f, "%d %d %.17g\n", r + 1, m.col_idx[k] + 1, m.values[k]);
    std::fclose(f);
}

std::vector<double> load_matrix_market_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Banner b = read_banner(in, path);
    if (b.format != "array")
        throw std::runtime_error(path + ": vector files must use array format");
    if (b.field != "real" && b.field != "integer" && b.field != "double")
        throw std::runtime_error(path + ": unsupported field " + b.field);
    std::string line;
    skip_comments(in, line, path);
    long long rows, cols;
    {
        std::istringstream ls(line);
        if (!(ls >> rows >> cols)) throw std::runtime_error(path + ": malformed size line");
    }
    if (cols != 1) throw std::runtime_error(path + ": expected a single-column vector");
    std::vector<double> v(static_cast<std::size_t>(rows));
    for (auto& x : v)
        if (!(in >> x)) throw std::runtime_error(path + ": truncated vector data");
    return v;
}

}  // namespace hps
