#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dense_matrix.hpp"
#include "errors.hpp"
#include "sparse_sym.hpp"

namespace specsparse {

// Matrix Market exchange format, the two shapes this project emits:
//   %%MatrixMarket matrix coordinate real symmetric   (lower triangle, 1-based)
//   %%MatrixMarket matrix array real general          (column-major values)
// Values are written with 17 significant digits so doubles round-trip exactly.

namespace mm_detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Header {
    bool coordinate = false;
    bool symmetric = false;
};

inline Header parse_header(const std::string& line, const std::string& path) {
    std::istringstream iss(line);
    std::string banner, object, format, field, symmetry;
    iss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix")
        throw ParseError(path + ": not a MatrixMarket matrix file");
    Header h;
    if (format == "coordinate")
        h.coordinate = true;
    else if (format != "array")
        throw ParseError(path + ": unsupported format '" + format + "'");
    if (field != "real")
        throw ParseError(path + ": unsupported field '" + field + "'");
    if (symmetry == "symmetric")
        h.symmetric = true;
    else if (symmetry != "general")
        throw ParseError(path + ": unsupported symmetry '" + symmetry + "'");
    return h;
}

inline bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '%') continue;
        return true;
    }
    return false;
}

} // namespace mm_detail

struct MatrixMarketData {
    bool symmetric = false; // file declared the symmetric storage scheme
    DenseMatrix dense;      // always populated (symmetric files are mirrored)
};

inline MatrixMarketData read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    mm_detail::Header h = mm_detail::parse_header(line, path);

    if (!mm_detail::next_data_line(in, line))
        throw ParseError(path + ": missing size line");
    std::istringstream sz(line);
    long rows = 0, cols = 0, nnz = 0;
    if (h.coordinate) {
        if (!(sz >> rows >> cols >> nnz))
            throw ParseError(path + ": bad coordinate size line");
    } else {
        if (!(sz >> rows >> cols))
            throw ParseError(path + ": bad array size line");
    }
    if (rows <= 0 || cols <= 0)
        throw ParseError(path + ": non-positive dimensions");

    MatrixMarketData out;
    out.symmetric = h.symmetric;
    out.dense = DenseMatrix(static_cast<int>(rows), static_cast<int>(cols));

    if (h.coordinate) {
        std::set<std::pair<long, long>> seen;
        for (long k = 0; k < nnz; ++k) {
            if (!mm_detail::next_data_line(in, line))
                throw ParseError(path + ": fewer entries than declared");
            std::istringstream es(line);
            long i = 0, j = 0;
            double v = 0.0;
            if (!(es >> i >> j >> v))
                throw ParseError(path + ": malformed coordinate entry");
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw ParseError(path + ": coordinate index out of range");
            if (h.symmetric && j > i)
                throw ParseError(path + ": symmetric file with upper-triangle entry");
            if (!seen.insert({i, j}).second)
                throw ParseError(path + ": duplicate coordinate entry");
            out.dense(static_cast<int>(i - 1), static_cast<int>(j - 1)) = v;
            if (h.symmetric && i != j)
                out.dense(static_cast<int>(j - 1), static_cast<int>(i - 1)) = v;
        }
    } else {
        for (long j = 0; j < cols; ++j)
            for (long i = 0; i < rows; ++i) {
                if (!mm_detail::next_data_line(in, line))
                    throw ParseError(path + ": fewer values than declared");
                std::istringstream es(line);
                double v = 0.0;
                if (!(es >> v)) throw ParseError(path + ": malformed array value");
                out.dense(static_cast<int>(i), static_cast<int>(j)) = v;
            }
    }
    return out;
}

inline void write_matrix_market(const std::string& path, const DenseMatrix& m) {
    std::ofstream outf(path);
    if (!outf) throw IoError("cannot open '" + path + "' for writing");
    outf << "%%MatrixMarket matrix array real general\n";
    outf << m.rows() << " " << m.cols() << "\n";
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            outf << mm_detail::fmt17(m(i, j)) << "\n";
    if (!outf) throw IoError("write to '" + path + "' failed");
}

inline void write_matrix_market(const std::string& path, const SparseSymMatrix& m) {
    std::ofstream outf(path);
    if (!outf) throw IoError("cannot open '" + path + "' for writing");
    outf << "%%MatrixMarket matrix coordinate real symmetric\n";
    outf << m.n() << " " << m.n() << " " << m.entries().size() << "\n";
    // stored triangle has i <= j; symmetric files carry the lower triangle
    for (const auto& e : m.entries())
        outf << (e.j + 1) << " " << (e.i + 1) << " " << mm_detail::fmt17(e.value) << "\n";
    if (!outf) throw IoError("write to '" + path + "' failed");
}

/// Writes a symmetric dense matrix in coordinate symmetric form (nonzeros only).
inline void write_matrix_market_sym(const std::string& path, const DenseMatrix& m) {
    if (!m.is_symmetric())
        throw AsymmetricInput("write_matrix_market_sym: matrix is not symmetric");
    SparseSymMatrix s(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i; j < m.cols(); ++j)
            if (m(i, j) != 0.0) s.push(i, j, m(i, j));
    write_matrix_market(path, s);
}

inline SparseSymMatrix read_matrix_market_sparse(const std::string& path) {
    MatrixMarketData d = read_matrix_market(path);
    if (!d.symmetric)
        throw ParseError(path + ": expected a symmetric coordinate file");
    SparseSymMatrix s(d.dense.rows());
    for (int i = 0; i < d.dense.rows(); ++i)
        for (int j = i; j < d.dense.cols(); ++j)
            if (d.dense(i, j) != 0.0) s.push(i, j, d.dense(i, j));
    return s;
}

} // namespace specsparse
