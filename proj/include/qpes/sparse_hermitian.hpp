/*
 * Copyright (c) 2026, the qpes contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qpes/common.hpp"
#include "qpes/dense_matrix.hpp"

namespace qpes {

/// Sparse Hermitian matrix. Immutable after construction; entries are stored
/// for both triangles (conjugate pairs), diagonals real, no duplicates.
class SparseHermitian {
  public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        cplx value;
    };

    /// Builds from explicit triples. Triples may give one triangle only, in
    /// which case the mirror entry is implied; explicit mirrors must agree
    /// with the conjugate to 1e-12 or the input is rejected.
    SparseHermitian(std::size_t dim, const std::vector<Entry> &triples) : dim_(dim) {
        require(dim >= 1, "matrix dimension must be >= 1");
        std::map<std::pair<std::size_t, std::size_t>, cplx> cells;
        for (const auto &e : triples) {
            require(e.row < dim && e.col < dim, "matrix entry index out of range");
            if (!cells.emplace(std::make_pair(e.row, e.col), e.value).second)
                throw validation_error("duplicate matrix entry (" + std::to_string(e.row) +
                                       "," + std::to_string(e.col) + ")");
        }
        // Symmetrize: every stored (u,v) implies (v,u, conj).
        for (const auto &[rc, v] : cells) {
            const auto mirror = std::make_pair(rc.second, rc.first);
            auto it = cells.find(mirror);
            if (rc.first == rc.second) {
                if (std::abs(v.imag()) > 1e-12)
                    throw validation_error("diagonal entry not real at index " +
                                           std::to_string(rc.first));
                continue;
            }
            if (it != cells.end()) {
                if (std::abs(it->second - std::conj(v)) > 1e-12)
                    throw validation_error("non-Hermitian entry pair (" +
                                           std::to_string(rc.first) + "," +
                                           std::to_string(rc.second) + ")");
            }
        }
        std::map<std::pair<std::size_t, std::size_t>, cplx> full;
        for (const auto &[rc, v] : cells) {
            if (rc.first == rc.second) {
                full[rc] = cplx{v.real(), 0.0};
            } else {
                full[rc] = v;
                auto mirror = std::make_pair(rc.second, rc.first);
                if (cells.find(mirror) == cells.end())
                    full[mirror] = std::conj(v);
            }
        }
        entries_.reserve(full.size());
        std::vector<std::size_t> per_row(dim, 0);
        for (const auto &[rc, v] : full) {
            entries_.push_back({rc.first, rc.second, v});
            ++per_row[rc.first];
            max_abs_ = std::max(max_abs_, std::abs(v));
        }
        for (std::size_t r = 0; r < dim; ++r)
            sparsity_ = std::max(sparsity_, per_row[r]);
        row_start_.assign(dim + 1, 0);
        for (const auto &e : entries_)
            ++row_start_[e.row + 1];
        for (std::size_t r = 0; r < dim; ++r)
            row_start_[r + 1] += row_start_[r];
    }

    std::size_t dim() const { return dim_; }
    std::size_t sparsity() const { return sparsity_; }
    double max_abs() const { return max_abs_; }
    const std::vector<Entry> &entries() const { return entries_; }

    /// Stored nonzeros; the memory-model reports use this next to dim*sparsity.
    std::size_t stored_entries() const { return entries_.size(); }

    cplx at(std::size_t r, std::size_t c) const {
        for (std::size_t i = row_start_[r]; i < row_start_[r + 1]; ++i)
            if (entries_[i].col == c)
                return entries_[i].value;
        return cplx{0.0, 0.0};
    }

    /// y = A x
    void multiply(const cplx *x, cplx *y) const {
        for (std::size_t r = 0; r < dim_; ++r) {
            cplx acc{0.0, 0.0};
            for (std::size_t i = row_start_[r]; i < row_start_[r + 1]; ++i)
                acc += entries_[i].value * x[entries_[i].col];
            y[r] = acc;
        }
    }

    std::vector<cplx> multiply(const std::vector<cplx> &x) const {
        require(x.size() == dim_, "multiply: vector length mismatch");
        std::vector<cplx> y(dim_);
        multiply(x.data(), y.data());
        return y;
    }

    DenseMatrix to_dense() const {
        DenseMatrix m(dim_);
        for (const auto &e : entries_)
            m(e.row, e.col) = e.value;
        return m;
    }

    static SparseHermitian from_dense(const DenseMatrix &m, double drop_tol = 0.0) {
        std::vector<Entry> t;
        for (std::size_t r = 0; r < m.dim; ++r)
            for (std::size_t c = r; c < m.dim; ++c) {
                // diagonals are stored with the imaginary part forced to 0
                const cplx v = r == c ? cplx{m(r, c).real(), 0.0} : m(r, c);
                if (std::abs(v) > drop_tol)
                    t.push_back({r, c, v});
            }
        return SparseHermitian(m.dim, t);
    }

  private:
    std::size_t dim_ = 0;
    std::vector<Entry> entries_; // sorted by (row, col)
    std::vector<std::size_t> row_start_;
    std::size_t sparsity_ = 0;
    double max_abs_ = 0.0;
};

// ---------------------------------------------------------------------------
// Matrix Market coordinate format (real/complex, symmetric/hermitian) and the
// JSON fixture format {"dim": N, "entries": [[u, v, re, im], ...]}.
// ---------------------------------------------------------------------------

inline SparseHermitian load_matrix_market(std::istream &in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "empty MatrixMarket stream");
    std::istringstream hdr(line);
    std::string banner, object, fmt, field, symmetry;
    hdr >> banner >> object >> fmt >> field >> symmetry;
    require(banner == "%%MatrixMarket", "missing MatrixMarket banner");
    require(object == "matrix" && fmt == "coordinate", "unsupported MatrixMarket layout");
    require(field == "real" || field == "complex" || field == "integer",
            "unsupported MatrixMarket field: " + field);
    require(symmetry == "symmetric" || symmetry == "hermitian" || symmetry == "general",
            "unsupported MatrixMarket symmetry: " + symmetry);
    const bool complex_field = field == "complex";

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%')
            break;
    }
    std::istringstream sz(line);
    std::size_t rows = 0, cols = 0, nnz = 0;
    sz >> rows >> cols >> nnz;
    require(rows >= 1 && rows == cols, "matrix must be square");

    std::vector<SparseHermitian::Entry> triples;
    triples.reserve(nnz);
    for (std::size_t i = 0; i < nnz; ++i) {
        require(static_cast<bool>(std::getline(in, line)), "truncated MatrixMarket stream");
        std::istringstream ls(line);
        std::size_t r = 0, c = 0;
        double re = 0.0, im = 0.0;
        ls >> r >> c >> re;
        if (complex_field)
            ls >> im;
        require(r >= 1 && c >= 1, "MatrixMarket indices are 1-based");
        triples.push_back({r - 1, c - 1, cplx{re, im}});
    }
    return SparseHermitian(rows, triples);
}

/// Writes the lower triangle (row >= col), complex hermitian flavor.
inline void save_matrix_market(const SparseHermitian &a, std::ostream &out) {
    std::vector<const SparseHermitian::Entry *> lower;
    for (const auto &e : a.entries())
        if (e.row >= e.col)
            lower.push_back(&e);
    out << "%%MatrixMarket matrix coordinate complex hermitian\n";
    out << a.dim() << " " << a.dim() << " " << lower.size() << "\n";
    for (const auto *e : lower)
        out << (e->row + 1) << " " << (e->col + 1) << " " << format_double(e->value.real())
            << " " << format_double(e->value.imag()) << "\n";
}

inline SparseHermitian load_json_fixture(std::istream &in) {
    nlohmann::json j;
    in >> j;
    require(j.contains("dim") && j.contains("entries"), "fixture needs dim and entries");
    const std::size_t dim = j.at("dim").get<std::size_t>();
    std::vector<SparseHermitian::Entry> triples;
    for (const auto &row : j.at("entries")) {
        require(row.is_array() && (row.size() == 3 || row.size() == 4),
                "fixture entry must be [u, v, re] or [u, v, re, im]");
        const auto u = row.at(0).get<std::size_t>();
        const auto v = row.at(1).get<std::size_t>();
        const double re = row.at(2).get<double>();
        const double im = row.size() == 4 ? row.at(3).get<double>() : 0.0;
        triples.push_back({u, v, cplx{re, im}});
    }
    return SparseHermitian(dim, triples);
}

inline void save_json_fixture(const SparseHermitian &a, std::ostream &out) {
    out << "{\n  \"dim\": " << a.dim() << ",\n  \"entries\": [";
    bool first = true;
    for (const auto &e : a.entries()) {
        if (e.row > e.col)
            continue; // upper triangle + diagonal; mirror is implied
        out << (first ? "" : ",") << "\n    [" << e.row << ", " << e.col << ", "
            << format_double(e.value.real()) << ", " << format_double(e.value.imag()) << "]";
        first = false;
    }
    out << "\n  ]\n}\n";
}

/// Sniffs the format: JSON fixtures start with '{', everything else is
/// treated as Matrix Market.
inline SparseHermitian load_matrix(std::istream &in) {
    int ch = in.peek();
    while (ch != EOF && std::isspace(ch)) {
        in.get();
        ch = in.peek();
    }
    require(ch != EOF, "empty matrix stream");
    if (ch == '{')
        return load_json_fixture(in);
    return load_matrix_market(in);
}

} // namespace qpes
