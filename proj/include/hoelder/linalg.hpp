#pragma once

// Exact integer/rational linear algebra: rank over the fraction field via
// fraction-free elimination, and integer lattice arithmetic (kernel, image,
// sum, preimage, membership) through a canonical column-style Hermite form.
//
// Scale assumption: dense matrices at desk scale (tens of rows/columns),
// arbitrary-precision entries.

#include <hoelder/rational.hpp>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace hoelder {

struct IntMatrix {
    long rows = 0;
    long cols = 0;
    std::vector<Int> entries;  // dense, row-major

    IntMatrix() = default;
    IntMatrix(long r, long c) : rows(r), cols(c) {
        if (r < 0 || c < 0) throw PreconditionError("matrix dimensions must be non-negative");
        entries.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), Int(0));
    }
    IntMatrix(long r, long c, std::vector<Int> e) : rows(r), cols(c), entries(std::move(e)) {
        if (r < 0 || c < 0) throw PreconditionError("matrix dimensions must be non-negative");
        if (entries.size() != static_cast<std::size_t>(r) * static_cast<std::size_t>(c))
            throw DimensionError("entry count does not match rows*cols");
    }

    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rws) {
        long r = static_cast<long>(rws.size());
        long c = r == 0 ? 0 : static_cast<long>(rws[0].size());
        IntMatrix m(r, c);
        for (long i = 0; i < r; ++i) {
            const auto& row = rws[static_cast<std::size_t>(i)];
            if (static_cast<long>(row.size()) != c) throw DimensionError("ragged rows");
            for (long j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
        }
        return m;
    }

    static IntMatrix from_cols(long ambient, const std::vector<std::vector<Int>>& cls) {
        IntMatrix m(ambient, static_cast<long>(cls.size()));
        for (long j = 0; j < m.cols; ++j) {
            const auto& cl = cls[static_cast<std::size_t>(j)];
            if (static_cast<long>(cl.size()) != ambient) throw DimensionError("ragged columns");
            for (long i = 0; i < ambient; ++i) m(i, j) = cl[static_cast<std::size_t>(i)];
        }
        return m;
    }

    static IntMatrix identity(long n) {
        IntMatrix m(n, n);
        for (long i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    Int& operator()(long i, long j) {
        return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                       static_cast<std::size_t>(j)];
    }
    const Int& operator()(long i, long j) const {
        return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                       static_cast<std::size_t>(j)];
    }

    bool operator==(const IntMatrix& o) const = default;

    bool is_zero() const {
        for (const Int& v : entries)
            if (v != 0) return false;
        return true;
    }

    std::vector<Int> col(long j) const {
        if (j < 0 || j >= cols) throw DimensionError("column index out of range");
        std::vector<Int> v(static_cast<std::size_t>(rows));
        for (long i = 0; i < rows; ++i) v[static_cast<std::size_t>(i)] = (*this)(i, j);
        return v;
    }
};

inline IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.rows) throw DimensionError("matmul: inner dimensions differ");
    IntMatrix out(a.rows, b.cols);
    Int acc;
    for (long i = 0; i < a.rows; ++i)
        for (long j = 0; j < b.cols; ++j) {
            acc = 0;
            for (long k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

inline std::vector<Int> matvec(const IntMatrix& a, const std::vector<Int>& v) {
    if (a.cols != static_cast<long>(v.size())) throw DimensionError("matvec: dimension mismatch");
    std::vector<Int> out(static_cast<std::size_t>(a.rows), Int(0));
    for (long i = 0; i < a.rows; ++i) {
        Int acc = 0;
        for (long k = 0; k < a.cols; ++k) acc += a(i, k) * v[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return out;
}

inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows != b.rows) throw DimensionError("hstack: row counts differ");
    IntMatrix out(a.rows, a.cols + b.cols);
    for (long i = 0; i < a.rows; ++i) {
        for (long j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
        for (long j = 0; j < b.cols; ++j) out(i, a.cols + j) = b(i, j);
    }
    return out;
}

inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.cols) throw DimensionError("vstack: column counts differ");
    IntMatrix out(a.rows + b.rows, a.cols);
    for (long i = 0; i < a.rows; ++i)
        for (long j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
    for (long i = 0; i < b.rows; ++i)
        for (long j = 0; j < b.cols; ++j) out(a.rows + i, j) = b(i, j);
    return out;
}

inline IntMatrix scaled(const IntMatrix& a, const Int& c) {
    IntMatrix out = a;
    for (Int& v : out.entries) v *= c;
    return out;
}

inline IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("matrix sum: shape mismatch");
    IntMatrix out = a;
    for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] += b.entries[i];
    return out;
}

inline IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw DimensionError("matrix difference: shape mismatch");
    IntMatrix out = a;
    for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] -= b.entries[i];
    return out;
}

// Rank over the rationals, by fraction-free (Bareiss) elimination. Exact and
// deterministic; entry growth is bounded by minors of the input.
inline long rank_q(const IntMatrix& m) {
    long r = m.rows, c = m.cols;
    if (r == 0 || c == 0) return 0;
    IntMatrix a = m;
    Int prev(1);
    long rank = 0;
    for (long col = 0; col < c && rank < r; ++col) {
        long piv = -1;
        for (long i = rank; i < r; ++i)
            if (a(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != rank)
            for (long j = 0; j < c; ++j) std::swap(a(piv, j), a(rank, j));
        for (long i = rank + 1; i < r; ++i) {
            for (long j = col + 1; j < c; ++j) {
                Int t = a(rank, col) * a(i, j) - a(i, col) * a(rank, j);
                a(i, j) = t / prev;  // exact by Sylvester's identity
            }
            a(i, col) = 0;
        }
        prev = a(rank, col);
        ++rank;
    }
    return rank;
}

// Integer sublattice of Z^dim, held in canonical column-style Hermite form:
// pivot rows strictly increase across basis vectors, each pivot is positive,
// entries above a pivot (in the same vector) are zero, and every other basis
// vector is reduced to [0, pivot) at that pivot's row. Canonicity makes
// structural equality coincide with equality of the spanned lattices.
struct Lattice {
    long dim = 0;
    std::vector<std::vector<Int>> basis;

    static Lattice zero(long d) { return Lattice{d, {}}; }
    static Lattice full(long d) {
        Lattice L{d, {}};
        L.basis.reserve(static_cast<std::size_t>(d));
        for (long i = 0; i < d; ++i) {
            std::vector<Int> e(static_cast<std::size_t>(d), Int(0));
            e[static_cast<std::size_t>(i)] = 1;
            L.basis.push_back(std::move(e));
        }
        return L;
    }

    long rank() const { return static_cast<long>(basis.size()); }
    bool is_zero() const { return basis.empty(); }
    bool is_full() const { return *this == full(dim); }

    bool operator==(const Lattice& o) const = default;

    IntMatrix basis_matrix() const { return IntMatrix::from_cols(dim, basis); }
};

namespace detail {

// In-place canonical column Hermite form of `cols` (vectors in Z^d).
// If `transform` is non-null it must have the same length as `cols`; the same
// column operations are mirrored onto it. On return `cols` holds the canonical
// basis (zero columns removed); mirrored transform columns are permuted the
// same way, with the companions of removed zero columns appended at the end
// of `*transform` (they encode kernel combinations of the original columns).
inline void hermite_columns(std::vector<std::vector<Int>>& cols,
                            std::vector<std::vector<Int>>* transform, long d) {
    const long k = static_cast<long>(cols.size());
    for (const auto& cl : cols)
        if (static_cast<long>(cl.size()) != d) throw DimensionError("ambient dimension mismatch");
    if (transform && transform->size() != cols.size())
        throw DimensionError("transform column count mismatch");

    auto col_axpy = [&](long dst, long src, const Int& q) {  // cols[dst] -= q * cols[src]
        if (q == 0) return;
        auto& cd = cols[static_cast<std::size_t>(dst)];
        auto& cs = cols[static_cast<std::size_t>(src)];
        for (long i = 0; i < d; ++i)
            cd[static_cast<std::size_t>(i)] -= q * cs[static_cast<std::size_t>(i)];
        if (transform) {
            auto& td = (*transform)[static_cast<std::size_t>(dst)];
            auto& ts = (*transform)[static_cast<std::size_t>(src)];
            for (std::size_t i = 0; i < td.size(); ++i) td[i] -= q * ts[i];
        }
    };
    auto col_swap = [&](long a, long b) {
        if (a == b) return;
        std::swap(cols[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
        if (transform)
            std::swap((*transform)[static_cast<std::size_t>(a)],
                      (*transform)[static_cast<std::size_t>(b)]);
    };
    auto col_negate = [&](long a) {
        for (Int& v : cols[static_cast<std::size_t>(a)]) v = -v;
        if (transform)
            for (Int& v : (*transform)[static_cast<std::size_t>(a)]) v = -v;
    };

    long fixed = 0;  // number of basis columns already in place
    for (long row = 0; row < d && fixed < k; ++row) {
        // gcd-eliminate row `row` across columns fixed..k-1 until at most one
        // column keeps a nonzero entry there
        while (true) {
            long best = -1;
            for (long j = fixed; j < k; ++j) {
                const Int& v = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(row)];
                if (v != 0 && (best < 0 || mpz_cmpabs(v.get_mpz_t(),
                                                      cols[static_cast<std::size_t>(best)]
                                                          [static_cast<std::size_t>(row)]
                                                              .get_mpz_t()) < 0))
                    best = j;
            }
            if (best < 0) break;  // row entirely zero among working columns
            bool others = false;
            for (long j = fixed; j < k; ++j) {
                if (j == best) continue;
                Int& v = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(row)];
                if (v == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), v.get_mpz_t(),
                           cols[static_cast<std::size_t>(best)][static_cast<std::size_t>(row)]
                               .get_mpz_t());
                col_axpy(j, best, q);
                if (v != 0) others = true;
            }
            if (!others) {
                col_swap(fixed, best);
                break;
            }
        }
        Int& piv = cols[static_cast<std::size_t>(fixed)][static_cast<std::size_t>(row)];
        if (piv == 0) continue;  // no pivot in this row; move to the next row
        if (piv < 0) col_negate(fixed);
        // reduce the pivot row entries of the already-fixed columns into [0, piv)
        for (long j = 0; j < fixed; ++j) {
            Int& v = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(row)];
            if (v == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), v.get_mpz_t(), piv.get_mpz_t());
            col_axpy(j, fixed, q);
        }
        ++fixed;
    }

    // Columns fixed..k-1 are now zero; drop them from the basis. Their
    // transform companions (kernel combinations) stay at the tail of
    // *transform in mirrored order.
    cols.resize(static_cast<std::size_t>(fixed));
}

}  // namespace detail

// Canonicalize arbitrary generators into a Lattice.
inline Lattice lattice_from_generators(long dim, std::vector<std::vector<Int>> gens) {
    detail::hermite_columns(gens, nullptr, dim);
    return Lattice{dim, std::move(gens)};
}

// Lattice spanned by the columns of m, canonical basis.
inline Lattice image_lattice(const IntMatrix& m) {
    std::vector<std::vector<Int>> cols;
    cols.reserve(static_cast<std::size_t>(m.cols));
    for (long j = 0; j < m.cols; ++j) cols.push_back(m.col(j));
    return lattice_from_generators(m.rows, std::move(cols));
}

// Lattice of integer solutions of m * v = 0.
inline Lattice kernel_lattice(const IntMatrix& m) {
    std::vector<std::vector<Int>> cols;
    std::vector<std::vector<Int>> transform;
    cols.reserve(static_cast<std::size_t>(m.cols));
    for (long j = 0; j < m.cols; ++j) {
        cols.push_back(m.col(j));
        std::vector<Int> e(static_cast<std::size_t>(m.cols), Int(0));
        e[static_cast<std::size_t>(j)] = 1;
        transform.push_back(std::move(e));
    }
    detail::hermite_columns(cols, &transform, m.rows);
    // combos beyond the surviving basis map to zero columns: they span the kernel
    std::vector<std::vector<Int>> gens(transform.begin() + static_cast<long>(cols.size()),
                                       transform.end());
    return lattice_from_generators(m.cols, std::move(gens));
}

inline bool lattice_eq(const Lattice& a, const Lattice& b) {
    return a.dim == b.dim && a.basis == b.basis;
}

inline Lattice lattice_sum(const Lattice& a, const Lattice& b) {
    if (a.dim != b.dim) throw DimensionError("lattice_sum: ambient dimensions differ");
    std::vector<std::vector<Int>> gens = a.basis;
    gens.insert(gens.end(), b.basis.begin(), b.basis.end());
    return lattice_from_generators(a.dim, std::move(gens));
}

// Coordinates of v in L's canonical basis, if v lies in L.
inline std::optional<std::vector<Int>> lattice_coords(const Lattice& L, const std::vector<Int>& v) {
    if (static_cast<long>(v.size()) != L.dim) throw DimensionError("member: dimension mismatch");
    std::vector<Int> w = v;
    std::vector<Int> coords(L.basis.size(), Int(0));
    for (std::size_t i = 0; i < L.basis.size(); ++i) {
        const auto& b = L.basis[i];
        long p = 0;
        while (p < L.dim && b[static_cast<std::size_t>(p)] == 0) ++p;
        if (p >= L.dim) throw PreconditionError("lattice basis contains a zero vector");
        const Int& piv = b[static_cast<std::size_t>(p)];
        Int q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), w[static_cast<std::size_t>(p)].get_mpz_t(),
                    piv.get_mpz_t());
        if (rem != 0) return std::nullopt;
        if (q != 0)
            for (long r = 0; r < L.dim; ++r)
                w[static_cast<std::size_t>(r)] -= q * b[static_cast<std::size_t>(r)];
        coords[i] = std::move(q);
    }
    for (const Int& x : w)
        if (x != 0) return std::nullopt;
    return coords;
}

inline bool member(const Lattice& L, const std::vector<Int>& v) {
    return lattice_coords(L, v).has_value();
}

// {v in Z^cols(m) : m*v lies in L}.
inline Lattice preimage_lattice(const IntMatrix& m, const Lattice& L) {
    if (m.rows != L.dim) throw DimensionError("preimage: ambient dimension mismatch");
    // v satisfies m*v in L  iff  (v, w) is a kernel element of [m | -B_L]
    IntMatrix big = hstack(m, scaled(L.basis_matrix(), Int(-1)));
    Lattice ker = kernel_lattice(big);
    std::vector<std::vector<Int>> gens;
    gens.reserve(ker.basis.size());
    for (const auto& kv : ker.basis)
        gens.emplace_back(kv.begin(), kv.begin() + m.cols);
    return lattice_from_generators(m.cols, std::move(gens));
}

// One integer solution x of m*x = v, if any.
inline std::optional<std::vector<Int>> solve_integer(const IntMatrix& m, const std::vector<Int>& v) {
    if (m.rows != static_cast<long>(v.size())) throw DimensionError("solve: dimension mismatch");
    std::vector<std::vector<Int>> cols;
    std::vector<std::vector<Int>> transform;
    cols.reserve(static_cast<std::size_t>(m.cols));
    for (long j = 0; j < m.cols; ++j) {
        cols.push_back(m.col(j));
        std::vector<Int> e(static_cast<std::size_t>(m.cols), Int(0));
        e[static_cast<std::size_t>(j)] = 1;
        transform.push_back(std::move(e));
    }
    detail::hermite_columns(cols, &transform, m.rows);
    Lattice img{m.rows, cols};
    auto coords = lattice_coords(img, v);
    if (!coords) return std::nullopt;
    std::vector<Int> x(static_cast<std::size_t>(m.cols), Int(0));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const Int& c = (*coords)[i];
        if (c == 0) continue;
        const auto& u = transform[i];
        for (std::size_t r = 0; r < x.size(); ++r) x[r] += c * u[r];
    }
    return x;
}

// Does every basis vector of A lie in B?
inline bool lattice_subset(const Lattice& A, const Lattice& B) {
    if (A.dim != B.dim) throw DimensionError("subset: ambient dimensions differ");
    for (const auto& v : A.basis)
        if (!member(B, v)) return false;
    return true;
}

}  // namespace hoelder
