#pragma once

#include <vector>

#include "ringsim/ring.hpp"

namespace ringsim {

/// Dense matrix over a cyclic or Galois ring, row-major.
class RingMatrix {
public:
    RingMatrix() = default;
    RingMatrix(RingSpec ring, int rows, int cols)
        : ring_(std::move(ring)), rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * cols) {}

    static RingMatrix identity(const RingSpec& ring, int n) {
        RingMatrix m(ring, n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, ring.one());
        return m;
    }

    const RingSpec& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Elem& get(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    void set(int r, int c, const Elem& v) { a_[static_cast<std::size_t>(r) * cols_ + c] = v; }

    bool operator==(const RingMatrix& o) const {
        return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    RingMatrix mul(const RingMatrix& o) const {
        require_same_ring(ring_, o.ring_);
        if (cols_ != o.rows_) fail(errc::bad_argument, "matrix shapes not composable");
        RingMatrix out(ring_, rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < o.cols_; ++j) {
                Elem acc = ring_.zero();
                for (int t = 0; t < cols_; ++t)
                    acc = ring_.add(acc, ring_.mul(get(i, t), o.get(t, j)));
                out.set(i, j, acc);
            }
        return out;
    }

    RingMatrix transpose() const {
        RingMatrix out(ring_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out.set(j, i, get(i, j));
        return out;
    }

    /// Conjugate transpose under the ring's conjugation.
    RingMatrix adjoint() const {
        RingMatrix out(ring_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out.set(j, i, ring_.conjugate(get(i, j)));
        return out;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) {
                const Elem want = i == j ? ring_.one() : ring_.zero();
                if (get(i, j) != want) return false;
            }
        return true;
    }

    /// Every column sums to 1 (the affine property).
    bool columns_sum_to_one() const {
        for (int j = 0; j < cols_; ++j) {
            Elem s = ring_.zero();
            for (int i = 0; i < rows_; ++i) s = ring_.add(s, get(i, j));
            if (!ring_.is_one(s)) return false;
        }
        return true;
    }

private:
    RingSpec ring_;
    int rows_ = 0, cols_ = 0;
    std::vector<Elem> a_;
};

namespace detail {

// Gauss-Jordan with unit pivots; valid over prime-power cyclic and Galois
// rings, where every invertible matrix admits a unit pivot in each column.
inline RingMatrix inverse_local(const RingMatrix& m) {
    const RingSpec& ring = m.ring();
    int n = m.rows();
    RingMatrix work = m;
    RingMatrix inv = RingMatrix::identity(ring, n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (ring.is_unit(work.get(row, col))) {
                piv = row;
                break;
            }
        if (piv < 0) fail(errc::not_invertible, "no unit pivot in column");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                Elem t = work.get(col, j);
                work.set(col, j, work.get(piv, j));
                work.set(piv, j, t);
                t = inv.get(col, j);
                inv.set(col, j, inv.get(piv, j));
                inv.set(piv, j, t);
            }
        Elem s = ring.inv(work.get(col, col));
        for (int j = 0; j < n; ++j) {
            work.set(col, j, ring.mul(work.get(col, j), s));
            inv.set(col, j, ring.mul(inv.get(col, j), s));
        }
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            Elem f = work.get(row, col);
            if (ring.is_zero(f)) continue;
            for (int j = 0; j < n; ++j) {
                work.set(row, j, ring.sub(work.get(row, j), ring.mul(f, work.get(col, j))));
                inv.set(row, j, ring.sub(inv.get(row, j), ring.mul(f, inv.get(col, j))));
            }
        }
    }
    return inv;
}

}  // namespace detail

/// Matrix inverse. Prime-power components are eliminated with unit pivots;
/// for composite cyclic moduli the component inverses are CRT-combined.
inline RingMatrix inverse(const RingMatrix& m) {
    if (m.rows() != m.cols()) fail(errc::not_invertible, "matrix is not square");
    const RingSpec& ring = m.ring();
    if (ring.is_prime_power()) return detail::inverse_local(m);
    // Composite cyclic modulus.
    int n = m.rows();
    i64 k = ring.k();
    RingMatrix out(ring, n, n);
    for (const auto& [p, r] : ring.factorization()) {
        i64 q = 1;
        for (int i = 0; i < r; ++i) q *= p;
        RingSpec comp = RingSpec::make_cyclic(q);
        RingMatrix mm(comp, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mm.set(i, j, comp.from_int(m.get(i, j).c[0]));
        RingMatrix mi = detail::inverse_local(mm);
        // CRT basis element: 1 mod q, 0 mod every other component.
        i64 kq = k / q;
        i64 basis = kq * (*detail::mod_inverse(kq % q, q)) % k;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                i64 cur = out.get(i, j).c[0];
                out.set(i, j, ring.from_int(cur + mi.get(i, j).c[0] * basis % k));
            }
    }
    return out;
}

/// Block embedding of a matrix over GR(k,k^e) into an (e*rows) x (e*cols)
/// matrix over Z_k: each entry becomes the matrix of multiplication by it in
/// the basis {1, tau, ..., tau^{e-1}}.
inline RingMatrix embed_to_zk_block(const RingMatrix& m) {
    const RingSpec& ring = m.ring();
    int e = ring.e();
    RingSpec zk = RingSpec::make_cyclic(ring.k());
    RingMatrix out(zk, m.rows() * e, m.cols() * e);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Elem& v = m.get(i, j);
            // Column l of the block holds the coefficients of tau^l * v.
            Elem tl = ring.one();
            for (int l = 0; l < e; ++l) {
                Elem prod = ring.mul(v, tl);
                for (int t = 0; t < e; ++t) out.set(i * e + t, j * e + l, zk.from_int(prod.c[t]));
                if (l + 1 < e) tl = ring.mul(tl, ring.tau());
            }
        }
    return out;
}

/// Entry-wise reduction of a matrix over Z_{p^r} to Z_{p^tau}.
inline RingMatrix project_mod(const RingMatrix& m, int tau) {
    RingSpec target = project_ring(m.ring(), tau);
    RingMatrix out(target, m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out.set(i, j, project_elem(m.ring(), m.get(i, j), target));
    return out;
}

}  // namespace ringsim
