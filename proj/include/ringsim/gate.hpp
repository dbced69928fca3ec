#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "ringsim/matrix.hpp"
#include "ringsim/octonion.hpp"
#include "ringsim/state.hpp"

namespace ringsim {

struct GateClassification {
    bool invertible = false;
    bool affine = false;
    bool unitary = false;
    // Largest t <= r with M^dag M == I mod p^t (prime-power rings only).
    std::optional<int> s2_threshold;
};

/// Explicit matrices wider than this are refused (2^h x 2^h entries).
constexpr int kMaxDenseGateBits = 10;

/// A gate: either an explicit 2^out x 2^in ring matrix, or an implicit
/// multiply-controlled NOT (controls first, target last), which is kept
/// symbolic so that wide controlled flips never materialize as matrices.
class Gate {
public:
    enum class Kind { dense, controlled_x };

    static Gate dense(std::string name, RingMatrix mat) {
        Gate g;
        g.kind_ = Kind::dense;
        g.name_ = std::move(name);
        g.ring_ = mat.ring();
        g.in_bits_ = log2_exact(mat.cols());
        g.out_bits_ = log2_exact(mat.rows());
        g.mat_ = std::move(mat);
        g.classify_dense();
        return g;
    }

    static Gate controlled_x(const RingSpec& ring, int controls) {
        if (controls < 0) fail(errc::bad_argument, "control count must be nonnegative");
        Gate g;
        g.kind_ = Kind::controlled_x;
        g.name_ = controls == 0 ? "NOT" : "CNX" + std::to_string(controls);
        if (controls == 1) g.name_ = "CNOT";
        if (controls == 2) g.name_ = "TOFFOLI";
        g.ring_ = ring;
        g.controls_ = controls;
        g.in_bits_ = g.out_bits_ = controls + 1;
        g.cls_.invertible = g.cls_.affine = g.cls_.unitary = true;
        if (ring.is_prime_power()) g.cls_.s2_threshold = ring.r();
        return g;
    }

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const RingSpec& ring() const { return ring_; }
    int in_bits() const { return in_bits_; }
    int out_bits() const { return out_bits_; }
    bool square() const { return in_bits_ == out_bits_; }
    int controls() const { return controls_; }
    const GateClassification& classification() const { return cls_; }

    bool is_permutation() const { return perm_.has_value() || kind_ == Kind::controlled_x; }

    /// Basis-state image under a permutation gate (local index).
    std::size_t permute(std::size_t in) const {
        if (kind_ == Kind::controlled_x) {
            std::size_t mask = (std::size_t(1) << (controls_ + 1)) - 2;
            return (in & mask) == mask ? in ^ 1 : in;
        }
        return (*perm_)[in];
    }

    const RingMatrix& matrix() const {
        if (kind_ == Kind::dense) return mat_;
        if (controls_ + 1 > kMaxDenseGateBits)
            fail(errc::width_overflow, "controlled flip too wide for an explicit matrix");
        std::shared_ptr<RingMatrix> cur = std::atomic_load(&lazy_mat_);
        if (!cur) {
            int n = controls_ + 1;
            RingMatrix m(ring_, 1 << n, 1 << n);
            for (std::size_t x = 0; x < (std::size_t(1) << n); ++x)
                m.set(static_cast<int>(permute(x)), static_cast<int>(x), ring_.one());
            cur = std::make_shared<RingMatrix>(std::move(m));
            // first materialization wins; a racing duplicate is discarded
            std::shared_ptr<RingMatrix> expected;
            if (!std::atomic_compare_exchange_strong(&lazy_mat_, &expected, cur)) cur = expected;
        }
        return *cur;
    }

private:
    static int log2_exact(int n) {
        int b = 0;
        while ((1 << b) < n) ++b;
        if ((1 << b) != n) fail(errc::bad_argument, "matrix dimension must be a power of two");
        return b;
    }

    void classify_dense() {
        cls_ = GateClassification{};
        cls_.affine = mat_.columns_sum_to_one();
        if (square()) {
            try {
                inverse(mat_);
                cls_.invertible = true;
            } catch (const Error&) {
                cls_.invertible = false;
            }
            RingMatrix prod = mat_.adjoint().mul(mat_);
            cls_.unitary = prod.is_identity();
            if (ring_.is_prime_power()) {
                int t = ring_.r();
                for (int i = 0; i < prod.rows(); ++i)
                    for (int j = 0; j < prod.cols(); ++j) {
                        Elem d = ring_.sub(prod.get(i, j),
                                           i == j ? ring_.one() : ring_.zero());
                        t = std::min(t, valuation(ring_, d));
                    }
                cls_.s2_threshold = t;
            }
        }
        // Cache the permutation table when the matrix is one.
        if (square()) {
            std::vector<std::size_t> perm(mat_.cols());
            std::vector<bool> hit(mat_.rows(), false);
            for (int j = 0; j < mat_.cols(); ++j) {
                int ones = 0, row = -1;
                for (int i = 0; i < mat_.rows(); ++i) {
                    const Elem& v = mat_.get(i, j);
                    if (ring_.is_zero(v)) continue;
                    if (!ring_.is_one(v) || ++ones > 1) return;
                    row = i;
                }
                if (row < 0 || hit[row]) return;
                hit[row] = true;
                perm[j] = static_cast<std::size_t>(row);
            }
            perm_ = std::move(perm);
        }
    }

    Kind kind_ = Kind::dense;
    std::string name_;
    RingSpec ring_;
    int in_bits_ = 0, out_bits_ = 0;
    int controls_ = 0;
    RingMatrix mat_;
    GateClassification cls_;
    std::optional<std::vector<std::size_t>> perm_;
    mutable std::shared_ptr<RingMatrix> lazy_mat_;
};

using GatePtr = std::shared_ptr<const Gate>;

inline GateClassification classify(const Gate& g) { return g.classification(); }

// --- standard gates ---------------------------------------------------------

namespace detail {

inline RingMatrix matrix_from_ints(const RingSpec& ring, int rows, int cols,
                                   std::initializer_list<i64> vals) {
    RingMatrix m(ring, rows, cols);
    auto it = vals.begin();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i, j, ring.from_int(*it++));
    return m;
}

}  // namespace detail

/// Built-in gates by name: NOT, CNOT, TOFFOLI, SWAP, FANOUT, AND, OR, ERASE,
/// UNIF, and CNX<l> (the l-controlled NOT, passed as name "CNX" + param).
inline Gate standard_gate(const RingSpec& ring, const std::string& name, int param = 0) {
    using detail::matrix_from_ints;
    if (name == "NOT") return Gate::controlled_x(ring, 0);
    if (name == "CNOT") return Gate::controlled_x(ring, 1);
    if (name == "TOFFOLI") return Gate::controlled_x(ring, 2);
    if (name == "CNX") {
        if (param < 1) fail(errc::bad_argument, "CNX needs at least one control");
        return Gate::controlled_x(ring, param);
    }
    if (name == "SWAP")
        return Gate::dense("SWAP", matrix_from_ints(ring, 4, 4,
                                                    {1, 0, 0, 0,
                                                     0, 0, 1, 0,
                                                     0, 1, 0, 0,
                                                     0, 0, 0, 1}));
    if (name == "AND")
        return Gate::dense("AND", matrix_from_ints(ring, 2, 4, {1, 1, 1, 0, 0, 0, 0, 1}));
    if (name == "OR")
        return Gate::dense("OR", matrix_from_ints(ring, 2, 4, {1, 0, 0, 0, 0, 1, 1, 1}));
    if (name == "FANOUT")
        return Gate::dense("FANOUT", matrix_from_ints(ring, 4, 2, {1, 0, 0, 0, 0, 0, 0, 1}));
    if (name == "ERASE")
        return Gate::dense("ERASE", matrix_from_ints(ring, 1, 2, {1, 1}));
    if (name == "UNIF") {
        Elem two = ring.from_int(2);
        if (!ring.is_unit(two))
            fail(errc::not_invertible_modulus, "UNIF needs 2 to be a unit in the ring");
        Elem half = ring.inv(two);
        RingMatrix m(ring, 2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m.set(i, j, half);
        return Gate::dense("UNIF", std::move(m));
    }
    fail(errc::unknown_gate, "no built-in gate named '" + name + "'");
}

/// Integer columns of the branching gate K: column j holds the octonion
/// product w_{v0} * e_j, where v0 = [a 0 b 1 c 0 d 1] and (a,b,c,d) is the
/// four-squares decomposition of k-1.
inline std::array<Octonion, 8> k_gate_integer_columns(i64 k) {
    if (k < 2) fail(errc::invalid_modulus, "k must be at least 2");
    auto [a, b, c, d] = four_squares(k - 1);
    Octonion v0 = {a, 0, b, 1, c, 0, d, 1};
    std::array<Octonion, 8> cols;
    for (int j = 0; j < 8; ++j) {
        Octonion ej{};
        ej[j] = 1;
        cols[j] = octonion_mul(v0, ej);
    }
    return cols;
}

/// The 3-bit branching gate over Z_k: K^T K == I_8 (mod k), and K|000> is
/// |gamma>|0> + (|0>+|1>)|11> in bit order (branch, flag, flag).
inline Gate branching_gate_K(const RingSpec& ring) {
    if (!ring.is_cyclic()) fail(errc::unsupported_ring, "K is built over cyclic rings");
    auto cols = k_gate_integer_columns(ring.k());
    RingMatrix m(ring, 8, 8);
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) m.set(i, j, ring.from_int(cols[j][i]));
    return Gate::dense("K", std::move(m));
}

inline Gate adjoint(const Gate& g) {
    if (g.kind() == Gate::Kind::controlled_x) return g;  // symmetric permutation
    std::string name = g.name() == "K" ? "KT" : g.name() == "KT" ? "K" : g.name() + "^T";
    return Gate::dense(std::move(name), g.matrix().adjoint());
}

inline Gate inverse(const Gate& g) {
    if (g.kind() == Gate::Kind::controlled_x) return g;  // involution
    if (!g.square()) fail(errc::not_invertible, "gate is not square");
    return Gate::dense(g.name() + "^-1", inverse(g.matrix()));
}

/// Block-diagonal controlled form; the control is the first bit.
inline Gate controlled(const Gate& g) {
    if (g.kind() == Gate::Kind::controlled_x)
        return Gate::controlled_x(g.ring(), g.controls() + 1);
    if (!g.square()) fail(errc::bad_argument, "only square gates can be controlled");
    if (g.in_bits() + 1 > kMaxDenseGateBits)
        fail(errc::width_overflow, "controlled gate too wide for an explicit matrix");
    const RingMatrix& inner = g.matrix();
    int half = inner.rows();
    RingMatrix m(g.ring(), 2 * half, 2 * half);
    for (int i = 0; i < half; ++i) m.set(i, i, g.ring().one());
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < half; ++j) m.set(half + i, half + j, inner.get(i, j));
    return Gate::dense("C" + g.name(), std::move(m));
}

// --- the Appendix-B witness --------------------------------------------------

struct S2Witness {
    /// False when eps^bar != -eps: the proof's |psi> does not apply, and the
    /// returned state is |sigma> (which T then maps out of S_2).
    bool psi_applicable = false;
    ModalState state;
};

/// For distinct basis inputs x, y of a square gate T over Z_{p^r} with
/// <x|T^dag T|x> = <y|T^dag T|y> = 1: returns the proof state
/// |psi> = eps(|x>|1> + ... + |x>|k-1>) + (1+eps)|y>|1> when eps^bar = -eps,
/// and |sigma> = sum_j |x>|j> + |y>|0> otherwise.
inline S2Witness s2_violation_witness(const Gate& t, const std::string& x, const std::string& y) {
    const RingSpec& ring = t.ring();
    if (!ring.is_cyclic() || !ring.is_prime_power())
        fail(errc::unsupported_ring, "witness construction needs Z_{p^r}");
    if (!t.square()) fail(errc::bad_argument, "witness needs a square gate");
    if (x == y) fail(errc::bad_argument, "witness needs distinct strings");
    int n = t.in_bits();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        fail(errc::bad_argument, "strings must match the gate arity");
    RingMatrix prod = t.matrix().adjoint().mul(t.matrix());
    std::size_t xi = bitstring_index(x), yi = bitstring_index(y);
    if (!ring.is_one(prod.get(xi, xi)) || !ring.is_one(prod.get(yi, yi)))
        fail(errc::bad_argument, "witness needs unit diagonal entries at x and y");
    Elem eps = prod.get(yi, xi);
    i64 k = ring.k();
    int counter_bits = 1;
    while ((i64(1) << counter_bits) < k) ++counter_bits;
    ModalState st(ring, n + counter_bits);
    if (ring.conjugate(eps) != ring.neg(eps)) {
        // |sigma> = (|x>|0> + ... + |x>|k-1>) + |y>|0>
        for (i64 j = 0; j < k; ++j)
            st.set(xi << counter_bits | std::size_t(j), ring.one());
        st.set(yi << counter_bits, ring.add(st.get(yi << counter_bits), ring.one()));
        return {false, std::move(st)};
    }
    for (i64 j = 1; j < k; ++j) st.set(xi << counter_bits | std::size_t(j), eps);
    std::size_t y1 = yi << counter_bits | 1;
    st.set(y1, ring.add(st.get(y1), ring.add(ring.one(), eps)));
    return {true, std::move(st)};
}

// --- gate file format ---------------------------------------------------------
//
//   ring Z 5
//   arity 2
//   1 0 0 0
//   ...            (2^h rows of 2^h ring-element entries, row-major)

inline void write_gate(std::ostream& os, const Gate& g) {
    if (!g.square()) fail(errc::bad_argument, "gate files hold square gates");
    os << g.ring().header() << '\n';
    os << "arity " << g.in_bits() << '\n';
    const RingMatrix& m = g.matrix();
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << g.ring().to_string(m.get(i, j));
        }
        os << '\n';
    }
}

inline Gate read_gate(std::istream& is, const std::string& name = "custom") {
    std::string line;
    int lineno = 0;
    auto next_line = [&](std::string& out) {
        while (std::getline(is, line)) {
            ++lineno;
            std::size_t h = line.find('#');
            if (h != std::string::npos) line.erase(h);
            std::size_t b = line.find_last_not_of(" \t\r");
            if (b == std::string::npos) continue;
            line.erase(b + 1);
            out = line;
            return true;
        }
        return false;
    };
    std::string cur;
    if (!next_line(cur)) fail(errc::parse_error, "line 1: missing ring header");
    RingSpec ring = parse_ring_header(cur, lineno);
    if (!next_line(cur) || cur.rfind("arity ", 0) != 0)
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": expected 'arity <h>'");
    int h = 0;
    try {
        h = std::stoi(cur.substr(6));
    } catch (const std::exception&) {
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": bad arity");
    }
    if (h < 1 || h > kMaxDenseGateBits)
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": arity out of range");
    int dim = 1 << h;
    RingMatrix m(ring, dim, dim);
    for (int i = 0; i < dim; ++i) {
        if (!next_line(cur))
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": missing matrix row");
        std::istringstream ls(cur);
        std::string tok;
        for (int j = 0; j < dim; ++j) {
            if (!(ls >> tok))
                fail(errc::parse_error,
                     "line " + std::to_string(lineno) + ": row has too few entries");
            m.set(i, j, ring.parse_elem(tok));
        }
        std::string extra;
        if (ls >> extra)
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": row has too many entries");
    }
    return Gate::dense(name, std::move(m));
}

}  // namespace ringsim
