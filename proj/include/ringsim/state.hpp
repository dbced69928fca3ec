#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "ringsim/ring.hpp"

namespace ringsim {

/// Hard cap on the number of bits of a dense state (configurable).
inline int& state_bit_cap() {
    static int cap = 24;
    return cap;
}

enum class StateSpace { generic, l1, l2 };

struct SpaceMembership {
    bool generic = false;
    bool l1 = false;
    bool l2 = false;

    bool in(StateSpace s) const {
        switch (s) {
            case StateSpace::generic: return generic;
            case StateSpace::l1: return l1;
            case StateSpace::l2: return l2;
        }
        return false;
    }
};

/// Dense ring-valued distribution over n-bit strings. Amplitudes are stored
/// flat in lexicographic string order with stride e: the amplitude of x sits
/// at [index(x)*e .. index(x)*e + e), where index(x) is the binary value of x
/// read with the first bit most significant.
class ModalState {
public:
    ModalState() = default;

    ModalState(RingSpec ring, int n) : ring_(std::move(ring)), n_(n) {
        if (n < 0 || n > state_bit_cap()) fail(errc::width_overflow, "state width out of range");
        amps_.assign((std::size_t(1) << n) * ring_.e(), 0);
    }

    const RingSpec& ring() const { return ring_; }
    int bits() const { return n_; }
    std::size_t dim() const { return std::size_t(1) << n_; }

    i64* raw() { return amps_.data(); }
    const i64* raw() const { return amps_.data(); }

    Elem get(std::size_t index) const {
        Elem a;
        const i64* src = amps_.data() + index * ring_.e();
        for (int i = 0; i < ring_.e(); ++i) a.c[i] = src[i];
        return a;
    }

    void set(std::size_t index, const Elem& v) {
        i64* dst = amps_.data() + index * ring_.e();
        for (int i = 0; i < ring_.e(); ++i) dst[i] = v.c[i];
    }

    bool operator==(const ModalState& o) const {
        return ring_ == o.ring_ && n_ == o.n_ && amps_ == o.amps_;
    }

    bool is_zero() const {
        return std::all_of(amps_.begin(), amps_.end(), [](i64 x) { return x == 0; });
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        int e = ring_.e();
        for (std::size_t i = 0; i < dim(); ++i)
            for (int j = 0; j < e; ++j)
                if (amps_[i * e + j] != 0) {
                    out.push_back(i);
                    break;
                }
        return out;
    }

private:
    RingSpec ring_;
    int n_ = 0;
    std::vector<i64> amps_;
};

inline std::size_t bitstring_index(const std::string& x) {
    std::size_t idx = 0;
    for (char ch : x) {
        if (ch != '0' && ch != '1') fail(errc::bad_argument, "bit strings contain only 0 and 1");
        idx = (idx << 1) | std::size_t(ch - '0');
    }
    return idx;
}

inline std::string index_to_bitstring(std::size_t idx, int n) {
    std::string s(n, '0');
    for (int i = 0; i < n; ++i)
        if (idx >> (n - 1 - i) & 1) s[i] = '1';
    return s;
}

inline ModalState basis_state(const RingSpec& ring, const std::string& x) {
    ModalState st(ring, static_cast<int>(x.size()));
    st.set(bitstring_index(x), ring.one());
    return st;
}

inline ModalState tensor(const ModalState& a, const ModalState& b) {
    require_same_ring(a.ring(), b.ring());
    const RingSpec& ring = a.ring();
    ModalState out(ring, a.bits() + b.bits());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Elem ai = a.get(i);
        if (ring.is_zero(ai)) continue;
        for (std::size_t j = 0; j < b.dim(); ++j) {
            Elem bj = b.get(j);
            if (ring.is_zero(bj)) continue;
            out.set((i << b.bits()) | j, ring.mul(ai, bj));
        }
    }
    return out;
}

/// <a|b> = sum_x conj(a_x) * b_x.
inline Elem inner_product(const ModalState& a, const ModalState& b) {
    require_same_ring(a.ring(), b.ring());
    if (a.bits() != b.bits()) fail(errc::ring_mismatch, "states have different widths");
    const RingSpec& ring = a.ring();
    Elem acc = ring.zero();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Elem ai = a.get(i);
        if (ring.is_zero(ai)) continue;
        acc = ring.add(acc, ring.mul(ring.conjugate(ai), b.get(i)));
    }
    return acc;
}

inline Elem amplitude_sum(const ModalState& a) {
    Elem acc = a.ring().zero();
    for (std::size_t i = 0; i < a.dim(); ++i) acc = a.ring().add(acc, a.get(i));
    return acc;
}

/// Membership in the generic / l1 / l2 state spaces. Over a local ring the
/// generic test is "some amplitude is a unit"; over composite Z_k it is the
/// equivalent gcd condition.
inline SpaceMembership state_space_membership(const ModalState& psi) {
    const RingSpec& ring = psi.ring();
    SpaceMembership m;
    if (ring.is_cyclic() && !ring.is_prime_power()) {
        i64 g = ring.k();
        for (std::size_t i = 0; i < psi.dim(); ++i) g = std::gcd(g, psi.get(i).c[0]);
        m.generic = g == 1;
    } else {
        for (std::size_t i = 0; i < psi.dim() && !m.generic; ++i)
            if (ring.is_unit(psi.get(i))) m.generic = true;
    }
    m.l1 = ring.is_one(amplitude_sum(psi));
    m.l2 = ring.is_one(inner_product(psi, psi));
    return m;
}

namespace detail {

inline void check_positions(int n, const std::vector<int>& positions, const std::string& a) {
    if (positions.size() != a.size())
        fail(errc::bad_argument, "pattern length must match position count");
    for (int p : positions)
        if (p < 1 || p > n) fail(errc::bad_argument, "position out of range");
}

inline bool restricts_to(std::size_t idx, int n, const std::vector<int>& positions,
                         const std::string& a) {
    for (std::size_t t = 0; t < positions.size(); ++t) {
        int bit = static_cast<int>(idx >> (n - positions[t]) & 1);
        if (bit != a[t] - '0') return false;
    }
    return true;
}

}  // namespace detail

/// Some support string restricts to a on the given (1-indexed) positions.
inline bool is_possible(const ModalState& psi, const std::vector<int>& positions,
                        const std::string& a) {
    detail::check_positions(psi.bits(), positions, a);
    for (std::size_t idx : psi.support())
        if (detail::restricts_to(idx, psi.bits(), positions, a)) return true;
    return false;
}

/// psi lies in the named state space and every support string restricts to a.
inline bool is_necessary(const ModalState& psi, const std::vector<int>& positions,
                         const std::string& a, StateSpace space) {
    detail::check_positions(psi.bits(), positions, a);
    if (!state_space_membership(psi).in(space)) return false;
    for (std::size_t idx : psi.support())
        if (!detail::restricts_to(idx, psi.bits(), positions, a)) return false;
    return true;
}

inline ModalState project_mod(const ModalState& psi, int tau) {
    RingSpec target = project_ring(psi.ring(), tau);
    ModalState out(target, psi.bits());
    for (std::size_t i = 0; i < psi.dim(); ++i)
        out.set(i, project_elem(psi.ring(), psi.get(i), target));
    return out;
}

// --- text format ----------------------------------------------------------
//
//   ring Z 5
//   bits 2
//   01 3
//   11 1,0        (Galois-ring amplitudes are comma-joined residues)
//
// Omitted strings are zero; duplicate strings are rejected.

inline void write_state(std::ostream& os, const ModalState& psi) {
    os << psi.ring().header() << '\n';
    os << "bits " << psi.bits() << '\n';
    for (std::size_t idx : psi.support())
        os << index_to_bitstring(idx, psi.bits()) << ' ' << psi.ring().to_string(psi.get(idx))
           << '\n';
}

inline ModalState read_state(std::istream& is) {
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
    if (!next_line(cur) || cur.rfind("bits ", 0) != 0)
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": expected 'bits <n>'");
    int n = 0;
    try {
        n = std::stoi(cur.substr(5));
    } catch (const std::exception&) {
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": bad bit count");
    }
    ModalState psi(ring, n);
    std::vector<bool> seen(psi.dim(), false);
    while (next_line(cur)) {
        std::istringstream ls(cur);
        std::string bits, val;
        ls >> bits >> val;
        if (bits.empty() || val.empty())
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": expected '<bits> <amp>'");
        if (static_cast<int>(bits.size()) != n)
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": bit string width mismatch");
        std::size_t idx = bitstring_index(bits);
        if (seen[idx])
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": duplicate string " + bits);
        seen[idx] = true;
        psi.set(idx, ring.parse_elem(val));
    }
    return psi;
}

}  // namespace ringsim
