#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ringsim/gate.hpp"
#include "ringsim/state.hpp"

namespace ringsim {

using BigInt = boost::multiprecision::cpp_int;

struct CircuitOp {
    enum class Kind { prep, apply };
    Kind kind = Kind::prep;
    GatePtr gate;            // apply only
    std::vector<int> wires;  // apply only; 1-indexed, distinct, gate-arity many
};

inline CircuitOp prep_op() { return CircuitOp{}; }

inline CircuitOp apply_op(GatePtr gate, std::vector<int> wires) {
    CircuitOp op;
    op.kind = CircuitOp::Kind::apply;
    op.gate = std::move(gate);
    op.wires = std::move(wires);
    return op;
}

/// An ordered list of preparation and gate-application operations over named
/// wires. Wire indices are 1-based and refer to the circuit's width at the
/// time the operation executes; non-square gates renumber later wires.
struct Circuit {
    RingSpec ring;
    int input_width = 0;
    std::vector<CircuitOp> ops;
    int output_wire = 1;

    /// Walks the op list checking wire references; returns the final width.
    int validate() const {
        int width = input_width;
        for (std::size_t t = 0; t < ops.size(); ++t) {
            const CircuitOp& op = ops[t];
            if (op.kind == CircuitOp::Kind::prep) {
                ++width;
                continue;
            }
            if (!op.gate) fail(errc::bad_argument, "apply op without a gate");
            if (op.gate->ring() != ring) fail(errc::ring_mismatch, "gate ring differs from circuit");
            if (static_cast<int>(op.wires.size()) != op.gate->in_bits())
                fail(errc::bad_argument, "wire list length must equal gate arity");
            std::vector<bool> seen(width + 1, false);
            for (int w : op.wires) {
                if (w < 1 || w > width) fail(errc::bad_argument, "wire index out of range");
                if (seen[w]) fail(errc::bad_argument, "duplicate wire in one gate application");
                seen[w] = true;
            }
            width += op.gate->out_bits() - op.gate->in_bits();
        }
        if (output_wire < 1 || output_wire > width)
            fail(errc::bad_argument, "output wire out of range at end of execution");
        return width;
    }

    int final_width() const { return validate(); }

    int gate_count() const {
        int n = 0;
        for (const CircuitOp& op : ops) n += op.kind == CircuitOp::Kind::apply;
        return n;
    }

    /// Gate count plus explicit matrix-entry count (the reported cost).
    std::pair<int, long long> cost() const {
        int gates = 0;
        long long entries = 0;
        for (const CircuitOp& op : ops) {
            if (op.kind != CircuitOp::Kind::apply) continue;
            ++gates;
            if (op.gate->kind() == Gate::Kind::dense)
                entries += (1LL << op.gate->in_bits()) * (1LL << op.gate->out_bits());
        }
        return {gates, entries};
    }
};

// --- gate application -------------------------------------------------------

namespace detail {

// Base indices of the 2^(n-h) stride classes: c expanded with zero bits at
// the sorted positions.
inline std::size_t expand_index(std::size_t c, const std::vector<int>& sorted_pos) {
    for (int q : sorted_pos) {
        std::size_t low = c & ((std::size_t(1) << q) - 1);
        c = ((c >> q) << (q + 1)) | low;
    }
    return c;
}

// off[L] = global offset of the local pattern L (wire i of the gate is bit
// h-i of L and bit n-w_i of the global index).
inline std::vector<std::size_t> local_offsets(int n, const std::vector<int>& wires) {
    int h = static_cast<int>(wires.size());
    std::vector<std::size_t> off(std::size_t(1) << h, 0);
    for (std::size_t L = 0; L < off.size(); ++L)
        for (int i = 0; i < h; ++i)
            if (L >> (h - 1 - i) & 1) off[L] |= std::size_t(1) << (n - wires[i]);
    return off;
}

inline void apply_ctrlx_inplace(ModalState& psi, const Gate& g, const std::vector<int>& wires) {
    int n = psi.bits();
    int e = psi.ring().e();
    std::size_t ctrl_mask = 0;
    for (std::size_t i = 0; i + 1 < wires.size(); ++i)
        ctrl_mask |= std::size_t(1) << (n - wires[i]);
    std::size_t tgt = std::size_t(1) << (n - wires.back());
    i64* a = psi.raw();
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if ((i & ctrl_mask) != ctrl_mask || (i & tgt)) continue;
        std::size_t j = i | tgt;
        for (int t = 0; t < e; ++t) std::swap(a[i * e + t], a[j * e + t]);
    }
}

inline void apply_square_dense_inplace(ModalState& psi, const Gate& g,
                                       const std::vector<int>& wires) {
    const RingSpec& ring = psi.ring();
    int n = psi.bits();
    int h = g.in_bits();
    int e = ring.e();
    const RingMatrix& m = g.matrix();
    std::size_t dim = std::size_t(1) << h;

    std::vector<int> sorted_pos;
    for (int w : wires) sorted_pos.push_back(n - w);
    std::sort(sorted_pos.begin(), sorted_pos.end());
    std::vector<std::size_t> off = local_offsets(n, wires);
    std::size_t classes = std::size_t(1) << (n - h);
    i64* amps = psi.raw();

    if (g.is_permutation()) {
        std::vector<i64> scratch(dim * e);
        for (std::size_t c = 0; c < classes; ++c) {
            std::size_t base = expand_index(c, sorted_pos);
            for (std::size_t L = 0; L < dim; ++L) {
                std::size_t src = (base | off[L]) * e;
                std::size_t dst = g.permute(L) * e;
                for (int t = 0; t < e; ++t) scratch[dst + t] = amps[src + t];
            }
            for (std::size_t L = 0; L < dim; ++L) {
                std::size_t dst = (base | off[L]) * e;
                for (int t = 0; t < e; ++t) amps[dst + t] = scratch[L * e + t];
            }
        }
        return;
    }

    if (e == 1) {
        i64 k = ring.k();
        // Raw matrix copy; defer reduction when the accumulator cannot wrap.
        std::vector<i64> mv(dim * dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t col = 0; col < dim; ++col) mv[r * dim + col] = m.get(r, col).c[0];
        bool deferred =
            (k - 1) * (k - 1) <= (std::numeric_limits<i64>::max)() / static_cast<i64>(dim);
        std::vector<i64> in(dim), out(dim);
        for (std::size_t c = 0; c < classes; ++c) {
            std::size_t base = expand_index(c, sorted_pos);
            for (std::size_t L = 0; L < dim; ++L) in[L] = amps[base | off[L]];
            if (deferred) {
                for (std::size_t r = 0; r < dim; ++r) {
                    i64 acc = 0;
                    const i64* row = mv.data() + r * dim;
                    for (std::size_t col = 0; col < dim; ++col) acc += row[col] * in[col];
                    out[r] = acc % k;
                }
            } else {
                for (std::size_t r = 0; r < dim; ++r) {
                    i64 acc = 0;
                    const i64* row = mv.data() + r * dim;
                    for (std::size_t col = 0; col < dim; ++col)
                        acc = (acc + row[col] % k * in[col]) % k;
                    out[r] = acc;
                }
            }
            for (std::size_t L = 0; L < dim; ++L) amps[base | off[L]] = out[L];
        }
        return;
    }

    std::vector<Elem> in(dim), out(dim);
    for (std::size_t c = 0; c < classes; ++c) {
        std::size_t base = expand_index(c, sorted_pos);
        for (std::size_t L = 0; L < dim; ++L) in[L] = psi.get(base | off[L]);
        for (std::size_t r = 0; r < dim; ++r) {
            Elem acc = ring.zero();
            for (std::size_t col = 0; col < dim; ++col)
                acc = ring.add(acc, ring.mul(m.get(static_cast<int>(r), static_cast<int>(col)),
                                             in[col]));
            out[r] = acc;
        }
        for (std::size_t L = 0; L < dim; ++L) psi.set(base | off[L], out[L]);
    }
}

inline ModalState apply_nonsquare_dense(const ModalState& psi, const Gate& g,
                                        const std::vector<int>& wires) {
    const RingSpec& ring = psi.ring();
    int n = psi.bits();
    int hin = g.in_bits(), hout = g.out_bits();
    const RingMatrix& m = g.matrix();
    ModalState out(ring, n - hin + hout);

    std::vector<int> sorted_wires = wires;
    std::sort(sorted_wires.begin(), sorted_wires.end());
    std::vector<int> sorted_pos;
    for (int w : sorted_wires) sorted_pos.push_back(n - w);
    std::sort(sorted_pos.begin(), sorted_pos.end());
    std::vector<std::size_t> off = local_offsets(n, wires);
    // Output bits of the gate replace the block at the first selected wire:
    // remaining wires keep their relative order on either side.
    int before = sorted_wires[0] - 1;        // remaining wires above the block
    int after = n - hin - before;            // remaining wires below it
    std::size_t classes = std::size_t(1) << (n - hin);
    std::vector<Elem> in(std::size_t(1) << hin);
    for (std::size_t c = 0; c < classes; ++c) {
        std::size_t base = expand_index(c, sorted_pos);
        for (std::size_t L = 0; L < in.size(); ++L) in[L] = psi.get(base | off[L]);
        std::size_t high = c >> after, low = c & ((std::size_t(1) << after) - 1);
        for (std::size_t y = 0; y < (std::size_t(1) << hout); ++y) {
            Elem acc = ring.zero();
            for (std::size_t L = 0; L < in.size(); ++L) {
                const Elem& coeff = m.get(static_cast<int>(y), static_cast<int>(L));
                if (ring.is_zero(coeff)) continue;
                acc = ring.add(acc, ring.mul(coeff, in[L]));
            }
            if (ring.is_zero(acc)) continue;
            std::size_t idx = (high << (hout + after)) | (y << after) | low;
            out.set(idx, ring.add(out.get(idx), acc));
        }
    }
    return out;
}

}  // namespace detail

/// Applies g to the named wires of psi; equals the naive construction that
/// permutes the wires to the front, applies g (x) I, and permutes back.
inline ModalState apply_gate_at(ModalState psi, const Gate& g, const std::vector<int>& wires) {
    if (g.ring() != psi.ring()) fail(errc::ring_mismatch, "gate ring differs from state");
    if (static_cast<int>(wires.size()) != g.in_bits())
        fail(errc::bad_argument, "wire list length must equal gate arity");
    std::vector<bool> seen(psi.bits() + 1, false);
    for (int w : wires) {
        if (w < 1 || w > psi.bits()) fail(errc::bad_argument, "wire index out of range");
        if (seen[w]) fail(errc::bad_argument, "duplicate wire in one gate application");
        seen[w] = true;
    }
    if (g.kind() == Gate::Kind::controlled_x) {
        detail::apply_ctrlx_inplace(psi, g, wires);
        return psi;
    }
    if (g.square()) {
        detail::apply_square_dense_inplace(psi, g, wires);
        return psi;
    }
    return detail::apply_nonsquare_dense(psi, g, wires);
}

inline ModalState run(const Circuit& c, const ModalState& input) {
    if (input.ring() != c.ring) fail(errc::ring_mismatch, "input ring differs from circuit");
    if (input.bits() != c.input_width) fail(errc::bad_argument, "input width mismatch");
    c.validate();
    ModalState psi = input;
    ModalState zero = basis_state(c.ring, "0");
    for (const CircuitOp& op : c.ops) {
        if (op.kind == CircuitOp::Kind::prep)
            psi = tensor(psi, zero);
        else
            psi = apply_gate_at(std::move(psi), *op.gate, op.wires);
    }
    return psi;
}

inline ModalState run(const Circuit& c, const std::string& x) {
    return run(c, basis_state(c.ring, x));
}

enum class Decision { Zero, One, NotNecessary };

inline const char* to_string(Decision d) {
    switch (d) {
        case Decision::Zero: return "Zero";
        case Decision::One: return "One";
        case Decision::NotNecessary: return "NotNecessary";
    }
    return "?";
}

/// Default decision space: l2 when every gate is unitary, generic when every
/// gate is invertible, l1 when every gate is affine, generic otherwise.
inline StateSpace default_space(const Circuit& c) {
    bool unitary = true, invertible = true, affine = true;
    for (const CircuitOp& op : c.ops) {
        if (op.kind != CircuitOp::Kind::apply) continue;
        const GateClassification& cls = op.gate->classification();
        unitary &= cls.unitary;
        invertible &= cls.invertible;
        affine &= cls.affine;
    }
    if (unitary) return StateSpace::l2;
    if (invertible) return StateSpace::generic;
    if (affine) return StateSpace::l1;
    return StateSpace::generic;
}

inline Decision decide(const Circuit& c, const std::string& x, StateSpace space) {
    ModalState out = run(c, x);
    if (is_necessary(out, {c.output_wire}, "1", space)) return Decision::One;
    if (is_necessary(out, {c.output_wire}, "0", space)) return Decision::Zero;
    return Decision::NotNecessary;
}

inline Decision decide(const Circuit& c, const std::string& x) {
    return decide(c, x, default_space(c));
}

/// Reversed op order with each gate replaced by its inverse.
inline Circuit circuit_inverse(const Circuit& c) {
    Circuit inv;
    inv.ring = c.ring;
    inv.input_width = c.final_width();
    inv.output_wire = c.output_wire;
    std::map<const Gate*, GatePtr> cache;
    for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) {
        if (it->kind == CircuitOp::Kind::prep) fail(errc::contains_prep, "cannot invert a prep");
        if (!it->gate->classification().invertible)
            fail(errc::not_invertible, "gate '" + it->gate->name() + "' is not invertible");
        GatePtr& g = cache[it->gate.get()];
        if (!g) g = std::make_shared<Gate>(inverse(*it->gate));
        inv.ops.push_back(apply_op(g, it->wires));
    }
    return inv;
}

// --- nondeterministic path counting ------------------------------------------

/// Weighted branch counts over the nonnegative integers: gates are lifted to
/// integer matrices with entries in [0,k), preps are deterministic
/// transitions, and N(x,T,y) = <y| G_T ... G_1 |x>.
inline std::vector<BigInt> path_count_all(const Circuit& c, const std::string& x) {
    int width = static_cast<int>(x.size());
    if (width != c.input_width) fail(errc::bad_argument, "input width mismatch");
    c.validate();
    if (c.final_width() > state_bit_cap()) fail(errc::width_overflow, "circuit too wide");
    std::vector<BigInt> v(std::size_t(1) << width);
    v[bitstring_index(x)] = 1;
    for (const CircuitOp& op : c.ops) {
        if (op.kind == CircuitOp::Kind::prep) {
            ++width;
            std::vector<BigInt> nv(std::size_t(1) << width);
            for (std::size_t i = 0; i < v.size(); ++i) nv[i << 1] = std::move(v[i]);
            v = std::move(nv);
            continue;
        }
        const Gate& g = *op.gate;
        if (g.is_permutation()) {
            std::vector<std::size_t> off = detail::local_offsets(width, op.wires);
            std::vector<int> sorted_pos;
            for (int w : op.wires) sorted_pos.push_back(width - w);
            std::sort(sorted_pos.begin(), sorted_pos.end());
            int h = g.in_bits();
            std::vector<BigInt> scratch(std::size_t(1) << h);
            for (std::size_t cls = 0; cls < (std::size_t(1) << (width - h)); ++cls) {
                std::size_t base = detail::expand_index(cls, sorted_pos);
                for (std::size_t L = 0; L < scratch.size(); ++L)
                    scratch[g.permute(L)] = std::move(v[base | off[L]]);
                for (std::size_t L = 0; L < scratch.size(); ++L)
                    v[base | off[L]] = std::move(scratch[L]);
            }
            continue;
        }
        const RingMatrix& m = g.matrix();
        int hin = g.in_bits(), hout = g.out_bits();
        std::vector<std::size_t> off = detail::local_offsets(width, op.wires);
        std::vector<int> sorted_wires = op.wires;
        std::sort(sorted_wires.begin(), sorted_wires.end());
        std::vector<int> sorted_pos;
        for (int w : sorted_wires) sorted_pos.push_back(width - w);
        std::sort(sorted_pos.begin(), sorted_pos.end());
        if (g.square()) {
            // in place: gather, integer mat-vec, scatter
            std::vector<BigInt> in(std::size_t(1) << hin), outv(std::size_t(1) << hin);
            for (std::size_t cls = 0; cls < (std::size_t(1) << (width - hin)); ++cls) {
                std::size_t base = detail::expand_index(cls, sorted_pos);
                for (std::size_t L = 0; L < in.size(); ++L) in[L] = std::move(v[base | off[L]]);
                for (std::size_t y = 0; y < outv.size(); ++y) {
                    BigInt acc = 0;
                    for (std::size_t L = 0; L < in.size(); ++L) {
                        i64 coeff = m.get(static_cast<int>(y), static_cast<int>(L)).c[0];
                        if (coeff) acc += BigInt(coeff) * in[L];
                    }
                    outv[y] = std::move(acc);
                }
                for (std::size_t L = 0; L < outv.size(); ++L)
                    v[base | off[L]] = std::move(outv[L]);
            }
            continue;
        }
        int before = sorted_wires[0] - 1;
        int after = width - hin - before;
        int new_width = width - hin + hout;
        std::vector<BigInt> nv(std::size_t(1) << new_width);
        for (std::size_t cls = 0; cls < (std::size_t(1) << (width - hin)); ++cls) {
            std::size_t base = detail::expand_index(cls, sorted_pos);
            std::size_t high = cls >> after, low = cls & ((std::size_t(1) << after) - 1);
            for (std::size_t y = 0; y < (std::size_t(1) << hout); ++y) {
                BigInt acc = 0;
                for (std::size_t L = 0; L < (std::size_t(1) << hin); ++L) {
                    i64 coeff = m.get(static_cast<int>(y), static_cast<int>(L)).c[0];
                    if (coeff) acc += BigInt(coeff) * v[base | off[L]];
                }
                if (acc != 0) nv[(high << (hout + after)) | (y << after) | low] += acc;
            }
        }
        v = std::move(nv);
        width = new_width;
    }
    return v;
}

inline BigInt path_count(const Circuit& c, const std::string& x, const std::string& y) {
    std::vector<BigInt> v = path_count_all(c, x);
    if ((std::size_t(1) << y.size()) != v.size())
        fail(errc::bad_argument, "output string width mismatch");
    return v[bitstring_index(y)];
}

// --- text format --------------------------------------------------------------

namespace detail {

inline bool builtin_gate_name(const std::string& name) {
    static const char* names[] = {"NOT",   "CNOT", "TOFFOLI", "SWAP", "FANOUT", "AND", "OR",
                                  "ERASE", "UNIF", "K",       "KT",   "CK",     "CKT"};
    for (const char* n : names)
        if (name == n) return true;
    return name.rfind("CNX", 0) == 0 && name.size() > 3 &&
           name.find_first_not_of("0123456789", 3) == std::string::npos;
}

inline Gate make_named_gate(const RingSpec& ring, const std::string& name) {
    if (name == "K") return branching_gate_K(ring);
    if (name == "KT") return adjoint(branching_gate_K(ring));
    if (name == "CK") return controlled(branching_gate_K(ring));
    if (name == "CKT") return controlled(adjoint(branching_gate_K(ring)));
    if (name.rfind("CNX", 0) == 0) return standard_gate(ring, "CNX", std::stoi(name.substr(3)));
    return standard_gate(ring, name);
}

}  // namespace detail

/// Moves all preps to the front of the op list (stable). A prep appends a
/// |0> wire at the right end, which no earlier op can reference, and the
/// renumbering induced by width-changing gates is order-preserving, so the
/// move never changes the circuit's action.
inline void normalize_preps(Circuit& c) {
    std::stable_partition(c.ops.begin(), c.ops.end(), [](const CircuitOp& op) {
        return op.kind == CircuitOp::Kind::prep;
    });
}

inline void write_circuit(std::ostream& os, const Circuit& c) {
    os << c.ring.header() << '\n';
    os << "inputs " << c.input_width << '\n';
    for (const CircuitOp& op : c.ops) {
        if (op.kind == CircuitOp::Kind::prep) {
            os << "prep\n";
            continue;
        }
        const Gate& g = *op.gate;
        std::string name = g.name();
        if (g.kind() == Gate::Kind::controlled_x && g.controls() >= 3)
            name = "CNX" + std::to_string(g.controls());
        if (detail::builtin_gate_name(name)) {
            os << "gate " << name;
            for (int w : op.wires) os << ' ' << w;
            os << '\n';
            continue;
        }
        if (!g.square()) fail(errc::bad_argument, "cannot serialize a custom non-square gate");
        const RingMatrix& m = g.matrix();
        os << "begin matrix " << g.in_bits() << '\n';
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) {
                if (j) os << ' ';
                os << c.ring.to_string(m.get(i, j));
            }
            os << '\n';
        }
        os << "end matrix\n";
        os << "at";
        for (int w : op.wires) os << ' ' << w;
        os << '\n';
    }
    os << "output " << c.output_wire << '\n';
}

inline std::string serialize_circuit(const Circuit& c) {
    std::ostringstream os;
    write_circuit(os, c);
    return os.str();
}

inline Circuit read_circuit(std::istream& is) {
    Circuit c;
    std::string raw;
    int lineno = 0;
    bool have_ring = false, have_inputs = false, have_output = false;
    int width = 0;
    std::map<std::string, GatePtr> named_cache;
    auto err = [&](const std::string& why) {
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": " + why);
    };
    auto next_tokens = [&](std::vector<std::string>& toks) {
        while (std::getline(is, raw)) {
            ++lineno;
            std::size_t h = raw.find('#');
            if (h != std::string::npos) raw.erase(h);
            std::istringstream ls(raw);
            toks.clear();
            std::string t;
            while (ls >> t) toks.push_back(t);
            if (!toks.empty()) return true;
        }
        return false;
    };
    auto parse_wire = [&](const std::string& tok) {
        int w = 0;
        try {
            w = std::stoi(tok);
        } catch (const std::exception&) {
            err("bad wire index '" + tok + "'");
        }
        if (w < 1) err("wire indices are 1-based");
        if (w > width) err("wire " + tok + " exceeds current width " + std::to_string(width));
        return w;
    };
    auto add_apply = [&](GatePtr g, std::vector<int> wires) {
        if (static_cast<int>(wires.size()) != g->in_bits())
            err("gate expects " + std::to_string(g->in_bits()) + " wires, got " +
                std::to_string(wires.size()));
        std::vector<bool> seen(width + 1, false);
        for (int w : wires) {
            if (seen[w]) err("duplicate wire " + std::to_string(w));
            seen[w] = true;
        }
        width += g->out_bits() - g->in_bits();
        c.ops.push_back(apply_op(std::move(g), std::move(wires)));
    };

    std::vector<std::string> toks;
    while (next_tokens(toks)) {
        const std::string& head = toks[0];
        if (head == "ring") {
            if (have_ring) err("duplicate ring header");
            std::ostringstream os;
            for (std::size_t i = 0; i < toks.size(); ++i) os << (i ? " " : "") << toks[i];
            c.ring = parse_ring_header(os.str(), lineno);
            have_ring = true;
        } else if (head == "inputs") {
            if (!have_ring) err("'inputs' before ring header");
            if (have_inputs) err("duplicate inputs line");
            if (toks.size() != 2) err("expected 'inputs <n>'");
            try {
                c.input_width = std::stoi(toks[1]);
            } catch (const std::exception&) {
                err("bad input width");
            }
            if (c.input_width < 0 || c.input_width > state_bit_cap()) err("input width out of range");
            width = c.input_width;
            have_inputs = true;
        } else if (head == "prep") {
            if (!have_inputs) err("'prep' before inputs line");
            if (toks.size() != 1) err("'prep' takes no arguments");
            ++width;
            c.ops.push_back(prep_op());
        } else if (head == "gate") {
            if (!have_inputs) err("'gate' before inputs line");
            if (toks.size() < 2) err("expected 'gate <NAME> <wires...>'");
            if (!detail::builtin_gate_name(toks[1])) err("unknown gate '" + toks[1] + "'");
            GatePtr& g = named_cache[toks[1]];
            if (!g) {
                try {
                    g = std::make_shared<Gate>(detail::make_named_gate(c.ring, toks[1]));
                } catch (const Error& e) {
                    err(e.what());
                }
            }
            std::vector<int> wires;
            for (std::size_t i = 2; i < toks.size(); ++i) wires.push_back(parse_wire(toks[i]));
            add_apply(g, std::move(wires));
        } else if (head == "begin") {
            if (!have_inputs) err("matrix block before inputs line");
            if (toks.size() != 3 || toks[1] != "matrix") err("expected 'begin matrix <h>'");
            int h = 0;
            try {
                h = std::stoi(toks[2]);
            } catch (const std::exception&) {
                err("bad matrix arity");
            }
            if (h < 1 || h > kMaxDenseGateBits) err("matrix arity out of range");
            int dim = 1 << h;
            RingMatrix m(c.ring, dim, dim);
            for (int i = 0; i < dim; ++i) {
                if (!next_tokens(toks)) err("unterminated matrix block");
                if (static_cast<int>(toks.size()) != dim)
                    err("matrix row has " + std::to_string(toks.size()) + " entries, expected " +
                        std::to_string(dim));
                for (int j = 0; j < dim; ++j) {
                    try {
                        m.set(i, j, c.ring.parse_elem(toks[j]));
                    } catch (const Error& e) {
                        err(e.what());
                    }
                }
            }
            if (!next_tokens(toks) || toks.size() != 2 || toks[0] != "end" || toks[1] != "matrix")
                err("expected 'end matrix'");
            if (!next_tokens(toks) || toks[0] != "at") err("expected 'at <wires...>' after matrix");
            std::vector<int> wires;
            for (std::size_t i = 1; i < toks.size(); ++i) wires.push_back(parse_wire(toks[i]));
            add_apply(std::make_shared<Gate>(Gate::dense("custom", std::move(m))),
                      std::move(wires));
        } else if (head == "output") {
            if (toks.size() != 2) err("expected 'output <wire>'");
            c.output_wire = parse_wire(toks[1]);
            have_output = true;
        } else {
            err("unknown directive '" + head + "'");
        }
    }
    if (!have_ring) fail(errc::parse_error, "missing ring header");
    if (!have_inputs) fail(errc::parse_error, "missing inputs line");
    if (!have_output) fail(errc::parse_error, "missing output line");
    normalize_preps(c);
    c.validate();
    return c;
}

inline Circuit parse_circuit(const std::string& text) {
    std::istringstream is(text);
    return read_circuit(is);
}

}  // namespace ringsim
