#pragma once

#include <map>
#include <sstream>

#include "ringsim/oracle.hpp"

namespace ringsim {

/// C' = (C^-1 (x) I) . CNOT(out -> fresh) . (C (x) I) with one extra prep:
/// on every exactly-decided basis input, C'|x>|0^{m+1}> = |x>|0^m>|L(x)>.
inline Circuit uncompute_wrap(const Circuit& c) {
    Circuit base = c;
    normalize_preps(base);
    base.validate();
    std::size_t t = 0;
    while (t < base.ops.size() && base.ops[t].kind == CircuitOp::Kind::prep) ++t;
    int preps = static_cast<int>(t);
    for (std::size_t i = t; i < base.ops.size(); ++i) {
        if (base.ops[i].kind == CircuitOp::Kind::prep)
            fail(errc::contains_prep, "preps cannot be normalized to the front");
        const Gate& g = *base.ops[i].gate;
        if (!g.square() || !g.classification().invertible)
            fail(errc::non_invertible_gate, "gate '" + g.name() + "' is not invertible");
    }
    int total = base.input_width + preps;

    Circuit out;
    out.ring = base.ring;
    out.input_width = base.input_width;
    for (int i = 0; i < preps + 1; ++i) out.ops.push_back(prep_op());
    for (std::size_t i = t; i < base.ops.size(); ++i) out.ops.push_back(base.ops[i]);
    out.ops.push_back(apply_op(std::make_shared<Gate>(standard_gate(base.ring, "CNOT")),
                               {base.output_wire, total + 1}));
    std::map<const Gate*, GatePtr> cache;
    for (std::size_t i = base.ops.size(); i-- > t;) {
        GatePtr& inv = cache[base.ops[i].gate.get()];
        if (!inv) inv = std::make_shared<Gate>(inverse(*base.ops[i].gate));
        out.ops.push_back(apply_op(inv, base.ops[i].wires));
    }
    out.output_wire = total + 1;
    out.validate();
    return out;
}

// --- the affine Mod_kP circuit ------------------------------------------------

/// Wire layout of build_affine_modkp before the erasure stage:
/// X(1..n), then pairs (b_j, s_j), then W(m) with the answer last.
struct AffineLayout {
    int n = 0, B = 0, m = 0;
    int b_wire(int j) const { return n + 2 * j - 1; }
    int s_wire(int j) const { return n + 2 * j; }
    int w_wire(int j) const { return n + 2 * B + j; }
    int width() const { return n + 2 * B + m; }
};

/// Per branching bit, prepares |rho> = |01> + |11> + (k-1)|00> on a fresh
/// (b, s) pair, simulates R conditioned on every success bit s, then erases
/// everything except the answer wire. On promise inputs the final one-bit
/// state is exactly |L(x)>.
inline Circuit build_affine_modkp(const ReversiblePredicate& rp, const RingSpec& ring) {
    if (!ring.is_cyclic()) fail(errc::unsupported_ring, "affine builder works over Z_k");
    rp.check_wires();
    AffineLayout lay{rp.n, rp.B, rp.m};

    Circuit c;
    c.ring = ring;
    c.input_width = rp.n;
    for (int i = 0; i < 2 * rp.B + rp.m; ++i) c.ops.push_back(prep_op());

    // |00> -> (k-1)|00> + |01> + |11>, identity on the other basis states.
    RingMatrix rho(ring, 4, 4);
    rho.set(0, 0, ring.from_int(ring.k() - 1));
    rho.set(1, 0, ring.one());
    rho.set(3, 0, ring.one());
    rho.set(1, 1, ring.one());
    rho.set(2, 2, ring.one());
    rho.set(3, 3, ring.one());
    GatePtr rho_gate = std::make_shared<Gate>(Gate::dense("rho-prep", std::move(rho)));
    for (int j = 1; j <= rp.B; ++j)
        c.ops.push_back(apply_op(rho_gate, {lay.b_wire(j), lay.s_wire(j)}));

    std::vector<int> wire_map(rp.width());
    for (int w = 1; w <= rp.n; ++w) wire_map[w - 1] = w;
    for (int j = 1; j <= rp.B; ++j) wire_map[rp.n + j - 1] = lay.b_wire(j);
    for (int j = 1; j <= rp.m; ++j) wire_map[rp.n + rp.B + j - 1] = lay.w_wire(j);
    std::vector<int> success;
    for (int j = 1; j <= rp.B; ++j) success.push_back(lay.s_wire(j));
    for (const PermOp& op : rp.ops)
        c.ops.push_back(instantiate_perm_op(ring, op, wire_map, success));

    // The answer sits on the last wire; erasing wire 1 repeatedly leaves it.
    GatePtr erase = std::make_shared<Gate>(standard_gate(ring, "ERASE"));
    for (int i = 0; i < lay.width() - 1; ++i) c.ops.push_back(apply_op(erase, {1}));
    c.output_wire = 1;
    c.validate();
    return c;
}

// --- the unitary Mod_kP circuit -------------------------------------------------

/// Register layout of the 11-step unitary simulation circuit, in wire order:
/// X(n), B(B), S(2B), W(m-1), a', C, S'(2(B+m-1)), C', a.
struct UnitaryLayout {
    int n = 0, B = 0, m = 0;
    int x_wire(int i) const { return i; }
    int b_wire(int j) const { return n + j; }
    int s_wire(int j) const { return n + B + j; }
    int w_wire(int j) const { return n + 3 * B + j; }
    int a_prime() const { return n + 3 * B + m; }
    int c_wire() const { return n + 3 * B + m + 1; }
    int sp_wire(int j) const { return n + 3 * B + m + 1 + j; }
    int c_prime() const { return n + 5 * B + 3 * m; }
    int answer() const { return n + 5 * B + 3 * m + 1; }
    int width() const { return n + 5 * B + 3 * m + 1; }
};

/// Emits the 11-step circuit simulating a Mod_kP acceptance count with
/// unitary gates over Z_k (k a prime power), acting on n + 5B + 3m + 1 bits.
/// On promise inputs: a zero count ends in exactly |x>|1^{5B+3m}>|0>, and a
/// unit count makes the answer wire necessarily 1.
inline Circuit build_unitary_modkp(const ReversiblePredicate& rp, const RingSpec& ring) {
    if (!ring.is_cyclic() || !ring.is_prime_power())
        fail(errc::unsupported_modulus, "unitary builder needs a prime-power Z_k");
    rp.check_wires();
    UnitaryLayout lay{rp.n, rp.B, rp.m};

    Circuit c;
    c.ring = ring;
    c.input_width = rp.n;
    // Step 1: every non-input wire starts in |0>.
    for (int i = rp.n + 1; i <= lay.width(); ++i) c.ops.push_back(prep_op());

    GatePtr k_gate = std::make_shared<Gate>(branching_gate_K(ring));
    GatePtr kt_gate = std::make_shared<Gate>(adjoint(*k_gate));
    GatePtr x_gate = std::make_shared<Gate>(Gate::controlled_x(ring, 0));

    // Steps 2-7 form the subcircuit that step 9 conditionally reverses.
    std::vector<CircuitOp> core;
    // Step 2: K on (B_j, S_{2j-1}, S_{2j}).
    for (int j = 1; j <= rp.B; ++j)
        core.push_back(apply_op(k_gate, {lay.b_wire(j), lay.s_wire(2 * j - 1), lay.s_wire(2 * j)}));
    // Step 3: flip C when every S bit is 1.
    {
        std::vector<int> wires;
        for (int j = 1; j <= 2 * rp.B; ++j) wires.push_back(lay.s_wire(j));
        wires.push_back(lay.c_wire());
        core.push_back(apply_op(
            std::make_shared<Gate>(Gate::controlled_x(ring, 2 * rp.B)), std::move(wires)));
    }
    // Step 4: simulate R on (X, B, W, a') with C as an extra control.
    {
        std::vector<int> wire_map(rp.width());
        for (int w = 1; w <= rp.n; ++w) wire_map[w - 1] = lay.x_wire(w);
        for (int j = 1; j <= rp.B; ++j) wire_map[rp.n + j - 1] = lay.b_wire(j);
        for (int j = 1; j < rp.m; ++j) wire_map[rp.n + rp.B + j - 1] = lay.w_wire(j);
        wire_map[rp.n + rp.B + rp.m - 1] = lay.a_prime();
        for (const PermOp& op : rp.ops)
            core.push_back(instantiate_perm_op(ring, op, wire_map, {lay.c_wire()}));
    }
    // Step 5: flip every S' bit.
    int sp = 2 * (rp.B + rp.m - 1);
    for (int j = 1; j <= sp; ++j) core.push_back(apply_op(x_gate, {lay.sp_wire(j)}));
    // Step 6: K^T on the triples formed by B u W and S'.
    for (int j = 1; j <= rp.B; ++j)
        core.push_back(
            apply_op(kt_gate, {lay.b_wire(j), lay.sp_wire(2 * j - 1), lay.sp_wire(2 * j)}));
    for (int j = 1; j < rp.m; ++j)
        core.push_back(apply_op(kt_gate, {lay.w_wire(j), lay.sp_wire(2 * rp.B + 2 * j - 1),
                                          lay.sp_wire(2 * rp.B + 2 * j)}));
    // Step 7: flip every bit of B, W and S'.
    for (int j = 1; j <= rp.B; ++j) core.push_back(apply_op(x_gate, {lay.b_wire(j)}));
    for (int j = 1; j < rp.m; ++j) core.push_back(apply_op(x_gate, {lay.w_wire(j)}));
    for (int j = 1; j <= sp; ++j) core.push_back(apply_op(x_gate, {lay.sp_wire(j)}));

    for (const CircuitOp& op : core) c.ops.push_back(op);

    // Step 8: C' starts at 1 and is toggled back when (B, W, S', a') is all-1.
    c.ops.push_back(apply_op(x_gate, {lay.c_prime()}));
    {
        std::vector<int> wires;
        for (int j = 1; j <= rp.B; ++j) wires.push_back(lay.b_wire(j));
        for (int j = 1; j < rp.m; ++j) wires.push_back(lay.w_wire(j));
        for (int j = 1; j <= sp; ++j) wires.push_back(lay.sp_wire(j));
        wires.push_back(lay.a_prime());
        int controls = static_cast<int>(wires.size());
        wires.push_back(lay.c_prime());
        c.ops.push_back(apply_op(
            std::make_shared<Gate>(Gate::controlled_x(ring, controls)), std::move(wires)));
    }
    // Step 9: conditionally undo steps 2-7 with C' as control.
    std::map<const Gate*, GatePtr> ctrl_inverse;
    for (std::size_t i = core.size(); i-- > 0;) {
        GatePtr& g = ctrl_inverse[core[i].gate.get()];
        if (!g) g = std::make_shared<Gate>(controlled(inverse(*core[i].gate)));
        std::vector<int> wires{lay.c_prime()};
        for (int w : core[i].wires) wires.push_back(w);
        c.ops.push_back(apply_op(g, std::move(wires)));
    }
    // Step 10: flip everything except X and C'.
    for (int w = rp.n + 1; w <= lay.width(); ++w)
        if (w != lay.c_prime()) c.ops.push_back(apply_op(x_gate, {w}));
    // Step 11: flip the answer when everything except X and a is 1.
    {
        std::vector<int> wires;
        for (int w = rp.n + 1; w < lay.width(); ++w) wires.push_back(w);
        int controls = static_cast<int>(wires.size());
        wires.push_back(lay.answer());
        c.ops.push_back(apply_op(
            std::make_shared<Gate>(Gate::controlled_x(ring, controls)), std::move(wires)));
    }
    c.output_wire = lay.answer();
    c.validate();
    return c;
}

// --- arity lowering --------------------------------------------------------------

struct LowerReport {
    Circuit circuit;
    int pool_size = 0;   // ancilla wires appended after the original width
    int lowered = 0;     // number of wide flips replaced by ladders
};

/// Replaces every multiply-controlled NOT wider than max_arity by a clean
/// Toffoli ladder. Ancillas come from one shared pool appended as preps, and
/// every ladder restores them to |0>.
inline LowerReport lower_to_small_gates(const Circuit& c, int max_arity = 4) {
    if (max_arity < 3) fail(errc::cannot_lower, "ladders need max_arity >= 3");
    Circuit base = c;
    normalize_preps(base);
    base.validate();
    std::size_t t = 0;
    while (t < base.ops.size() && base.ops[t].kind == CircuitOp::Kind::prep) ++t;
    int pool = 0, lowered = 0;
    for (std::size_t i = t; i < base.ops.size(); ++i) {
        if (base.ops[i].kind == CircuitOp::Kind::prep)
            fail(errc::cannot_lower, "preps cannot be normalized to the front");
        const Gate& g = *base.ops[i].gate;
        if (!g.square()) fail(errc::cannot_lower, "width-changing gates cannot be lowered");
        if (g.in_bits() <= max_arity) continue;
        if (g.kind() != Gate::Kind::controlled_x)
            fail(errc::cannot_lower, "wide gate '" + g.name() + "' is not a controlled flip");
        pool = std::max(pool, g.controls() - 2);
        ++lowered;
    }
    int width = base.input_width + static_cast<int>(t);

    LowerReport rep;
    rep.pool_size = pool;
    rep.lowered = lowered;
    Circuit& out = rep.circuit;
    out.ring = base.ring;
    out.input_width = base.input_width;
    out.output_wire = base.output_wire;
    for (std::size_t i = 0; i < t; ++i) out.ops.push_back(prep_op());
    for (int i = 0; i < pool; ++i) out.ops.push_back(prep_op());

    GatePtr toffoli = std::make_shared<Gate>(Gate::controlled_x(base.ring, 2));
    auto pool_wire = [&](int i) { return width + i; };  // i = 1..pool
    for (std::size_t i = t; i < base.ops.size(); ++i) {
        const CircuitOp& op = base.ops[i];
        const Gate& g = *op.gate;
        if (g.in_bits() <= max_arity) {
            out.ops.push_back(op);
            continue;
        }
        int l = g.controls();
        const std::vector<int>& w = op.wires;  // controls w[0..l-1], target w[l]
        std::vector<CircuitOp> chain;
        chain.push_back(apply_op(toffoli, {w[0], w[1], pool_wire(1)}));
        for (int j = 3; j <= l - 1; ++j)
            chain.push_back(apply_op(toffoli, {pool_wire(j - 2), w[j - 1], pool_wire(j - 1)}));
        for (const CircuitOp& cop : chain) out.ops.push_back(cop);
        out.ops.push_back(apply_op(toffoli, {pool_wire(l - 2), w[l - 1], w[l]}));
        for (std::size_t j = chain.size(); j-- > 0;) out.ops.push_back(chain[j]);
    }
    out.validate();
    return rep;
}

}  // namespace ringsim
