#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ringsim/circuit.hpp"

namespace ringsim {

/// Permutation operation over wires, independent of any ring: either a
/// multiply-controlled NOT (controls may be empty) or a swap of two wires.
struct PermOp {
    enum class Kind { controlled_x, swap };
    Kind kind = Kind::controlled_x;
    std::vector<int> controls;
    int target = 0;
    int swap_a = 0, swap_b = 0;

    static PermOp flip(int target) { return PermOp{Kind::controlled_x, {}, target, 0, 0}; }
    static PermOp cnx(std::vector<int> controls, int target) {
        return PermOp{Kind::controlled_x, std::move(controls), target, 0, 0};
    }
    static PermOp swap_of(int a, int b) { return PermOp{Kind::swap, {}, 0, a, b}; }
};

/// A reversible circuit over permutation gates computing an acceptance bit:
/// wires are [X(1..n)][B(n+1..n+B)][W(n+B+1..n+B+m)], the output is the last
/// work wire, and the circuit maps |x,b,0^m> -> |x,b,w(x,b),f(x,b)>.
struct ReversiblePredicate {
    int n = 0;  // input bits
    int B = 0;  // branching bits
    int m = 1;  // work bits, the last one carrying f(x,b)
    std::vector<PermOp> ops;

    int width() const { return n + B + m; }
    int output_wire() const { return n + B + m; }

    void check_wires() const {
        auto ok = [&](int w) { return w >= 1 && w <= width(); };
        for (const PermOp& op : ops) {
            if (op.kind == PermOp::Kind::swap) {
                if (!ok(op.swap_a) || !ok(op.swap_b) || op.swap_a == op.swap_b)
                    fail(errc::bad_argument, "bad swap wires in predicate");
                continue;
            }
            if (!ok(op.target)) fail(errc::bad_argument, "bad target wire in predicate");
            for (int c : op.controls)
                if (!ok(c) || c == op.target) fail(errc::bad_argument, "bad control wire");
        }
    }
};

/// Runs the predicate on a basis input; bit i of the mask is wire i+1.
/// Returns f(x,b); `final_bits`, when given, receives the full final string.
inline bool eval_predicate(const ReversiblePredicate& rp, std::uint64_t x_bits,
                           std::uint64_t b_bits, std::uint64_t* final_bits = nullptr) {
    if (rp.width() > 63) fail(errc::width_overflow, "predicate too wide for basis evaluation");
    std::uint64_t s = (x_bits & ((std::uint64_t(1) << rp.n) - 1)) |
                      ((b_bits & ((std::uint64_t(1) << rp.B) - 1)) << rp.n);
    for (const PermOp& op : rp.ops) {
        if (op.kind == PermOp::Kind::swap) {
            std::uint64_t a = s >> (op.swap_a - 1) & 1, b = s >> (op.swap_b - 1) & 1;
            if (a != b) s ^= (std::uint64_t(1) << (op.swap_a - 1)) |
                             (std::uint64_t(1) << (op.swap_b - 1));
            continue;
        }
        bool on = true;
        for (int c : op.controls) on &= (s >> (c - 1) & 1) != 0;
        if (on) s ^= std::uint64_t(1) << (op.target - 1);
    }
    if (final_bits) *final_bits = s;
    return (s >> (rp.output_wire() - 1) & 1) != 0;
}

/// Instantiates one PermOp as a ring gate application.
inline CircuitOp instantiate_perm_op(const RingSpec& ring, const PermOp& op,
                                     const std::vector<int>& wire_map,
                                     const std::vector<int>& extra_controls = {}) {
    auto mapped = [&](int w) { return wire_map[w - 1]; };
    if (op.kind == PermOp::Kind::swap) {
        if (!extra_controls.empty()) {
            Gate g = standard_gate(ring, "SWAP");
            for (std::size_t i = 0; i < extra_controls.size(); ++i) g = controlled(g);
            std::vector<int> wires = extra_controls;
            wires.push_back(mapped(op.swap_a));
            wires.push_back(mapped(op.swap_b));
            return apply_op(std::make_shared<Gate>(std::move(g)), std::move(wires));
        }
        return apply_op(std::make_shared<Gate>(standard_gate(ring, "SWAP")),
                        {mapped(op.swap_a), mapped(op.swap_b)});
    }
    std::vector<int> wires = extra_controls;
    for (int c : op.controls) wires.push_back(mapped(c));
    wires.push_back(mapped(op.target));
    GatePtr g = std::make_shared<Gate>(
        Gate::controlled_x(ring, static_cast<int>(wires.size()) - 1));
    return apply_op(std::move(g), std::move(wires));
}

/// The predicate as a plain circuit over a ring: inputs are (x, b), the m
/// work wires are prepped to |0>, and the output is the last wire.
inline Circuit predicate_to_circuit(const ReversiblePredicate& rp, const RingSpec& ring) {
    rp.check_wires();
    Circuit c;
    c.ring = ring;
    c.input_width = rp.n + rp.B;
    for (int i = 0; i < rp.m; ++i) c.ops.push_back(prep_op());
    std::vector<int> wire_map(rp.width());
    for (int w = 1; w <= rp.width(); ++w) wire_map[w - 1] = w;
    for (const PermOp& op : rp.ops) c.ops.push_back(instantiate_perm_op(ring, op, wire_map));
    c.output_wire = rp.width();
    return c;
}

// --- CNF front-end -----------------------------------------------------------

/// CNF clause list; literal +v is variable v, -v its negation (DIMACS style).
struct BooleanFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    // An empty clause is allowed and makes the formula trivially false.
    void check() const {
        for (const auto& cl : clauses)
            for (int lit : cl) {
                int v = lit > 0 ? lit : -lit;
                if (v < 1 || v > num_vars) fail(errc::bad_argument, "literal out of range");
            }
    }

    bool eval(std::uint64_t assignment) const {
        for (const auto& cl : clauses) {
            bool sat = false;
            for (int lit : cl) {
                int v = lit > 0 ? lit : -lit;
                bool val = (assignment >> (v - 1) & 1) != 0;
                if (lit > 0 ? val : !val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) return false;
        }
        return true;
    }
};

/// DIMACS "p cnf" subset: comments, a problem line, clauses ending in 0.
inline BooleanFormula read_dimacs(std::istream& is) {
    BooleanFormula f;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    long declared_clauses = -1;
    std::vector<int> cur;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            std::string kind;
            if (have_header || !(ls >> kind >> f.num_vars >> declared_clauses) || kind != "cnf")
                fail(errc::parse_error, "line " + std::to_string(lineno) + ": bad problem line");
            have_header = true;
            continue;
        }
        if (!have_header)
            fail(errc::parse_error, "line " + std::to_string(lineno) + ": clause before p line");
        ls.clear();
        ls.str(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                f.clauses.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(lit);
            }
        }
    }
    if (!have_header) fail(errc::parse_error, "missing DIMACS problem line");
    if (!cur.empty()) fail(errc::parse_error, "unterminated clause");
    f.check();
    return f;
}

inline void write_dimacs(std::ostream& os, const BooleanFormula& f) {
    os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& cl : f.clauses) {
        for (int lit : cl) os << lit << ' ';
        os << "0\n";
    }
}

/// Builds the branching predicate of a CNF: no input bits, B = num_vars
/// branching bits carrying the assignment, and work bits holding one clause
/// value each plus the output. Clause ancillas are computed, ANDed into the
/// output, and uncomputed, so the work string is clean on every branch.
inline ReversiblePredicate formula_to_reversible(const BooleanFormula& f) {
    f.check();
    ReversiblePredicate rp;
    rp.n = 0;
    rp.B = f.num_vars;
    int c = static_cast<int>(f.clauses.size());
    rp.m = c == 1 ? 1 : c + 1;
    int out = rp.output_wire();

    // clause j -> not(all its literals false), via an X-wrapped CNX
    auto emit_clause = [&](int j, int target) {
        std::vector<int> lits = f.clauses[j];
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (int lit : lits)
            if (std::binary_search(lits.begin(), lits.end(), -lit)) {
                rp.ops.push_back(PermOp::flip(target));  // tautology clause
                return;
            }
        std::vector<int> controls;
        std::vector<int> wrapped;
        for (int lit : lits) {
            int wire = rp.n + (lit > 0 ? lit : -lit);
            controls.push_back(wire);
            if (lit > 0) wrapped.push_back(wire);  // condition on the literal being false
        }
        for (int w : wrapped) rp.ops.push_back(PermOp::flip(w));
        rp.ops.push_back(PermOp::flip(target));
        rp.ops.push_back(PermOp::cnx(controls, target));
        for (int w : wrapped) rp.ops.push_back(PermOp::flip(w));
    };

    if (c == 0) {
        rp.ops.push_back(PermOp::flip(out));  // empty formula is a tautology
        return rp;
    }
    if (c == 1) {
        emit_clause(0, out);
        return rp;
    }
    std::vector<int> clause_wires;
    for (int j = 0; j < c; ++j) {
        clause_wires.push_back(rp.n + rp.B + 1 + j);
        emit_clause(j, clause_wires.back());
    }
    rp.ops.push_back(PermOp::cnx(clause_wires, out));
    for (int j = c - 1; j >= 0; --j) emit_clause(j, clause_wires[j]);
    return rp;
}

// --- predicate file format -----------------------------------------------------
//
// Circuit line format plus a "registers <n> <B> <m>" header; gates must be
// permutation gates (NOT, CNOT, TOFFOLI, SWAP, CNX<l>).

inline void write_predicate(std::ostream& os, const ReversiblePredicate& rp) {
    os << "registers " << rp.n << ' ' << rp.B << ' ' << rp.m << '\n';
    for (const PermOp& op : rp.ops) {
        if (op.kind == PermOp::Kind::swap) {
            os << "gate SWAP " << op.swap_a << ' ' << op.swap_b << '\n';
            continue;
        }
        std::size_t nc = op.controls.size();
        os << "gate " << (nc == 0 ? "NOT" : nc == 1 ? "CNOT" : nc == 2 ? "TOFFOLI"
                                                              : "CNX" + std::to_string(nc));
        for (int c : op.controls) os << ' ' << c;
        os << ' ' << op.target << '\n';
    }
}

inline ReversiblePredicate read_predicate(std::istream& is) {
    ReversiblePredicate rp;
    std::string raw;
    int lineno = 0;
    bool have_registers = false;
    auto err = [&](const std::string& why) {
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(is, raw)) {
        ++lineno;
        std::size_t h = raw.find('#');
        if (h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks[0] == "ring") continue;  // predicates are ring-independent
        if (toks[0] == "registers") {
            if (toks.size() != 4) err("expected 'registers <n> <B> <m>'");
            try {
                rp.n = std::stoi(toks[1]);
                rp.B = std::stoi(toks[2]);
                rp.m = std::stoi(toks[3]);
            } catch (const std::exception&) {
                err("bad register sizes");
            }
            if (rp.n < 0 || rp.B < 0 || rp.m < 1) err("register sizes out of range");
            have_registers = true;
            continue;
        }
        if (!have_registers) err("gate before registers line");
        if (toks[0] != "gate" || toks.size() < 2) err("expected 'gate <NAME> <wires...>'");
        std::vector<int> wires;
        for (std::size_t i = 2; i < toks.size(); ++i) {
            int w = 0;
            try {
                w = std::stoi(toks[i]);
            } catch (const std::exception&) {
                err("bad wire index '" + toks[i] + "'");
            }
            wires.push_back(w);
        }
        const std::string& name = toks[1];
        if (name == "SWAP") {
            if (wires.size() != 2) err("SWAP takes two wires");
            rp.ops.push_back(PermOp::swap_of(wires[0], wires[1]));
        } else if (name == "NOT" || name == "CNOT" || name == "TOFFOLI" ||
                   name.rfind("CNX", 0) == 0) {
            std::size_t nc = name == "NOT" ? 0 : name == "CNOT" ? 1 : name == "TOFFOLI" ? 2 : 0;
            if (name.rfind("CNX", 0) == 0 && name.size() > 3) {
                try {
                    nc = std::stoul(name.substr(3));
                } catch (const std::exception&) {
                    err("bad CNX gate name");
                }
            }
            if (wires.size() != nc + 1) err("wrong wire count for " + name);
            int target = wires.back();
            wires.pop_back();
            rp.ops.push_back(PermOp::cnx(std::move(wires), target));
        } else {
            err("predicates allow only permutation gates, got '" + name + "'");
        }
    }
    if (!have_registers) fail(errc::parse_error, "missing registers line");
    rp.check_wires();
    return rp;
}

}  // namespace ringsim
