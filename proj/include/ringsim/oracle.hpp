#pragma once

#include <ostream>
#include <sstream>

#include "ringsim/predicate.hpp"

namespace ringsim {

/// Enumeration caps (configuration, not constants).
inline int& branch_enumeration_cap() {
    static int cap = 22;
    return cap;
}
inline int& sat_variable_cap() {
    static int cap = 22;
    return cap;
}

struct CountReport {
    std::uint64_t x = 0;  // wire mask: bit i-1 holds input wire i
    int n = 0;
    std::uint64_t total_branches = 0;
    std::uint64_t accepting = 0;
    i64 accepting_mod_k = 0;

    std::string input_string() const {
        std::string s(n, '0');
        for (int i = 0; i < n; ++i)
            if (x >> i & 1) s[i] = '1';
        return s;
    }

    std::string text() const {
        std::ostringstream os;
        os << "input: " << input_string() << '\n';
        os << "total_branches: " << total_branches << '\n';
        os << "accepting: " << accepting << '\n';
        return os.str();
    }

    /// Machine-readable single-line record.
    std::string record() const {
        std::ostringstream os;
        os << "count x=" << input_string() << " total=" << total_branches
           << " accepting=" << accepting;
        return os.str();
    }
};

/// Exhaustively runs R on (x, b, 0^m) for every branching string b.
inline CountReport count_accepting(const ReversiblePredicate& rp, std::uint64_t x, i64 k = 0) {
    if (rp.B > branch_enumeration_cap())
        fail(errc::too_many_branches, "branching register exceeds the enumeration cap");
    rp.check_wires();
    CountReport rep;
    rep.x = x;
    rep.n = rp.n;
    rep.total_branches = std::uint64_t(1) << rp.B;
    for (std::uint64_t b = 0; b < rep.total_branches; ++b)
        rep.accepting += eval_predicate(rp, x, b) ? 1 : 0;
    if (k > 0) rep.accepting_mod_k = static_cast<i64>(rep.accepting % static_cast<std::uint64_t>(k));
    return rep;
}

enum class UpkDecision { Zero, One, PromiseViolated };

inline const char* to_string(UpkDecision d) {
    switch (d) {
        case UpkDecision::Zero: return "Zero";
        case UpkDecision::One: return "One";
        case UpkDecision::PromiseViolated: return "PromiseViolated";
    }
    return "?";
}

/// UP_k ground truth: One iff the accepting count is 1 mod k, Zero iff 0.
inline UpkDecision upk_decide(const ReversiblePredicate& rp, std::uint64_t x, i64 k) {
    if (k < 2) fail(errc::invalid_modulus, "k must be at least 2");
    std::uint64_t mod = count_accepting(rp, x).accepting % static_cast<std::uint64_t>(k);
    if (mod == 0) return UpkDecision::Zero;
    if (mod == 1) return UpkDecision::One;
    return UpkDecision::PromiseViolated;
}

/// Fermat amplification for prime k: runs k-1 disjoint copies of R and ANDs
/// their outputs, so accepting' = accepting^{k-1}, which is 1 mod k whenever
/// accepting is nonzero mod k and 0 mod k otherwise.
inline ReversiblePredicate amplify_prime(const ReversiblePredicate& rp, i64 k) {
    if (!detail::is_prime(k)) fail(errc::unsupported_modulus, "amplification needs prime k");
    rp.check_wires();
    int copies = static_cast<int>(k - 1);
    ReversiblePredicate out;
    out.n = rp.n;
    out.B = rp.B * copies;
    out.m = rp.m * copies + 1;
    // Copy i uses branching block i and work block i; inputs are shared.
    std::vector<int> outputs;
    for (int i = 0; i < copies; ++i) {
        std::vector<int> wire_map(rp.width());
        for (int w = 1; w <= rp.n; ++w) wire_map[w - 1] = w;
        for (int w = 1; w <= rp.B; ++w) wire_map[rp.n + w - 1] = out.n + i * rp.B + w;
        for (int w = 1; w <= rp.m; ++w)
            wire_map[rp.n + rp.B + w - 1] = out.n + out.B + i * rp.m + w;
        for (const PermOp& op : rp.ops) {
            PermOp mapped = op;
            if (op.kind == PermOp::Kind::swap) {
                mapped.swap_a = wire_map[op.swap_a - 1];
                mapped.swap_b = wire_map[op.swap_b - 1];
            } else {
                mapped.target = wire_map[op.target - 1];
                for (int& c : mapped.controls) c = wire_map[c - 1];
            }
            out.ops.push_back(mapped);
        }
        outputs.push_back(wire_map[rp.output_wire() - 1]);
    }
    out.ops.push_back(PermOp::cnx(outputs, out.output_wire()));
    return out;
}

/// Exhaustive model count.
inline std::uint64_t sat_count(const BooleanFormula& f) {
    if (f.num_vars > sat_variable_cap())
        fail(errc::too_many_variables, "variable count exceeds the enumeration cap");
    f.check();
    std::uint64_t count = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t(1) << f.num_vars); ++a)
        count += f.eval(a) ? 1 : 0;
    return count;
}

}  // namespace ringsim
