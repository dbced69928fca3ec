#pragma once

#include <boost/rational.hpp>
#include <map>
#include <optional>
#include <vector>

#include "ringsim/ring.hpp"

namespace ringsim {

using Rational = boost::rational<i64>;

/// Value of the canonical significance function: 0 or 1/p^t with 0 <= t < r.
struct SignificanceValue {
    Rational value;

    bool operator==(const SignificanceValue&) const = default;
};

/// sigma_k(s) = 1/p^t for s in p^t Z_k \ p^{t+1} Z_k, 0 for s = 0.
inline SignificanceValue canonical_significance(const RingSpec& ring, const Elem& s) {
    if (!ring.is_cyclic() || !ring.is_prime_power())
        fail(errc::unsupported_ring, "canonical significance needs a prime-power cyclic ring");
    if (ring.is_zero(s)) return {Rational(0)};
    int t = valuation(ring, s);
    i64 den = 1;
    for (int i = 0; i < t; ++i) den *= ring.p();
    return {Rational(1, den)};
}

struct SignificanceCheck {
    bool valid = false;
    // Monotonicity counterexample (s, t, u): sigma(u) <= sigma(t) but
    // sigma(su) > sigma(st). Also used for axiom failures with s = t = u.
    std::optional<std::array<i64, 3>> counterexample;
    std::optional<int> threshold;  // tau with sigma(p^tau) = 0 < sigma(p^{tau-1})
};

/// Exhaustively checks the significance-function axioms for a table on Z_k
/// (k a prime power): sigma(0) = 0, sigma(1) = 1, and monotonicity. When
/// valid, reports tau and verifies the table factors through sigma_{p^tau}
/// as a nondecreasing function.
inline SignificanceCheck check_significance_table(const RingSpec& ring,
                                                  const std::map<i64, Rational>& table) {
    if (!ring.is_cyclic() || !ring.is_prime_power())
        fail(errc::unsupported_ring, "significance tables need a prime-power cyclic ring");
    i64 k = ring.k();
    std::vector<Rational> sig(k);
    for (i64 s = 0; s < k; ++s) {
        auto it = table.find(s);
        if (it == table.end()) fail(errc::bad_argument, "table must cover all of Z_k");
        if (it->second < 0) fail(errc::bad_argument, "significance values are nonnegative");
        sig[s] = it->second;
    }
    SignificanceCheck out;
    if (sig[0] != Rational(0) || sig[1] != Rational(1)) {
        out.counterexample = {{0, 0, 0}};
        return out;
    }
    for (i64 s = 0; s < k; ++s)
        for (i64 t = 0; t < k; ++t)
            for (i64 u = 0; u < k; ++u)
                if (sig[u] <= sig[t] && sig[s * u % k] > sig[s * t % k]) {
                    out.counterexample = {{s, t, u}};
                    return out;
                }
    out.valid = true;
    // tau: first power of p with significance 0 (sigma(p^r) = sigma(0) = 0).
    i64 p = ring.p();
    int r = ring.r();
    int tau = r;
    i64 pw = 1;
    for (int t = 1; t <= r; ++t) {
        pw = pw * p % k;
        if (sig[pw] == Rational(0)) {
            tau = t;
            break;
        }
    }
    out.threshold = tau;
    // The table must be a nondecreasing function of sigma_{p^tau}.
    RingSpec sub = project_ring(ring, tau);
    auto sigma_tau = [&](i64 s) {
        return canonical_significance(sub, sub.from_int(s % sub.k())).value;
    };
    for (i64 s = 0; s < k; ++s)
        for (i64 t = 0; t < k; ++t) {
            Rational cs = sigma_tau(s), ct = sigma_tau(t);
            if ((cs == ct && sig[s] != sig[t]) || (cs < ct && sig[s] > sig[t])) {
                out.valid = false;
                out.threshold.reset();
                out.counterexample = {{s, t, 0}};
                return out;
            }
        }
    return out;
}

}  // namespace ringsim
