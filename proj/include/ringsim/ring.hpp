#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ringsim/error.hpp"

namespace ringsim {

using i64 = std::int64_t;

/// Residues are canonical in [0,k) and k fits in 31 bits, so products of two
/// residues never overflow a signed 64-bit accumulator.
constexpr i64 kMaxModulus = i64(1) << 31;

/// Extension degrees are capped at 4; the modulus-polynomial search tests
/// irreducibility by exhaustive root/factor search, which is only exact for
/// degree <= 4.
constexpr int kMaxDegree = 4;

/// Element of a cyclic or Galois ring: coefficients of 1, tau, ..., tau^{e-1}.
/// Unused coefficients stay zero so that plain comparison is meaningful.
struct Elem {
    std::array<i64, kMaxDegree> c{};

    bool operator==(const Elem&) const = default;
};

inline i64 normalize(i64 x, i64 k) {
    x %= k;
    return x < 0 ? x + k : x;
}

namespace detail {

inline i64 ipow_checked(i64 base, int exp) {
    i64 r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > kMaxModulus / base) fail(errc::invalid_modulus, "modulus exceeds 2^31");
        r *= base;
    }
    return r;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Extended gcd inverse of a mod k; nullopt when gcd(a,k) != 1.
inline std::optional<i64> mod_inverse(i64 a, i64 k) {
    i64 old_r = normalize(a, k), r = k;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        std::swap(old_r -= q * r, r);
        std::swap(old_s -= q * s, s);
    }
    if (old_r != 1) return std::nullopt;
    return normalize(old_s, k);
}

}  // namespace detail

enum class ConjKind { trivial, quadratic };

/// A cyclic ring Z_k or a Galois ring GR(k, k^e) presented as Z_k[tau]/(f).
///
/// The modulus polynomial is stored as its monic coefficient list f_0..f_e
/// (low to high, f_e = 1); powers tau^j for e <= j <= 2e-2 are pre-reduced.
/// For e = 2 a quadratic conjugation tau -> tau_bar is installed when the
/// second root of f exists in the ring.
class RingSpec {
public:
    RingSpec() = default;

    static RingSpec make_cyclic(i64 k) {
        if (k < 2) fail(errc::invalid_modulus, "k must be at least 2");
        if (k > kMaxModulus) fail(errc::invalid_modulus, "modulus exceeds 2^31");
        RingSpec rs;
        rs.k_ = k;
        rs.e_ = 1;
        rs.factorize();
        return rs;
    }

    static RingSpec make_galois(i64 p, int r, int e,
                                std::optional<std::vector<i64>> f = std::nullopt) {
        if (!detail::is_prime(p)) fail(errc::invalid_modulus, "p must be prime");
        if (r < 1 || e < 1) fail(errc::invalid_modulus, "r and e must be positive");
        if (e > kMaxDegree) fail(errc::invalid_polynomial, "extension degree above 4 unsupported");
        i64 k = detail::ipow_checked(p, r);
        if (e == 1) {
            if (f) fail(errc::invalid_polynomial, "no modulus polynomial for e = 1");
            return make_cyclic(k);
        }
        // Exhaustive searches (irreducibility, second root) need |R| = k^e small.
        i64 size = 1;
        for (int i = 0; i < e; ++i) {
            if (size > (i64(1) << 26) / k) fail(errc::invalid_modulus, "ring too large");
            size *= k;
        }
        RingSpec rs;
        rs.k_ = k;
        rs.e_ = e;
        rs.factorize();
        if (f) {
            rs.poly_ = *f;
            rs.validate_poly();
        } else {
            rs.search_poly();
        }
        rs.build_tau_powers();
        if (e == 2) rs.install_quadratic_conjugation();
        return rs;
    }

    i64 k() const { return k_; }
    int e() const { return e_; }
    const std::vector<std::pair<i64, int>>& factorization() const { return factors_; }
    bool is_prime_power() const { return factors_.size() == 1; }
    i64 p() const { return factors_[0].first; }
    int r() const { return factors_[0].second; }
    bool is_cyclic() const { return e_ == 1; }
    const std::vector<i64>& poly() const { return poly_; }
    ConjKind conj_kind() const { return conj_; }
    Elem tau_bar() const { return tau_bar_; }

    bool operator==(const RingSpec& o) const {
        return k_ == o.k_ && e_ == o.e_ && poly_ == o.poly_ && conj_ == o.conj_ &&
               tau_bar_ == o.tau_bar_;
    }
    bool operator!=(const RingSpec& o) const { return !(*this == o); }

    // --- element construction -------------------------------------------

    Elem zero() const { return Elem{}; }

    Elem one() const {
        Elem a;
        a.c[0] = 1;
        return a;
    }

    Elem from_int(i64 x) const {
        Elem a;
        a.c[0] = normalize(x, k_);
        return a;
    }

    Elem from_coeffs(const std::vector<i64>& cs) const {
        if (static_cast<int>(cs.size()) != e_)
            fail(errc::bad_argument, "coefficient count must equal extension degree");
        Elem a;
        for (int i = 0; i < e_; ++i) a.c[i] = normalize(cs[i], k_);
        return a;
    }

    Elem tau() const {
        Elem a;
        a.c[1] = 1;
        return a;
    }

    // --- arithmetic ------------------------------------------------------

    Elem add(const Elem& a, const Elem& b) const {
        Elem r;
        for (int i = 0; i < e_; ++i) r.c[i] = normalize(a.c[i] + b.c[i], k_);
        return r;
    }

    Elem sub(const Elem& a, const Elem& b) const {
        Elem r;
        for (int i = 0; i < e_; ++i) r.c[i] = normalize(a.c[i] - b.c[i], k_);
        return r;
    }

    Elem neg(const Elem& a) const {
        Elem r;
        for (int i = 0; i < e_; ++i) r.c[i] = normalize(-a.c[i], k_);
        return r;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        if (e_ == 1) {
            Elem r;
            r.c[0] = (a.c[0] * b.c[0]) % k_;
            return r;
        }
        std::array<i64, 2 * kMaxDegree - 1> prod{};
        for (int i = 0; i < e_; ++i) {
            if (a.c[i] == 0) continue;
            for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + a.c[i] * b.c[j]) % k_;
        }
        // Fold tau^{e+j} through the pre-reduced powers.
        Elem r;
        for (int i = 0; i < e_; ++i) r.c[i] = prod[i];
        for (int j = e_; j <= 2 * e_ - 2; ++j) {
            if (prod[j] == 0) continue;
            const Elem& tp = tau_pow_[j - e_];
            for (int i = 0; i < e_; ++i) r.c[i] = (r.c[i] + prod[j] * tp.c[i]) % k_;
        }
        return r;
    }

    Elem mul_int(const Elem& a, i64 s) const {
        s = normalize(s, k_);
        Elem r;
        for (int i = 0; i < e_; ++i) r.c[i] = (a.c[i] * s) % k_;
        return r;
    }

    bool is_zero(const Elem& a) const {
        for (int i = 0; i < e_; ++i)
            if (a.c[i] != 0) return false;
        return true;
    }

    bool is_one(const Elem& a) const { return a == one(); }

    bool is_unit(const Elem& a) const {
        if (e_ == 1) return std::gcd(a.c[0], k_) == 1;
        // Galois ring: non-units are exactly the multiples of p.
        for (int i = 0; i < e_; ++i)
            if (a.c[i] % p() != 0) return true;
        return false;
    }

    Elem inv(const Elem& a) const {
        if (!is_unit(a)) fail(errc::not_a_unit, "element has no inverse");
        if (e_ == 1) return from_int(*detail::mod_inverse(a.c[0], k_));
        // Unit group of GR(p^r, p^{re}) has order p^{re} - p^{(r-1)e}.
        i64 order = 1;
        for (int i = 0; i < r() * e_; ++i) order *= p();
        i64 sub = 1;
        for (int i = 0; i < (r() - 1) * e_; ++i) sub *= p();
        return pow(a, order - sub - 1);
    }

    Elem pow(Elem base, i64 exp) const {
        Elem r = one();
        while (exp > 0) {
            if (exp & 1) r = mul(r, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return r;
    }

    Elem conjugate(const Elem& a) const {
        if (conj_ == ConjKind::trivial) return a;
        // Linear extension of tau -> tau_bar (e = 2).
        Elem r = from_int(a.c[0]);
        return add(r, mul_int(tau_bar_, a.c[1]));
    }

    /// Evaluate the stored modulus polynomial at x (test hook: f(tau) = 0).
    Elem eval_poly(const Elem& x) const {
        if (poly_.empty()) fail(errc::unsupported_ring, "cyclic rings carry no modulus polynomial");
        Elem acc = zero();
        for (int j = e_; j >= 0; --j) acc = add(mul(acc, x), from_int(poly_[j]));
        return acc;
    }

    /// Enumerate all |R| = k^e elements in lexicographic coefficient order.
    std::vector<Elem> all_elements() const {
        std::vector<Elem> out;
        i64 size = 1;
        for (int i = 0; i < e_; ++i) size *= k_;
        out.reserve(size);
        Elem a;
        for (i64 idx = 0; idx < size; ++idx) {
            i64 v = idx;
            for (int i = 0; i < e_; ++i) {
                a.c[i] = v % k_;
                v /= k_;
            }
            out.push_back(a);
        }
        return out;
    }

    // --- text form ---------------------------------------------------------

    /// "2,4" means 2 + 4*tau; cyclic elements are a single decimal.
    std::string to_string(const Elem& a) const {
        std::ostringstream os;
        for (int i = 0; i < e_; ++i) {
            if (i) os << ',';
            os << a.c[i];
        }
        return os.str();
    }

    Elem parse_elem(const std::string& text) const {
        std::vector<i64> cs;
        std::string tok;
        std::istringstream is(text);
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) fail(errc::parse_error, "empty ring-element component");
            std::size_t pos = 0;
            i64 v = 0;
            try {
                v = std::stoll(tok, &pos);
            } catch (const std::exception&) {
                fail(errc::parse_error, "bad ring element '" + text + "'");
            }
            if (pos != tok.size()) fail(errc::parse_error, "bad ring element '" + text + "'");
            cs.push_back(v);
        }
        if (static_cast<int>(cs.size()) != e_)
            fail(errc::parse_error, "ring element '" + text + "' has wrong component count");
        return from_coeffs(cs);
    }

    /// Header line form: "ring Z <k>" or "ring GR <p> <r> <e> <f0> ... <fe>".
    std::string header() const {
        std::ostringstream os;
        if (e_ == 1) {
            os << "ring Z " << k_;
        } else {
            os << "ring GR " << p() << ' ' << r() << ' ' << e_;
            for (i64 c : poly_) os << ' ' << c;
        }
        return os.str();
    }

private:
    void factorize() {
        factors_.clear();
        i64 n = k_;
        for (i64 d = 2; d * d <= n; ++d) {
            if (n % d == 0) {
                int m = 0;
                while (n % d == 0) {
                    n /= d;
                    ++m;
                }
                factors_.emplace_back(d, m);
            }
        }
        if (n > 1) factors_.emplace_back(n, 1);
        if (e_ > 1 && factors_.size() != 1)
            fail(errc::invalid_modulus, "Galois ring requires a prime-power character");
    }

    void validate_poly() {
        if (static_cast<int>(poly_.size()) != e_ + 1)
            fail(errc::invalid_polynomial, "modulus polynomial must have degree e");
        for (i64& c : poly_) c = normalize(c, k_);
        if (poly_[e_] != 1) fail(errc::invalid_polynomial, "modulus polynomial must be monic");
        if (std::gcd(poly_[0], k_) != 1)
            fail(errc::invalid_polynomial, "constant term must be a unit");
        if (!irreducible_mod_p())
            fail(errc::invalid_polynomial, "reduction mod p must be irreducible");
    }

    // First monic f (coefficients enumerated lexicographically) whose
    // reduction mod p is irreducible and whose constant term is a unit.
    void search_poly() {
        poly_.assign(e_ + 1, 0);
        poly_[e_] = 1;
        std::vector<i64> cs(e_, 0);
        while (true) {
            for (int i = 0; i < e_; ++i) poly_[i] = cs[i];
            if (std::gcd(poly_[0], k_) == 1 && irreducible_mod_p()) return;
            int i = e_ - 1;
            while (i >= 0 && cs[i] == k_ - 1) cs[i--] = 0;
            if (i < 0) fail(errc::construction_failure, "no irreducible modulus polynomial found");
            ++cs[i];
        }
    }

    bool irreducible_mod_p() const {
        i64 q = p();
        std::vector<i64> f(e_ + 1);
        for (int i = 0; i <= e_; ++i) f[i] = normalize(poly_[i], q);
        auto eval = [&](i64 x) {
            i64 acc = 0;
            for (int j = e_; j >= 0; --j) acc = (acc * x + f[j]) % q;
            return acc;
        };
        for (i64 x = 0; x < q; ++x)
            if (eval(x) == 0) return false;
        if (e_ <= 3) return true;
        // Degree 4: also rule out factorizations into two monic quadratics.
        for (i64 b0 = 0; b0 < q; ++b0)
            for (i64 b1 = 0; b1 < q; ++b1)
                for (i64 c0 = 0; c0 < q; ++c0)
                    for (i64 c1 = 0; c1 < q; ++c1) {
                        // (x^2 + b1 x + b0)(x^2 + c1 x + c0)
                        i64 a0 = (b0 * c0) % q;
                        i64 a1 = (b0 * c1 + b1 * c0) % q;
                        i64 a2 = (b0 + c0 + b1 * c1) % q;
                        i64 a3 = (b1 + c1) % q;
                        if (a0 == f[0] && a1 == f[1] && a2 == f[2] && a3 == f[3]) return false;
                    }
        return true;
    }

    void build_tau_powers() {
        // tau^e = -(f_{e-1} tau^{e-1} + ... + f_0), then multiply up by tau.
        tau_pow_.clear();
        Elem te;
        for (int i = 0; i < e_; ++i) te.c[i] = normalize(-poly_[i], k_);
        tau_pow_.push_back(te);
        for (int j = e_ + 1; j <= 2 * e_ - 2; ++j) {
            const Elem& prev = tau_pow_.back();
            Elem next;
            for (int i = 1; i < e_; ++i) next.c[i] = prev.c[i - 1];
            i64 top = prev.c[e_ - 1];
            for (int i = 0; i < e_; ++i) next.c[i] = normalize(next.c[i] + top * te.c[i], k_);
            tau_pow_.push_back(next);
        }
    }

    void install_quadratic_conjugation() {
        // The second root of f in R, which exists and is unique for a
        // quadratic extension of a Galois ring.
        std::optional<Elem> found;
        Elem t = tau();
        for (const Elem& g : all_elements()) {
            if (g == t) continue;
            if (!is_zero(eval_poly(g))) continue;
            if (found) fail(errc::construction_failure, "second root of f is not unique");
            found = g;
        }
        if (!found) fail(errc::construction_failure, "no second root of f in the ring");
        conj_ = ConjKind::quadratic;
        tau_bar_ = *found;
        // conj must be self-inverse: conj(tau_bar) = tau.
        if (conjugate(tau_bar_) != t)
            fail(errc::construction_failure, "conjugation is not self-inverse");
    }

    i64 k_ = 0;
    int e_ = 1;
    std::vector<std::pair<i64, int>> factors_;
    std::vector<i64> poly_;
    std::vector<Elem> tau_pow_;
    ConjKind conj_ = ConjKind::trivial;
    Elem tau_bar_;
};

inline void require_same_ring(const RingSpec& a, const RingSpec& b) {
    if (a != b) fail(errc::ring_mismatch, "operands belong to different rings");
}

/// Parses "ring Z <k>" or "ring GR <p> <r> <e> <f0> ... <fe>".
inline RingSpec parse_ring_header(const std::string& line, int lineno) {
    auto bad = [&](const std::string& why) -> RingSpec {
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": " + why);
    };
    std::istringstream is(line);
    std::string word, kind;
    is >> word >> kind;
    if (word != "ring") return bad("expected 'ring' header");
    try {
        if (kind == "Z") {
            i64 k = 0;
            if (!(is >> k)) return bad("expected modulus after 'ring Z'");
            std::string extra;
            if (is >> extra) return bad("trailing tokens after ring header");
            return RingSpec::make_cyclic(k);
        }
        if (kind == "GR") {
            i64 p = 0;
            int r = 0, e = 0;
            if (!(is >> p >> r >> e)) return bad("expected 'ring GR <p> <r> <e> ...'");
            std::vector<i64> f;
            i64 c;
            while (is >> c) f.push_back(c);
            if (f.empty()) return RingSpec::make_galois(p, r, e);
            return RingSpec::make_galois(p, r, e, f);
        }
    } catch (const Error& err) {
        return bad(err.what());
    }
    return bad("unknown ring kind '" + kind + "'");
}

/// p-adic valuation of a, capped at r; r for a = 0 (prime-power cyclic rings).
inline int valuation(const RingSpec& ring, const Elem& a) {
    if (!ring.is_prime_power()) fail(errc::unsupported_ring, "prime-power ring required");
    i64 p = ring.p();
    int cap = ring.r();
    int v = cap;
    for (int i = 0; i < ring.e(); ++i) {
        i64 x = a.c[i];
        if (x == 0) continue;
        int t = 0;
        while (x % p == 0) {
            x /= p;
            ++t;
        }
        v = std::min(v, t);
    }
    return v;
}

/// Coefficient-wise reduction Z_{p^r} -> Z_{p^tau}. Cyclic rings only.
inline RingSpec project_ring(const RingSpec& ring, int tau) {
    if (!ring.is_cyclic() || !ring.is_prime_power())
        fail(errc::unsupported_ring, "projection requires a prime-power cyclic ring");
    if (tau < 1 || tau > ring.r()) fail(errc::invalid_threshold, "threshold out of range");
    i64 m = 1;
    for (int i = 0; i < tau; ++i) m *= ring.p();
    return RingSpec::make_cyclic(m);
}

inline Elem project_elem(const RingSpec& ring, const Elem& a, const RingSpec& target) {
    Elem r;
    for (int i = 0; i < ring.e(); ++i) r.c[i] = normalize(a.c[i], target.k());
    return r;
}

}  // namespace ringsim
