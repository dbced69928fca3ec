#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "ringsim/error.hpp"

namespace ringsim {

using Octonion = std::array<std::int64_t, 8>;

namespace detail {

// Cayley-Dickson product at width w (1, 2, 4 or 8), fixed convention
// (x1,y1)(x2,y2) = (x1 x2 - conj(y2) y1, y2 x1 + y1 conj(x2)).
inline void cd_conj(const std::int64_t* a, std::int64_t* out, int w) {
    out[0] = a[0];
    for (int i = 1; i < w; ++i) out[i] = -a[i];
}

inline void cd_mul(const std::int64_t* a, const std::int64_t* b, std::int64_t* out, int w) {
    if (w == 1) {
        out[0] = a[0] * b[0];
        return;
    }
    int h = w / 2;
    const std::int64_t *x1 = a, *y1 = a + h, *x2 = b, *y2 = b + h;
    std::int64_t t1[8], t2[8], cj[8];
    cd_conj(y2, cj, h);
    cd_mul(cj, y1, t1, h);
    cd_mul(x1, x2, t2, h);
    for (int i = 0; i < h; ++i) out[i] = t2[i] - t1[i];
    cd_mul(y2, x1, t1, h);
    cd_conj(x2, cj, h);
    cd_mul(y1, cj, t2, h);
    for (int i = 0; i < h; ++i) out[h + i] = t1[i] + t2[i];
}

}  // namespace detail

/// Octonion product under the Cayley-Dickson construction applied through
/// real -> complex -> quaternion -> octonion; e_0 is the identity.
inline Octonion octonion_mul(const Octonion& u, const Octonion& v) {
    Octonion out{};
    detail::cd_mul(u.data(), v.data(), out.data(), 8);
    return out;
}

inline Octonion octonion_conj(const Octonion& u) {
    Octonion out{};
    detail::cd_conj(u.data(), out.data(), 8);
    return out;
}

inline std::int64_t octonion_norm(const Octonion& u) {
    std::int64_t n = 0;
    for (std::int64_t x : u) n += x * x;
    return n;
}

/// Lagrange decomposition m = a^2 + b^2 + c^2 + d^2 with a >= b >= c >= d and
/// the lexicographically smallest such tuple, for reproducible downstream use.
inline std::array<std::int64_t, 4> four_squares(std::int64_t m) {
    if (m < 0) fail(errc::bad_argument, "four_squares needs a nonnegative input");
    auto isqrt = [](std::int64_t x) {
        std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
        while (r * r > x) --r;
        while ((r + 1) * (r + 1) <= x) ++r;
        return r;
    };
    for (std::int64_t a = 0; a * a <= m; ++a) {
        if (4 * a * a < m) continue;  // a is the largest square, so 4a^2 >= m
        for (std::int64_t b = 0; b <= a && a * a + b * b <= m; ++b) {
            for (std::int64_t c = 0; c <= b && a * a + b * b + c * c <= m; ++c) {
                std::int64_t rest = m - a * a - b * b - c * c;
                std::int64_t d = isqrt(rest);
                if (d * d == rest && d <= c) return {a, b, c, d};
            }
        }
    }
    fail(errc::construction_failure, "no four-square decomposition found");
}

}  // namespace ringsim
