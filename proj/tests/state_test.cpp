#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "ringsim/state.hpp"

using namespace ringsim;

namespace {

ModalState random_state(const RingSpec& ring, int n, std::mt19937_64& rng) {
    ModalState psi(ring, n);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        std::vector<i64> cs;
        for (int t = 0; t < ring.e(); ++t) cs.push_back(static_cast<i64>(rng() % ring.k()));
        psi.set(i, ring.from_coeffs(cs));
    }
    return psi;
}

ModalState random_member(const RingSpec& ring, int n, StateSpace space, std::mt19937_64& rng) {
    for (int tries = 0; tries < 20000; ++tries) {
        ModalState psi = random_state(ring, n, rng);
        if (space == StateSpace::l1) {
            // patch the first amplitude so the sum is exactly 1
            Elem rest = ring.sub(amplitude_sum(psi), psi.get(0));
            psi.set(0, ring.sub(ring.one(), rest));
        }
        if (state_space_membership(psi).in(space)) return psi;
    }
    FAIL("could not sample a state-space member");
    return ModalState(ring, n);
}

}  // namespace

TEST_CASE("basis states") {
    RingSpec z5 = RingSpec::make_cyclic(5);
    ModalState psi = basis_state(z5, "10");
    CHECK(psi.bits() == 2);
    CHECK(psi.get(0) == z5.zero());
    CHECK(psi.get(1) == z5.zero());
    CHECK(psi.get(2) == z5.one());
    CHECK(psi.get(3) == z5.zero());

    ModalState scalar = basis_state(RingSpec::make_cyclic(2), "");
    CHECK(scalar.bits() == 0);
    CHECK(scalar.get(0) == scalar.ring().one());

    ModalState three = basis_state(RingSpec::make_cyclic(3), "011");
    CHECK(three.get(3) == three.ring().one());
}

TEST_CASE("tensor products") {
    RingSpec z3 = RingSpec::make_cyclic(3);
    CHECK(tensor(basis_state(z3, "0"), basis_state(z3, "1")) == basis_state(z3, "01"));

    // (|0> + |1>) (x) |11> has unit amplitudes exactly at 011 and 111
    ModalState plus(z3, 1);
    plus.set(0, z3.one());
    plus.set(1, z3.one());
    ModalState prod = tensor(plus, basis_state(z3, "11"));
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(prod.get(i) == (i == 3 || i == 7 ? z3.one() : z3.zero()));

    std::mt19937_64 rng(21);
    for (int it = 0; it < 10; ++it) {
        ModalState a = random_state(z3, 2, rng), b = random_state(z3, 1, rng),
                   c = random_state(z3, 2, rng);
        CHECK(tensor(a, tensor(b, c)) == tensor(tensor(a, b), c));
    }
}

TEST_CASE("inner products") {
    RingSpec z5 = RingSpec::make_cyclic(5);
    CHECK(inner_product(basis_state(z5, "01"), basis_state(z5, "10")) == z5.zero());
    CHECK(inner_product(basis_state(z5, "01"), basis_state(z5, "01")) == z5.one());

    // over Z_2, <psi|psi> equals the amplitude sum
    RingSpec z2 = RingSpec::make_cyclic(2);
    std::mt19937_64 rng(22);
    for (int it = 0; it < 20; ++it) {
        ModalState psi = random_state(z2, 3, rng);
        CHECK(inner_product(psi, psi) == amplitude_sum(psi));
    }

    // |sigma> = sum_j |x>|j> + |y>|0> has <sigma|sigma> = k + 1 = 1
    for (i64 k : {3, 5, 9}) {
        RingSpec ring = RingSpec::make_cyclic(k);
        int cb = 1;
        while ((i64(1) << cb) < k) ++cb;
        ModalState sigma(ring, 1 + cb);
        for (i64 j = 0; j < k; ++j) sigma.set(std::size_t(j), ring.one());  // x = "0"
        std::size_t y0 = std::size_t(1) << cb;                              // y = "1", counter 0
        sigma.set(y0, ring.one());
        CHECK(inner_product(sigma, sigma) == ring.one());
    }

    // conjugate symmetry over a quadratic extension
    RingSpec f25 = RingSpec::make_galois(5, 1, 2, std::vector<i64>{2, 0, 1});
    for (int it = 0; it < 20; ++it) {
        ModalState a = random_state(f25, 2, rng), b = random_state(f25, 2, rng);
        CHECK(inner_product(a, b) == f25.conjugate(inner_product(b, a)));
    }
}

TEST_CASE("possibility") {
    RingSpec z3 = RingSpec::make_cyclic(3);
    ModalState psi(z3, 2);
    psi.set(bitstring_index("01"), z3.one());
    psi.set(bitstring_index("11"), z3.one());
    CHECK(is_possible(psi, {2}, "1"));
    CHECK_FALSE(is_possible(psi, {2}, "0"));
    ModalState zero(z3, 2);
    CHECK_FALSE(is_possible(zero, {1}, "0"));
    CHECK_FALSE(is_possible(zero, {1}, "1"));
}

TEST_CASE("necessity") {
    RingSpec z3 = RingSpec::make_cyclic(3);
    // |phi> (x) |1> with phi generic: last bit necessarily 1
    ModalState phi(z3, 1);
    phi.set(0, z3.from_int(1));
    phi.set(1, z3.from_int(2));
    ModalState psi = tensor(phi, basis_state(z3, "1"));
    CHECK(is_necessary(psi, {2}, "1", StateSpace::generic));
    CHECK_FALSE(is_necessary(psi, {2}, "0", StateSpace::generic));

    // mixed support is never necessary
    ModalState mixed(z3, 2);
    mixed.set(bitstring_index("01"), z3.one());
    mixed.set(bitstring_index("10"), z3.one());
    CHECK_FALSE(is_necessary(mixed, {1}, "0", StateSpace::generic));
    CHECK_FALSE(is_necessary(mixed, {1}, "1", StateSpace::generic));

    // 3|0> over Z_9 is not in the generic space, so nothing is necessary
    RingSpec z9 = RingSpec::make_cyclic(9);
    ModalState scaled(z9, 1);
    scaled.set(0, z9.from_int(3));
    CHECK_FALSE(is_necessary(scaled, {1}, "0", StateSpace::generic));

    // necessity implies factorization |a> (x) |psi'>
    std::mt19937_64 rng(23);
    for (int it = 0; it < 20; ++it) {
        ModalState rest = random_state(z3, 2, rng);
        if (!state_space_membership(rest).generic) continue;
        ModalState joint = tensor(basis_state(z3, "1"), rest);
        REQUIRE(is_necessary(joint, {1}, "1", StateSpace::generic));
        for (std::size_t i = 0; i < rest.dim(); ++i)
            CHECK(joint.get(rest.dim() + i) == rest.get(i));
        for (std::size_t i = 0; i < rest.dim(); ++i) CHECK(joint.get(i) == z3.zero());
    }
}

TEST_CASE("state space membership") {
    RingSpec z5 = RingSpec::make_cyclic(5);
    SpaceMembership m = state_space_membership(basis_state(z5, "01"));
    CHECK((m.generic && m.l1 && m.l2));

    // 3(|00> + |11>) = 2^{-1}(|00> + |11>) over Z_5 is an l1 state
    ModalState half(z5, 2);
    half.set(0, z5.from_int(3));
    half.set(3, z5.from_int(3));
    m = state_space_membership(half);
    CHECK(m.l1);

    // |01> - |10> over Z_5: generic, not l1 (sum 0), not l2 (norm 2)
    ModalState diff(z5, 2);
    diff.set(bitstring_index("01"), z5.one());
    diff.set(bitstring_index("10"), z5.from_int(4));
    m = state_space_membership(diff);
    CHECK(m.generic);
    CHECK_FALSE(m.l1);
    CHECK_FALSE(m.l2);

    // zero state is nowhere
    m = state_space_membership(ModalState(z5, 2));
    CHECK((!m.generic && !m.l1 && !m.l2));

    // generic membership over composite moduli uses the gcd condition
    RingSpec z6 = RingSpec::make_cyclic(6);
    ModalState g(z6, 1);
    g.set(0, z6.from_int(2));
    g.set(1, z6.from_int(3));
    CHECK(state_space_membership(g).generic);  // gcd(2,3,6) = 1 without any unit amplitude
    ModalState ng(z6, 1);
    ng.set(0, z6.from_int(2));
    ng.set(1, z6.from_int(4));
    CHECK_FALSE(state_space_membership(ng).generic);
}

TEST_CASE("state spaces are closed under tensoring and factor extraction") {
    std::mt19937_64 rng(24);
    for (i64 k : {3, 4, 9}) {
        RingSpec ring = RingSpec::make_cyclic(k);
        for (StateSpace space : {StateSpace::generic, StateSpace::l1, StateSpace::l2}) {
            for (int it = 0; it < 8; ++it) {
                ModalState a = random_member(ring, 2, space, rng);
                ModalState b = random_member(ring, 1, space, rng);
                ModalState ab = tensor(a, b);
                CHECK(state_space_membership(ab).in(space));
            }
            // factor extraction: if a (x) b is a member and a is, then b is
            for (int it = 0; it < 8; ++it) {
                ModalState a = random_member(ring, 1, space, rng);
                ModalState b = random_state(ring, 2, rng);
                if (!state_space_membership(tensor(a, b)).in(space)) continue;
                CHECK(state_space_membership(b).in(space));
            }
        }
    }
}

TEST_CASE("tensor is bilinear in amplitudes") {
    RingSpec z9 = RingSpec::make_cyclic(9);
    std::mt19937_64 rng(25);
    for (int it = 0; it < 10; ++it) {
        ModalState a1 = random_state(z9, 2, rng), a2 = random_state(z9, 2, rng);
        ModalState b = random_state(z9, 1, rng);
        ModalState sum(z9, 2);
        for (std::size_t i = 0; i < sum.dim(); ++i) sum.set(i, z9.add(a1.get(i), a2.get(i)));
        ModalState lhs = tensor(sum, b);
        ModalState t1 = tensor(a1, b), t2 = tensor(a2, b);
        for (std::size_t i = 0; i < lhs.dim(); ++i)
            CHECK(lhs.get(i) == z9.add(t1.get(i), t2.get(i)));
    }
}

TEST_CASE("state file round trip") {
    RingSpec f25 = RingSpec::make_galois(5, 1, 2, std::vector<i64>{2, 0, 1});
    ModalState psi(f25, 3);
    psi.set(1, f25.from_coeffs({2, 4}));
    psi.set(5, f25.from_coeffs({0, 1}));
    std::ostringstream os;
    write_state(os, psi);
    std::istringstream is(os.str());
    ModalState back = read_state(is);
    CHECK(back == psi);

    std::istringstream dup("ring Z 5\nbits 2\n01 3\n01 2\n");
    CHECK_THROWS_AS(read_state(dup), Error);

    std::istringstream badwidth("ring Z 5\nbits 2\n011 3\n");
    CHECK_THROWS_AS(read_state(badwidth), Error);
}
