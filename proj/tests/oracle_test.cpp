#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ringsim/compile.hpp"
#include "test_util.hpp"

using namespace ringsim;
using namespace ringsim::testutil;

namespace {

BooleanFormula fig1_cnf() {
    // (x1 & x2) | (x2 & x3) as CNF: (x2) and (x1 | x3)
    BooleanFormula f;
    f.num_vars = 3;
    f.clauses = {{2}, {1, 3}};
    return f;
}

}  // namespace

TEST_CASE("count_accepting") {
    // phi = (x1 and x2): unique satisfying assignment
    BooleanFormula f;
    f.num_vars = 2;
    f.clauses = {{1}, {2}};
    ReversiblePredicate rp = formula_to_reversible(f);
    CHECK(rp.B == 2);
    CountReport rep = count_accepting(rp, 0);
    CHECK(rep.total_branches == 4);
    CHECK(rep.accepting == 1);

    // constant-0 predicate
    ReversiblePredicate zero = table_predicate(0, 3, 1, {});
    CHECK(count_accepting(zero, 0).accepting == 0);

    // Fig. 1's f over three branching bits accepts on 3 branches
    CHECK(count_accepting(formula_to_reversible(fig1_cnf()), 0).accepting == 3);

    ReversiblePredicate wide = table_predicate(0, 30, 1, {});
    CHECK_THROWS_AS(count_accepting(wide, 0), Error);
}

TEST_CASE("predicates evaluate their defining tables") {
    std::mt19937_64 rng(51);
    for (int it = 0; it < 10; ++it) {
        int n = static_cast<int>(rng() % 2), B = 2 + static_cast<int>(rng() % 2);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> accept;
        for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x)
            for (std::uint64_t b = 0; b < (std::uint64_t(1) << B); ++b)
                if (rng() % 3 == 0) accept.emplace_back(x, b);
        ReversiblePredicate rp = table_predicate(n, B, 2, accept, true);
        for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
            std::uint64_t want = 0;
            for (auto [ax, ab] : accept) want += ax == x ? 1 : 0;
            CHECK(count_accepting(rp, x).accepting == want);
        }
        // the first n + B wires are restored on every branch
        for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x)
            for (std::uint64_t b = 0; b < (std::uint64_t(1) << B); ++b) {
                std::uint64_t fin = 0;
                eval_predicate(rp, x, b, &fin);
                CHECK((fin & ((std::uint64_t(1) << (n + B)) - 1)) == (x | b << n));
            }
    }
}

TEST_CASE("upk_decide") {
    // accepting = 1, k = 3 -> One
    ReversiblePredicate one = table_predicate(0, 2, 1, {{0, 2}});
    CHECK(upk_decide(one, 0, 3) == UpkDecision::One);
    // accepting = 6, k = 3 -> Zero (here: 6 of 8 branches accept)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> six;
    for (std::uint64_t b = 0; b < 6; ++b) six.emplace_back(0, b);
    CHECK(upk_decide(table_predicate(0, 3, 1, six), 0, 3) == UpkDecision::Zero);
    // accepting = 2, k = 3 -> PromiseViolated
    ReversiblePredicate two = table_predicate(0, 2, 1, {{0, 1}, {0, 2}});
    CHECK(upk_decide(two, 0, 3) == UpkDecision::PromiseViolated);
}

TEST_CASE("amplify_prime") {
    for (i64 k : {3, 5, 7}) {
        for (std::uint64_t count : {std::uint64_t(0), std::uint64_t(2), std::uint64_t(3)}) {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> accept;
            for (std::uint64_t b = 0; b < count; ++b) accept.emplace_back(0, b);
            ReversiblePredicate rp = table_predicate(0, 2, 2, accept, true);
            ReversiblePredicate amp = amplify_prime(rp, k);
            CHECK(amp.B == rp.B * (k - 1));
            std::uint64_t want = 1;
            for (i64 i = 0; i < k - 1; ++i) want *= count;
            CHECK(count_accepting(amp, 0).accepting == want);
            // Fermat: nonzero counts land on 1 mod k, zero stays zero
            UpkDecision d = upk_decide(amp, 0, k);
            CHECK(d == (count % k != 0 ? UpkDecision::One : UpkDecision::Zero));
        }
    }
    CHECK_THROWS_AS(amplify_prime(table_predicate(0, 1, 1, {}), 4), Error);

    // spot values from the suite: 2^2 = 4 = 1 mod 3, 3^2 = 9 = 0 mod 3
    std::vector<std::pair<std::uint64_t, std::uint64_t>> two = {{0, 0}, {0, 1}};
    CHECK(count_accepting(amplify_prime(table_predicate(0, 2, 1, two), 3), 0).accepting == 4);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> three = {{0, 0}, {0, 1}, {0, 2}};
    CHECK(count_accepting(amplify_prime(table_predicate(0, 2, 1, three), 3), 0).accepting == 9);
}

TEST_CASE("sat_count") {
    BooleanFormula f;
    f.num_vars = 2;
    f.clauses = {{1}, {2}};
    CHECK(sat_count(f) == 1);

    BooleanFormula empty;
    empty.num_vars = 2;
    CHECK(sat_count(empty) == 4);

    CHECK(sat_count(fig1_cnf()) == 3);

    BooleanFormula wide;
    wide.num_vars = 30;
    CHECK_THROWS_AS(sat_count(wide), Error);
}

TEST_CASE("enumeration agrees with path counting through the circuit") {
    RingSpec z5 = RingSpec::make_cyclic(5);
    std::mt19937_64 rng(52);
    for (int it = 0; it < 5; ++it) {
        BooleanFormula f;
        f.num_vars = 3;
        int nclauses = 1 + static_cast<int>(rng() % 2);
        for (int j = 0; j < nclauses; ++j) {
            std::vector<int> cl;
            for (int v = 1; v <= 3; ++v)
                if (rng() % 2) cl.push_back(rng() % 2 ? v : -v);
            if (cl.empty()) cl.push_back(1);
            f.clauses.push_back(cl);
        }
        ReversiblePredicate rp = formula_to_reversible(f);
        Circuit c = predicate_to_circuit(rp, z5);
        // count by enumerating branching inputs of the circuit
        std::uint64_t circuit_count = 0;
        for (std::uint64_t b = 0; b < 8; ++b) {
            std::string in = index_to_bitstring(b, 3);
            ModalState out = run(c, in);
            std::vector<std::size_t> supp = out.support();
            REQUIRE(supp.size() == 1);  // permutation circuit, one branch
            std::string image = index_to_bitstring(supp[0], out.bits());
            CHECK(path_count(c, in, image) == 1);
            circuit_count += image.back() == '1' ? 1 : 0;
        }
        CHECK(circuit_count == count_accepting(rp, 0).accepting);
        CHECK(circuit_count == sat_count(f));
    }
}

TEST_CASE("count report text forms") {
    ReversiblePredicate rp = table_predicate(1, 2, 1, {{1, 0}, {1, 3}});
    CountReport rep = count_accepting(rp, 1, 3);
    CHECK(rep.accepting == 2);
    CHECK(rep.accepting_mod_k == 2);
    CHECK(rep.text() == "input: 1\ntotal_branches: 4\naccepting: 2\n");
    CHECK(rep.record() == "count x=1 total=4 accepting=2");
}
