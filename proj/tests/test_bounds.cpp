#include <cmath>

#include "doctest.h"

#include "catcomm/bounds.hpp"
#include "catcomm/rng.hpp"

using namespace catcomm;

namespace {

Rectangle random_rectangle(int n, int k, Rng& rng) {
    const std::uint64_t full = (std::uint64_t{1} << (1 << n)) - 1;
    std::vector<std::uint64_t> parts(static_cast<std::size_t>(k));
    for (auto& p : parts)
        do {
            p = rng.next_u64() & full;
        } while (p == 0);
    return Rectangle(n, k, parts);
}

} // namespace

TEST_CASE("cardinality bound values") {
    CHECK(cardinality_bound(2, 2) == BigRational(4));
    CHECK(cardinality_bound(1, 2) == BigRational(1));
    CHECK(cardinality_bound(4, 4) == BigRational(BigInt(6561), BigInt(16))); // 4.5^4
    CHECK(cardinality_bound(2, 3) == BigRational(BigInt(125), BigInt(27)));
    CHECK(rational_to_string(cardinality_bound(4, 4)) == "6561/16");
}

TEST_CASE("lower bound report") {
    const BoundReport rep = lower_bound_bits(4, 4);
    CHECK(rep.t == BigRational(BigInt(1048576), BigInt(6561)));
    CHECK(rep.log2_t == doctest::Approx(7.32029999423075).epsilon(1e-12));
    CHECK(rep.rhs == doctest::Approx(4.0));
    CHECK(rep.holds);

    const BoundReport small = lower_bound_bits(1, 2);
    CHECK(small.t == BigRational(4));
    CHECK(small.log2_t == doctest::Approx(2.0));
    CHECK(small.rhs == doctest::Approx(0.0));
    CHECK(small.holds);

    const auto j = rep.to_json();
    CHECK(j["r"] == "6561/16");
    CHECK(j["t"] == "1048576/6561");
    CHECK(j["holds"] == true);
    CHECK_FALSE(j.contains("observed_max"));
}

TEST_CASE("exact ceil(log2) of rationals") {
    CHECK(ceil_log2_rational(BigRational(1)) == 0);
    CHECK(ceil_log2_rational(BigRational(4)) == 2);
    CHECK(ceil_log2_rational(BigRational(5)) == 3);
    CHECK(ceil_log2_rational(BigRational(BigInt(1048576), BigInt(6561))) == 8);
    CHECK(ceil_log2_rational(BigRational(BigInt(1), BigInt(3))) == -1);
}

TEST_CASE("classical upper bound formula") {
    CHECK(upper_bound_bits(3) == 5);
    CHECK(upper_bound_bits(2) == 2);
    CHECK(upper_bound_bits(9) == 33);
    CHECK(naive_upper_bound_bits(4, 2) == 5);
}

TEST_CASE("rectangle basics") {
    const Rectangle r(2, 2, {0b0011, 0b1001});
    CHECK(r.cardinality() == 4);
    CHECK_THROWS_AS(Rectangle(2, 2, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Rectangle(2, 2, {1}), std::invalid_argument);
    CHECK_THROWS_AS(Rectangle(2, 2, {16, 1}), std::invalid_argument); // member outside V
}

TEST_CASE("rectangle classification: singletons and the full cube") {
    // {0} x ... x {0} holds the all-zero 0-valid input and nothing else
    for (int k = 2; k <= 3; ++k) {
        const Rectangle r(2, k, std::vector<std::uint64_t>(static_cast<std::size_t>(k), 1));
        CHECK(classify_rectangle_scan(r) == MonoClass::No1Valid);
        CHECK(classify_rectangle_sumset(r) == MonoClass::No1Valid);
        CHECK(is_monochromatic(classify_rectangle_sumset(r)));
        CHECK(monochromatic_with_valid(classify_rectangle_sumset(r)));
    }
    // V^k sees both valid classes
    for (int n = 1; n <= 3; ++n)
        for (int k = 2; k <= 3; ++k) {
            const std::uint64_t full = (std::uint64_t{1} << (1 << n)) - 1;
            const Rectangle r(n, k, std::vector<std::uint64_t>(static_cast<std::size_t>(k), full));
            CHECK(classify_rectangle_sumset(r) == MonoClass::Mixed);
            CHECK_FALSE(is_monochromatic(classify_rectangle_sumset(r)));
        }
    // a rectangle with no valid input at all
    const Rectangle none(2, 2, {0b0010, 0b0001}); // {1} x {0}: sum 1, never divisible by 2
    CHECK(classify_rectangle_scan(none) == MonoClass::NoValid);
    CHECK(classify_rectangle_sumset(none) == MonoClass::NoValid);
    CHECK(is_monochromatic(classify_rectangle_sumset(none)));
    CHECK_FALSE(monochromatic_with_valid(classify_rectangle_sumset(none)));
}

TEST_CASE("scan classification enforces its tuple budget") {
    const Rectangle r(3, 2, {0xff, 0xff});
    CHECK_THROWS_AS(classify_rectangle_scan(r, 63), BudgetExceeded);
    CHECK_NOTHROW(classify_rectangle_scan(r, 64));
}

TEST_CASE("scan and sumset classification agree on random rectangles") {
    Rng rng(2024);
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const int k = 2 + static_cast<int>(rng.below(2));
        const Rectangle r = random_rectangle(n, k, rng);
        CHECK(classify_rectangle_scan(r) == classify_rectangle_sumset(r));
    }
}

TEST_CASE("valid-input counts match between scan and convolution") {
    Rng rng(77);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const int k = 2 + static_cast<int>(rng.below(2));
        const Rectangle r = random_rectangle(n, k, rng);
        CHECK(count_valid_scan(r) == count_valid_convolution(r));
    }
}

TEST_CASE("exhaustive maxima of monochromatic-with-valid rectangles") {
    const auto m22 = max_monochromatic_rectangle(2, 2);
    REQUIRE(m22.exhaustive);
    CHECK(m22.size == 4);
    const auto m23 = max_monochromatic_rectangle(2, 3);
    REQUIRE(m23.exhaustive);
    CHECK(m23.size == 4);
    const auto m32 = max_monochromatic_rectangle(3, 2);
    REQUIRE(m32.exhaustive);
    CHECK(m32.size == 16);

    for (const auto* res : {&m22, &m23, &m32}) {
        REQUIRE(res->witness.has_value());
        const Rectangle& w = *res->witness;
        CHECK(w.cardinality() == res->size);
        CHECK(monochromatic_with_valid(classify_rectangle_scan(w)));
        CHECK(BigRational(BigInt(res->size)) <= cardinality_bound(w.n, w.k));
    }
}

TEST_CASE("oversized spaces fall back to the labeled hill climb") {
    const auto res = max_monochromatic_rectangle(3, 3, kDefaultRectangleBudget, 5);
    CHECK_FALSE(res.exhaustive); // (2^8-1)^3 candidates exceed 10^7
    REQUIRE(res.witness.has_value());
    CHECK(monochromatic_with_valid(classify_rectangle_sumset(*res.witness)));
    CHECK(res.witness->cardinality() == res.size);
    CHECK(BigRational(BigInt(res.size)) <= cardinality_bound(3, 3));
}

TEST_CASE("stabilizer examples") {
    CHECK(stabilizer(CyclicSubset(4, 0b1111)).members == 0b1111); // full group
    CHECK(stabilizer(CyclicSubset(4, 0b0101)).members == 0b0101); // {0,2} in Z4
    CHECK(stabilizer(CyclicSubset(4, 0b0011)).members == 0b0001); // {0,1} in Z4
    CHECK_THROWS_AS(stabilizer(CyclicSubset(4, 0)), std::invalid_argument);
}

TEST_CASE("stabilizers are subgroups") {
    Rng rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const int order = 2 + static_cast<int>(rng.below(11));
        std::uint64_t members = 0;
        do {
            members = rng.next_u64() & ((std::uint64_t{1} << order) - 1);
        } while (members == 0);
        const CyclicSubset h = stabilizer(CyclicSubset(order, members));
        CHECK(h.contains(0));
        for (int a = 0; a < order; ++a)
            for (int b = 0; b < order; ++b)
                if (h.contains(a) && h.contains(b)) CHECK(h.contains((a + b) % order));
    }
}

TEST_CASE("Kneser inequality examples and small exhaustive sweep") {
    CHECK(verify_kneser(CyclicSubset(2, 0b11), CyclicSubset(2, 0b11)));
    CHECK(verify_kneser(CyclicSubset(4, 0b0011), CyclicSubset(4, 0b0011)));
    for (int order = 2; order <= 6; ++order) {
        const std::uint64_t subsets = (std::uint64_t{1} << order) - 1;
        for (std::uint64_t a = 1; a <= subsets; ++a)
            for (std::uint64_t b = 1; b <= subsets; ++b)
                CHECK(verify_kneser(CyclicSubset(order, a), CyclicSubset(order, b)));
    }
}

TEST_CASE("sumset chains: the singleton rectangle stays at {0}") {
    const Rectangle r(2, 3, {1, 1, 1});
    const SumsetChain chain = sumset_chain(r);
    REQUIRE(chain.sums.size() == 4);
    for (const auto& s : chain.sums) CHECK(s.members == 1);
    CHECK(chain.stabilizers_trivial());
    CHECK(chain.stepwise_inequality_holds());
    CHECK(chain.part_sum_bound_holds());
}

TEST_CASE("monochromatic-with-valid chains have trivial stabilizers and tight sums") {
    // every rectangle over n=2, k=2
    std::uint64_t seen = 0;
    for (std::uint64_t a = 1; a <= 15; ++a)
        for (std::uint64_t b = 1; b <= 15; ++b) {
            const Rectangle r(2, 2, {a, b});
            if (!monochromatic_with_valid(classify_rectangle_sumset(r))) continue;
            ++seen;
            const SumsetChain chain = sumset_chain(r);
            CHECK(chain.stabilizers_trivial());
            CHECK(chain.stepwise_inequality_holds());
            CHECK(chain.part_sum_bound_holds());
        }
    CHECK(seen > 0);
}

TEST_CASE("a mixed rectangle can stabilize the half-group element") {
    const Rectangle r(2, 2, {0b1111, 0b1111});
    const SumsetChain chain = sumset_chain(r);
    CHECK(chain.stabilizers.back().contains(2)); // 2^(n-1) lands in H_k: diagnostic, not an error
    CHECK_FALSE(chain.stabilizers_trivial());
}

TEST_CASE("stabilizer monotonicity along every chain") {
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const int k = 2 + static_cast<int>(rng.below(3));
        const SumsetChain chain = sumset_chain(random_rectangle(n, k, rng));
        for (std::size_t i = 1; i < chain.stabilizers.size(); ++i) {
            const std::uint64_t prev = chain.stabilizers[i - 1].members;
            CHECK((prev & chain.stabilizers[i].members) == prev);
        }
    }
}
