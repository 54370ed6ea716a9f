#include <algorithm>

#include "doctest.h"

#include "catcomm/bounds.hpp"

using namespace catcomm;

TEST_CASE("search argument guards") {
    CHECK_THROWS_AS(search_oneround_gm(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(search_oneround_gm(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(search_oneround_gm(1, 5), BudgetExceeded);
}

TEST_CASE("no correct one-round protocol exists below 4 bits") {
    for (int budget = 1; budget <= 3; ++budget) {
        const OneRoundSearchResult res = search_oneround_gm(1, budget);
        CHECK_FALSE(res.feasible);
        CHECK(res.feasible_count == 0);
        CHECK(res.witnesses.empty());
    }
    // every split and every table pair at budget 3 was really enumerated
    const OneRoundSearchResult res3 = search_oneround_gm(1, 3);
    CHECK(res3.candidates_checked == 4608);
}

TEST_CASE("budget 4 is feasible and every witness is distinguishable") {
    const OneRoundSearchResult res = search_oneround_gm(1, 4);
    CHECK(res.feasible);
    CHECK(res.candidates_checked == 17833984);
    CHECK(res.feasible_count == 8448);
    REQUIRE(res.witnesses_complete);
    REQUIRE(res.witnesses.size() == 8448);
    REQUIRE(res.witness.has_value());

    std::uint64_t split_12 = 0, split_21 = 0;
    for (const auto& w : res.witnesses) {
        CHECK(w.bob_bits + w.carol_bits == 3);
        CHECK(table_computes_gm(w));
        if (w.bob_bits == 1) ++split_12;
        if (w.bob_bits == 2) ++split_21;
    }
    CHECK(split_12 == 2304);
    CHECK(split_21 == 6144);

    for (const auto& w : res.witnesses) CHECK(distinguishability_check(w));
}

TEST_CASE("silent-party splits never work") {
    const OneRoundSearchResult res = search_oneround_gm(1, 4);
    for (const auto& w : res.witnesses) {
        CHECK(w.bob_bits >= 1);
        CHECK(w.carol_bits >= 1);
    }
}

TEST_CASE("a search witness runs through the engine") {
    const OneRoundSearchResult res = search_oneround_gm(1, 4);
    REQUIRE(res.witness.has_value());
    const auto p = make_table_protocol(*res.witness);
    std::uint64_t i = 0;
    for_each_valid_triple_vector(1, [&](const TripleVector& v) {
        const ProtocolRun r = run(*p, v, i++);
        CHECK(r.transcript.total_bits() == 4);
        CHECK(r.outputs.front() == g_m(v));
    });
}

TEST_CASE("the search rediscovers the reference protocol") {
    const OneRoundProtocolTable reference = reference_oneround_table(1);
    const OneRoundSearchResult res = search_oneround_gm(1, 4);
    const bool found = std::any_of(res.witnesses.begin(), res.witnesses.end(),
                                   [&](const OneRoundProtocolTable& w) {
                                       return w.bob_bits == reference.bob_bits &&
                                              w.carol_bits == reference.carol_bits &&
                                              w.bob_table == reference.bob_table &&
                                              w.carol_table == reference.carol_table;
                                   });
    CHECK(found);
}

TEST_CASE("the 3m+1 reference table is a verifying witness") {
    for (int m = 1; m <= 2; ++m) {
        OneRoundProtocolTable table = reference_oneround_table(m);
        CHECK(table.bob_bits == 2 * m);
        CHECK(table.carol_bits == m);
        CHECK(table_computes_gm(table));
        CHECK(distinguishability_check(table));
        // the answer rule regenerates without conflicts
        OneRoundProtocolTable copy = table;
        copy.answer.clear();
        CHECK(complete_answer_rule(copy));
        CHECK(copy.answer == table.answer);
    }
}

TEST_CASE("distinguishability check rejects tables that do not compute g_m") {
    OneRoundProtocolTable broken;
    broken.m = 1;
    broken.bob_bits = 1;
    broken.carol_bits = 2;
    broken.bob_table = {0, 0, 0, 0}; // constant: Bob says nothing useful
    broken.carol_table.assign(4u << 1, 0);
    for (std::uint32_t z = 0; z < 4; ++z)
        for (std::uint32_t b = 0; b < 2; ++b) broken.carol_table[(z << 1) | b] = z;
    CHECK_FALSE(complete_answer_rule(broken));
    CHECK_FALSE(table_computes_gm(broken));
    CHECK_THROWS_AS(distinguishability_check(broken), PreconditionViolation);
}

TEST_CASE("search result serialization") {
    const OneRoundSearchResult res = search_oneround_gm(1, 3);
    const auto j = res.to_json();
    CHECK(j["budget"] == 3);
    CHECK(j["feasible"] == false);
    CHECK(j["candidates_checked"] == 4608);
    CHECK_FALSE(j.contains("witness_tables"));

    const auto j4 = search_oneround_gm(1, 4).to_json();
    CHECK(j4["feasible"] == true);
    CHECK(j4["witness_tables"].size() == 3);
}
