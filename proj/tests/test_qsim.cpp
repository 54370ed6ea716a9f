#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "catcomm/core.hpp"
#include "catcomm/qsim.hpp"
#include "catcomm/rng.hpp"

using namespace catcomm;

namespace {

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double tv = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
    return tv / 2.0;
}

// Full pipeline on one input; exact backend.
MeasurementRecord run_pipeline(const FInput& input, std::uint64_t seed) {
    CatRegister reg = make_cat_state(input.k, input.n);
    for (int p = 1; p <= input.k; ++p)
        reg.apply_phase(p, input.values[static_cast<std::size_t>(p - 1)]);
    reg.apply_hadamard_all();
    return reg.measure(seed);
}

} // namespace

TEST_CASE("fresh cat state: two equal amplitudes, zero phase") {
    CatRegister reg2 = make_cat_state(2, 2, Backend::Both);
    CHECK(reg2.accumulated_phase() == 0);
    CHECK(reg2.stage() == Stage::Shared);
    const auto& amps = *reg2.amplitudes();
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(amps.size() == 4);
    CHECK(std::abs(amps[0] - r) < 1e-15);
    CHECK(std::abs(amps[1]) == 0.0);
    CHECK(std::abs(amps[2]) == 0.0);
    CHECK(std::abs(amps[3] - r) < 1e-15);

    CatRegister reg3 = make_cat_state(3, 2, Backend::Floating);
    int nonzero = 0;
    for (const auto& a : *reg3.amplitudes())
        if (std::abs(a) > 0) ++nonzero;
    CHECK(nonzero == 2);

    CHECK_THROWS_AS(make_cat_state(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_cat_state(21, 2, Backend::Floating), std::invalid_argument);
}

TEST_CASE("phase application accumulates modulo 2^n") {
    CatRegister reg = make_cat_state(2, 2, Backend::Both);
    reg.apply_phase(1, 0);
    CHECK(reg.accumulated_phase() == 0); // identity
    CHECK(reg.stage() == Stage::Phased);
    reg.apply_phase(1, 1);
    reg.apply_phase(2, 3);
    CHECK(reg.accumulated_phase() == 0); // 4 mod 4

    // floating backend carries the same relative phase on |1...1>
    const auto& amps = *reg.amplitudes();
    CHECK(std::abs(amps[3] / amps[0] - 1.0) < 1e-12);

    CHECK_THROWS_AS(reg.apply_phase(3, 0), std::out_of_range);
    CHECK_THROWS_AS(reg.apply_phase(1, 4), std::out_of_range);
}

TEST_CASE("after all phases on a valid input the relative phase is (-1)^F") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const FInput input = sample_valid_input(3, 3, seed);
        CatRegister reg = make_cat_state(3, 3, Backend::Both);
        for (int p = 1; p <= 3; ++p)
            reg.apply_phase(p, input.values[static_cast<std::size_t>(p - 1)]);
        const std::uint64_t half = std::uint64_t{1} << 2;
        CHECK(reg.accumulated_phase() % half == 0);
        CHECK(reg.accumulated_phase() / half == static_cast<std::uint64_t>(f_big(input)));
        const auto& amps = *reg.amplitudes();
        const double expected = f_big(input) == 0 ? 1.0 : -1.0;
        CHECK(std::abs(amps.back() / amps.front() - expected) < 1e-12);
    }
}

TEST_CASE("phase order does not matter") {
    const std::vector<std::uint64_t> values = {3, 5, 6, 2};
    std::vector<int> order = {1, 2, 3, 4};
    CatRegister base = make_cat_state(4, 3, Backend::Both);
    for (int p : order) base.apply_phase(p, values[static_cast<std::size_t>(p - 1)]);
    do {
        CatRegister reg = make_cat_state(4, 3, Backend::Both);
        for (int p : order) reg.apply_phase(p, values[static_cast<std::size_t>(p - 1)]);
        CHECK(reg.accumulated_phase() == base.accumulated_phase());
        const auto& a = *reg.amplitudes();
        const auto& b = *base.amplitudes();
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("Hadamard closed form at k=2: parity-split uniform distributions") {
    // (|00> + |11>)/sqrt2 -> uniform on {00, 11}; flip the sign, uniform on {01, 10}
    CatRegister plus = make_cat_state(2, 2, Backend::Both);
    plus.apply_phase(1, 0);
    plus.apply_hadamard_all();
    CHECK(plus.stage() == Stage::Rotated);
    const auto exact_plus = plus.exact_outcome_distribution();
    const std::vector<double> expected_plus = {0.5, 0.0, 0.0, 0.5};
    CHECK(tv_distance(exact_plus, expected_plus) == 0.0);
    CHECK(tv_distance(plus.floating_outcome_distribution(), expected_plus) < 1e-12);

    CatRegister minus = make_cat_state(2, 2, Backend::Both);
    minus.apply_phase(1, 2); // phase 2/4 of a turn on |11>: relative phase -1
    minus.apply_hadamard_all();
    const std::vector<double> expected_minus = {0.0, 0.5, 0.5, 0.0};
    CHECK(tv_distance(minus.exact_outcome_distribution(), expected_minus) == 0.0);
    CHECK(tv_distance(minus.floating_outcome_distribution(), expected_minus) < 1e-12);
}

TEST_CASE("exact backend refuses a non-binary relative phase") {
    CatRegister reg = make_cat_state(2, 3);
    reg.apply_phase(1, 1); // phase 1 of 8: promise must have been violated
    CHECK_THROWS_AS(reg.apply_hadamard_all(), PromiseViolation);

    // floating backend handles the same register
    CatRegister diag = make_cat_state(2, 3, Backend::Floating);
    diag.apply_phase(1, 1);
    CHECK_NOTHROW(diag.apply_hadamard_all());
    CHECK(std::abs(diag.norm() - 1.0) < 1e-12);
}

TEST_CASE("stages only move forward") {
    CatRegister reg = make_cat_state(2, 2);
    CHECK_THROWS_AS(reg.apply_hadamard_all(), StageError); // must phase first
    reg.apply_phase(1, 0);
    CHECK_THROWS_AS(reg.measure(0), StageError); // must rotate first
    reg.apply_hadamard_all();
    CHECK_THROWS_AS(reg.apply_phase(1, 0), StageError);
    reg.measure(7);
    CHECK(reg.stage() == Stage::Measured);
    CHECK_THROWS_AS(reg.measure(7), StageError); // no double measurement
}

TEST_CASE("measurement parity equals the accumulated relative phase") {
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        CatRegister plus = make_cat_state(3, 2);
        plus.apply_phase(1, 0);
        plus.apply_hadamard_all();
        CHECK(plus.measure(seed).parity() == 0);

        CatRegister minus = make_cat_state(3, 2);
        minus.apply_phase(1, 2);
        minus.apply_hadamard_all();
        CHECK(minus.measure(seed).parity() == 1);
    }

    CatRegister reg = make_cat_state(4, 2);
    reg.apply_phase(1, 2);
    reg.apply_hadamard_all();
    const MeasurementRecord a = reg.measure(123);
    CatRegister reg2 = make_cat_state(4, 2);
    reg2.apply_phase(1, 2);
    reg2.apply_hadamard_all();
    CHECK(a.bits == reg2.measure(123).bits); // same seed, same bits
}

TEST_CASE("parity law: pipeline parity equals f_big on every valid input") {
    for (int k = 2; k <= 5; ++k)
        for (int n = 1; n <= 4; ++n) {
            if (n * k > 16) continue;
            std::uint64_t i = 0;
            for_each_valid_input(k, n, [&](const FInput& input) {
                const MeasurementRecord rec = run_pipeline(input, derive_seed(9, i++));
                CHECK(rec.parity() == f_big(input));
            });
        }
    // sampled beyond the exhaustive grid
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const FInput input = sample_valid_input(8, 6, seed);
        CHECK(run_pipeline(input, derive_seed(10, seed)).parity() == f_big(input));
    }
}

TEST_CASE("floating measurement also obeys the parity law") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const FInput input = sample_valid_input(3, 2, seed);
        CatRegister reg = make_cat_state(3, 2, Backend::Floating);
        for (int p = 1; p <= 3; ++p)
            reg.apply_phase(p, input.values[static_cast<std::size_t>(p - 1)]);
        reg.apply_hadamard_all();
        CHECK(reg.measure(derive_seed(11, seed)).parity() == f_big(input));
    }
}

TEST_CASE("exact and floating outcome distributions agree within 1e-9 TV") {
    for (int k = 2; k <= 10; ++k)
        for (int target = 0; target <= 1; ++target) {
            CatRegister reg = make_cat_state(k, 2, Backend::Both);
            reg.apply_phase(1, static_cast<std::uint64_t>(2 * target));
            for (int p = 2; p <= k; ++p) reg.apply_phase(p, 0);
            reg.apply_hadamard_all();
            CHECK(tv_distance(reg.exact_outcome_distribution(),
                              reg.floating_outcome_distribution()) <= 1e-9);
        }
}

TEST_CASE("floating norm stays 1 through the pipeline") {
    CatRegister reg = make_cat_state(6, 4, Backend::Floating);
    CHECK(std::abs(reg.norm() - 1.0) < 1e-12);
    for (int p = 1; p <= 6; ++p) {
        reg.apply_phase(p, static_cast<std::uint64_t>(3 * p % 16));
        CHECK(std::abs(reg.norm() - 1.0) < 1e-12);
    }
    reg.apply_hadamard_all();
    CHECK(std::abs(reg.norm() - 1.0) < 1e-12);
}

TEST_CASE("each measured bit is individually unbiased") {
    const int trials = 10000;
    std::vector<int> zeros(3, 0);
    for (int t = 0; t < trials; ++t) {
        CatRegister reg = make_cat_state(3, 2);
        reg.apply_phase(1, 1);
        reg.apply_phase(2, 1);
        reg.apply_phase(3, 2); // sum 4: value 0
        reg.apply_hadamard_all();
        const MeasurementRecord rec = reg.measure(derive_seed(77, static_cast<std::uint64_t>(t)));
        for (int p = 0; p < 3; ++p)
            if (rec.bits[static_cast<std::size_t>(p)] == 0) ++zeros[static_cast<std::size_t>(p)];
    }
    for (int p = 0; p < 3; ++p) {
        const double freq = static_cast<double>(zeros[static_cast<std::size_t>(p)]) / trials;
        CHECK(freq > 0.48);
        CHECK(freq < 0.52);
    }
}

TEST_CASE("register dump carries the documented fields") {
    CatRegister reg = make_cat_state(2, 2, Backend::Both);
    reg.apply_phase(1, 1);
    const auto j = reg.dump();
    CHECK(j["k"] == 2);
    CHECK(j["n"] == 2);
    CHECK(j["stage"] == "phased");
    CHECK(j["accumulated_phase"] == 1);
    REQUIRE(j.contains("amplitudes"));
    CHECK(j["amplitudes"].size() == 4);

    const auto exact_only = make_cat_state(2, 2).dump();
    CHECK_FALSE(exact_only.contains("amplitudes"));
}
