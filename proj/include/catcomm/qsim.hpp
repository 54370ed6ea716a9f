#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "catcomm/errors.hpp"

namespace catcomm {

enum class Stage { Shared, Phased, Rotated, Measured };
enum class Backend { Exact, Floating, Both };

const char* stage_name(Stage s);

struct MeasurementRecord {
    std::vector<std::uint8_t> bits; // b_1 .. b_k
    std::uint64_t seed = 0;

    int parity() const {
        int p = 0;
        for (auto b : bits) p ^= b;
        return p;
    }
};

// Shared k-qubit resource (|0...0> + |1...1>)/sqrt(2), one qubit per party,
// driven through a fixed pipeline: per-party phase rotations, the all-qubit
// Hadamard, one computational-basis measurement.
//
// The exact backend tracks the relative phase of |1...1> as an integer mod
// 2^n; every phase the pipeline applies is a multiple of 2*pi/2^n, so this
// representation is lossless. The floating state vector is kept for
// cross-checks and for inputs that break the promise (where the exact
// post-Hadamard closed form does not apply).
class CatRegister {
public:
    CatRegister(int k, int n, Backend backend = Backend::Exact);

    int qubit_count() const { return k_; }
    int phase_exponent() const { return n_; }
    Backend backend() const { return backend_; }
    Stage stage() const { return stage_; }
    std::uint64_t accumulated_phase() const { return phase_; }
    const std::optional<std::vector<std::complex<double>>>& amplitudes() const {
        return amplitudes_;
    }

    // Party applies |1> -> exp(2*pi*i*x/2^n)|1> on its own qubit.
    // Parties are numbered 1..k.
    CatRegister& apply_phase(int party, std::uint64_t x);

    // Single-qubit Hadamard on every qubit. The exact backend requires the
    // accumulated phase to be 0 or 2^(n-1) (relative phase +-1); anything else
    // means the promise was broken and only the floating backend can proceed.
    CatRegister& apply_hadamard_all();

    // Samples one k-bit outcome. In the exact backend every bit except the
    // pivot party's is drawn from the seed alone; the pivot bit completes the
    // parity. pivot_party = -1 picks party k. Sampling convention only: the
    // outcome distribution does not depend on the pivot.
    MeasurementRecord measure(std::uint64_t seed, int pivot_party = -1);

    // Outcome distributions over k-bit strings (index bit i-1 = party i's bit),
    // available at stage Rotated.
    std::vector<double> exact_outcome_distribution() const;
    std::vector<double> floating_outcome_distribution() const;

    double norm() const; // floating backend 2-norm

    nlohmann::ordered_json dump() const;

private:
    bool has_exact() const { return backend_ != Backend::Floating; }
    bool has_floating() const { return amplitudes_.has_value(); }
    int exact_parity() const; // 0 if relative phase +1, 1 if -1

    int k_;
    int n_;
    Backend backend_;
    Stage stage_ = Stage::Shared;
    std::uint64_t phase_ = 0; // mod 2^n
    std::optional<std::vector<std::complex<double>>> amplitudes_;
};

CatRegister make_cat_state(int k, int n, Backend backend = Backend::Exact);

} // namespace catcomm
