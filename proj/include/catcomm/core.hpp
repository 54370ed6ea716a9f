#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "catcomm/errors.hpp"

namespace catcomm {

// Domain arithmetic for the three target functions. U = {0,1,2,3} is the
// single-instance alphabet; V = {0,...,2^n-1} the n-bit alphabet. Validity
// is checked eagerly at construction and cached as a certificate flag; the
// target functions are defined only where the flag is set.

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 22;

// --- single mod-4 instance -------------------------------------------------

struct ModFourTriple {
    int x = 0, y = 0, z = 0;
    bool valid = false; // certifies (x+y+z) mod 2 == 0

    ModFourTriple(int x_, int y_, int z_);
};

bool is_valid_triple(const ModFourTriple& t);

// Second-least significant bit of x+y+z. Defined on valid triples only.
int f_mod4(const ModFourTriple& t);

// The unique x such that (x,y,z) is valid and f_mod4 = 1.
int unique_completion(int y, int z);

// --- m parallel instances ----------------------------------------------------

struct TripleVector {
    std::vector<int> xs, ys, zs;
    bool valid = false; // coordinate-wise promise

    TripleVector(std::vector<int> xs_, std::vector<int> ys_, std::vector<int> zs_);
    int m() const { return static_cast<int>(xs.size()); }
};

// AND over coordinates of f_mod4. Defined on valid vectors only.
int g_m(const TripleVector& v);

TripleVector sample_valid_triple_vector(int m, std::uint64_t seed);

// Visits all 32^m valid vectors in lexicographic order.
void for_each_valid_triple_vector(int m, const std::function<void(const TripleVector&)>& fn,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

// --- high/low decomposition of U-vectors -------------------------------------

// Coordinate i of a U-vector splits into high = u_i div 2 and low = u_i mod 2;
// mask bit i holds coordinate i.
struct HighLowSplit {
    std::uint64_t high = 0;
    std::uint64_t low = 0;
    int m = 0;
};

HighLowSplit split_high_low(const std::vector<int>& u_vector);
std::vector<int> join_high_low(const HighLowSplit& s);

// --- k-party n-bit instance ---------------------------------------------------

struct FInput {
    int k = 0;
    int n = 0;
    std::vector<std::uint64_t> values;
    bool valid = false; // certifies (sum values) mod 2^(n-1) == 0

    FInput(int k_, int n_, std::vector<std::uint64_t> values_);

    std::string to_text() const; // "k=K n=N xs=[a,b,...]"
    static FInput from_text(const std::string& text);
};

// n-th least significant bit of the sum. Defined on valid inputs only.
int f_big(const FInput& input);

std::uint64_t valid_input_count(int k, int n);

// Visits valid inputs in lexicographic order; exactly the valid ones, each once.
void for_each_valid_input(int k, int n, const std::function<void(const FInput&)>& fn,
                          std::uint64_t budget = kDefaultEnumerationBudget);

// Uniform over the valid set; deterministic given seed. Draws x_1..x_{k-1}
// freely, then completes x_k's low bits from the promise and its top bit
// uniformly.
FInput sample_valid_input(int k, int n, std::uint64_t seed);

} // namespace catcomm
