#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "json.hpp"

#include "catcomm/errors.hpp"
#include "catcomm/protocols.hpp"

namespace catcomm {

// Desk-scale verification of the lower-bound machinery: the monochromatic
// rectangle cardinality bound, the sumset/stabilizer argument behind it,
// Kneser's inequality, and the exhaustive one-round protocol search.

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::rational<BigInt>;

inline constexpr std::uint64_t kDefaultRectangleBudget = 10'000'000;
// Covers every nonempty pair over groups of order up to 10 (~1.4e6 pairs).
inline constexpr std::uint64_t kDefaultSubsetPairBudget = 2'000'000;

std::string rational_to_string(const BigRational& q); // "p/q"
double log2_rational(const BigRational& q);
// Smallest integer j with 2^j >= q, computed exactly.
long ceil_log2_rational(const BigRational& q);

// --- closed-form bounds ---------------------------------------------------------

// ((2^n - 2)/k + 1)^k, the cardinality cap for monochromatic rectangles that
// contain a valid input. Exact rational; the division by k rarely comes out
// even.
BigRational cardinality_bound(int n, int k);

struct BoundReport {
    int n = 0;
    int k = 0;
    BigRational r;       // rectangle cardinality cap
    BigRational t;       // 2^(nk) / r, minimum number of rectangles in a partition
    double log2_t = 0.0;
    double rhs = 0.0;    // k*log2(k) - k
    bool holds = false;  // log2_t > rhs
    std::optional<std::uint64_t> observed_max_rectangle;

    nlohmann::ordered_json to_json() const;
};

BoundReport lower_bound_bits(int n, int k);

// (k-1)*(ceil(log2(k-1)) + 1) + 1, the high-bits protocol cost. Only
// applicable when n >= highbits_width(k); otherwise the naive bound holds.
int upper_bound_bits(int k);
int naive_upper_bound_bits(int n, int k);

// --- rectangles -----------------------------------------------------------------

// Product set R_1 x ... x R_k of nonempty subsets of V = {0..2^n-1}, each part
// a 2^n-bit mask. n <= 6 so a part fits one word.
struct Rectangle {
    int n = 0;
    int k = 0;
    std::vector<std::uint64_t> parts;

    Rectangle(int n_, int k_, std::vector<std::uint64_t> parts_);
    std::uint64_t cardinality() const;
};

// A rectangle misses one of the two valid classes ("no 0-valid" / "no 1-valid"),
// both ("no valid"), or neither ("mixed"). Monochromatic = anything but mixed.
enum class MonoClass { NoValid, No0Valid, No1Valid, Mixed };

const char* mono_class_name(MonoClass c);
inline bool is_monochromatic(MonoClass c) { return c != MonoClass::Mixed; }
inline bool monochromatic_with_valid(MonoClass c) {
    return c == MonoClass::No0Valid || c == MonoClass::No1Valid;
}

// Scan route: walks every tuple of the product (budget-limited).
MonoClass classify_rectangle_scan(const Rectangle& r,
                                  std::uint64_t budget = kDefaultRectangleBudget);
// Sumset route: R contains a b-valid input iff b*2^(n-1) lies in the final
// sumset of the chain.
MonoClass classify_rectangle_sumset(const Rectangle& r);

// Valid-input count per rectangle, by scan and by counting convolution.
std::uint64_t count_valid_scan(const Rectangle& r, std::uint64_t budget = kDefaultRectangleBudget);
std::uint64_t count_valid_convolution(const Rectangle& r);

struct MaxRectangleResult {
    std::uint64_t size = 0;
    std::optional<Rectangle> witness;
    bool exhaustive = false; // false: hill-climbing, size is only a lower bound on the max
};

// Largest monochromatic rectangle containing a valid input. Exhaustive when
// (2^(2^n)-1)^k fits the budget; otherwise a seeded hill-climb that reports
// lower_bound_on_max.
MaxRectangleResult max_monochromatic_rectangle(int n, int k,
                                               std::uint64_t budget = kDefaultRectangleBudget,
                                               std::uint64_t seed = 0);

// --- cyclic-group sumsets ---------------------------------------------------------

// Subset of Z_modulus as a bitmask; modulus <= 64.
struct CyclicSubset {
    int modulus = 0;
    std::uint64_t members = 0;

    CyclicSubset(int modulus_, std::uint64_t members_);
    int size() const;
    bool contains(int element) const;

    friend bool operator==(const CyclicSubset&, const CyclicSubset&) = default;
};

CyclicSubset sumset(const CyclicSubset& a, const CyclicSubset& b);
// Largest subgroup H with S + H = S; always a subgroup, {0} at minimum.
CyclicSubset stabilizer(const CyclicSubset& s);
// Kneser's inequality |A+B| >= |A+H| + |B+H| - |H| with H = stabilizer(A+B),
// plus the defining property (A+B)+H = A+B.
bool verify_kneser(const CyclicSubset& a, const CyclicSubset& b);

// S_0 = {0}, S_i = S_{i-1} + R_i over Z_{2^n}, with the stabilizer of each S_i.
struct SumsetChain {
    int n = 0;
    std::vector<int> part_sizes;          // |R_1| .. |R_k|
    std::vector<CyclicSubset> sums;       // S_0 .. S_k
    std::vector<CyclicSubset> stabilizers; // H_0 .. H_k

    bool stabilizers_trivial() const;
    // |S_i| >= |S_{i-1}| + |R_i| - 1 for every step.
    bool stepwise_inequality_holds() const;
    // sum |R_i| <= 2^n - 2 + k.
    bool part_sum_bound_holds() const;
};

SumsetChain sumset_chain(const Rectangle& r);

// --- exhaustive one-round protocol search -------------------------------------------

struct OneRoundSearchResult {
    int m = 1;
    int total_budget_bits = 0;
    bool feasible = false;
    std::uint64_t candidates_checked = 0;
    std::uint64_t feasible_count = 0;
    std::optional<OneRoundProtocolTable> witness; // first feasible table found
    std::vector<OneRoundProtocolTable> witnesses; // all feasible (capped)
    bool witnesses_complete = true;               // false iff the cap truncated the list

    nlohmann::ordered_json to_json() const;
};

// Enumerates every split s_B + s_C = budget - 1 (one bit reserved for Alice's
// answer, silent parties allowed) and every pair of message tables, keeping
// the pairs for which Alice's view determines g_m on all valid inputs.
// m = 1 only; budget in [1, 4].
OneRoundSearchResult search_oneround_gm(int m, int total_budget_bits,
                                        std::size_t witness_cap = 1 << 20);

// Message-distinguishability conditions every correct one-round table must
// satisfy; the fooling-pair argument behind the 3m+1 lower bound:
//   (i)  equal y_low, different y_high  => different Bob messages;
//   (ii) for a fixed y, the z values sharing y's low bits => different
//        Carol messages when their high halves differ;
//   (iii) different y_low => Bob's or Carol's message differs, for every
//        choice of the high halves.
// Throws PreconditionViolation if the table does not compute g_m.
bool distinguishability_check(const OneRoundProtocolTable& table);

} // namespace catcomm
