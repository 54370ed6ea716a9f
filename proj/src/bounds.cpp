#include "catcomm/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "catcomm/rng.hpp"

namespace catcomm {

namespace {

double log2_bigint(const BigInt& x) {
    const long bits = static_cast<long>(boost::multiprecision::msb(x));
    const long shift = bits > 62 ? bits - 62 : 0;
    const double top = static_cast<double>((x >> shift).convert_to<std::uint64_t>());
    return std::log2(top) + static_cast<double>(shift);
}

BigRational pow2_rational(long j) {
    if (j >= 0) return BigRational(BigInt(1) << j);
    return BigRational(BigInt(1), BigInt(1) << (-j));
}

std::uint64_t full_mask(int modulus) {
    return modulus == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << modulus) - 1;
}

std::uint64_t rotl_mod(std::uint64_t mask, int shift, int modulus) {
    shift %= modulus;
    if (shift == 0) return mask;
    return ((mask << shift) | (mask >> (modulus - shift))) & full_mask(modulus);
}

} // namespace

std::string rational_to_string(const BigRational& q) {
    return q.numerator().str() + "/" + q.denominator().str();
}

double log2_rational(const BigRational& q) {
    if (q <= 0) throw std::domain_error("log2_rational: nonpositive value");
    return log2_bigint(q.numerator()) - log2_bigint(q.denominator());
}

long ceil_log2_rational(const BigRational& q) {
    if (q <= 0) throw std::domain_error("ceil_log2_rational: nonpositive value");
    long j = static_cast<long>(boost::multiprecision::msb(q.numerator())) -
             static_cast<long>(boost::multiprecision::msb(q.denominator())) - 2;
    while (pow2_rational(j) < q) ++j;
    return j;
}

BigRational cardinality_bound(int n, int k) {
    if (n < 1) throw std::invalid_argument("cardinality_bound: n must be >= 1");
    if (k < 2) throw std::invalid_argument("cardinality_bound: k must be >= 2");
    const BigInt num = (BigInt(1) << n) - 2 + k; // (2^n - 2)/k + 1 = (2^n - 2 + k)/k
    using boost::multiprecision::pow;
    return BigRational(pow(num, static_cast<unsigned>(k)),
                       pow(BigInt(k), static_cast<unsigned>(k)));
}

BoundReport lower_bound_bits(int n, int k) {
    BoundReport rep;
    rep.n = n;
    rep.k = k;
    rep.r = cardinality_bound(n, k);
    rep.t = BigRational(BigInt(1) << (static_cast<unsigned>(n) * static_cast<unsigned>(k))) / rep.r;
    rep.log2_t = log2_rational(rep.t);
    rep.rhs = k * std::log2(static_cast<double>(k)) - k;
    rep.holds = rep.log2_t > rep.rhs;
    return rep;
}

nlohmann::ordered_json BoundReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["k"] = k;
    j["r"] = rational_to_string(r);
    j["t"] = rational_to_string(t);
    j["log2_t"] = log2_t;
    j["rhs"] = rhs;
    j["holds"] = holds;
    if (observed_max_rectangle) j["observed_max"] = *observed_max_rectangle;
    return j;
}

int upper_bound_bits(int k) {
    if (k < 2) throw std::invalid_argument("upper_bound_bits: k must be >= 2");
    return (k - 1) * highbits_width(k) + 1;
}

int naive_upper_bound_bits(int n, int k) {
    if (n < 1 || k < 2) throw std::invalid_argument("naive_upper_bound_bits: bad parameters");
    return (k - 1) * n + 1;
}

// --- rectangles -----------------------------------------------------------------

Rectangle::Rectangle(int n_, int k_, std::vector<std::uint64_t> parts_)
    : n(n_), k(k_), parts(std::move(parts_)) {
    if (n < 1 || n > 6) throw std::invalid_argument("Rectangle: n must be in [1,6]");
    if (k < 1) throw std::invalid_argument("Rectangle: k must be >= 1");
    if (parts.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("Rectangle: need exactly k parts");
    const std::uint64_t full = full_mask(1 << n);
    for (std::uint64_t p : parts) {
        if (p == 0) throw std::invalid_argument("Rectangle: parts must be nonempty");
        if (p & ~full) throw std::invalid_argument("Rectangle: part outside V");
    }
}

std::uint64_t Rectangle::cardinality() const {
    std::uint64_t c = 1;
    for (std::uint64_t p : parts) {
        const auto cnt = static_cast<std::uint64_t>(std::popcount(p));
        if (c > (std::uint64_t{1} << 62) / cnt)
            throw BudgetExceeded("Rectangle::cardinality: product overflows");
        c *= cnt;
    }
    return c;
}

const char* mono_class_name(MonoClass c) {
    switch (c) {
        case MonoClass::NoValid: return "no-valid";
        case MonoClass::No0Valid: return "no-0-valid";
        case MonoClass::No1Valid: return "no-1-valid";
        case MonoClass::Mixed: return "mixed";
    }
    return "?";
}

namespace {

MonoClass classify_from_flags(bool has0, bool has1) {
    if (has0 && has1) return MonoClass::Mixed;
    if (has0) return MonoClass::No1Valid;
    if (has1) return MonoClass::No0Valid;
    return MonoClass::NoValid;
}

std::vector<int> part_members(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

} // namespace

MonoClass classify_rectangle_scan(const Rectangle& r, std::uint64_t budget) {
    if (r.cardinality() > budget)
        throw BudgetExceeded("classify_rectangle_scan: cardinality exceeds budget");
    std::vector<std::vector<int>> members;
    members.reserve(r.parts.size());
    for (std::uint64_t p : r.parts) members.push_back(part_members(p));

    const std::uint64_t modulus = std::uint64_t{1} << r.n;
    const std::uint64_t half = modulus >> 1 ? modulus >> 1 : 1; // n=1: promise modulus is 1
    bool has0 = false, has1 = false;
    std::vector<std::size_t> pos(static_cast<std::size_t>(r.k), 0);
    while (true) {
        std::uint64_t sum = 0;
        for (int i = 0; i < r.k; ++i)
            sum += static_cast<std::uint64_t>(
                members[static_cast<std::size_t>(i)][pos[static_cast<std::size_t>(i)]]);
        if (sum % half == 0) {
            if ((sum % modulus) / half == 0)
                has0 = true;
            else
                has1 = true;
            if (has0 && has1) break;
        }
        int i = r.k - 1;
        while (i >= 0 && ++pos[static_cast<std::size_t>(i)] ==
                             members[static_cast<std::size_t>(i)].size()) {
            pos[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return classify_from_flags(has0, has1);
}

MonoClass classify_rectangle_sumset(const Rectangle& r) {
    const SumsetChain chain = sumset_chain(r);
    const CyclicSubset& last = chain.sums.back();
    const int half = 1 << (r.n - 1);
    return classify_from_flags(last.contains(0), last.contains(half));
}

std::uint64_t count_valid_scan(const Rectangle& r, std::uint64_t budget) {
    if (r.cardinality() > budget)
        throw BudgetExceeded("count_valid_scan: cardinality exceeds budget");
    std::vector<std::vector<int>> members;
    for (std::uint64_t p : r.parts) members.push_back(part_members(p));
    const std::uint64_t modulus = std::uint64_t{1} << r.n;
    const std::uint64_t half = modulus >> 1 ? modulus >> 1 : 1;
    std::uint64_t count = 0;
    std::vector<std::size_t> pos(static_cast<std::size_t>(r.k), 0);
    while (true) {
        std::uint64_t sum = 0;
        for (int i = 0; i < r.k; ++i)
            sum += static_cast<std::uint64_t>(
                members[static_cast<std::size_t>(i)][pos[static_cast<std::size_t>(i)]]);
        if (sum % half == 0) ++count;
        int i = r.k - 1;
        while (i >= 0 && ++pos[static_cast<std::size_t>(i)] ==
                             members[static_cast<std::size_t>(i)].size()) {
            pos[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return count;
}

std::uint64_t count_valid_convolution(const Rectangle& r) {
    (void)r.cardinality(); // overflow guard; counts are bounded by it
    const int modulus = 1 << r.n;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(modulus), 0);
    counts[0] = 1;
    for (std::uint64_t part : r.parts) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(modulus), 0);
        for (int v : part_members(part))
            for (int s = 0; s < modulus; ++s)
                next[static_cast<std::size_t>((s + v) % modulus)] +=
                    counts[static_cast<std::size_t>(s)];
        counts = std::move(next);
    }
    const int half = modulus / 2;
    std::uint64_t total = counts[0];
    if (half > 0) total += counts[static_cast<std::size_t>(half)];
    return total;
}

namespace {

bool mono_with_valid(const Rectangle& r) {
    return monochromatic_with_valid(classify_rectangle_sumset(r));
}

MaxRectangleResult exhaustive_max(int n, int k) {
    MaxRectangleResult best;
    best.exhaustive = true;
    const std::uint64_t subsets = (std::uint64_t{1} << (1 << n)) - 1;
    std::vector<std::uint64_t> parts(static_cast<std::size_t>(k), 1);
    while (true) {
        Rectangle r(n, k, parts);
        if (mono_with_valid(r)) {
            const std::uint64_t size = r.cardinality();
            if (size > best.size) {
                best.size = size;
                best.witness = r;
            }
        }
        int i = k - 1;
        while (i >= 0 && parts[static_cast<std::size_t>(i)] == subsets) {
            parts[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++parts[static_cast<std::size_t>(i)];
    }
    return best;
}

MaxRectangleResult hill_climb_max(int n, int k, std::uint64_t seed) {
    MaxRectangleResult best;
    best.exhaustive = false;
    Rng rng(seed);
    const int bits = 1 << n;
    const std::uint64_t full = full_mask(bits);
    constexpr int kRestarts = 64;
    constexpr int kSteps = 4000;
    for (int restart = 0; restart < kRestarts; ++restart) {
        // start from a singleton rectangle holding one valid input
        std::vector<std::uint64_t> parts(static_cast<std::size_t>(k));
        std::uint64_t sum = 0;
        const std::uint64_t half = std::uint64_t{1} << (n - 1);
        for (int i = 0; i < k - 1; ++i) {
            const std::uint64_t v = rng.below(std::uint64_t{1} << n);
            parts[static_cast<std::size_t>(i)] = std::uint64_t{1} << v;
            sum += v;
        }
        const std::uint64_t last = (half - sum % half) % half + (rng.next_bit() ? half : 0);
        parts[static_cast<std::size_t>(k - 1)] = std::uint64_t{1} << last;

        Rectangle current(n, k, parts);
        std::uint64_t current_size = 1;
        for (int step = 0; step < kSteps; ++step) {
            const int part = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
            const int element = static_cast<int>(rng.below(static_cast<std::uint64_t>(bits)));
            std::vector<std::uint64_t> cand = current.parts;
            cand[static_cast<std::size_t>(part)] ^= std::uint64_t{1} << element;
            if ((cand[static_cast<std::size_t>(part)] & full) == 0) continue;
            Rectangle next(n, k, cand);
            if (!mono_with_valid(next)) continue;
            const std::uint64_t size = next.cardinality();
            if (size >= current_size) {
                current = next;
                current_size = size;
            }
        }
        if (current_size > best.size) {
            best.size = current_size;
            best.witness = current;
        }
    }
    return best;
}

} // namespace

MaxRectangleResult max_monochromatic_rectangle(int n, int k, std::uint64_t budget,
                                               std::uint64_t seed) {
    if (n < 1 || n > 6) throw std::invalid_argument("max_monochromatic_rectangle: n in [1,6]");
    if (k < 2) throw std::invalid_argument("max_monochromatic_rectangle: k must be >= 2");
    // candidate count (2^(2^n) - 1)^k, saturating
    long double candidates = 1.0L;
    for (int i = 0; i < k; ++i)
        candidates *= static_cast<long double>((std::uint64_t{1} << (1 << n)) - 1);
    if (candidates <= static_cast<long double>(budget)) return exhaustive_max(n, k);
    return hill_climb_max(n, k, seed);
}

// --- cyclic-group sumsets ---------------------------------------------------------

CyclicSubset::CyclicSubset(int modulus_, std::uint64_t members_)
    : modulus(modulus_), members(members_) {
    if (modulus < 1 || modulus > 64)
        throw std::invalid_argument("CyclicSubset: modulus must be in [1,64]");
    if (members & ~full_mask(modulus))
        throw std::invalid_argument("CyclicSubset: member outside Z_modulus");
}

int CyclicSubset::size() const { return std::popcount(members); }

bool CyclicSubset::contains(int element) const {
    return element >= 0 && element < modulus && (members >> element & 1);
}

CyclicSubset sumset(const CyclicSubset& a, const CyclicSubset& b) {
    if (a.modulus != b.modulus) throw std::invalid_argument("sumset: mismatched moduli");
    std::uint64_t result = 0;
    std::uint64_t rest = a.members;
    while (rest) {
        const int shift = std::countr_zero(rest);
        rest &= rest - 1;
        result |= rotl_mod(b.members, shift, a.modulus);
    }
    return CyclicSubset(a.modulus, result);
}

CyclicSubset stabilizer(const CyclicSubset& s) {
    if (s.members == 0) throw std::invalid_argument("stabilizer: empty set");
    std::uint64_t h = 0;
    for (int shift = 0; shift < s.modulus; ++shift)
        if (rotl_mod(s.members, shift, s.modulus) == s.members) h |= std::uint64_t{1} << shift;
    return CyclicSubset(s.modulus, h);
}

bool verify_kneser(const CyclicSubset& a, const CyclicSubset& b) {
    if (a.members == 0 || b.members == 0)
        throw std::invalid_argument("verify_kneser: sets must be nonempty");
    const CyclicSubset ab = sumset(a, b);
    const CyclicSubset h = stabilizer(ab);
    if (!(sumset(ab, h) == ab)) return false;
    return ab.size() >= sumset(a, h).size() + sumset(b, h).size() - h.size();
}

// --- sumset chains -----------------------------------------------------------------

bool SumsetChain::stabilizers_trivial() const {
    return std::all_of(stabilizers.begin(), stabilizers.end(),
                       [](const CyclicSubset& h) { return h.members == 1; });
}

bool SumsetChain::stepwise_inequality_holds() const {
    for (std::size_t i = 1; i < sums.size(); ++i)
        if (sums[i].size() < sums[i - 1].size() + part_sizes[i - 1] - 1) return false;
    return true;
}

bool SumsetChain::part_sum_bound_holds() const {
    int total = 0;
    for (int s : part_sizes) total += s;
    return total <= (1 << n) - 2 + static_cast<int>(part_sizes.size());
}

SumsetChain sumset_chain(const Rectangle& r) {
    SumsetChain chain;
    chain.n = r.n;
    const int modulus = 1 << r.n;
    CyclicSubset current(modulus, 1); // S_0 = {0}
    chain.sums.push_back(current);
    chain.stabilizers.push_back(stabilizer(current));
    for (std::uint64_t part : r.parts) {
        chain.part_sizes.push_back(std::popcount(part));
        current = sumset(current, CyclicSubset(modulus, part));
        chain.sums.push_back(current);
        chain.stabilizers.push_back(stabilizer(current));
    }
    return chain;
}

} // namespace catcomm
