#include "catcomm/core.hpp"

#include <algorithm>
#include <sstream>

#include "catcomm/rng.hpp"

namespace catcomm {

namespace {

void check_u(int v, const char* who) {
    if (v < 0 || v > 3) throw std::out_of_range(std::string(who) + ": coordinate outside {0,1,2,3}");
}

// 2^(n-1), the promise modulus.
std::uint64_t half_modulus(int n) { return std::uint64_t{1} << (n - 1); }

void check_params(int k, int n) {
    if (k < 2) throw std::invalid_argument("party count k must be >= 2");
    if (n < 1) throw std::invalid_argument("bits per input n must be >= 1");
    if (n > 62 || static_cast<std::uint64_t>(k) >= (std::uint64_t{1} << (63 - n)))
        throw std::invalid_argument("k*2^n must stay below 2^63");
}

} // namespace

ModFourTriple::ModFourTriple(int x_, int y_, int z_) : x(x_), y(y_), z(z_) {
    check_u(x, "ModFourTriple");
    check_u(y, "ModFourTriple");
    check_u(z, "ModFourTriple");
    valid = (x + y + z) % 2 == 0;
}

bool is_valid_triple(const ModFourTriple& t) { return t.valid; }

int f_mod4(const ModFourTriple& t) {
    if (!t.valid) throw PromiseViolation("f_mod4: (x+y+z) mod 2 != 0");
    return ((t.x + t.y + t.z) % 4) / 2;
}

int unique_completion(int y, int z) {
    check_u(y, "unique_completion");
    check_u(z, "unique_completion");
    int found = -1;
    for (int x = 0; x < 4; ++x) {
        ModFourTriple t(x, y, z);
        if (t.valid && f_mod4(t) == 1) {
            if (found >= 0)
                throw std::logic_error("unique_completion: multiple candidates");
            found = x;
        }
    }
    if (found < 0) throw std::logic_error("unique_completion: no candidate");
    return found;
}

TripleVector::TripleVector(std::vector<int> xs_, std::vector<int> ys_, std::vector<int> zs_)
    : xs(std::move(xs_)), ys(std::move(ys_)), zs(std::move(zs_)) {
    if (xs.empty() || xs.size() != ys.size() || xs.size() != zs.size())
        throw std::invalid_argument("TripleVector: sequences must share a positive length");
    valid = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        check_u(xs[i], "TripleVector");
        check_u(ys[i], "TripleVector");
        check_u(zs[i], "TripleVector");
        if ((xs[i] + ys[i] + zs[i]) % 2 != 0) valid = false;
    }
}

int g_m(const TripleVector& v) {
    if (!v.valid) throw PromiseViolation("g_m: coordinate-wise promise violated");
    for (int i = 0; i < v.m(); ++i)
        if (f_mod4(ModFourTriple(v.xs[i], v.ys[i], v.zs[i])) == 0) return 0;
    return 1;
}

TripleVector sample_valid_triple_vector(int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_valid_triple_vector: m must be >= 1");
    Rng rng(seed);
    std::vector<int> xs(m), ys(m), zs(m);
    for (int i = 0; i < m; ++i) {
        xs[i] = static_cast<int>(rng.below(4));
        ys[i] = static_cast<int>(rng.below(4));
        zs[i] = 2 * rng.next_bit() + (xs[i] + ys[i]) % 2;
    }
    return TripleVector(std::move(xs), std::move(ys), std::move(zs));
}

void for_each_valid_triple_vector(int m, const std::function<void(const TripleVector&)>& fn,
                                  std::uint64_t budget) {
    if (m < 1) throw std::invalid_argument("for_each_valid_triple_vector: m must be >= 1");
    if (m > 12 || (std::uint64_t{1} << (5 * m)) > budget)
        throw BudgetExceeded("for_each_valid_triple_vector: 32^m exceeds budget");
    // 5 free bits per coordinate: x (2), y (2), high bit of z (1).
    const std::uint64_t total = std::uint64_t{1} << (5 * m);
    std::vector<int> xs(m), ys(m), zs(m);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (int i = m - 1; i >= 0; --i) {
            int zh = static_cast<int>(c & 1);
            int y = static_cast<int>((c >> 1) & 3);
            int x = static_cast<int>((c >> 3) & 3);
            c >>= 5;
            xs[i] = x;
            ys[i] = y;
            zs[i] = 2 * zh + (x + y) % 2;
        }
        fn(TripleVector(xs, ys, zs));
    }
}

HighLowSplit split_high_low(const std::vector<int>& u_vector) {
    if (u_vector.empty() || u_vector.size() > 64)
        throw std::invalid_argument("split_high_low: length must be in [1,64]");
    HighLowSplit s;
    s.m = static_cast<int>(u_vector.size());
    for (int i = 0; i < s.m; ++i) {
        check_u(u_vector[static_cast<std::size_t>(i)], "split_high_low");
        const int u = u_vector[static_cast<std::size_t>(i)];
        s.high |= static_cast<std::uint64_t>(u / 2) << i;
        s.low |= static_cast<std::uint64_t>(u % 2) << i;
    }
    return s;
}

std::vector<int> join_high_low(const HighLowSplit& s) {
    if (s.m < 1 || s.m > 64) throw std::invalid_argument("join_high_low: bad length");
    std::vector<int> u(static_cast<std::size_t>(s.m));
    for (int i = 0; i < s.m; ++i)
        u[static_cast<std::size_t>(i)] =
            2 * static_cast<int>((s.high >> i) & 1) + static_cast<int>((s.low >> i) & 1);
    return u;
}

FInput::FInput(int k_, int n_, std::vector<std::uint64_t> values_)
    : k(k_), n(n_), values(std::move(values_)) {
    check_params(k, n);
    if (values.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("FInput: need exactly k values");
    const std::uint64_t limit = std::uint64_t{1} << n;
    std::uint64_t sum = 0;
    for (std::uint64_t v : values) {
        if (v >= limit) throw std::out_of_range("FInput: value outside [0, 2^n-1]");
        sum += v;
    }
    valid = sum % half_modulus(n) == 0;
}

std::string FInput::to_text() const {
    std::ostringstream os;
    os << "k=" << k << " n=" << n << " xs=[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ",";
        os << values[i];
    }
    os << "]";
    return os.str();
}

FInput FInput::from_text(const std::string& text) {
    int k = 0, n = 0;
    std::vector<std::uint64_t> values;
    std::istringstream is(text);
    std::string tok;
    bool have_k = false, have_n = false, have_xs = false;
    while (is >> tok) {
        if (tok.rfind("k=", 0) == 0) {
            k = std::stoi(tok.substr(2));
            have_k = true;
        } else if (tok.rfind("n=", 0) == 0) {
            n = std::stoi(tok.substr(2));
            have_n = true;
        } else if (tok.rfind("xs=[", 0) == 0 && tok.back() == ']') {
            std::string body = tok.substr(4, tok.size() - 5);
            std::istringstream vs(body);
            std::string item;
            while (std::getline(vs, item, ','))
                if (!item.empty()) values.push_back(std::stoull(item));
            have_xs = true;
        } else {
            throw std::invalid_argument("FInput::from_text: unexpected token '" + tok + "'");
        }
    }
    if (!have_k || !have_n || !have_xs)
        throw std::invalid_argument("FInput::from_text: expected 'k=K n=N xs=[a,b,...]'");
    return FInput(k, n, std::move(values));
}

int f_big(const FInput& input) {
    if (!input.valid) throw PromiseViolation("f_big: sum not divisible by 2^(n-1)");
    std::uint64_t sum = 0;
    for (std::uint64_t v : input.values) sum += v;
    return static_cast<int>((sum % (std::uint64_t{1} << input.n)) / half_modulus(input.n));
}

std::uint64_t valid_input_count(int k, int n) {
    check_params(k, n);
    const int bits = n * (k - 1) + 1;
    if (bits >= 64) throw BudgetExceeded("valid_input_count: count does not fit 64 bits");
    return std::uint64_t{1} << bits;
}

void for_each_valid_input(int k, int n, const std::function<void(const FInput&)>& fn,
                          std::uint64_t budget) {
    check_params(k, n);
    if (static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k) >= 64 ||
        (std::uint64_t{1} << (n * k)) > budget)
        throw BudgetExceeded("for_each_valid_input: 2^(nk) exceeds budget");
    const std::uint64_t limit = std::uint64_t{1} << n;
    const std::uint64_t half = half_modulus(n);
    std::vector<std::uint64_t> values(static_cast<std::size_t>(k), 0);
    // Odometer over the k-1 free values; the last value has two completions.
    while (true) {
        std::uint64_t prefix_sum = 0;
        for (int i = 0; i < k - 1; ++i) prefix_sum += values[static_cast<std::size_t>(i)];
        const std::uint64_t low = (half - prefix_sum % half) % half;
        values[static_cast<std::size_t>(k - 1)] = low;
        fn(FInput(k, n, values));
        values[static_cast<std::size_t>(k - 1)] = low + half;
        fn(FInput(k, n, values));
        int pos = k - 2;
        while (pos >= 0 && values[static_cast<std::size_t>(pos)] == limit - 1) {
            values[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++values[static_cast<std::size_t>(pos)];
    }
}

FInput sample_valid_input(int k, int n, std::uint64_t seed) {
    check_params(k, n);
    Rng rng(seed);
    const std::uint64_t limit = std::uint64_t{1} << n;
    const std::uint64_t half = half_modulus(n);
    std::vector<std::uint64_t> values(static_cast<std::size_t>(k));
    std::uint64_t sum = 0;
    for (int i = 0; i < k - 1; ++i) {
        values[static_cast<std::size_t>(i)] = rng.below(limit);
        sum += values[static_cast<std::size_t>(i)];
    }
    const std::uint64_t low = (half - sum % half) % half;
    values[static_cast<std::size_t>(k - 1)] =
        low + (rng.next_bit() ? half : 0);
    return FInput(k, n, std::move(values));
}

} // namespace catcomm
