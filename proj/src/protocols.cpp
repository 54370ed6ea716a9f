#include "catcomm/protocols.hpp"

#include <bit>

#include "catcomm/qsim.hpp"
#include "catcomm/rng.hpp"

namespace catcomm {

namespace {

std::size_t u_index_from_span(std::span<const std::uint64_t> coords) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < coords.size(); ++i)
        idx |= static_cast<std::size_t>(coords[i] & 3) << (2 * i);
    return idx;
}

int ceil_log2(int x) {
    return x <= 1 ? 0 : static_cast<int>(std::bit_width(static_cast<unsigned>(x - 1)));
}

const BroadcastEvent& event_from(const Transcript& t, int party) {
    const BroadcastEvent* e = t.first_from(party);
    if (!e) throw ProtocolBroken("expected an earlier broadcast from party " + std::to_string(party));
    return *e;
}

} // namespace

bool input_is_valid(const ProtocolInput& input) {
    return std::visit([](const auto& v) { return v.valid; }, input);
}

std::vector<std::uint64_t> party_share(const ProtocolInput& input, int party) {
    if (const auto* f = std::get_if<FInput>(&input)) {
        if (party < 1 || party > f->k) throw std::out_of_range("party_share: party index");
        return {f->values[static_cast<std::size_t>(party - 1)]};
    }
    const auto& v = std::get<TripleVector>(input);
    const std::vector<int>* src = nullptr;
    switch (party) {
        case 1: src = &v.xs; break;
        case 2: src = &v.ys; break;
        case 3: src = &v.zs; break;
        default: throw std::out_of_range("party_share: party index");
    }
    return std::vector<std::uint64_t>(src->begin(), src->end());
}

nlohmann::ordered_json input_to_json(const ProtocolInput& input) {
    if (const auto* f = std::get_if<FInput>(&input)) return f->values;
    const auto& v = std::get<TripleVector>(input);
    nlohmann::ordered_json j;
    j["xs"] = v.xs;
    j["ys"] = v.ys;
    j["zs"] = v.zs;
    return j;
}

nlohmann::ordered_json ProtocolRun::to_json() const {
    nlohmann::ordered_json j;
    j["protocol"] = protocol;
    if (const auto* f = std::get_if<FInput>(&input)) {
        j["k"] = f->k;
        j["n"] = f->n;
    } else {
        const auto& v = std::get<TripleVector>(input);
        j["k"] = 3;
        j["n"] = 2;
        j["m"] = v.m();
    }
    j["input"] = input_to_json(input);
    j["seed"] = seed;
    nlohmann::ordered_json events = nlohmann::ordered_json::array();
    for (const auto& e : transcript.events())
        events.push_back({{"party", e.party}, {"bits", e.payload.to_string()}});
    j["transcript"] = std::move(events);
    j["outputs"] = outputs;
    j["total_bits"] = transcript.total_bits();
    return j;
}

ProtocolRun run(const Protocol& protocol, const ProtocolInput& input, std::uint64_t seed,
                RunChecks checks) {
    if (!protocol.accepts(input))
        throw std::invalid_argument("run: input does not match protocol " + protocol.name());
    if (!input_is_valid(input)) throw PromiseViolation("run: input violates the promise");

    const int k = protocol.parties();
    ProtocolRun rec(protocol.name(), input, seed);

    PreparedResources res = protocol.prepare(input, seed);
    if (res.per_party_bits.empty()) res.per_party_bits.resize(static_cast<std::size_t>(k));
    rec.resource_seeds = res.register_seeds;

    std::vector<std::vector<std::uint64_t>> shares(static_cast<std::size_t>(k));
    for (int p = 1; p <= k; ++p) shares[static_cast<std::size_t>(p - 1)] = party_share(input, p);

    auto view_for = [&](int p) {
        return PartyView{p, shares[static_cast<std::size_t>(p - 1)],
                         res.per_party_bits[static_cast<std::size_t>(p - 1)], &rec.transcript};
    };

    for (int speaker : protocol.schedule())
        rec.transcript.append(speaker, protocol.message(view_for(speaker)));

    rec.outputs.resize(static_cast<std::size_t>(k));
    for (int p = 1; p <= k; ++p) rec.outputs[static_cast<std::size_t>(p - 1)] = protocol.output(view_for(p));

    if (checks == RunChecks::Full) {
        for (int p = 2; p <= k; ++p)
            if (rec.outputs[static_cast<std::size_t>(p - 1)] != rec.outputs[0])
                throw ProtocolBroken(protocol.name() + ": party outputs disagree");
        if (rec.outputs[0] != protocol.target(input))
            throw ProtocolBroken(protocol.name() + ": common output differs from target");
    }
    return rec;
}

// --- F-family protocols -------------------------------------------------------

namespace {

class FProtocolBase : public Protocol {
public:
    FProtocolBase(std::string name, int k, int n) : name_(std::move(name)), k_(k), n_(n) {
        if (k < 2) throw std::invalid_argument(name_ + ": k must be >= 2");
        if (n < 1) throw std::invalid_argument(name_ + ": n must be >= 1");
    }

    const std::string& name() const override { return name_; }
    int parties() const override { return k_; }

    std::vector<int> schedule() const override {
        std::vector<int> order(static_cast<std::size_t>(k_));
        for (int p = 1; p <= k_; ++p) order[static_cast<std::size_t>(p - 1)] = p;
        return order;
    }

    bool accepts(const ProtocolInput& input) const override {
        const auto* f = std::get_if<FInput>(&input);
        return f && f->k == k_ && f->n == n_;
    }

    int target(const ProtocolInput& input) const override {
        return f_big(std::get<FInput>(input));
    }

protected:
    std::string name_;
    int k_;
    int n_;
};

// Every party measures its qubit and broadcasts the outcome; the value is the
// parity of all k broadcast bits, so no separate answer bit is needed.
class EntangledF final : public FProtocolBase {
public:
    EntangledF(int k, int n) : FProtocolBase("entangled-f", k, n) {}

    int expected_cost() const override { return k_; }

    PreparedResources prepare(const ProtocolInput& input, std::uint64_t seed) const override {
        const auto& f = std::get<FInput>(input);
        PreparedResources res;
        res.register_seeds = {derive_seed(seed, 0)};
        CatRegister reg = make_cat_state(k_, n_);
        for (int p = 1; p <= k_; ++p)
            reg.apply_phase(p, f.values[static_cast<std::size_t>(p - 1)]);
        reg.apply_hadamard_all();
        const MeasurementRecord m = reg.measure(res.register_seeds[0], k_);
        res.per_party_bits.resize(static_cast<std::size_t>(k_));
        for (int p = 1; p <= k_; ++p)
            res.per_party_bits[static_cast<std::size_t>(p - 1)] = {
                m.bits[static_cast<std::size_t>(p - 1)]};
        return res;
    }

    BitString message(const PartyView& view) const override {
        return BitString(view.own_bits[0], 1);
    }

    int output(const PartyView& view) const override {
        int acc = 0;
        for (const auto& e : view.transcript->events()) acc ^= static_cast<int>(e.payload.value);
        return acc;
    }
};

// Parties 1..k-1 broadcast their whole inputs; party k answers.
class NaiveF final : public FProtocolBase {
public:
    NaiveF(int k, int n) : FProtocolBase("naive-f", k, n) {}

    int expected_cost() const override { return (k_ - 1) * n_ + 1; }

    BitString message(const PartyView& view) const override {
        if (view.party < k_) return BitString(view.own_values[0], n_);
        std::uint64_t sum = view.own_values[0];
        for (const auto& e : view.transcript->events()) sum += e.payload.value;
        const std::uint64_t half = std::uint64_t{1} << (n_ - 1);
        return BitString((sum % (half * 2)) / half, 1);
    }

    int output(const PartyView& view) const override {
        return event_from(*view.transcript, k_).payload.bit(0);
    }
};

// Parties 1..k-1 broadcast only their d most significant bits. The missing
// correction term is non-negative and strictly below 2^(n-1), so rounding the
// partial sum up to the next multiple of 2^(n-1) recovers the exact sum.
class HighBitsF final : public FProtocolBase {
public:
    HighBitsF(int k, int n) : FProtocolBase("highbits-f", k, n), d_(highbits_width(k)) {
        if (n < d_)
            throw std::invalid_argument(
                "highbits-f: needs n >= d = " + std::to_string(d_) + " (use naive-f instead)");
    }

    int expected_cost() const override { return (k_ - 1) * d_ + 1; }

    BitString message(const PartyView& view) const override {
        if (view.party < k_)
            return BitString(view.own_values[0] >> (n_ - d_), d_);
        std::uint64_t partial = view.own_values[0];
        for (const auto& e : view.transcript->events()) partial += e.payload.value << (n_ - d_);
        const std::uint64_t half = std::uint64_t{1} << (n_ - 1);
        const std::uint64_t sum = (partial + half - 1) / half * half;
        return BitString((sum % (half * 2)) / half, 1);
    }

    int output(const PartyView& view) const override {
        return event_from(*view.transcript, k_).payload.bit(0);
    }

private:
    int d_;
};

// --- G_m protocols ------------------------------------------------------------

class GmProtocolBase : public Protocol {
public:
    GmProtocolBase(std::string name, int m) : name_(std::move(name)), m_(m) {
        if (m < 1) throw std::invalid_argument(name_ + ": m must be >= 1");
        if (m > 64) throw std::invalid_argument(name_ + ": m must be <= 64");
    }

    const std::string& name() const override { return name_; }
    int parties() const override { return 3; }
    std::vector<int> schedule() const override { return {2, 3, 1}; } // Bob, Carol, Alice

    bool accepts(const ProtocolInput& input) const override {
        const auto* v = std::get_if<TripleVector>(&input);
        return v && v->m() == m_;
    }

    int target(const ProtocolInput& input) const override {
        return g_m(std::get<TripleVector>(input));
    }

protected:
    // Packs coordinate i of a vector share at payload position i (coordinate 0
    // leftmost), one bit per coordinate via `pick`.
    template <typename Pick>
    BitString pack_bits(std::span<const std::uint64_t> coords, Pick pick) const {
        BitString b;
        for (std::size_t i = 0; i < coords.size(); ++i) b.append_bit(pick(coords[i], i));
        return b;
    }

    std::string name_;
    int m_;
};

// Bob broadcasts both halves of his input, Carol only her high bits; the
// coordinate-wise promise lets Alice reconstruct Carol's low bits herself.
class OneRoundGm final : public GmProtocolBase {
public:
    explicit OneRoundGm(int m) : GmProtocolBase("oneround-gm", m) {
        if (m > 32) throw std::invalid_argument("oneround-gm: Bob's 2m-bit message caps m at 32");
    }

    int expected_cost() const override { return 3 * m_ + 1; }

    BitString message(const PartyView& view) const override {
        if (view.party == 2) { // y_high then y_low
            BitString b;
            for (std::uint64_t y : view.own_values) b.append_bit(static_cast<int>(y >> 1));
            for (std::uint64_t y : view.own_values) b.append_bit(static_cast<int>(y & 1));
            return b;
        }
        if (view.party == 3)
            return pack_bits(view.own_values,
                             [](std::uint64_t z, std::size_t) { return static_cast<int>(z >> 1); });
        // Alice
        const BitString& from_bob = event_from(*view.transcript, 2).payload;
        const BitString& from_carol = event_from(*view.transcript, 3).payload;
        int all_one = 1;
        for (int i = 0; i < m_; ++i) {
            const int x = static_cast<int>(view.own_values[static_cast<std::size_t>(i)]);
            const int y = 2 * from_bob.bit(i) + from_bob.bit(m_ + i);
            const int z = 2 * from_carol.bit(i) + (x + y) % 2;
            if (f_mod4(ModFourTriple(x, y, z)) == 0) all_one = 0;
        }
        return BitString(static_cast<std::uint64_t>(all_one), 1);
    }

    int output(const PartyView& view) const override {
        return event_from(*view.transcript, 1).payload.bit(0);
    }
};

// One 3-party cat register per instance. Bob and Carol broadcast their raw
// measurement bits; Alice combines them with her own bits into the m parity
// values and broadcasts the conjunction.
class EntangledGm final : public GmProtocolBase {
public:
    explicit EntangledGm(int m) : GmProtocolBase("entangled-gm", m) {}

    int expected_cost() const override { return 2 * m_ + 1; }

    PreparedResources prepare(const ProtocolInput& input, std::uint64_t seed) const override {
        const auto& v = std::get<TripleVector>(input);
        PreparedResources res;
        res.per_party_bits.assign(3, std::vector<std::uint8_t>(static_cast<std::size_t>(m_)));
        for (int i = 0; i < m_; ++i) {
            const std::uint64_t reg_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
            res.register_seeds.push_back(reg_seed);
            CatRegister reg = make_cat_state(3, 2);
            reg.apply_phase(1, static_cast<std::uint64_t>(v.xs[static_cast<std::size_t>(i)]));
            reg.apply_phase(2, static_cast<std::uint64_t>(v.ys[static_cast<std::size_t>(i)]));
            reg.apply_phase(3, static_cast<std::uint64_t>(v.zs[static_cast<std::size_t>(i)]));
            reg.apply_hadamard_all();
            const MeasurementRecord rec = reg.measure(reg_seed, 1); // Alice completes parity
            for (int p = 1; p <= 3; ++p)
                res.per_party_bits[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(i)] =
                    rec.bits[static_cast<std::size_t>(p - 1)];
        }
        return res;
    }

    BitString message(const PartyView& view) const override {
        if (view.party == 2 || view.party == 3) {
            BitString b;
            for (std::uint8_t bit : view.own_bits) b.append_bit(bit);
            return b;
        }
        const BitString& from_bob = event_from(*view.transcript, 2).payload;
        const BitString& from_carol = event_from(*view.transcript, 3).payload;
        int all_one = 1;
        for (int i = 0; i < m_; ++i)
            if ((view.own_bits[static_cast<std::size_t>(i)] ^ from_bob.bit(i) ^
                 from_carol.bit(i)) == 0)
                all_one = 0;
        return BitString(static_cast<std::uint64_t>(all_one), 1);
    }

    int output(const PartyView& view) const override {
        return event_from(*view.transcript, 1).payload.bit(0);
    }
};

} // namespace

int highbits_width(int k) {
    if (k < 2) throw std::invalid_argument("highbits_width: k must be >= 2");
    return 1 + ceil_log2(k - 1);
}

std::unique_ptr<Protocol> entangled_f(int k, int n) { return std::make_unique<EntangledF>(k, n); }
std::unique_ptr<Protocol> classical_naive_f(int k, int n) {
    return std::make_unique<NaiveF>(k, n);
}
std::unique_ptr<Protocol> classical_highbits_f(int k, int n) {
    return std::make_unique<HighBitsF>(k, n);
}
std::unique_ptr<Protocol> classical_oneround_gm(int m) { return std::make_unique<OneRoundGm>(m); }
std::unique_ptr<Protocol> entangled_oneround_gm(int m) { return std::make_unique<EntangledGm>(m); }

std::unique_ptr<Protocol> make_protocol(const std::string& name, int k, int n, int m) {
    if (name == "entangled-f") return entangled_f(k, n);
    if (name == "naive-f") return classical_naive_f(k, n);
    if (name == "highbits-f") return classical_highbits_f(k, n);
    if (name == "oneround-gm") return classical_oneround_gm(m);
    if (name == "entangled-gm") return entangled_oneround_gm(m);
    throw std::invalid_argument("unknown protocol '" + name + "'");
}

// --- one-round tables ----------------------------------------------------------

std::size_t u_vector_index(const std::vector<int>& u) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        idx |= static_cast<std::size_t>(u[i] & 3) << (2 * i);
    return idx;
}

std::vector<int> u_vector_from_index(std::size_t idx, int m) {
    std::vector<int> u(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) u[static_cast<std::size_t>(i)] = static_cast<int>((idx >> (2 * i)) & 3);
    return u;
}

bool table_computes_gm(const OneRoundProtocolTable& table) {
    const std::size_t view_count =
        std::size_t{1} << (2 * table.m + table.bob_bits + table.carol_bits);
    if (table.answer.size() != view_count) return false;
    bool ok = true;
    for_each_valid_triple_vector(table.m, [&](const TripleVector& v) {
        if (!ok) return;
        const std::uint32_t bob = table.bob_message(u_vector_index(v.ys));
        const std::uint32_t carol = table.carol_message(u_vector_index(v.zs), bob);
        ok = table.answer_at(u_vector_index(v.xs), bob, carol) == g_m(v);
    });
    return ok;
}

bool complete_answer_rule(OneRoundProtocolTable& t) {
    t.answer.assign(std::size_t{1} << (2 * t.m + t.bob_bits + t.carol_bits), -1);
    bool ok = true;
    for_each_valid_triple_vector(t.m, [&](const TripleVector& v) {
        if (!ok) return;
        const std::uint32_t bob = t.bob_message(u_vector_index(v.ys));
        const std::uint32_t carol = t.carol_message(u_vector_index(v.zs), bob);
        const std::size_t idx = (u_vector_index(v.xs) << (t.bob_bits + t.carol_bits)) |
                                (static_cast<std::size_t>(bob) << t.carol_bits) | carol;
        const std::int8_t value = static_cast<std::int8_t>(g_m(v));
        if (t.answer[idx] == -1)
            t.answer[idx] = value;
        else if (t.answer[idx] != value)
            ok = false;
    });
    return ok;
}

OneRoundProtocolTable reference_oneround_table(int m) {
    if (m < 1 || m > 4)
        throw std::invalid_argument("reference_oneround_table: m must be in [1,4]");
    OneRoundProtocolTable t;
    t.m = m;
    t.bob_bits = 2 * m;
    t.carol_bits = m;
    const std::size_t u_count = std::size_t{1} << (2 * m);
    t.bob_table.resize(u_count);
    for (std::size_t y = 0; y < u_count; ++y) t.bob_table[y] = static_cast<std::uint32_t>(y);
    t.carol_table.assign(u_count << t.bob_bits, 0);
    for (std::size_t z = 0; z < u_count; ++z) {
        std::uint32_t high = 0;
        for (int i = 0; i < m; ++i) high |= static_cast<std::uint32_t>((z >> (2 * i + 1)) & 1) << i;
        for (std::size_t bob = 0; bob < (std::size_t{1} << t.bob_bits); ++bob)
            t.carol_table[(z << t.bob_bits) | bob] = high;
    }
    if (!complete_answer_rule(t))
        throw std::logic_error("reference_oneround_table: view conflict");
    return t;
}

namespace {

class TableProtocol final : public GmProtocolBase {
public:
    explicit TableProtocol(OneRoundProtocolTable table)
        : GmProtocolBase("table-gm", table.m), table_(std::move(table)) {
        if (table_.bob_bits < 1 || table_.carol_bits < 1)
            throw std::invalid_argument("table protocol: both message widths must be >= 1");
        if (table_.answer.empty() && !complete_answer_rule(table_))
            throw std::invalid_argument("table protocol: no consistent answer rule");
    }

    int expected_cost() const override { return table_.bob_bits + table_.carol_bits + 1; }

    BitString message(const PartyView& view) const override {
        if (view.party == 2)
            return BitString(table_.bob_message(u_index_from_span(view.own_values)),
                             table_.bob_bits);
        if (view.party == 3) {
            const std::uint32_t bob =
                static_cast<std::uint32_t>(event_from(*view.transcript, 2).payload.value);
            return BitString(table_.carol_message(u_index_from_span(view.own_values), bob),
                             table_.carol_bits);
        }
        const std::uint32_t bob =
            static_cast<std::uint32_t>(event_from(*view.transcript, 2).payload.value);
        const std::uint32_t carol =
            static_cast<std::uint32_t>(event_from(*view.transcript, 3).payload.value);
        const std::int8_t a = table_.answer_at(u_index_from_span(view.own_values), bob, carol);
        if (a < 0) throw ProtocolBroken("table protocol: view never reached by a valid input");
        return BitString(static_cast<std::uint64_t>(a), 1);
    }

    int output(const PartyView& view) const override {
        return event_from(*view.transcript, 1).payload.bit(0);
    }

private:
    OneRoundProtocolTable table_;
};

} // namespace

std::unique_ptr<Protocol> make_table_protocol(OneRoundProtocolTable table) {
    return std::make_unique<TableProtocol>(std::move(table));
}

} // namespace catcomm
