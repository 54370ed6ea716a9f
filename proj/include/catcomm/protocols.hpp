#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "catcomm/bitstring.hpp"
#include "catcomm/core.hpp"
#include "catcomm/errors.hpp"

namespace catcomm {

// Broadcast-protocol engine. A protocol is a fixed speaking schedule plus
// per-party message and output rules; the engine owns the transcript and the
// cost accounting, and hands each rule only what that party can see: its own
// input share, its own measured bits, and the transcript so far. Parties are
// numbered 1..k throughout (G_m protocols: Alice=1, Bob=2, Carol=3).

struct BroadcastEvent {
    int party = 0; // in [1, k]
    BitString payload;

    friend bool operator==(const BroadcastEvent&, const BroadcastEvent&) = default;
};

class Transcript {
public:
    void append(int party, BitString payload) {
        if (payload.width < 1) throw ProtocolBroken("empty broadcast payload");
        total_bits_ += payload.width;
        events_.push_back({party, payload});
    }

    const std::vector<BroadcastEvent>& events() const { return events_; }
    int total_bits() const { return total_bits_; }

    // First event spoken by `party`, or nullptr.
    const BroadcastEvent* first_from(int party) const {
        for (const auto& e : events_)
            if (e.party == party) return &e;
        return nullptr;
    }

private:
    std::vector<BroadcastEvent> events_;
    int total_bits_ = 0;
};

using ProtocolInput = std::variant<FInput, TripleVector>;

bool input_is_valid(const ProtocolInput& input);
// The values party p holds: {x_p} for an FInput; the party's m coordinates
// for a TripleVector (Alice=1 holds xs, Bob=2 ys, Carol=3 zs).
std::vector<std::uint64_t> party_share(const ProtocolInput& input, int party);
nlohmann::ordered_json input_to_json(const ProtocolInput& input);

struct PartyView {
    int party = 0;
    std::span<const std::uint64_t> own_values;
    std::span<const std::uint8_t> own_bits; // this party's measured bits
    const Transcript* transcript = nullptr; // prefix for messages, full for outputs
};

// Per-party private bits produced from the shared entangled resource before
// any communication. Classical protocols leave everything empty.
struct PreparedResources {
    std::vector<std::vector<std::uint8_t>> per_party_bits;
    std::vector<std::uint64_t> register_seeds;
};

class Protocol {
public:
    virtual ~Protocol() = default;

    virtual const std::string& name() const = 0;
    virtual int parties() const = 0;
    virtual std::vector<int> schedule() const = 0;
    virtual bool accepts(const ProtocolInput& input) const = 0;
    virtual int target(const ProtocolInput& input) const = 0;
    virtual int expected_cost() const = 0;

    virtual PreparedResources prepare(const ProtocolInput& input, std::uint64_t seed) const {
        (void)input;
        (void)seed;
        return {};
    }

    virtual BitString message(const PartyView& view) const = 0;
    virtual int output(const PartyView& view) const = 0;
};

struct ProtocolRun {
    std::string protocol;
    ProtocolInput input;
    std::uint64_t seed = 0;
    Transcript transcript;
    std::vector<int> outputs; // one per party
    std::vector<std::uint64_t> resource_seeds;

    ProtocolRun(std::string protocol_, ProtocolInput input_, std::uint64_t seed_)
        : protocol(std::move(protocol_)), input(std::move(input_)), seed(seed_) {}

    nlohmann::ordered_json to_json() const;
};

enum class RunChecks { Full, Skip };

// Executes the schedule and collects outputs. In Full mode the engine raises
// ProtocolBroken unless all parties agree and the common output equals the
// protocol's target function.
ProtocolRun run(const Protocol& protocol, const ProtocolInput& input, std::uint64_t seed,
                RunChecks checks = RunChecks::Full);

// The five bundled protocols.
std::unique_ptr<Protocol> entangled_f(int k, int n);
std::unique_ptr<Protocol> classical_naive_f(int k, int n);
std::unique_ptr<Protocol> classical_highbits_f(int k, int n);
std::unique_ptr<Protocol> classical_oneround_gm(int m);
std::unique_ptr<Protocol> entangled_oneround_gm(int m);

// Message width d = 1 + ceil(log2(k-1)) used by the high-bits protocol;
// it needs n >= d to be applicable.
int highbits_width(int k);

// CLI-facing factory; name is one of entangled-f, naive-f, highbits-f,
// oneround-gm, entangled-gm.
std::unique_ptr<Protocol> make_protocol(const std::string& name, int k, int n, int m);

// --- one-round G_m protocols as data -----------------------------------------
//
// Normal form: Bob speaks first knowing only y, Carol second knowing z and
// Bob's message, Alice answers last. Message tables are dense over U^m
// (mixed-radix index, coordinate 0 least significant); the answer table maps
// Alice's whole view to a bit, -1 where no valid input reaches the view.

struct OneRoundProtocolTable {
    int m = 1;
    int bob_bits = 0;   // s_B
    int carol_bits = 0; // s_C
    std::vector<std::uint32_t> bob_table;   // size 4^m
    std::vector<std::uint32_t> carol_table; // size 4^m * 2^s_B, index (z_idx << s_B) | bob_msg
    std::vector<std::int8_t> answer;        // size 4^m * 2^(s_B+s_C)

    std::uint32_t bob_message(std::size_t y_idx) const { return bob_table[y_idx]; }
    std::uint32_t carol_message(std::size_t z_idx, std::uint32_t bob_msg) const {
        return carol_table[(z_idx << bob_bits) | bob_msg];
    }
    std::int8_t answer_at(std::size_t x_idx, std::uint32_t bob_msg,
                          std::uint32_t carol_msg) const {
        return answer[(x_idx << (bob_bits + carol_bits)) |
                      (static_cast<std::size_t>(bob_msg) << carol_bits) | carol_msg];
    }
};

std::size_t u_vector_index(const std::vector<int>& u);
std::vector<int> u_vector_from_index(std::size_t idx, int m);

// True iff the table's answer equals g_m on every valid input.
bool table_computes_gm(const OneRoundProtocolTable& table);

// Rebuilds the answer table from a scan of all valid inputs. Returns false
// iff two valid inputs with different g_m values reach the same view of
// Alice, i.e. no consistent answer rule exists for these message tables.
bool complete_answer_rule(OneRoundProtocolTable& table);

// The straightforward 3m+1-bit protocol: Bob sends his whole input, Carol her
// m high bits, Alice answers.
OneRoundProtocolTable reference_oneround_table(int m);

// Runs a table through the engine (requires both message widths >= 1).
std::unique_ptr<Protocol> make_table_protocol(OneRoundProtocolTable table);

} // namespace catcomm
