#include <array>
#include <cstring>

#include "catcomm/bounds.hpp"

namespace catcomm {

namespace {

struct ValidTriple {
    std::uint32_t x, y, z, f;
};

// The 32 valid single instances with their target values.
std::array<ValidTriple, 32> valid_triples() {
    std::array<ValidTriple, 32> out{};
    std::size_t at = 0;
    for (std::uint32_t x = 0; x < 4; ++x)
        for (std::uint32_t y = 0; y < 4; ++y)
            for (std::uint32_t z = 0; z < 4; ++z)
                if ((x + y + z) % 2 == 0) out[at++] = {x, y, z, ((x + y + z) % 4) / 2};
    return out;
}

OneRoundProtocolTable materialize(int s_b, int s_c, std::uint32_t bob_packed,
                                  std::uint32_t carol_packed) {
    OneRoundProtocolTable t;
    t.m = 1;
    t.bob_bits = s_b;
    t.carol_bits = s_c;
    const std::uint32_t mask_b = (std::uint32_t{1} << s_b) - 1;
    const std::uint32_t mask_c = (std::uint32_t{1} << s_c) - 1;
    t.bob_table.resize(4);
    for (std::uint32_t y = 0; y < 4; ++y) t.bob_table[y] = (bob_packed >> (s_b * y)) & mask_b;
    t.carol_table.resize(std::size_t{4} << s_b);
    for (std::uint32_t e = 0; e < (4u << s_b); ++e)
        t.carol_table[e] = (carol_packed >> (s_c * e)) & mask_c;
    if (!complete_answer_rule(t))
        throw std::logic_error("search witness lost consistency on materialization");
    return t;
}

} // namespace

nlohmann::ordered_json OneRoundSearchResult::to_json() const {
    nlohmann::ordered_json j;
    j["m"] = m;
    j["budget"] = total_budget_bits;
    j["feasible"] = feasible;
    j["candidates_checked"] = candidates_checked;
    j["feasible_count"] = feasible_count;
    if (feasible) {
        nlohmann::ordered_json samples = nlohmann::ordered_json::array();
        const std::size_t shown = std::min<std::size_t>(witnesses.size(), 3);
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& w = witnesses[i];
            samples.push_back({{"s_b", w.bob_bits},
                               {"s_c", w.carol_bits},
                               {"bob_table", w.bob_table},
                               {"carol_table", w.carol_table}});
        }
        j["witness_tables"] = std::move(samples);
    }
    return j;
}

OneRoundSearchResult search_oneround_gm(int m, int total_budget_bits, std::size_t witness_cap) {
    if (m != 1)
        throw std::invalid_argument("search_oneround_gm: only m = 1 fits the search budget");
    if (total_budget_bits < 1)
        throw std::invalid_argument(
            "search_oneround_gm: the answer bit alone needs a budget of 1");
    if (total_budget_bits > 4)
        throw BudgetExceeded("search_oneround_gm: budgets above 4 bits are out of reach");

    OneRoundSearchResult result;
    result.m = m;
    result.total_budget_bits = total_budget_bits;

    const auto triples = valid_triples();

    // Alice's view table, epoch-marked so candidates skip the reset.
    std::array<std::uint32_t, 64> view_epoch{};
    std::array<std::int8_t, 64> view_value{};
    std::uint32_t epoch = 0;

    for (int s_b = 0; s_b <= total_budget_bits - 1; ++s_b) {
        const int s_c = total_budget_bits - 1 - s_b;
        const std::uint32_t mask_b = (std::uint32_t{1} << s_b) - 1;
        const std::uint32_t mask_c = (std::uint32_t{1} << s_c) - 1;
        const std::uint64_t bob_count = std::uint64_t{1} << (4 * s_b);
        const std::uint64_t carol_count = std::uint64_t{1} << ((4 << s_b) * s_c);

        for (std::uint64_t bob = 0; bob < bob_count; ++bob) {
            const std::uint32_t bob_packed = static_cast<std::uint32_t>(bob);
            std::array<std::uint32_t, 4> bob_msg{};
            for (std::uint32_t y = 0; y < 4; ++y) bob_msg[y] = (bob_packed >> (s_b * y)) & mask_b;

            for (std::uint64_t carol = 0; carol < carol_count; ++carol) {
                const std::uint32_t carol_packed = static_cast<std::uint32_t>(carol);
                ++result.candidates_checked;
                ++epoch;
                bool feasible = true;
                for (const auto& t : triples) {
                    const std::uint32_t b_msg = bob_msg[t.y];
                    const std::uint32_t entry = (t.z << s_b) | b_msg;
                    const std::uint32_t c_msg =
                        (carol_packed >> (s_c * entry)) & mask_c;
                    const std::uint32_t view =
                        (t.x << (s_b + s_c)) | (b_msg << s_c) | c_msg;
                    if (view_epoch[view] != epoch) {
                        view_epoch[view] = epoch;
                        view_value[view] = static_cast<std::int8_t>(t.f);
                    } else if (view_value[view] != static_cast<std::int8_t>(t.f)) {
                        feasible = false;
                        break;
                    }
                }
                if (!feasible) continue;
                ++result.feasible_count;
                result.feasible = true;
                if (result.witnesses.size() < witness_cap) {
                    result.witnesses.push_back(materialize(s_b, s_c, bob_packed, carol_packed));
                    if (!result.witness) result.witness = result.witnesses.front();
                } else {
                    result.witnesses_complete = false;
                }
            }
        }
    }
    return result;
}

namespace {

// U^m index from separate high/low bit masks.
std::size_t compose_index(std::uint32_t high, std::uint32_t low, int m) {
    std::size_t idx = 0;
    for (int i = 0; i < m; ++i) {
        const std::size_t u = 2 * ((high >> i) & 1) + ((low >> i) & 1);
        idx |= u << (2 * i);
    }
    return idx;
}

} // namespace

bool distinguishability_check(const OneRoundProtocolTable& table) {
    const int m = table.m;
    if (m < 1 || m > 3) throw BudgetExceeded("distinguishability_check: m must be in [1,3]");
    if (!table_computes_gm(table))
        throw PreconditionViolation("distinguishability_check: table does not compute g_m");

    const std::uint32_t mask_count = std::uint32_t{1} << m;

    // (i) same y_low, different y_high => Bob's messages differ
    for (std::uint32_t low = 0; low < mask_count; ++low)
        for (std::uint32_t h1 = 0; h1 < mask_count; ++h1)
            for (std::uint32_t h2 = h1 + 1; h2 < mask_count; ++h2)
                if (table.bob_message(compose_index(h1, low, m)) ==
                    table.bob_message(compose_index(h2, low, m)))
                    return false;

    // (ii) fixed y; the z values sharing y's low bits must get distinct Carol
    // messages when their high halves differ
    for (std::uint32_t yh = 0; yh < mask_count; ++yh)
        for (std::uint32_t yl = 0; yl < mask_count; ++yl) {
            const std::uint32_t bob = table.bob_message(compose_index(yh, yl, m));
            for (std::uint32_t z1 = 0; z1 < mask_count; ++z1)
                for (std::uint32_t z2 = z1 + 1; z2 < mask_count; ++z2)
                    if (table.carol_message(compose_index(z1, yl, m), bob) ==
                        table.carol_message(compose_index(z2, yl, m), bob))
                        return false;
        }

    // (iii) different y_low => Bob's or Carol's message differs, whatever the
    // high halves of y, y', z, z'
    for (std::uint32_t yl1 = 0; yl1 < mask_count; ++yl1)
        for (std::uint32_t yl2 = 0; yl2 < mask_count; ++yl2) {
            if (yl1 == yl2) continue;
            for (std::uint32_t yh1 = 0; yh1 < mask_count; ++yh1)
                for (std::uint32_t yh2 = 0; yh2 < mask_count; ++yh2) {
                    const std::uint32_t bob1 = table.bob_message(compose_index(yh1, yl1, m));
                    const std::uint32_t bob2 = table.bob_message(compose_index(yh2, yl2, m));
                    if (bob1 != bob2) continue;
                    for (std::uint32_t zh1 = 0; zh1 < mask_count; ++zh1)
                        for (std::uint32_t zh2 = 0; zh2 < mask_count; ++zh2)
                            if (table.carol_message(compose_index(zh1, yl1, m), bob1) ==
                                table.carol_message(compose_index(zh2, yl2, m), bob2))
                                return false;
                }
        }

    return true;
}

} // namespace catcomm
