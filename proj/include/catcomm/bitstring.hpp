#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace catcomm {

// Fixed-width bit string, big-endian: bit 0 is the most significant and comes
// first in the textual form. Broadcast payloads and message-table entries are
// at most 64 bits wide.
struct BitString {
    std::uint64_t value = 0;
    int width = 0;

    BitString() = default;

    BitString(std::uint64_t v, int w) : value(v), width(w) {
        if (w < 0 || w > 64) throw std::invalid_argument("BitString: width out of range");
        if (w < 64 && v >> w) throw std::invalid_argument("BitString: value wider than width");
    }

    int bit(int pos) const {
        if (pos < 0 || pos >= width) throw std::out_of_range("BitString: bit position");
        return static_cast<int>(value >> (width - 1 - pos)) & 1;
    }

    BitString& append_bit(int b) {
        if (width >= 64) throw std::invalid_argument("BitString: overflow");
        value = (value << 1) | static_cast<std::uint64_t>(b & 1);
        ++width;
        return *this;
    }

    std::string to_string() const {
        std::string s(static_cast<std::size_t>(width), '0');
        for (int i = 0; i < width; ++i)
            if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    static BitString parse(const std::string& s) {
        BitString b;
        for (char c : s) {
            if (c != '0' && c != '1') throw std::invalid_argument("BitString: bad character");
            b.append_bit(c - '0');
        }
        return b;
    }

    friend bool operator==(const BitString& a, const BitString& b) = default;
};

} // namespace catcomm
