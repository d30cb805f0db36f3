#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "tsa/error.hpp"

namespace tsa {

// Index into a class alphabet. Index 0 is always the constructor.
struct MethodId {
    std::uint32_t index = 0;

    friend bool operator==(MethodId a, MethodId b) { return a.index == b.index; }
    friend bool operator!=(MethodId a, MethodId b) { return a.index != b.index; }
    friend bool operator<(MethodId a, MethodId b) { return a.index < b.index; }
};

// Fixed-width set of methods, one bit per alphabet index. Width is the
// alphabet size of the owning class; all binary operations require equal
// widths. Classes are capped at 64 methods so a set always fits one word.
class MethodSet {
  public:
    static constexpr std::uint32_t max_width = 64;

    MethodSet() = default;

    explicit MethodSet(std::uint32_t width) : m_width(width) {
        if (width > max_width)
            fail(ErrorKind::too_many_methods,
                 "alphabet has " + std::to_string(width) + " entries, limit is " +
                     std::to_string(max_width));
    }

    MethodSet(std::uint32_t width, std::initializer_list<std::uint32_t> indices)
        : MethodSet(width) {
        for (auto i : indices) set(i);
    }

    static MethodSet full(std::uint32_t width) {
        MethodSet s(width);
        s.m_bits = s.mask();
        return s;
    }

    static MethodSet single(std::uint32_t width, std::uint32_t index) {
        MethodSet s(width);
        s.set(index);
        return s;
    }

    std::uint32_t width() const { return m_width; }
    bool empty() const { return m_bits == 0; }
    std::uint32_t count() const { return static_cast<std::uint32_t>(__builtin_popcountll(m_bits)); }

    bool test(std::uint32_t i) const {
        check_index(i);
        return (m_bits >> i) & 1u;
    }
    bool test(MethodId m) const { return test(m.index); }

    void set(std::uint32_t i) {
        check_index(i);
        m_bits |= std::uint64_t{1} << i;
    }
    void reset(std::uint32_t i) {
        check_index(i);
        m_bits &= ~(std::uint64_t{1} << i);
    }

    bool subset_of(const MethodSet &other) const {
        check_width(other);
        return (m_bits & ~other.m_bits) == 0;
    }

    bool intersects(const MethodSet &other) const {
        check_width(other);
        return (m_bits & other.m_bits) != 0;
    }

    MethodSet operator|(const MethodSet &o) const {
        check_width(o);
        MethodSet r(m_width);
        r.m_bits = m_bits | o.m_bits;
        return r;
    }
    MethodSet operator&(const MethodSet &o) const {
        check_width(o);
        MethodSet r(m_width);
        r.m_bits = m_bits & o.m_bits;
        return r;
    }
    // set difference
    MethodSet operator-(const MethodSet &o) const {
        check_width(o);
        MethodSet r(m_width);
        r.m_bits = m_bits & ~o.m_bits;
        return r;
    }
    MethodSet complement() const {
        MethodSet r(m_width);
        r.m_bits = ~m_bits & mask();
        return r;
    }

    MethodSet &operator|=(const MethodSet &o) { return *this = *this | o; }
    MethodSet &operator&=(const MethodSet &o) { return *this = *this & o; }
    MethodSet &operator-=(const MethodSet &o) { return *this = *this - o; }

    friend bool operator==(const MethodSet &a, const MethodSet &b) {
        return a.m_width == b.m_width && a.m_bits == b.m_bits;
    }
    friend bool operator!=(const MethodSet &a, const MethodSet &b) { return !(a == b); }
    friend bool operator<(const MethodSet &a, const MethodSet &b) {
        if (a.m_width != b.m_width) return a.m_width < b.m_width;
        return a.m_bits < b.m_bits;
    }

    std::uint64_t bits() const { return m_bits; }

    std::vector<std::uint32_t> indices() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < m_width; ++i)
            if ((m_bits >> i) & 1u) out.push_back(i);
        return out;
    }

    // "0"/"1" characters, index 0 leftmost.
    std::string to_string() const {
        std::string s(m_width, '0');
        for (std::uint32_t i = 0; i < m_width; ++i)
            if ((m_bits >> i) & 1u) s[i] = '1';
        return s;
    }

  private:
    std::uint64_t mask() const {
        return m_width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m_width) - 1;
    }
    void check_index(std::uint32_t i) const {
        if (i >= m_width)
            fail(ErrorKind::width_mismatch,
                 "index " + std::to_string(i) + " out of range for width " +
                     std::to_string(m_width));
    }
    void check_width(const MethodSet &o) const {
        if (m_width != o.m_width)
            fail(ErrorKind::width_mismatch, "operands have widths " + std::to_string(m_width) +
                                                " and " + std::to_string(o.m_width));
    }

    std::uint64_t m_bits = 0;
    std::uint32_t m_width = 0;
};

// A DFA state of the expanded contract automaton is the set of currently
// enabled methods.
using StateVector = MethodSet;

} // namespace tsa
