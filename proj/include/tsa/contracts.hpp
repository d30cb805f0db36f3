#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsa/ast.hpp"
#include "tsa/method_set.hpp"

namespace tsa {

// Per-method contract effect: calling the method enables E, disables D, and
// requires every method in P to be currently enabled. E and D are disjoint.
struct BfaTriple {
    MethodSet enable;
    MethodSet disable;
    MethodSet pre;

    std::uint32_t width() const { return enable.width(); }

    friend bool operator==(const BfaTriple &a, const BfaTriple &b) {
        return a.enable == b.enable && a.disable == b.disable && a.pre == b.pre;
    }
    friend bool operator!=(const BfaTriple &a, const BfaTriple &b) { return !(a == b); }
};

inline BfaTriple empty_triple(std::uint32_t width) {
    return BfaTriple{MethodSet(width), MethodSet(width), MethodSet(width)};
}

// Contract of one annotated class: the ordered alphabet (constructor first,
// then method names sorted lexicographically) and one triple per entry.
struct ContractMap {
    std::string class_name;
    std::vector<std::string> alphabet;
    std::vector<BfaTriple> entries;

    std::uint32_t arity() const { return static_cast<std::uint32_t>(alphabet.size()); }

    std::optional<MethodId> find(const std::string &method) const {
        for (std::uint32_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == method) return MethodId{i};
        return std::nullopt;
    }

    const BfaTriple &entry(MethodId m) const { return entries[m.index]; }
    const std::string &method_name(MethodId m) const { return alphabet[m.index]; }

    std::vector<std::string> method_names(const MethodSet &s) const {
        std::vector<std::string> out;
        for (auto i : s.indices()) out.push_back(alphabet[i]);
        return out;
    }
};

// Expands one method's annotation list into its ⟨E, D⟩ pair over the given
// alphabet. EnableOnly/DisableOnly/EnableAll/DisableAll complements range over
// the non-constructor methods; the constructor cannot be named.
std::pair<MethodSet, MethodSet> desugar(const std::vector<Annotation> &annotations,
                                        const std::vector<std::string> &alphabet);

// Builds the contract of an annotated class. The constructor occupies index 0;
// when it carries no annotations, it enables exactly the methods that no other
// method's explicit @Enable/@EnableOnly argument list names, and disables the
// rest of the alphabet (itself included).
ContractMap build_contract(const ClassDecl &cls);

// Violation descriptions; empty means well-formed. Checks that every entry has
// disjoint E/D and that the constructor entry partitions the alphabet.
std::vector<std::string> check_well_formed(const ContractMap &contract);

// Direction of the per-method set conditions used by subsumes(). The shipped
// default is the one validated against explicit language inclusion: a subclass
// contract must accept every call sequence the superclass accepts, so the sub
// entry may enable more, disable less, and require less.
enum class SubsumePolarity {
    sub_enables_more,   // E_super ⊆ E_sub, D_sub ⊆ D_super, P_sub ⊆ P_super
    super_enables_more, // mirror image; kept for the oracle comparison tests
};

struct SubsumeResult {
    bool subsumes = false;
    std::string failing_method; // first method violating the condition, if any
};

SubsumeResult subsumes(const ContractMap &sub, const ContractMap &super,
                       SubsumePolarity polarity = SubsumePolarity::sub_enables_more);

// Atomic annotation terms in a class declaration (each @... occurrence).
std::size_t count_annotation_terms(const ClassDecl &cls);

} // namespace tsa
