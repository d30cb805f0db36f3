#include "tsa/contracts.hpp"

#include <algorithm>
#include <set>

#include "tsa/error.hpp"

namespace tsa {

namespace {

std::uint32_t resolve_name(const std::string &name, const std::vector<std::string> &alphabet,
                           const SourceLoc &loc) {
    for (std::uint32_t i = 1; i < alphabet.size(); ++i)
        if (alphabet[i] == name) return i;
    if (!alphabet.empty() && alphabet[0] == name)
        fail_at(ErrorKind::unknown_method_name, loc,
                "constructor '" + name + "' cannot appear in an annotation");
    fail_at(ErrorKind::unknown_method_name, loc, "'" + name + "' is not a method of this class");
}

MethodSet resolve_names(const Annotation &a, const std::vector<std::string> &alphabet) {
    MethodSet s(static_cast<std::uint32_t>(alphabet.size()));
    for (const auto &n : a.args) s.set(resolve_name(n, alphabet, a.loc));
    return s;
}

} // namespace

std::pair<MethodSet, MethodSet> desugar(const std::vector<Annotation> &annotations,
                                        const std::vector<std::string> &alphabet) {
    const auto width = static_cast<std::uint32_t>(alphabet.size());
    // Complements never include the constructor: a constructed object cannot
    // be constructed again.
    MethodSet non_ctor = MethodSet::full(width) - MethodSet::single(width, 0);
    MethodSet enable(width), disable(width);
    for (const auto &a : annotations) {
        switch (a.kind) {
        case AnnotationKind::enable:
            enable |= resolve_names(a, alphabet);
            break;
        case AnnotationKind::disable:
            disable |= resolve_names(a, alphabet);
            break;
        case AnnotationKind::enable_only: {
            MethodSet s = resolve_names(a, alphabet);
            enable |= s;
            disable |= non_ctor - s;
            break;
        }
        case AnnotationKind::disable_only: {
            MethodSet s = resolve_names(a, alphabet);
            disable |= s;
            enable |= non_ctor - s;
            break;
        }
        case AnnotationKind::enable_all:
            enable |= non_ctor;
            break;
        case AnnotationKind::disable_all:
            disable |= non_ctor;
            break;
        }
    }
    if (enable.intersects(disable)) {
        SourceLoc loc = annotations.empty() ? SourceLoc{} : annotations.front().loc;
        MethodSet overlap = enable & disable;
        std::string names;
        for (auto i : overlap.indices()) {
            if (!names.empty()) names += ", ";
            names += alphabet[i];
        }
        fail_at(ErrorKind::overlapping_enable_disable, loc,
                "annotations both enable and disable {" + names + "}");
    }
    return {enable, disable};
}

ContractMap build_contract(const ClassDecl &cls) {
    const MethodDecl *ctor = cls.constructor_decl();

    std::vector<std::string> method_names;
    for (const auto &m : cls.methods) {
        if (&m == ctor) continue;
        if (m.name == cls.name)
            fail_at(ErrorKind::spec_invalid, m.loc,
                    "class " + cls.name + " declares more than one constructor");
        if (std::find(method_names.begin(), method_names.end(), m.name) != method_names.end())
            fail_at(ErrorKind::spec_invalid, m.loc,
                    "duplicate method '" + m.name + "' in class " + cls.name);
        method_names.push_back(m.name);
    }
    if (method_names.empty())
        fail_at(ErrorKind::spec_invalid, cls.loc,
                "class " + cls.name + " declares no methods besides the constructor");

    std::sort(method_names.begin(), method_names.end());

    ContractMap contract;
    contract.class_name = cls.name;
    contract.alphabet.push_back(cls.name);
    contract.alphabet.insert(contract.alphabet.end(), method_names.begin(), method_names.end());

    const auto width = static_cast<std::uint32_t>(contract.alphabet.size());
    if (width > MethodSet::max_width)
        fail_at(ErrorKind::too_many_methods, cls.loc,
                "class " + cls.name + " has " + std::to_string(width - 1) + " methods");

    contract.entries.assign(width, empty_triple(width));

    // Methods named in an explicit @Enable/@EnableOnly argument list of another
    // method are guarded: something must enable them before they can run.
    // Sugar complements (EnableAll, DisableOnly's enable part) reset
    // availability and do not guard.
    MethodSet guarded(width);
    for (const auto &m : cls.methods) {
        if (&m == ctor) continue;
        for (const auto &a : m.annotations) {
            if (a.kind != AnnotationKind::enable && a.kind != AnnotationKind::enable_only)
                continue;
            for (const auto &n : a.args) {
                if (n == m.name) continue; // self-enable keeps, not guards
                for (std::uint32_t i = 1; i < width; ++i)
                    if (contract.alphabet[i] == n) guarded.set(i);
            }
        }
    }

    for (const auto &m : cls.methods) {
        if (&m == ctor) continue;
        auto id = contract.find(m.name);
        auto [enable, disable] = desugar(m.annotations, contract.alphabet);
        contract.entries[id->index] =
            BfaTriple{enable, disable, MethodSet::single(width, id->index)};
    }

    MethodSet ctor_pre = MethodSet::single(width, 0);
    if (ctor != nullptr && !ctor->annotations.empty()) {
        auto [enable, disable] = desugar(ctor->annotations, contract.alphabet);
        disable.set(0); // construction is a one-shot event
        if ((enable | disable) != MethodSet::full(width))
            fail_at(ErrorKind::well_formedness, ctor->loc,
                    "constructor annotations of " + cls.name +
                        " must mention every method exactly once");
        contract.entries[0] = BfaTriple{enable, disable, ctor_pre};
    } else {
        MethodSet enable = guarded.complement() - ctor_pre;
        contract.entries[0] = BfaTriple{enable, enable.complement(), ctor_pre};
    }

    return contract;
}

std::vector<std::string> check_well_formed(const ContractMap &contract) {
    std::vector<std::string> violations;
    const auto width = contract.arity();
    if (contract.entries.size() != width) {
        violations.push_back("contract has " + std::to_string(contract.entries.size()) +
                             " entries for an alphabet of " + std::to_string(width));
        return violations;
    }
    for (std::uint32_t i = 0; i < width; ++i) {
        const auto &t = contract.entries[i];
        if (t.enable.width() != width || t.disable.width() != width || t.pre.width() != width) {
            violations.push_back("entry " + contract.alphabet[i] + " has mismatched width");
            continue;
        }
        if (t.enable.intersects(t.disable))
            violations.push_back("entry " + contract.alphabet[i] +
                                 " enables and disables the same method");
    }
    if (width > 0 && contract.entries[0].enable.width() == width) {
        const auto &c = contract.entries[0];
        if ((c.enable | c.disable) != MethodSet::full(width))
            violations.push_back("constructor entry does not cover the whole alphabet");
    }
    return violations;
}

SubsumeResult subsumes(const ContractMap &sub, const ContractMap &super,
                       SubsumePolarity polarity) {
    if (sub.arity() != super.arity())
        fail(ErrorKind::alphabet_mismatch, "contracts have different alphabet sizes");
    for (std::uint32_t i = 1; i < sub.arity(); ++i)
        if (sub.alphabet[i] != super.alphabet[i])
            fail(ErrorKind::alphabet_mismatch, "method lists differ at index " +
                                                   std::to_string(i) + ": " + sub.alphabet[i] +
                                                   " vs " + super.alphabet[i]);

    const ContractMap &wide = polarity == SubsumePolarity::sub_enables_more ? sub : super;
    const ContractMap &narrow = polarity == SubsumePolarity::sub_enables_more ? super : sub;
    for (std::uint32_t i = 0; i < sub.arity(); ++i) {
        const BfaTriple &w = wide.entries[i];
        const BfaTriple &n = narrow.entries[i];
        bool ok = n.enable.subset_of(w.enable) && w.disable.subset_of(n.disable) &&
                  w.pre.subset_of(n.pre);
        if (!ok) return SubsumeResult{false, sub.alphabet[i]};
    }
    return SubsumeResult{true, ""};
}

std::size_t count_annotation_terms(const ClassDecl &cls) {
    std::size_t n = 0;
    for (const auto &m : cls.methods) n += m.annotations.size();
    return n;
}

} // namespace tsa
