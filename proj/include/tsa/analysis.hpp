#pragma once

#include <map>
#include <string>
#include <vector>

#include "tsa/automata.hpp"
#include "tsa/resolve.hpp"

namespace tsa {

// Cumulative effect of the statements seen so far on one object, together
// with the contract class the effect is expressed in.
struct PathState {
    std::string class_name;
    BfaTriple triple;

    bool operator==(const PathState &other) const {
        return class_name == other.class_name && triple == other.triple;
    }
};

using AbstractState = std::map<AccessPath, PathState>;

// Branch join: entries present on both sides are joined, the rest copied.
AbstractState join_state(const AbstractState &a, const AbstractState &b);

struct Warning {
    SourceLoc loc;
    std::string callee_class;
    std::string callee_method;
    AccessPath path;
    std::vector<std::string> required;

    std::string str() const;
    bool operator==(const Warning &other) const;
    bool operator<(const Warning &other) const;
};

// Exit-node state of a body, restricted to paths the caller can see (rooted
// at "this" or at a formal), keyed by the names call sites substitute.
struct MethodSummary {
    std::vector<std::string> formal_names;
    AbstractState state;
};

struct MethodAnalysis {
    MethodSummary summary;
    std::vector<Warning> warnings;
};

using SummaryMap = std::map<std::string, MethodSummary>;

// Rebases a summary path onto a call site: "this" becomes the receiver, a
// formal becomes its actual argument.
AccessPath substitute_summary_path(const AccessPath &ap, const CfgNode &node,
                                   const std::vector<std::string> &formal_names);

// Bodies ordered so that every callee precedes its callers. Rejects recursive
// call chains.
std::vector<const Cfg *> summary_order(const ProgramInfo &info);

// Fixpoint over one flow graph. Summaries of everything the body calls must
// already be present (keyed "Class::method").
MethodAnalysis analyze_method(const Cfg &cfg, const ProgramInfo &info, const SummaryMap &summaries);

struct AnalysisResult {
    std::vector<Warning> warnings; // sorted by location, callee, path
    SummaryMap summaries;
};

// Whole-program pass: summaries bottom-up over the call graph, then every
// body's warnings collected. Rejects recursive call chains.
AnalysisResult analyze_program(const ProgramInfo &info);

} // namespace tsa
