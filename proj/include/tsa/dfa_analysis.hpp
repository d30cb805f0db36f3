#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsa/analysis.hpp"
#include "tsa/automata.hpp"
#include "tsa/resolve.hpp"

namespace tsa {

// One row of a relational method summary: everything that can happen when the
// object enters the body in a given automaton state. `states` are bit
// patterns of possible exit states, `warn` marks inputs that violate a
// contract somewhere inside, `blocked` the methods that were required but
// unavailable on such runs.
struct DfaRow {
    std::vector<std::uint64_t> states;
    MethodSet blocked;
    bool warn = false;

    bool operator==(const DfaRow &other) const {
        return states == other.states && blocked == other.blocked && warn == other.warn;
    }
};

// Tracking for one object: either the exact set of automaton states it can be
// in (objects constructed in the analyzed body) or a transfer table indexed
// by the unknown entry state (objects reaching the body from outside).
struct DfaPathState {
    std::string class_name;
    bool concrete = false;
    std::vector<std::uint64_t> now;       // concrete mode
    std::map<std::uint64_t, DfaRow> rows; // relational mode

    bool operator==(const DfaPathState &other) const {
        return class_name == other.class_name && concrete == other.concrete &&
               now == other.now && rows == other.rows;
    }
};

using DfaAbstractState = std::map<AccessPath, DfaPathState>;

struct DfaMethodSummary {
    std::vector<std::string> formal_names;
    DfaAbstractState state;
};

using DfaSummaryMap = std::map<std::string, DfaMethodSummary>;

struct DfaAnalysisResult {
    std::vector<Warning> warnings; // sorted exactly like analyze_program's
    DfaSummaryMap summaries;
};

// Baseline checker over explicitly expanded automata: same traversal and
// summary discipline as analyze_program, but the domain tracks automaton
// state sets instead of effect triples. Summary application costs one table
// lookup per possible state.
DfaAnalysisResult dfa_analyze_program(const ProgramInfo &info,
                                      std::size_t state_limit = default_state_limit);

} // namespace tsa
