#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsa/contracts.hpp"
#include "tsa/method_set.hpp"

namespace tsa {

inline constexpr std::size_t default_state_limit = std::size_t{1} << 22;

// δ for a single method: defined iff the precondition holds, then flips the
// enabled set.
std::optional<StateVector> apply_triple(const BfaTriple &t, const StateVector &state);

// Sequential composition of two effects, ignoring preconditions. Requirements
// the first effect does not already enable are passed through to the caller.
BfaTriple combine_effect(const BfaTriple &t, const BfaTriple &effect);

// Sequential composition of contract effects. Folding a call sequence from the
// empty triple yields one triple whose application reproduces the whole run.
std::optional<BfaTriple> dtransfer(const ContractMap &contract, MethodId m, const BfaTriple &t);
std::optional<BfaTriple> dtransfer_seq(const ContractMap &contract,
                                       const std::vector<MethodId> &seq, const BfaTriple &t);

// Join of two effects covering both control-flow paths: keeps what both
// enable, accumulates what either disables or requires.
BfaTriple join_triple(const BfaTriple &a, const BfaTriple &b);

// Explicitly expanded contract automaton. States are enabled-method vectors in
// BFS discovery order (state 0 is the constructor-only initial state); the
// transition table stores -1 for undefined moves. Every state is accepting.
struct ExplicitDfa {
    std::string class_name;
    std::vector<std::string> alphabet;
    std::vector<StateVector> states;
    std::vector<std::int32_t> delta; // states.size() x alphabet.size()

    std::size_t num_states() const { return states.size(); }

    std::int32_t &delta_at(std::size_t state, std::uint32_t method) {
        return delta[state * alphabet.size() + method];
    }
    std::int32_t delta_of(std::size_t state, std::uint32_t method) const {
        return delta[state * alphabet.size() + method];
    }

    std::optional<std::size_t> state_index(const StateVector &b) const {
        auto it = m_index.find(b.bits());
        if (it == m_index.end()) return std::nullopt;
        return it->second;
    }

    void index_states();

  private:
    std::unordered_map<std::uint64_t, std::size_t> m_index;
};

ExplicitDfa expand_dfa(const ContractMap &contract, std::size_t state_limit = default_state_limit);

// Runs a call sequence from an existing state (which must belong to the
// automaton) or from the initial state.
std::optional<StateVector> delta_hat(const ExplicitDfa &dfa, const StateVector &from,
                                     const std::vector<MethodId> &seq);
bool accepts(const ExplicitDfa &dfa, const std::vector<MethodId> &seq);

// Transition dump: "# alphabet: ..." header, then one sorted
// "bits<TAB>method<TAB>bits" line per transition.
std::string dump_dfa(const ExplicitDfa &dfa);

// Result of Hopcroft minimization. The automaton is completed with a rejecting
// sink before refinement and the sink class is dropped again afterwards, so
// states count only accepting behavior.
struct MinimizedDfa {
    std::vector<std::string> alphabet;
    std::uint32_t num_states = 0;
    std::uint32_t initial = 0;
    std::vector<std::int32_t> delta; // num_states x alphabet.size(), -1 undefined
    std::vector<std::uint32_t> state_class; // original state -> minimized state

    std::int32_t delta_of(std::size_t state, std::uint32_t method) const {
        return delta[state * alphabet.size() + method];
    }
    std::size_t num_transitions() const;
};

MinimizedDfa minimize_dfa(const ExplicitDfa &dfa);
std::string dump_minimized(const MinimizedDfa &dfa);

// L(a) ⊆ L(b) via product construction over sink-completed automata.
bool language_included(const ExplicitDfa &a, const ExplicitDfa &b);

// Checks that enabling and disabling effects of every method are independent
// of the call history: if some accepted prefix shows method u making v
// (un)available, then u must do so after every accepted prefix. Witness
// sequences are bounded by max_len.
struct ContextCounterexample {
    int item = 0; // 1 = enables somewhere but not everywhere, 2 = dually for disables
    std::string method_u;
    std::string method_v;
    std::vector<std::string> witness_prefix;  // run where u flips v's availability
    std::vector<std::string> other_prefix;    // run where the flip does not happen
};

struct ContextCheckResult {
    bool ok = true;
    std::optional<ContextCounterexample> counterexample;
};

ContextCheckResult context_independency_check(const ExplicitDfa &dfa, std::size_t max_len);

} // namespace tsa
