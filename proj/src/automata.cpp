#include "tsa/automata.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "tsa/error.hpp"

namespace tsa {

std::optional<StateVector> apply_triple(const BfaTriple &t, const StateVector &state) {
    if (!t.pre.subset_of(state)) return std::nullopt;
    return (state | t.enable) - t.disable;
}

BfaTriple combine_effect(const BfaTriple &t, const BfaTriple &effect) {
    BfaTriple out;
    out.enable = (t.enable | effect.enable) - effect.disable;
    out.disable = (t.disable | effect.disable) - effect.enable;
    out.pre = t.pre | (effect.pre - t.enable);
    return out;
}

std::optional<BfaTriple> dtransfer(const ContractMap &contract, MethodId m, const BfaTriple &t) {
    const BfaTriple &effect = contract.entry(m);
    if (effect.pre.intersects(t.disable)) return std::nullopt;
    return combine_effect(t, effect);
}

std::optional<BfaTriple> dtransfer_seq(const ContractMap &contract,
                                       const std::vector<MethodId> &seq, const BfaTriple &t) {
    BfaTriple acc = t;
    for (MethodId m : seq) {
        auto next = dtransfer(contract, m, acc);
        if (!next) return std::nullopt;
        acc = *next;
    }
    return acc;
}

BfaTriple join_triple(const BfaTriple &a, const BfaTriple &b) {
    BfaTriple out;
    out.disable = a.disable | b.disable;
    out.enable = (a.enable & b.enable) - out.disable;
    out.pre = a.pre | b.pre;
    return out;
}

void ExplicitDfa::index_states() {
    m_index.clear();
    for (std::size_t i = 0; i < states.size(); ++i) m_index.emplace(states[i].bits(), i);
}

ExplicitDfa expand_dfa(const ContractMap &contract, std::size_t state_limit) {
    auto violations = check_well_formed(contract);
    if (!violations.empty())
        fail(ErrorKind::well_formedness, contract.class_name + ": " + violations.front());

    const std::uint32_t width = contract.arity();
    ExplicitDfa dfa;
    dfa.class_name = contract.class_name;
    dfa.alphabet = contract.alphabet;

    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::deque<std::size_t> work;

    StateVector initial = MethodSet::single(width, 0);
    dfa.states.push_back(initial);
    seen.emplace(initial.bits(), 0);
    work.push_back(0);

    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop_front();
        if (dfa.delta.size() < (s + 1) * width) dfa.delta.resize((s + 1) * width, -1);
        for (std::uint32_t m = 0; m < width; ++m) {
            auto next = apply_triple(contract.entries[m], dfa.states[s]);
            if (!next) continue;
            auto [it, inserted] = seen.emplace(next->bits(), dfa.states.size());
            if (inserted) {
                if (dfa.states.size() >= state_limit)
                    fail(ErrorKind::state_explosion,
                         contract.class_name + " exceeds " + std::to_string(state_limit) +
                             " states");
                dfa.states.push_back(*next);
                work.push_back(it->second);
            }
            dfa.delta_at(s, m) = static_cast<std::int32_t>(it->second);
        }
    }
    dfa.delta.resize(dfa.states.size() * width, -1);
    dfa.index_states();
    return dfa;
}

std::optional<StateVector> delta_hat(const ExplicitDfa &dfa, const StateVector &from,
                                     const std::vector<MethodId> &seq) {
    auto idx = dfa.state_index(from);
    if (!idx)
        fail(ErrorKind::unknown_state, "state " + from.to_string() + " is not in the automaton");
    std::size_t s = *idx;
    for (MethodId m : seq) {
        if (m.index >= dfa.alphabet.size())
            fail(ErrorKind::width_mismatch, "method index out of range");
        std::int32_t next = dfa.delta_of(s, m.index);
        if (next < 0) return std::nullopt;
        s = static_cast<std::size_t>(next);
    }
    return dfa.states[s];
}

bool accepts(const ExplicitDfa &dfa, const std::vector<MethodId> &seq) {
    std::size_t s = 0;
    for (MethodId m : seq) {
        if (m.index >= dfa.alphabet.size())
            fail(ErrorKind::width_mismatch, "method index out of range");
        std::int32_t next = dfa.delta_of(s, m.index);
        if (next < 0) return false;
        s = static_cast<std::size_t>(next);
    }
    return true;
}

std::string dump_dfa(const ExplicitDfa &dfa) {
    std::string out = "# alphabet: ";
    for (std::size_t i = 0; i < dfa.alphabet.size(); ++i) {
        if (i) out += ',';
        out += dfa.alphabet[i];
    }
    out += '\n';
    std::vector<std::string> lines;
    for (std::size_t s = 0; s < dfa.num_states(); ++s)
        for (std::uint32_t m = 0; m < dfa.alphabet.size(); ++m) {
            std::int32_t next = dfa.delta_of(s, m);
            if (next < 0) continue;
            lines.push_back(dfa.states[s].to_string() + '\t' + dfa.alphabet[m] + '\t' +
                            dfa.states[next].to_string());
        }
    std::sort(lines.begin(), lines.end());
    for (const auto &l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::size_t MinimizedDfa::num_transitions() const {
    std::size_t n = 0;
    for (auto d : delta)
        if (d >= 0) ++n;
    return n;
}

MinimizedDfa minimize_dfa(const ExplicitDfa &dfa) {
    const std::size_t n = dfa.num_states();
    const std::uint32_t k = static_cast<std::uint32_t>(dfa.alphabet.size());
    const std::size_t sink = n; // completion target for undefined moves

    auto target = [&](std::size_t s, std::uint32_t m) -> std::size_t {
        if (s == sink) return sink;
        std::int32_t t = dfa.delta_of(s, m);
        return t < 0 ? sink : static_cast<std::size_t>(t);
    };

    // Hopcroft over the completed automaton; the sink is the only rejecting
    // state, so it seeds the initial split.
    std::vector<std::vector<std::vector<std::size_t>>> rev(
        k, std::vector<std::vector<std::size_t>>(n + 1));
    for (std::size_t s = 0; s <= n; ++s)
        for (std::uint32_t m = 0; m < k; ++m) rev[m][target(s, m)].push_back(s);

    std::vector<std::uint32_t> block_of(n + 1, 0);
    block_of[sink] = 1;
    std::vector<std::vector<std::size_t>> blocks(2);
    for (std::size_t s = 0; s < n; ++s) blocks[0].push_back(s);
    blocks[1].push_back(sink);

    std::deque<std::pair<std::uint32_t, std::uint32_t>> work; // (block, method)
    std::unordered_set<std::uint64_t> queued;
    auto push = [&](std::uint32_t b, std::uint32_t m) {
        std::uint64_t key = (std::uint64_t{b} << 32) | m;
        if (queued.insert(key).second) work.emplace_back(b, m);
    };
    for (std::uint32_t m = 0; m < k; ++m) {
        std::uint32_t smaller = blocks[0].size() <= blocks[1].size() ? 0 : 1;
        push(smaller, m);
    }

    std::vector<std::size_t> touched_count(2, 0);
    std::vector<char> touched_flag;
    while (!work.empty()) {
        auto [splitter, m] = work.front();
        work.pop_front();
        queued.erase((std::uint64_t{splitter} << 32) | m);

        // predecessors of the splitter block under m
        std::vector<std::size_t> pre;
        for (std::size_t t : blocks[splitter])
            for (std::size_t s : rev[m][t]) pre.push_back(s);
        if (pre.empty()) continue;

        touched_count.assign(blocks.size(), 0);
        std::vector<std::uint32_t> touched_blocks;
        std::vector<std::vector<std::size_t>> moved(blocks.size());
        for (std::size_t s : pre) {
            std::uint32_t b = block_of[s];
            if (moved[b].empty()) touched_blocks.push_back(b);
            moved[b].push_back(s);
        }
        for (std::uint32_t b : touched_blocks) {
            if (moved[b].size() == blocks[b].size()) continue; // whole block moves, no split
            // split block b into (kept, moved)
            std::uint32_t nb = static_cast<std::uint32_t>(blocks.size());
            std::vector<std::size_t> stay;
            std::unordered_set<std::size_t> moving(moved[b].begin(), moved[b].end());
            for (std::size_t s : blocks[b])
                if (!moving.count(s)) stay.push_back(s);
            blocks[b] = std::move(stay);
            blocks.push_back(moved[b]);
            for (std::size_t s : blocks[nb]) block_of[s] = nb;
            moved.emplace_back();
            touched_count.push_back(0);
            for (std::uint32_t mm = 0; mm < k; ++mm) {
                std::uint64_t key = (std::uint64_t{b} << 32) | mm;
                if (queued.count(key)) {
                    push(nb, mm);
                } else {
                    std::uint32_t smaller = blocks[b].size() <= blocks[nb].size() ? b : nb;
                    push(smaller, mm);
                }
            }
        }
    }

    // Renumber blocks by BFS from the initial block, dropping the sink block.
    std::uint32_t sink_block = block_of[sink];
    std::vector<std::int32_t> renum(blocks.size(), -1);
    std::deque<std::uint32_t> bfs;
    std::uint32_t next_id = 0;
    auto visit = [&](std::uint32_t b) {
        if (b == sink_block || renum[b] >= 0) return;
        renum[b] = static_cast<std::int32_t>(next_id++);
        bfs.push_back(b);
    };
    visit(block_of[0]);
    MinimizedDfa min;
    min.alphabet = dfa.alphabet;
    std::vector<std::uint32_t> order; // block ids in new order
    while (!bfs.empty()) {
        std::uint32_t b = bfs.front();
        bfs.pop_front();
        order.push_back(b);
        std::size_t repr = blocks[b].front();
        for (std::uint32_t m = 0; m < k; ++m) {
            std::size_t t = target(repr, m);
            if (t != sink) visit(block_of[t]);
        }
    }
    min.num_states = next_id;
    min.initial = static_cast<std::uint32_t>(renum[block_of[0]]);
    min.delta.assign(std::size_t{min.num_states} * k, -1);
    for (std::uint32_t b : order) {
        std::size_t repr = blocks[b].front();
        for (std::uint32_t m = 0; m < k; ++m) {
            std::size_t t = target(repr, m);
            if (t == sink) continue;
            min.delta[std::size_t(renum[b]) * k + m] = renum[block_of[t]];
        }
    }
    min.state_class.assign(n, 0);
    for (std::size_t s = 0; s < n; ++s)
        min.state_class[s] = static_cast<std::uint32_t>(renum[block_of[s]]);
    return min;
}

std::string dump_minimized(const MinimizedDfa &dfa) {
    std::string out = "# alphabet: ";
    for (std::size_t i = 0; i < dfa.alphabet.size(); ++i) {
        if (i) out += ',';
        out += dfa.alphabet[i];
    }
    out += '\n';
    std::vector<std::string> lines;
    for (std::uint32_t s = 0; s < dfa.num_states; ++s)
        for (std::uint32_t m = 0; m < dfa.alphabet.size(); ++m) {
            std::int32_t t = dfa.delta_of(s, m);
            if (t < 0) continue;
            lines.push_back("s" + std::to_string(s) + '\t' + dfa.alphabet[m] + "\ts" +
                            std::to_string(t));
        }
    std::sort(lines.begin(), lines.end());
    for (const auto &l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

namespace {

void check_same_alphabet(const ExplicitDfa &a, const ExplicitDfa &b) {
    if (a.alphabet.size() != b.alphabet.size())
        fail(ErrorKind::alphabet_mismatch, "automata have different alphabet sizes");
    for (std::size_t i = 1; i < a.alphabet.size(); ++i)
        if (a.alphabet[i] != b.alphabet[i])
            fail(ErrorKind::alphabet_mismatch,
                 "alphabets differ at index " + std::to_string(i));
}

} // namespace

bool language_included(const ExplicitDfa &a, const ExplicitDfa &b) {
    check_same_alphabet(a, b);
    const std::uint32_t k = static_cast<std::uint32_t>(a.alphabet.size());
    std::unordered_set<std::uint64_t> seen;
    std::deque<std::pair<std::int32_t, std::int32_t>> work;
    auto push = [&](std::int32_t sa, std::int32_t sb) {
        std::uint64_t key = (std::uint64_t(std::uint32_t(sa)) << 32) | std::uint32_t(sb);
        if (seen.insert(key).second) work.emplace_back(sa, sb);
    };
    push(0, 0);
    while (!work.empty()) {
        auto [sa, sb] = work.front();
        work.pop_front();
        for (std::uint32_t m = 0; m < k; ++m) {
            std::int32_t na = a.delta_of(std::size_t(sa), m);
            if (na < 0) continue; // a rejects every extension
            std::int32_t nb = sb < 0 ? -1 : b.delta_of(std::size_t(sb), m);
            if (nb < 0) return false; // word accepted by a, rejected by b
            push(na, nb);
        }
    }
    return true;
}

ContextCheckResult context_independency_check(const ExplicitDfa &dfa, std::size_t max_len) {
    const std::uint32_t k = static_cast<std::uint32_t>(dfa.alphabet.size());
    const std::size_t n = dfa.num_states();

    // Shortest accepted prefix reaching each state, bounded so that full
    // witnesses (prefix plus two calls) stay within max_len.
    std::size_t bound = max_len >= 2 ? max_len - 2 : 0;
    std::vector<std::int32_t> parent(n, -1), parent_method(n, -1);
    std::vector<std::size_t> depth(n, 0);
    std::vector<char> reached(n, 0);
    std::deque<std::size_t> work;
    reached[0] = 1;
    work.push_back(0);
    std::vector<std::size_t> states_in_bound;
    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop_front();
        states_in_bound.push_back(s);
        if (depth[s] >= bound) continue;
        for (std::uint32_t m = 0; m < k; ++m) {
            std::int32_t t = dfa.delta_of(s, m);
            if (t < 0 || reached[t]) continue;
            reached[t] = 1;
            parent[t] = static_cast<std::int32_t>(s);
            parent_method[t] = static_cast<std::int32_t>(m);
            depth[t] = depth[s] + 1;
            work.push_back(static_cast<std::size_t>(t));
        }
    }

    auto prefix_of = [&](std::size_t s) {
        std::vector<std::string> seq;
        for (std::int32_t cur = static_cast<std::int32_t>(s); parent_method[cur] >= 0;
             cur = parent[cur])
            seq.push_back(dfa.alphabet[parent_method[cur]]);
        std::reverse(seq.begin(), seq.end());
        return seq;
    };

    for (std::uint32_t u = 0; u < k; ++u) {
        for (std::uint32_t v = 0; v < k; ++v) {
            // For each state where u is callable, does v become available?
            std::int32_t enable_witness = -1, disable_witness = -1;
            std::int32_t after_true = -1, after_false = -1;
            for (std::size_t q : states_in_bound) {
                std::int32_t qu = dfa.delta_of(q, u);
                if (qu < 0) continue;
                bool before = dfa.delta_of(q, v) >= 0;
                bool after = dfa.delta_of(std::size_t(qu), v) >= 0;
                if (!before && after && enable_witness < 0)
                    enable_witness = static_cast<std::int32_t>(q);
                if (before && !after && disable_witness < 0)
                    disable_witness = static_cast<std::int32_t>(q);
                if (after && after_true < 0) after_true = static_cast<std::int32_t>(q);
                if (!after && after_false < 0) after_false = static_cast<std::int32_t>(q);
            }
            if (enable_witness >= 0 && after_false >= 0) {
                ContextCounterexample cex;
                cex.item = 1;
                cex.method_u = dfa.alphabet[u];
                cex.method_v = dfa.alphabet[v];
                cex.witness_prefix = prefix_of(std::size_t(enable_witness));
                cex.other_prefix = prefix_of(std::size_t(after_false));
                return ContextCheckResult{false, cex};
            }
            if (disable_witness >= 0 && after_true >= 0) {
                ContextCounterexample cex;
                cex.item = 2;
                cex.method_u = dfa.alphabet[u];
                cex.method_v = dfa.alphabet[v];
                cex.witness_prefix = prefix_of(std::size_t(disable_witness));
                cex.other_prefix = prefix_of(std::size_t(after_true));
                return ContextCheckResult{false, cex};
            }
        }
    }
    return ContextCheckResult{true, std::nullopt};
}

} // namespace tsa
