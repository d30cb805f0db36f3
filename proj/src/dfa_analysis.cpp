#include "tsa/dfa_analysis.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "tsa/error.hpp"

namespace tsa {

namespace {

void insert_state(std::vector<std::uint64_t> &set, std::uint64_t bits) {
    auto it = std::lower_bound(set.begin(), set.end(), bits);
    if (it == set.end() || *it != bits)
        set.insert(it, bits);
}

void union_into(std::vector<std::uint64_t> &set, const std::vector<std::uint64_t> &other) {
    for (std::uint64_t bits : other)
        insert_state(set, bits);
}

// Everything a summary could do when the input state is unknown; used when a
// recovered-from-error run wanders outside the table.
DfaRow any_row(const DfaPathState &entry) {
    DfaRow out;
    out.blocked = MethodSet(entry.rows.begin()->second.blocked.width());
    for (const auto &[bits, row] : entry.rows) {
        union_into(out.states, row.states);
        if (row.warn) {
            out.warn = true;
            out.blocked = out.blocked | row.blocked;
        }
    }
    return out;
}

const DfaRow row_for(const DfaPathState &entry, std::uint64_t bits) {
    auto it = entry.rows.find(bits);
    return it != entry.rows.end() ? it->second : any_row(entry);
}

class DfaMethodAnalyzer {
  public:
    DfaMethodAnalyzer(const Cfg &cfg, const ProgramInfo &info, const DfaSummaryMap &summaries,
                      const std::map<std::string, ExplicitDfa> &dfas)
        : cfg_(cfg), info_(info), dfas_(dfas) {
        node_summary_.resize(cfg.nodes.size(), nullptr);
        for (std::size_t v = 0; v < cfg.nodes.size(); ++v) {
            const CfgNode &node = cfg.nodes[v];
            if (node.kind != CfgNodeKind::call)
                continue;
            auto it = summaries.find(node.callee_class + "::" + node.callee_method);
            if (it == summaries.end())
                fail(ErrorKind::internal, "no dfa summary for " + node.callee_class +
                                              "::" + node.callee_method + " analyzing " +
                                              cfg.key());
            node_summary_[v] = &it->second;
        }
    }

    std::pair<DfaMethodSummary, std::vector<Warning>> run() {
        post_.assign(cfg_.nodes.size(), std::nullopt);
        const int max_sweeps = 1000;
        int sweep = 0;
        for (; sweep < max_sweeps; ++sweep) {
            bool changed = false;
            for (std::uint32_t v : cfg_.rpo) {
                auto pre = pre_state(v);
                if (!pre)
                    continue;
                DfaAbstractState next = transfer(v, std::move(*pre));
                if (!post_[v] || *post_[v] != next) {
                    post_[v] = std::move(next);
                    changed = true;
                }
            }
            if (!changed)
                break;
        }
        if (sweep == max_sweeps)
            fail(ErrorKind::internal, cfg_.key() + ": dfa fixpoint did not converge");

        std::vector<Warning> warnings;
        for (std::uint32_t v : cfg_.rpo) {
            if (cfg_.nodes[v].kind != CfgNodeKind::call)
                continue;
            auto pre = pre_state(v);
            if (pre)
                emit(v, *pre, warnings);
        }

        DfaMethodSummary summary;
        for (const auto &name : cfg_.formals)
            summary.formal_names.push_back(name.name);
        if (post_[cfg_.exit]) {
            for (const auto &[path, ps] : *post_[cfg_.exit]) {
                bool visible = path.root == "this" ||
                               std::find(summary.formal_names.begin(),
                                         summary.formal_names.end(),
                                         path.root) != summary.formal_names.end();
                if (visible)
                    summary.state.emplace(path, ps);
            }
        }
        return {std::move(summary), std::move(warnings)};
    }

  private:
    std::optional<DfaAbstractState> pre_state(std::uint32_t v) const {
        if (v == cfg_.entry)
            return DfaAbstractState{};
        std::optional<DfaAbstractState> acc;
        for (std::uint32_t p : cfg_.nodes[v].preds) {
            if (!post_[p])
                continue;
            if (!acc) {
                acc = *post_[p];
                continue;
            }
            join_into(*acc, *post_[p]);
        }
        return acc;
    }

    static void join_into(DfaAbstractState &acc, const DfaAbstractState &other) {
        for (const auto &[path, ps] : other) {
            auto [it, inserted] = acc.emplace(path, ps);
            if (inserted)
                continue;
            DfaPathState &mine = it->second;
            if (mine.class_name != ps.class_name || mine.concrete != ps.concrete)
                fail(ErrorKind::internal, "dfa join mismatch on '" + path.str() + "'");
            if (mine.concrete) {
                union_into(mine.now, ps.now);
                continue;
            }
            for (const auto &[bits, row] : ps.rows) {
                DfaRow &dst = mine.rows[bits];
                union_into(dst.states, row.states);
                dst.blocked = dst.blocked.width() ? dst.blocked | row.blocked : row.blocked;
                dst.warn = dst.warn || row.warn;
            }
        }
    }

    DfaAbstractState transfer(std::uint32_t v, DfaAbstractState sigma) const {
        const CfgNode &node = cfg_.nodes[v];
        if (node.kind != CfgNodeKind::call)
            return sigma;
        const DfaMethodSummary &sw = *node_summary_[v];
        for (const auto &[ap, entry] : sw.state) {
            AccessPath target = substitute_summary_path(ap, node, sw.formal_names);
            if (entry.concrete) {
                // Constructed inside the callee: the caller-side name is bound
                // to a brand-new object in exactly these states.
                sigma[target] = entry;
                continue;
            }
            auto it = sigma.find(target);
            if (it == sigma.end()) {
                sigma.emplace(target, entry);
                continue;
            }
            DfaPathState &cur = it->second;
            if (cur.class_name != entry.class_name)
                fail(ErrorKind::internal, "dfa call on '" + target.str() + "' mixes classes " +
                                              cur.class_name + " and " + entry.class_name);
            if (cur.concrete) {
                std::vector<std::uint64_t> next;
                for (std::uint64_t bits : cur.now)
                    union_into(next, row_for(entry, bits).states);
                cur.now = std::move(next);
            } else {
                for (auto &[bits, row] : cur.rows) {
                    std::vector<std::uint64_t> next;
                    for (std::uint64_t t : row.states) {
                        const DfaRow callee = row_for(entry, t);
                        union_into(next, callee.states);
                        if (callee.warn) {
                            row.warn = true;
                            row.blocked = row.blocked | callee.blocked;
                        }
                    }
                    row.states = std::move(next);
                }
            }
        }
        return sigma;
    }

    void emit(std::uint32_t v, const DfaAbstractState &sigma, std::vector<Warning> &out) const {
        const CfgNode &node = cfg_.nodes[v];
        if (node.is_ctor)
            return;
        const DfaMethodSummary &sw = *node_summary_[v];
        for (const auto &[ap, entry] : sw.state) {
            if (entry.concrete)
                continue;
            AccessPath target = substitute_summary_path(ap, node, sw.formal_names);
            auto it = sigma.find(target);
            if (it == sigma.end())
                continue;
            const DfaPathState &cur = it->second;

            MethodSet blocked(static_cast<std::uint32_t>(0));
            bool fire = false;
            if (cur.concrete) {
                // The object's whole life is visible here, so a violating
                // state is a real violation.
                for (std::uint64_t bits : cur.now) {
                    const DfaRow row = row_for(entry, bits);
                    if (!row.warn)
                        continue;
                    fire = true;
                    blocked = blocked.width() ? blocked | row.blocked : row.blocked;
                }
            } else {
                // Entry state unknown: report only violations that happen no
                // matter what it is; input-dependent ones are deferred to the
                // call sites through the warn flags set in transfer().
                fire = !cur.rows.empty();
                for (const auto &[bits, row] : cur.rows) {
                    bool fails = false;
                    for (std::uint64_t t : row.states) {
                        const DfaRow callee = row_for(entry, t);
                        if (callee.warn) {
                            fails = true;
                            blocked = blocked.width() ? blocked | callee.blocked : callee.blocked;
                        }
                    }
                    if (!fails) {
                        fire = false;
                        break;
                    }
                }
            }
            if (!fire || !blocked.width())
                continue;
            Warning w;
            w.loc = node.loc;
            w.callee_class = node.callee_class;
            w.callee_method = node.callee_method;
            w.path = target;
            const ContractMap &contract = info_.contracts.at(entry.class_name);
            for (std::uint32_t i : blocked.indices())
                w.required.push_back(contract.method_name(MethodId{i}));
            out.push_back(std::move(w));
        }
    }

    const Cfg &cfg_;
    const ProgramInfo &info_;
    const std::map<std::string, ExplicitDfa> &dfas_;
    std::vector<const DfaMethodSummary *> node_summary_;
    std::vector<std::optional<DfaAbstractState>> post_;
};

} // namespace

DfaAnalysisResult dfa_analyze_program(const ProgramInfo &info, std::size_t state_limit) {
    DfaAnalysisResult result;

    std::map<std::string, ExplicitDfa> dfas;
    for (const auto &[class_name, contract] : info.contracts)
        dfas.emplace(class_name, expand_dfa(contract, state_limit));

    for (const auto &[class_name, contract] : info.contracts) {
        const ExplicitDfa &dfa = dfas.at(class_name);
        const ClassDecl *decl = info.classes.at(class_name);
        const std::uint32_t width = contract.arity();
        for (std::uint32_t m = 0; m < width; ++m) {
            DfaMethodSummary s;
            std::string method = contract.method_name(MethodId{m});
            if (const MethodDecl *md = decl->find_method(method))
                for (const auto &p : md->params)
                    s.formal_names.push_back(p.name);

            DfaPathState ps;
            ps.class_name = class_name;
            const BfaTriple &effect = contract.entry(MethodId{m});
            if (m == 0) {
                ps.concrete = true;
                StateVector initial = MethodSet::single(width, 0);
                ps.now.push_back((*apply_triple(effect, initial)).bits());
            } else {
                for (const auto &state : dfa.states) {
                    DfaRow row;
                    auto next = apply_triple(effect, state);
                    if (next) {
                        row.blocked = MethodSet(width);
                        row.states.push_back(next->bits());
                    } else {
                        row.blocked = effect.pre - state;
                        row.warn = true;
                        StateVector recovered = (state | effect.enable) - effect.disable;
                        row.states.push_back(recovered.bits());
                    }
                    ps.rows.emplace(state.bits(), row);
                }
            }
            s.state.emplace(AccessPath{"this", {}}, std::move(ps));
            result.summaries.emplace(class_name + "::" + method, std::move(s));
        }
    }

    for (const Cfg *cfg : summary_order(info)) {
        auto [summary, warnings] = DfaMethodAnalyzer(*cfg, info, result.summaries, dfas).run();
        result.summaries.emplace(cfg->key(), std::move(summary));
        result.warnings.insert(result.warnings.end(), warnings.begin(), warnings.end());
    }

    std::sort(result.warnings.begin(), result.warnings.end());
    return result;
}

} // namespace tsa
