#include "tsa/analysis.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <tuple>
#include <utility>

#include "tsa/error.hpp"

namespace tsa {

AbstractState join_state(const AbstractState &a, const AbstractState &b) {
    AbstractState out = a;
    for (const auto &[path, ps] : b) {
        auto [it, inserted] = out.emplace(path, ps);
        if (inserted)
            continue;
        if (it->second.class_name != ps.class_name)
            fail(ErrorKind::internal,
                 "join sees '" + path.str() + "' as both " + it->second.class_name + " and " +
                     ps.class_name);
        it->second.triple = join_triple(it->second.triple, ps.triple);
    }
    return out;
}

std::string Warning::str() const {
    std::ostringstream os;
    os << "WARN " << loc.str() << " call to " << callee_class << "." << callee_method << " on "
       << path.str() << ": requires {";
    for (std::size_t i = 0; i < required.size(); ++i) {
        if (i) os << ",";
        os << required[i];
    }
    os << "} but disabled here";
    return os.str();
}

bool Warning::operator==(const Warning &other) const {
    return loc == other.loc && callee_class == other.callee_class &&
           callee_method == other.callee_method && path == other.path &&
           required == other.required;
}

bool Warning::operator<(const Warning &other) const {
    auto key = [](const Warning &w) {
        return std::tie(w.loc.file, w.loc.line, w.loc.col, w.callee_class, w.callee_method);
    };
    if (key(*this) != key(other)) return key(*this) < key(other);
    if (!(path == other.path)) return path < other.path;
    return required < other.required;
}

AccessPath substitute_summary_path(const AccessPath &ap, const CfgNode &node,
                                   const std::vector<std::string> &formal_names) {
    const AccessPath *base = nullptr;
    if (ap.root == "this") {
        base = &node.receiver;
    } else {
        for (std::size_t i = 0; i < formal_names.size(); ++i) {
            if (formal_names[i] == ap.root) {
                base = &node.args[i];
                break;
            }
        }
    }
    if (!base)
        fail(ErrorKind::internal, "summary path '" + ap.str() + "' has no caller-side name");
    AccessPath out = *base;
    out.fields.insert(out.fields.end(), ap.fields.begin(), ap.fields.end());
    return out;
}

namespace {

class MethodAnalyzer {
  public:
    MethodAnalyzer(const Cfg &cfg, const ProgramInfo &info, const SummaryMap &summaries)
        : cfg_(cfg), info_(info) {
        node_summary_.resize(cfg.nodes.size(), nullptr);
        for (std::size_t v = 0; v < cfg.nodes.size(); ++v) {
            const CfgNode &node = cfg.nodes[v];
            if (node.kind != CfgNodeKind::call)
                continue;
            auto it = summaries.find(node.callee_class + "::" + node.callee_method);
            if (it == summaries.end())
                fail(ErrorKind::internal, "no summary for " + node.callee_class +
                                              "::" + node.callee_method + " analyzing " +
                                              cfg.key());
            node_summary_[v] = &it->second;
        }
    }

    MethodAnalysis run() {
        post_.assign(cfg_.nodes.size(), std::nullopt);
        const int max_sweeps = 1000;
        int sweep = 0;
        for (; sweep < max_sweeps; ++sweep) {
            bool changed = false;
            for (std::uint32_t v : cfg_.rpo) {
                auto pre = pre_state(v);
                if (!pre)
                    continue;
                AbstractState next = transfer(v, std::move(*pre));
                if (!post_[v] || *post_[v] != next) {
                    post_[v] = std::move(next);
                    changed = true;
                }
            }
            if (!changed)
                break;
        }
        if (sweep == max_sweeps)
            fail(ErrorKind::internal, cfg_.key() + ": fixpoint did not converge");

        MethodAnalysis out;
        for (std::uint32_t v : cfg_.rpo) {
            if (cfg_.nodes[v].kind != CfgNodeKind::call)
                continue;
            auto pre = pre_state(v);
            if (pre)
                guard(v, *pre, out.warnings);
        }

        for (const auto &name : cfg_.formals)
            out.summary.formal_names.push_back(name.name);
        if (post_[cfg_.exit]) {
            for (const auto &[path, ps] : *post_[cfg_.exit]) {
                bool visible = path.root == "this" ||
                               std::find(out.summary.formal_names.begin(),
                                         out.summary.formal_names.end(),
                                         path.root) != out.summary.formal_names.end();
                if (visible)
                    out.summary.state.emplace(path, ps);
            }
        }
        return out;
    }

  private:
    std::optional<AbstractState> pre_state(std::uint32_t v) const {
        if (v == cfg_.entry)
            return AbstractState{};
        std::optional<AbstractState> acc;
        for (std::uint32_t p : cfg_.nodes[v].preds) {
            if (!post_[p])
                continue;
            acc = acc ? join_state(*acc, *post_[p]) : *post_[p];
        }
        return acc;
    }

    AbstractState transfer(std::uint32_t v, AbstractState sigma) const {
        const CfgNode &node = cfg_.nodes[v];
        if (node.kind != CfgNodeKind::call)
            return sigma;
        const MethodSummary &sw = *node_summary_[v];
        for (const auto &[ap, ps] : sw.state) {
            AccessPath target = substitute_summary_path(ap, node, sw.formal_names);
            if (node.is_ctor) {
                // A declaration binds a brand-new object, so the previous
                // state of the name (e.g. from an earlier loop iteration) is
                // dead and gets overwritten.
                sigma[target] = ps;
                continue;
            }
            auto [it, inserted] = sigma.emplace(target, ps);
            if (inserted)
                continue;
            if (it->second.class_name != ps.class_name)
                fail(ErrorKind::internal, "call on '" + target.str() + "' mixes classes " +
                                              it->second.class_name + " and " + ps.class_name);
            it->second.triple = combine_effect(it->second.triple, ps.triple);
        }
        return sigma;
    }

    void guard(std::uint32_t v, const AbstractState &sigma, std::vector<Warning> &out) const {
        const CfgNode &node = cfg_.nodes[v];
        if (node.is_ctor)
            return;
        const MethodSummary &sw = *node_summary_[v];
        for (const auto &[ap, ps] : sw.state) {
            AccessPath target = substitute_summary_path(ap, node, sw.formal_names);
            auto it = sigma.find(target);
            if (it == sigma.end())
                continue;
            MethodSet blocked = ps.triple.pre & it->second.triple.disable;
            if (blocked.bits() == 0)
                continue;
            Warning w;
            w.loc = node.loc;
            w.callee_class = node.callee_class;
            w.callee_method = node.callee_method;
            w.path = target;
            const ContractMap &contract = info_.contracts.at(ps.class_name);
            for (std::uint32_t i : blocked.indices())
                w.required.push_back(contract.method_name(MethodId{i}));
            out.push_back(std::move(w));
        }
    }

    const Cfg &cfg_;
    const ProgramInfo &info_;
    std::vector<const MethodSummary *> node_summary_;
    std::vector<std::optional<AbstractState>> post_;
};

} // namespace

MethodAnalysis analyze_method(const Cfg &cfg, const ProgramInfo &info,
                              const SummaryMap &summaries) {
    return MethodAnalyzer(cfg, info, summaries).run();
}

// Kahn's algorithm over "caller needs callee summary" edges; leftovers are
// recursive.
std::vector<const Cfg *> summary_order(const ProgramInfo &info) {
    std::map<std::string, std::vector<std::string>> callers;
    std::map<std::string, std::size_t> pending;
    for (const auto &[key, cfg] : info.cfgs) {
        std::size_t deps = 0;
        for (const auto &node : cfg.nodes) {
            if (node.kind != CfgNodeKind::call || info.is_annotated(node.callee_class))
                continue;
            callers[node.callee_class + "::" + node.callee_method].push_back(key);
            ++deps;
        }
        pending[key] = deps;
    }

    std::vector<const Cfg *> order;
    std::vector<std::string> ready;
    for (const auto &[key, deps] : pending)
        if (deps == 0)
            ready.push_back(key);
    while (!ready.empty()) {
        std::string key = ready.back();
        ready.pop_back();
        order.push_back(&info.cfgs.at(key));
        for (const auto &caller : callers[key])
            if (--pending[caller] == 0)
                ready.push_back(caller);
    }

    if (order.size() != info.cfgs.size()) {
        std::string cycle;
        for (const auto &[key, deps] : pending)
            if (deps > 0)
                cycle += (cycle.empty() ? "" : ", ") + key;
        fail(ErrorKind::recursion_unsupported, "recursive calls between {" + cycle + "}");
    }
    return order;
}

AnalysisResult analyze_program(const ProgramInfo &info) {
    AnalysisResult result;

    for (const auto &[class_name, contract] : info.contracts) {
        const ClassDecl *decl = info.classes.at(class_name);
        for (std::uint32_t i = 0; i < contract.arity(); ++i) {
            MethodSummary s;
            std::string method = contract.method_name(MethodId{i});
            if (const MethodDecl *md = decl->find_method(method))
                for (const auto &p : md->params)
                    s.formal_names.push_back(p.name);
            s.state.emplace(AccessPath{"this", {}},
                            PathState{class_name, contract.entry(MethodId{i})});
            result.summaries.emplace(class_name + "::" + method, std::move(s));
        }
    }

    for (const Cfg *cfg : summary_order(info)) {
        MethodAnalysis ma = analyze_method(*cfg, info, result.summaries);
        result.summaries.emplace(cfg->key(), std::move(ma.summary));
        result.warnings.insert(result.warnings.end(), ma.warnings.begin(), ma.warnings.end());
    }

    std::sort(result.warnings.begin(), result.warnings.end());
    return result;
}

} // namespace tsa
