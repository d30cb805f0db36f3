#include "tsa/cfg.hpp"

#include <algorithm>

#include "tsa/error.hpp"

namespace tsa {

namespace {

class CfgBuilder {
  public:
    CfgBuilder(const std::string &owner_class, const std::string &name,
               const std::vector<Param> &formals,
               const std::map<std::string, const ClassDecl *> &classes)
        : classes_(classes) {
        cfg_.owner_class = owner_class;
        cfg_.name = name;
        cfg_.formals = formals;
        scopes_.emplace_back();
    }

    Cfg build(const Block &body, const SourceLoc &loc) {
        for (const auto &p : cfg_.formals) {
            require_class(p.class_name, loc);
            declare(p.name, p.class_name, loc);
        }
        cfg_.entry = add_node(CfgNodeKind::entry, loc);
        std::uint32_t last = walk_block(body, cfg_.entry);
        cfg_.exit = add_node(CfgNodeKind::exit_node, loc);
        add_edge(last, cfg_.exit);
        compute_rpo();
        return std::move(cfg_);
    }

  private:
    std::uint32_t add_node(CfgNodeKind kind, const SourceLoc &loc) {
        CfgNode n;
        n.kind = kind;
        n.loc = loc;
        cfg_.nodes.push_back(std::move(n));
        return static_cast<std::uint32_t>(cfg_.nodes.size() - 1);
    }

    void add_edge(std::uint32_t from, std::uint32_t to) {
        auto &succs = cfg_.nodes[from].succs;
        if (std::find(succs.begin(), succs.end(), to) != succs.end())
            return;
        succs.push_back(to);
        cfg_.nodes[to].preds.push_back(from);
    }

    const ClassDecl *require_class(const std::string &name, const SourceLoc &loc) const {
        auto it = classes_.find(name);
        if (it == classes_.end())
            fail_at(ErrorKind::name_resolution, loc, "unknown class '" + name + "'");
        return it->second;
    }

    void declare(const std::string &name, const std::string &class_name, const SourceLoc &loc) {
        if (name == "this")
            fail_at(ErrorKind::name_resolution, loc, "'this' cannot be declared");
        for (const auto &scope : scopes_)
            if (scope.count(name))
                fail_at(ErrorKind::name_resolution, loc, "redeclaration of '" + name + "'");
        scopes_.back().emplace(name, class_name);
    }

    std::string lookup(const std::string &name, const SourceLoc &loc) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end())
                return found->second;
        }
        fail_at(ErrorKind::name_resolution, loc, "use of undeclared identifier '" + name + "'");
    }

    // Class of the object a path denotes, walking field declarations.
    std::string path_class(const AccessPath &path, const SourceLoc &loc) const {
        std::string cls;
        if (path.root == "this") {
            if (cfg_.owner_class.empty())
                fail_at(ErrorKind::name_resolution, loc, "'this' used outside of a class");
            cls = cfg_.owner_class;
        } else {
            cls = lookup(path.root, loc);
        }
        for (const auto &field : path.fields) {
            const ClassDecl *decl = require_class(cls, loc);
            const FieldDecl *fd = decl->find_field(field);
            if (!fd)
                fail_at(ErrorKind::name_resolution, loc,
                        "class '" + cls + "' has no field '" + field + "'");
            cls = fd->class_name;
        }
        return cls;
    }

    std::uint32_t walk_block(const Block &block, std::uint32_t pred) {
        scopes_.emplace_back();
        std::uint32_t last = pred;
        for (const auto &stmt : block)
            last = walk_stmt(stmt, last);
        scopes_.pop_back();
        return last;
    }

    std::uint32_t walk_stmt(const Stmt &stmt, std::uint32_t pred) {
        switch (stmt.kind) {
        case StmtKind::var_decl: {
            require_class(stmt.decl_class, stmt.loc);
            declare(stmt.decl_name, stmt.decl_class, stmt.loc);
            std::uint32_t n = add_node(CfgNodeKind::call, stmt.loc);
            CfgNode &node = cfg_.nodes[n];
            node.callee_class = stmt.decl_class;
            node.callee_method = stmt.decl_class;
            node.is_ctor = true;
            node.receiver = AccessPath{stmt.decl_name, {}};
            add_edge(pred, n);
            return n;
        }
        case StmtKind::call:
            return walk_call(stmt, pred);
        case StmtKind::if_stmt: {
            std::uint32_t split = add_node(CfgNodeKind::branch_split, stmt.loc);
            add_edge(pred, split);
            std::uint32_t then_last = walk_block(stmt.then_block, split);
            std::uint32_t merge = add_node(CfgNodeKind::merge, stmt.loc);
            add_edge(then_last, merge);
            if (stmt.has_else) {
                std::uint32_t else_last = walk_block(stmt.else_block, split);
                add_edge(else_last, merge);
            } else {
                add_edge(split, merge);
            }
            return merge;
        }
        case StmtKind::loop_stmt: {
            std::uint32_t head = add_node(CfgNodeKind::loop_head, stmt.loc);
            add_edge(pred, head);
            std::uint32_t body_last = walk_block(stmt.then_block, head);
            add_edge(body_last, head);
            return head;
        }
        }
        fail(ErrorKind::internal, "unhandled statement kind");
    }

    std::uint32_t walk_call(const Stmt &stmt, std::uint32_t pred) {
        std::string recv_class = path_class(stmt.receiver, stmt.loc);
        const ClassDecl *decl = require_class(recv_class, stmt.loc);
        if (stmt.method == recv_class)
            fail_at(ErrorKind::name_resolution, stmt.loc,
                    "constructor of '" + recv_class + "' cannot be called directly");
        const MethodDecl *method = decl->find_method(stmt.method);
        if (!method)
            fail_at(ErrorKind::unknown_method_name, stmt.loc,
                    "class '" + recv_class + "' has no method '" + stmt.method + "'");
        if (method->params.size() != stmt.args.size())
            fail_at(ErrorKind::type_error, stmt.loc,
                    "call to " + recv_class + "." + stmt.method + " expects " +
                        std::to_string(method->params.size()) + " argument(s), got " +
                        std::to_string(stmt.args.size()));

        std::uint32_t n = add_node(CfgNodeKind::call, stmt.loc);
        CfgNode &node = cfg_.nodes[n];
        node.callee_class = recv_class;
        node.callee_method = stmt.method;
        node.receiver = stmt.receiver;
        for (std::size_t i = 0; i < stmt.args.size(); ++i) {
            std::string arg_class = path_class(stmt.args[i], stmt.loc);
            if (arg_class != method->params[i].class_name)
                fail_at(ErrorKind::type_error, stmt.loc,
                        "argument " + std::to_string(i + 1) + " of " + recv_class + "." +
                            stmt.method + " expects class '" + method->params[i].class_name +
                            "', got '" + arg_class + "'");
            node.args.push_back(stmt.args[i]);
            node.arg_classes.push_back(arg_class);
        }
        add_edge(pred, n);
        return n;
    }

    // Iterative depth-first postorder; long straight-line bodies would blow
    // the stack with a recursive walk.
    void compute_rpo() {
        std::vector<bool> visited(cfg_.nodes.size(), false);
        std::vector<std::uint32_t> post;
        std::vector<std::pair<std::uint32_t, std::size_t>> stack;
        stack.emplace_back(cfg_.entry, 0);
        visited[cfg_.entry] = true;
        while (!stack.empty()) {
            auto &[node, idx] = stack.back();
            const auto &succs = cfg_.nodes[node].succs;
            if (idx < succs.size()) {
                std::uint32_t next = succs[idx++];
                if (!visited[next]) {
                    visited[next] = true;
                    stack.emplace_back(next, 0);
                }
            } else {
                post.push_back(node);
                stack.pop_back();
            }
        }
        cfg_.rpo.assign(post.rbegin(), post.rend());
    }

    const std::map<std::string, const ClassDecl *> &classes_;
    Cfg cfg_;
    std::vector<std::map<std::string, std::string>> scopes_;
};

} // namespace

Cfg build_cfg(const Block &body, const std::string &owner_class, const std::string &name,
              const std::vector<Param> &formals,
              const std::map<std::string, const ClassDecl *> &classes, const SourceLoc &loc) {
    CfgBuilder builder(owner_class, name, formals, classes);
    return builder.build(body, loc);
}

Cfg build_synthetic_ctor_cfg(const ClassDecl &cls) {
    Cfg cfg;
    cfg.owner_class = cls.name;
    cfg.name = cls.name;
    cfg.entry = 0;

    CfgNode entry;
    entry.kind = CfgNodeKind::entry;
    entry.loc = cls.loc;
    cfg.nodes.push_back(entry);

    std::uint32_t last = cfg.entry;
    for (const auto &field : cls.fields) {
        CfgNode n;
        n.kind = CfgNodeKind::call;
        n.loc = field.loc;
        n.callee_class = field.class_name;
        n.callee_method = field.class_name;
        n.is_ctor = true;
        n.receiver = AccessPath{"this", {field.name}};
        cfg.nodes.push_back(n);
        std::uint32_t id = static_cast<std::uint32_t>(cfg.nodes.size() - 1);
        cfg.nodes[last].succs.push_back(id);
        cfg.nodes[id].preds.push_back(last);
        last = id;
    }

    CfgNode exit;
    exit.kind = CfgNodeKind::exit_node;
    exit.loc = cls.loc;
    cfg.nodes.push_back(exit);
    cfg.exit = static_cast<std::uint32_t>(cfg.nodes.size() - 1);
    cfg.nodes[last].succs.push_back(cfg.exit);
    cfg.nodes[cfg.exit].preds.push_back(last);

    for (std::uint32_t i = 0; i < cfg.nodes.size(); ++i)
        cfg.rpo.push_back(i);
    return cfg;
}

} // namespace tsa
