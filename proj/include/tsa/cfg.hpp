#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsa/ast.hpp"

namespace tsa {

enum class CfgNodeKind { entry, call, branch_split, merge, loop_head, exit_node };

struct CfgNode {
    CfgNodeKind kind;
    SourceLoc loc;

    // call payload; constructor calls use callee_method == callee_class
    std::string callee_class;
    std::string callee_method;
    bool is_ctor = false;
    AccessPath receiver;
    std::vector<AccessPath> args;
    std::vector<std::string> arg_classes;

    std::vector<std::uint32_t> succs;
    std::vector<std::uint32_t> preds;
};

struct Cfg {
    std::string owner_class; // empty for top-level functions
    std::string name;
    std::vector<Param> formals;
    std::vector<CfgNode> nodes;
    std::uint32_t entry = 0;
    std::uint32_t exit = 0;
    std::vector<std::uint32_t> rpo;

    std::string key() const { return owner_class + "::" + name; }
};

// Lowers a body to its flow graph, resolving every name on the way: local
// declarations (which become constructor-call nodes), receivers, callee
// methods, and argument classes. Throws on unknown names, calls to
// constructors, arity or class mismatches.
Cfg build_cfg(const Block &body, const std::string &owner_class, const std::string &name,
              const std::vector<Param> &formals,
              const std::map<std::string, const ClassDecl *> &classes, const SourceLoc &loc);

// Constructor flow graph of an unannotated class: one constructor call per
// field, in declaration order.
Cfg build_synthetic_ctor_cfg(const ClassDecl &cls);

} // namespace tsa
