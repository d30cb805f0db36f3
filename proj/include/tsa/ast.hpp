#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsa/common.hpp"

namespace tsa {

// Object-valued path: a root variable ("this", a local, or a formal) followed
// by field selections.
struct AccessPath {
    std::string root;
    std::vector<std::string> fields;

    bool is_this() const { return root == "this" && fields.empty(); }
    bool rooted_at_this() const { return root == "this"; }

    AccessPath child(const std::string &field) const {
        AccessPath p = *this;
        p.fields.push_back(field);
        return p;
    }

    std::string str() const {
        std::string s = root;
        for (const auto &f : fields) {
            s += '.';
            s += f;
        }
        return s;
    }

    friend bool operator==(const AccessPath &a, const AccessPath &b) {
        return a.root == b.root && a.fields == b.fields;
    }
    friend bool operator!=(const AccessPath &a, const AccessPath &b) { return !(a == b); }
    friend bool operator<(const AccessPath &a, const AccessPath &b) {
        if (a.root != b.root) return a.root < b.root;
        return a.fields < b.fields;
    }
};

struct FieldDecl {
    std::string class_name;
    std::string name;
    SourceLoc loc;
};

struct Param {
    std::string class_name;
    std::string name;
};

enum class StmtKind { var_decl, call, if_stmt, loop_stmt };

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
    StmtKind kind;
    SourceLoc loc;

    // var_decl
    std::string decl_class;
    std::string decl_name;

    // call
    AccessPath receiver;
    std::string method;
    std::vector<AccessPath> args;

    // if_stmt: then/else; loop_stmt: body in then_block
    Block then_block;
    Block else_block;
    bool has_else = false;
};

struct MethodDecl {
    std::string name;
    std::vector<Param> params;
    std::vector<Annotation> annotations;
    std::optional<Block> body;
    SourceLoc loc;
};

struct ClassDecl {
    std::string name;
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
    SourceLoc loc;

    // A class with at least one annotated method carries a contract; its
    // methods are declarations only.
    bool is_base() const {
        for (const auto &m : methods)
            if (!m.annotations.empty()) return true;
        return false;
    }

    const MethodDecl *find_method(const std::string &name_) const {
        for (const auto &m : methods)
            if (m.name == name_) return &m;
        return nullptr;
    }

    const FieldDecl *find_field(const std::string &name_) const {
        for (const auto &f : fields)
            if (f.name == name_) return &f;
        return nullptr;
    }

    // Explicit constructor declaration: a method named after the class.
    const MethodDecl *constructor_decl() const { return find_method(name); }
};

struct FunctionDecl {
    std::string name;
    Block body;
    SourceLoc loc;
};

struct Program {
    std::vector<ClassDecl> classes;
    std::vector<FunctionDecl> functions;

    const ClassDecl *find_class(const std::string &name) const {
        for (const auto &c : classes)
            if (c.name == name) return &c;
        return nullptr;
    }
};

} // namespace tsa
