#pragma once

#include <map>
#include <string>

#include "tsa/ast.hpp"
#include "tsa/cfg.hpp"
#include "tsa/contracts.hpp"

namespace tsa {

// A checked program: class table, contracts for every annotated class, and a
// flow graph for every body (including the synthetic constructors of
// unannotated classes, which construct each field in declaration order).
struct ProgramInfo {
    Program program;
    std::map<std::string, const ClassDecl *> classes;
    std::map<std::string, ContractMap> contracts;
    std::map<std::string, Cfg> cfgs;

    bool is_annotated(const std::string &class_name) const {
        return contracts.count(class_name) != 0;
    }
    const Cfg *find_cfg(const std::string &key) const {
        auto it = cfgs.find(key);
        return it == cfgs.end() ? nullptr : &it->second;
    }
};

// Validates the whole program and lowers it. Annotated classes must consist
// of declarations only and carry no fields; unannotated classes must carry
// no annotations and define a body for every method, and may not declare
// their own constructor.
ProgramInfo resolve_program(Program program);

} // namespace tsa
