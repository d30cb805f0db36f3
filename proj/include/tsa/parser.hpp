#pragma once

#include <string>
#include <string_view>

#include "tsa/ast.hpp"

namespace tsa {

// Parses one source file. Syntax errors carry file:line:col.
Program parse_program(std::string_view source, const std::string &filename);

// Appends the declarations of `extra` to `base`, rejecting duplicate class or
// function names across files.
void merge_programs(Program &base, Program &&extra);

// Canonical source form; printing then reparsing is the identity on the AST.
std::string pretty(const Program &program);

} // namespace tsa
