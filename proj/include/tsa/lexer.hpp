#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tsa/common.hpp"

namespace tsa {

enum class TokenKind {
    ident,
    kw_class,
    kw_void,
    kw_if,
    kw_else,
    kw_loop,
    kw_this,
    at,
    lparen,
    rparen,
    lbrace,
    rbrace,
    semi,
    comma,
    dot,
    question,
    eof,
};

const char *token_kind_name(TokenKind k);

struct Token {
    TokenKind kind;
    std::string text;
    SourceLoc loc;
};

// Tokenizes a whole source file. Line comments (//...) and whitespace are
// skipped; identifiers are [A-Za-z_][A-Za-z0-9_]*.
std::vector<Token> lex(std::string_view source, const std::string &filename);

} // namespace tsa
