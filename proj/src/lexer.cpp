#include "tsa/lexer.hpp"

#include <cctype>

#include "tsa/error.hpp"

namespace tsa {

const char *token_kind_name(TokenKind k) {
    switch (k) {
    case TokenKind::ident: return "identifier";
    case TokenKind::kw_class: return "'class'";
    case TokenKind::kw_void: return "'void'";
    case TokenKind::kw_if: return "'if'";
    case TokenKind::kw_else: return "'else'";
    case TokenKind::kw_loop: return "'loop'";
    case TokenKind::kw_this: return "'this'";
    case TokenKind::at: return "'@'";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::lbrace: return "'{'";
    case TokenKind::rbrace: return "'}'";
    case TokenKind::semi: return "';'";
    case TokenKind::comma: return "','";
    case TokenKind::dot: return "'.'";
    case TokenKind::question: return "'?'";
    case TokenKind::eof: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view source, const std::string &filename) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    std::size_t i = 0;
    const std::size_t n = source.size();

    auto push = [&](TokenKind kind, std::string text, int tline, int tcol) {
        tokens.push_back(Token{kind, std::move(text), SourceLoc{filename, tline, tcol}});
    };

    while (i < n) {
        char c = source[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '/') {
            while (i < n && source[i] != '\n') ++i;
            continue;
        }
        int tline = line, tcol = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(source[i])) ||
                             source[i] == '_')) {
                ++i;
                ++col;
            }
            std::string word(source.substr(start, i - start));
            TokenKind kind = TokenKind::ident;
            if (word == "class") kind = TokenKind::kw_class;
            else if (word == "void") kind = TokenKind::kw_void;
            else if (word == "if") kind = TokenKind::kw_if;
            else if (word == "else") kind = TokenKind::kw_else;
            else if (word == "loop") kind = TokenKind::kw_loop;
            else if (word == "this") kind = TokenKind::kw_this;
            push(kind, std::move(word), tline, tcol);
            continue;
        }
        TokenKind kind;
        switch (c) {
        case '@': kind = TokenKind::at; break;
        case '(': kind = TokenKind::lparen; break;
        case ')': kind = TokenKind::rparen; break;
        case '{': kind = TokenKind::lbrace; break;
        case '}': kind = TokenKind::rbrace; break;
        case ';': kind = TokenKind::semi; break;
        case ',': kind = TokenKind::comma; break;
        case '.': kind = TokenKind::dot; break;
        case '?': kind = TokenKind::question; break;
        default:
            fail_at(ErrorKind::syntax, SourceLoc{filename, tline, tcol},
                    std::string("unexpected character '") + c + "'");
        }
        push(kind, std::string(1, c), tline, tcol);
        ++col;
        ++i;
    }
    tokens.push_back(Token{TokenKind::eof, "", SourceLoc{filename, line, col}});
    return tokens;
}

} // namespace tsa
