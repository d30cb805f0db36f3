#include "tsa/parser.hpp"

#include <algorithm>

#include "tsa/error.hpp"
#include "tsa/lexer.hpp"

namespace tsa {

namespace {

class Parser {
  public:
    Parser(std::vector<Token> tokens) : m_tokens(std::move(tokens)) {}

    Program parse() {
        Program program;
        while (!at(TokenKind::eof)) {
            if (at(TokenKind::kw_class))
                program.classes.push_back(parse_class());
            else if (at(TokenKind::kw_void))
                program.functions.push_back(parse_function());
            else
                unexpected("a class or function declaration");
        }
        return program;
    }

  private:
    const Token &peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(m_pos + ahead, m_tokens.size() - 1);
        return m_tokens[i];
    }
    bool at(TokenKind k) const { return peek().kind == k; }
    Token advance() { return m_tokens[m_pos++]; }
    Token expect(TokenKind k) {
        if (!at(k)) unexpected(token_kind_name(k));
        return advance();
    }
    [[noreturn]] void unexpected(const std::string &wanted) {
        const Token &t = peek();
        std::string got = t.kind == TokenKind::ident ? "'" + t.text + "'" : token_kind_name(t.kind);
        fail_at(ErrorKind::syntax, t.loc, "expected " + wanted + ", found " + got);
    }

    ClassDecl parse_class() {
        ClassDecl cls;
        cls.loc = expect(TokenKind::kw_class).loc;
        cls.name = expect(TokenKind::ident).text;
        expect(TokenKind::lbrace);
        while (at(TokenKind::ident)) { // fields precede methods
            FieldDecl f;
            f.loc = peek().loc;
            f.class_name = advance().text;
            f.name = expect(TokenKind::ident).text;
            expect(TokenKind::semi);
            cls.fields.push_back(std::move(f));
        }
        while (at(TokenKind::at) || at(TokenKind::kw_void))
            cls.methods.push_back(parse_method());
        expect(TokenKind::rbrace);
        return cls;
    }

    Annotation parse_annotation() {
        Annotation a;
        a.loc = expect(TokenKind::at).loc;
        std::string name = expect(TokenKind::ident).text;
        if (name == "Enable") a.kind = AnnotationKind::enable;
        else if (name == "Disable") a.kind = AnnotationKind::disable;
        else if (name == "EnableOnly") a.kind = AnnotationKind::enable_only;
        else if (name == "DisableOnly") a.kind = AnnotationKind::disable_only;
        else if (name == "EnableAll") a.kind = AnnotationKind::enable_all;
        else if (name == "DisableAll") a.kind = AnnotationKind::disable_all;
        else
            fail_at(ErrorKind::syntax, a.loc, "unknown annotation '@" + name + "'");
        if (annotation_kind_takes_args(a.kind)) {
            expect(TokenKind::lparen);
            a.args.push_back(expect(TokenKind::ident).text);
            while (at(TokenKind::comma)) {
                advance();
                a.args.push_back(expect(TokenKind::ident).text);
            }
            expect(TokenKind::rparen);
        } else if (at(TokenKind::lparen)) {
            fail_at(ErrorKind::syntax, peek().loc, "@" + name + " takes no arguments");
        }
        return a;
    }

    MethodDecl parse_method() {
        MethodDecl m;
        while (at(TokenKind::at)) m.annotations.push_back(parse_annotation());
        m.loc = expect(TokenKind::kw_void).loc;
        m.name = expect(TokenKind::ident).text;
        expect(TokenKind::lparen);
        if (!at(TokenKind::rparen)) {
            do {
                Param p;
                p.class_name = expect(TokenKind::ident).text;
                p.name = expect(TokenKind::ident).text;
                m.params.push_back(std::move(p));
            } while (at(TokenKind::comma) && (advance(), true));
        }
        expect(TokenKind::rparen);
        if (at(TokenKind::semi)) {
            advance();
        } else {
            m.body = parse_block();
        }
        return m;
    }

    FunctionDecl parse_function() {
        FunctionDecl f;
        f.loc = expect(TokenKind::kw_void).loc;
        f.name = expect(TokenKind::ident).text;
        expect(TokenKind::lparen);
        expect(TokenKind::rparen);
        f.body = parse_block();
        return f;
    }

    Block parse_block() {
        expect(TokenKind::lbrace);
        Block block;
        while (!at(TokenKind::rbrace)) block.push_back(parse_stmt());
        expect(TokenKind::rbrace);
        return block;
    }

    AccessPath parse_path_from(Token root) {
        AccessPath p;
        p.root = root.text;
        while (at(TokenKind::dot) && peek(2).kind != TokenKind::lparen) {
            advance();
            p.fields.push_back(expect(TokenKind::ident).text);
        }
        return p;
    }

    AccessPath parse_path() {
        if (at(TokenKind::kw_this)) return parse_path_from(advance());
        return parse_path_from(expect(TokenKind::ident));
    }

    Stmt parse_stmt() {
        Stmt s;
        s.loc = peek().loc;
        if (at(TokenKind::kw_if)) {
            s.kind = StmtKind::if_stmt;
            advance();
            expect(TokenKind::lparen);
            expect(TokenKind::question);
            expect(TokenKind::rparen);
            s.then_block = parse_block();
            if (at(TokenKind::kw_else)) {
                advance();
                s.has_else = true;
                s.else_block = parse_block();
            }
            return s;
        }
        if (at(TokenKind::kw_loop)) {
            s.kind = StmtKind::loop_stmt;
            advance();
            s.then_block = parse_block();
            return s;
        }
        if (at(TokenKind::ident) && peek(1).kind == TokenKind::ident) {
            s.kind = StmtKind::var_decl;
            s.decl_class = advance().text;
            s.decl_name = advance().text;
            expect(TokenKind::semi);
            return s;
        }
        // call: path "." method "(" args? ")" ";"
        s.kind = StmtKind::call;
        s.receiver = parse_path();
        expect(TokenKind::dot);
        s.method = expect(TokenKind::ident).text;
        expect(TokenKind::lparen);
        if (!at(TokenKind::rparen)) {
            s.args.push_back(parse_path());
            while (at(TokenKind::comma)) {
                advance();
                s.args.push_back(parse_path());
            }
        }
        expect(TokenKind::rparen);
        expect(TokenKind::semi);
        return s;
    }

    std::vector<Token> m_tokens;
    std::size_t m_pos = 0;
};

} // namespace

Program parse_program(std::string_view source, const std::string &filename) {
    return Parser(lex(source, filename)).parse();
}

void merge_programs(Program &base, Program &&extra) {
    for (auto &c : extra.classes) {
        if (base.find_class(c.name))
            fail_at(ErrorKind::name_resolution, c.loc, "duplicate class '" + c.name + "'");
        base.classes.push_back(std::move(c));
    }
    for (auto &f : extra.functions) {
        for (const auto &existing : base.functions)
            if (existing.name == f.name)
                fail_at(ErrorKind::name_resolution, f.loc, "duplicate function '" + f.name + "'");
        base.functions.push_back(std::move(f));
    }
}

namespace {

class Printer {
  public:
    std::string take() { return std::move(m_out); }

    void program(const Program &p) {
        bool first = true;
        for (const auto &c : p.classes) {
            if (!first) m_out += '\n';
            first = false;
            class_decl(c);
        }
        for (const auto &f : p.functions) {
            if (!first) m_out += '\n';
            first = false;
            function_decl(f);
        }
    }

  private:
    void line(const std::string &s) {
        m_out.append(m_indent * 4, ' ');
        m_out += s;
        m_out += '\n';
    }

    void class_decl(const ClassDecl &c) {
        line("class " + c.name + " {");
        ++m_indent;
        for (const auto &f : c.fields) line(f.class_name + " " + f.name + ";");
        for (const auto &m : c.methods) method_decl(m);
        --m_indent;
        line("}");
    }

    void method_decl(const MethodDecl &m) {
        for (const auto &a : m.annotations) {
            std::string s = std::string("@") + annotation_kind_name(a.kind);
            if (annotation_kind_takes_args(a.kind)) {
                s += '(';
                for (std::size_t i = 0; i < a.args.size(); ++i) {
                    if (i) s += ", ";
                    s += a.args[i];
                }
                s += ')';
            }
            line(s);
        }
        std::string sig = "void " + m.name + "(";
        for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (i) sig += ", ";
            sig += m.params[i].class_name + " " + m.params[i].name;
        }
        sig += ")";
        if (!m.body) {
            line(sig + ";");
        } else {
            line(sig + " {");
            ++m_indent;
            block(*m.body);
            --m_indent;
            line("}");
        }
    }

    void function_decl(const FunctionDecl &f) {
        line("void " + f.name + "() {");
        ++m_indent;
        block(f.body);
        --m_indent;
        line("}");
    }

    void block(const Block &b) {
        for (const auto &s : b) stmt(s);
    }

    void stmt(const Stmt &s) {
        switch (s.kind) {
        case StmtKind::var_decl:
            line(s.decl_class + " " + s.decl_name + ";");
            break;
        case StmtKind::call: {
            std::string c = s.receiver.str() + "." + s.method + "(";
            for (std::size_t i = 0; i < s.args.size(); ++i) {
                if (i) c += ", ";
                c += s.args[i].str();
            }
            line(c + ");");
            break;
        }
        case StmtKind::if_stmt:
            line("if (?) {");
            ++m_indent;
            block(s.then_block);
            --m_indent;
            if (s.has_else) {
                line("} else {");
                ++m_indent;
                block(s.else_block);
                --m_indent;
            }
            line("}");
            break;
        case StmtKind::loop_stmt:
            line("loop {");
            ++m_indent;
            block(s.then_block);
            --m_indent;
            line("}");
            break;
        }
    }

    std::string m_out;
    int m_indent = 0;
};

} // namespace

std::string pretty(const Program &program) {
    Printer p;
    p.program(program);
    return p.take();
}

} // namespace tsa
