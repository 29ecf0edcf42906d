#include "indescent/sexpr.hpp"

#include <cctype>

namespace indescent {

namespace {

struct Reader {
    const std::string& text;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Reader(const std::string& t) : text(t) {}

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_ws();
        if (eof()) throw SExprError("unexpected end of input", line, col);
        int l = line, c = col;
        if (peek() == '(') {
            advance();
            SExpr e = SExpr::make_list();
            e.line = l;
            e.col = c;
            while (true) {
                skip_ws();
                if (eof()) throw SExprError("unterminated list", l, c);
                if (peek() == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read());
            }
        }
        if (peek() == ')') throw SExprError("unexpected ')'", line, col);
        if (peek() == '"') {
            advance();
            std::string atom;
            while (!eof() && peek() != '"') {
                atom.push_back(peek());
                advance();
            }
            if (eof()) throw SExprError("unterminated string", l, c);
            advance();
            SExpr e = SExpr::make_atom(atom);
            e.line = l;
            e.col = c;
            return e;
        }
        std::string atom;
        while (!eof()) {
            char ch = peek();
            if (std::isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')' || ch == ';') break;
            atom.push_back(ch);
            advance();
        }
        SExpr e = SExpr::make_atom(atom);
        e.line = l;
        e.col = c;
        return e;
    }
};

void render(const SExpr& e, std::string& out) {
    if (e.is_atom) {
        bool quote = e.atom.empty();
        for (char c : e.atom)
            if (c == ' ' || c == '(' || c == ')' || c == ';' || c == '"' || c == '\n') quote = true;
        if (quote) {
            out += '"';
            out += e.atom;
            out += '"';
        } else {
            out += e.atom;
        }
        return;
    }
    out += '(';
    for (size_t i = 0; i < e.items.size(); ++i) {
        if (i) out += ' ';
        render(e.items[i], out);
    }
    out += ')';
}

} // namespace

std::vector<SExpr> parse_sexprs(const std::string& text) {
    Reader r(text);
    std::vector<SExpr> out;
    while (true) {
        r.skip_ws();
        if (r.eof()) break;
        out.push_back(r.read());
    }
    return out;
}

std::string render_sexpr(const SExpr& e) {
    std::string out;
    render(e, out);
    return out;
}

} // namespace indescent
