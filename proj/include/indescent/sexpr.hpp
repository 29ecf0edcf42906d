#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace indescent {

// Minimal s-expression reader/writer shared by the system parser and the
// certificate format. Atoms are strings; `;` starts a line comment.
struct SExpr {
    bool is_atom = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 0;
    int col = 0;

    static SExpr make_atom(std::string s) {
        SExpr e;
        e.is_atom = true;
        e.atom = std::move(s);
        return e;
    }
    static SExpr make_list(std::vector<SExpr> xs = {}) {
        SExpr e;
        e.items = std::move(xs);
        return e;
    }

    bool is_list() const { return !is_atom; }
    size_t size() const { return items.size(); }
    const SExpr& at(size_t i) const { return items.at(i); }

    // Convenience: list whose head is the given atom.
    bool headed(const std::string& h) const {
        return is_list() && !items.empty() && items[0].is_atom && items[0].atom == h;
    }
};

struct SExprError : std::runtime_error {
    int line, col;
    SExprError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " + std::to_string(c)),
          line(l), col(c) {}
};

std::vector<SExpr> parse_sexprs(const std::string& text);
std::string render_sexpr(const SExpr& e);

} // namespace indescent
