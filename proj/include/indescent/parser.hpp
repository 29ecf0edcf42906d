#pragma once

#include <stdexcept>
#include <string>

#include "indescent/system.hpp"

namespace indescent {

struct ParseError : std::runtime_error {
    int line = 0, col = 0;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " (line " + std::to_string(l) + ", column " + std::to_string(c) + ")"),
          line(l), col(c) {}
};

// Parses a UTF-8 s-expression system document; splits disjunctive
// constraints into one rule per disjunct and validates the result.
ParsedFile parse_system(const std::string& text);

} // namespace indescent
