#ifndef DL_PRINT_HPP
#define DL_PRINT_HPP

#include <string>

#include "dl/ast.hpp"

namespace dl {

// Canonical concrete syntax, minimally parenthesized for the precedence table
// in the parser. parse(pretty(e)) is structurally equal to e for every
// wellformed e (property-tested).
std::string pretty(const Term& t);
std::string pretty(const Formula& f);
std::string pretty(const Program& p);

}  // namespace dl

#endif
