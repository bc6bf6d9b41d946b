#ifndef DL_PARSE_HPP
#define DL_PARSE_HPP

#include <set>
#include <stdexcept>
#include <string>

#include "dl/ast.hpp"

namespace dl {

struct SourceSpan {
  size_t start = 0;  // byte offsets into the input
  size_t end = 0;
  size_t line = 1;
  size_t column = 1;
};

class ParseError : public std::runtime_error {
public:
  ParseError(SourceSpan span, std::string message, std::set<std::string> expected);
  SourceSpan span;
  std::string message;
  std::set<std::string> expected;
};

// Parse a complete input of the given syntactic category. The whole input must
// be consumed. Arities of symbols must be used consistently within one input.
Term parse_term(const std::string& text);
Formula parse_formula(const std::string& text);
Program parse_program(const std::string& text);

}  // namespace dl

#endif
