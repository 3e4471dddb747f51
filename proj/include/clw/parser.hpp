#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "clw/formula.hpp"

namespace clw {

struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

using PlBindings = std::map<std::string, PlFunc>;

/// Parse a continuous-logic formula. Named piecewise-linear functions come
/// from `pl`; inline literals `pl[(0,0),(0.5,1),(1,1)](...)` need no binding.
/// Symbol, arity and capture problems are reported as ParseError.
FormulaPtr parse_formula(const std::string& text, const Signature& sig,
                         const PlBindings& pl = {}, int first_line = 1);

/// Parse a classical formula; `or` and `forall` are expanded to the core
/// connectives while parsing.
CFormulaPtr parse_classical(const std::string& text, const Signature& sig,
                            int first_line = 1);

/// A formula file: `pl NAME = (x,y) (x,y) ...` definition lines, `#` comments,
/// then the formula text (may span several lines).
struct FormulaFile {
  PlBindings pl;
  std::string body;
  int body_line = 1;
};

FormulaFile read_formula_file(const std::string& path);

}  // namespace clw
