#pragma once

#include <string>

#include "freehardy/series.hpp"

namespace freehardy {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' INT)?
//   primary := NUMBER ['i'] | 'i' | 'z' INT | '(' expr ')' | matrix
//   matrix  := '[' row (',' row)* ']',  row := '[' expr (',' expr)* ']'
// Matrix entries must be constant scalars. A scalar result becomes c * I when
// p == q. Terms of degree above deg are an error unless they cancel exactly.
FreeSeries parse(const std::string& text, int d, int deg, int p = 1, int q = 1);

}  // namespace freehardy
