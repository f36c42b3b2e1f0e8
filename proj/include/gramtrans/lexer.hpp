#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gramtrans/grammar.hpp"

namespace gramtrans {

struct Token {
    SymbolId terminal = -1;
    std::string lexeme;
    size_t begin = 0;  // byte offsets into the source text
    size_t end = 0;
};

class LexError : public std::runtime_error {
public:
    LexError(std::string msg, size_t offset)
        : std::runtime_error(std::move(msg)), offset(offset) {}
    size_t offset;
};

/// Tokenize text against the grammar's terminals. Longest match wins;
/// literal terminals beat class terminals on ties. Skip patterns and,
/// unless newline-significant, newlines are discarded. When newlines are
/// significant a NEWLINE token is appended at end of input if missing.
std::vector<Token> lex(std::string_view text, const Grammar& g);

}  // namespace gramtrans
