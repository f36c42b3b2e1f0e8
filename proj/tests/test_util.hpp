#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gramtrans/grammar.hpp"

#ifndef GRAMTRANS_FIXTURES
#error "GRAMTRANS_FIXTURES must point at the fixtures directory"
#endif

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(GRAMTRANS_FIXTURES) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline gramtrans::Grammar load_fixture(const std::string& name) {
    std::string stem = name;
    auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    return gramtrans::parse_grammar(slurp(fixture_path(name)), stem);
}

}  // namespace testutil
