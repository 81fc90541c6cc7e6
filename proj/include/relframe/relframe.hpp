#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "relframe/census.hpp"
#include "relframe/corpus_data.hpp"
#include "relframe/frames.hpp"
#include "relframe/predicates.hpp"
#include "relframe/racheck.hpp"
#include "relframe/reproduce.hpp"
#include "relframe/sequent.hpp"
#include "relframe/syntax.hpp"
#include "relframe/translate.hpp"
#include "relframe/validity.hpp"

namespace relframe {

struct BuiltinScript {
    std::string file;
    std::string_view text;
};

inline std::vector<BuiltinScript> builtin_scripts() {
    std::vector<BuiltinScript> out;
    for (const auto& [name, text] : corpus_data::scripts)
        if (!name.empty()) out.push_back({std::string(name), text});
    return out;
}

inline ProofScript builtin_script(std::string_view name) {
    for (const auto& s : builtin_scripts()) {
        ProofScript p = parse_script(s.text);
        if (s.file.substr(0, s.file.size() - 6) == name || p.name == name) return p;
    }
    throw std::invalid_argument("no built-in proof named '" + std::string(name) + "'");
}

}  // namespace relframe
