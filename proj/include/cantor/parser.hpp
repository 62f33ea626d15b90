// Engine-wide textual formats and the set-expression grammar. Blocks:
//
//   safety <name>            regset <name>            transducer <name>
//   state <id> [init]        state <id> [init]        state <id> [init]
//   edge <src> <l> <dst>     edge <src> <l> <dst>     edge <src> <l> <dst> <out|eps>
//                            accept <formula>         domain <closed-name>
//
//   table <name>
//   depth <k>
//   domain full | domain <stem>...
//   map <word|eps> <out|eps>
//
// Formulas: atoms inf(<state>), constants true/false, operators and/or/not,
// parentheses. Set expressions: cyl(<word>), closed:<name>, regset:<name>,
// union(a,b), inter(a,b), diff(a,b), compl(a).

#ifndef CANTOR_PARSER_HPP
#define CANTOR_PARSER_HPP

#include <map>
#include <memory>
#include <string>

#include "cantor/regset.hpp"
#include "cantor/table.hpp"
#include "cantor/transducer.hpp"

namespace cantor {

struct SpecParseError : std::runtime_error {
    int line;
    SpecParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct Model {
    std::map<std::string, SafetyAutomaton> closed_sets;
    std::map<std::string, RegSet> regsets;
    std::map<std::string, Transducer> transducers;
    std::map<std::string, FiniteStageMap> tables;
};

Model parse_spec(const std::string& text);
Model parse_spec_file(const std::string& path);

/// Evaluate a set expression to a RegSet over the model.
RegSet eval_regset_expr(const Model& m, const std::string& expr);

/// Evaluate a closed-mode expression (closed:<name>, cyl(w), union, inter).
SafetyAutomaton eval_closed_expr(const Model& m, const std::string& expr);

// Serialization; parse_spec(serialize(model)) is the identity on denotations.
std::string serialize_closed(const std::string& name, const SafetyAutomaton& f);
std::string serialize_regset(const std::string& name, const RegSet& e);
std::string serialize_transducer(const std::string& name, const Transducer& t,
                                 const std::string& domain_name);
std::string serialize_table(const std::string& name, const FiniteStageMap& t);
std::string serialize_model(const Model& m);

}  // namespace cantor

#endif
