#include "cantor/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <tuple>

namespace cantor {

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

Word word_token(const std::string& tok, int line) {
    if (tok == "eps") return Word{};
    if (!is_binary_word(tok)) throw SpecParseError(line, "expected a binary word, got: " + tok);
    return tok;
}

// ---- acceptance formula parsing --------------------------------------

struct FormulaParser {
    std::vector<std::string> toks;
    std::size_t pos = 0;
    int line;
    const std::map<std::string, int>& state_ids;
    std::map<int, int>& atom_of_state;  // state -> atom index
    RegSet& target;

    FormulaParser(const std::string& text, int line_, const std::map<std::string, int>& ids,
                  std::map<int, int>& atoms, RegSet& tgt)
        : line(line_), state_ids(ids), atom_of_state(atoms), target(tgt) {
        std::string spaced;
        for (char c : text) {
            if (c == '(' || c == ')') {
                spaced += ' ';
                spaced += c;
                spaced += ' ';
            } else {
                spaced += c;
            }
        }
        std::istringstream is(spaced);
        std::string t;
        while (is >> t) toks.push_back(t);
    }

    bool peek(const std::string& t) const { return pos < toks.size() && toks[pos] == t; }
    bool eat(const std::string& t) {
        if (!peek(t)) return false;
        ++pos;
        return true;
    }

    AcceptFormula parse() {
        AcceptFormula f = parse_or();
        if (pos != toks.size()) throw SpecParseError(line, "trailing tokens in accept formula");
        return f;
    }

    AcceptFormula parse_or() {
        AcceptFormula f = parse_and();
        while (eat("or")) f = AcceptFormula::disj(std::move(f), parse_and());
        return f;
    }

    AcceptFormula parse_and() {
        AcceptFormula f = parse_not();
        while (eat("and")) f = AcceptFormula::conj(std::move(f), parse_not());
        return f;
    }

    AcceptFormula parse_not() {
        if (eat("not")) return AcceptFormula::negate(parse_not());
        return parse_atom();
    }

    AcceptFormula parse_atom() {
        if (eat("(")) {
            AcceptFormula f = parse_or();
            if (!eat(")")) throw SpecParseError(line, "missing ) in accept formula");
            return f;
        }
        if (eat("true")) return AcceptFormula::truth(true);
        if (eat("false")) return AcceptFormula::truth(false);
        if (pos >= toks.size()) throw SpecParseError(line, "unexpected end of accept formula");
        std::string tok = toks[pos++];
        if (tok == "inf") {
            if (!eat("(")) throw SpecParseError(line, "inf expects (state)");
            if (pos >= toks.size()) throw SpecParseError(line, "inf expects a state");
            std::string st = toks[pos++];
            if (!eat(")")) throw SpecParseError(line, "missing ) after inf state");
            auto it = state_ids.find(st);
            if (it == state_ids.end()) throw SemanticError("accept formula names unknown state: " + st);
            auto at = atom_of_state.find(it->second);
            if (at == atom_of_state.end()) {
                target.carriers.push_back({it->second});
                at = atom_of_state.emplace(it->second, static_cast<int>(target.carriers.size()) - 1)
                         .first;
            }
            return AcceptFormula::atom_of(at->second);
        }
        // Compact form inf(q) may arrive as a single token.
        if (tok.rfind("inf(", 0) == 0 && tok.back() == ')') {
            std::string st = tok.substr(4, tok.size() - 5);
            auto it = state_ids.find(st);
            if (it == state_ids.end()) throw SemanticError("accept formula names unknown state: " + st);
            auto at = atom_of_state.find(it->second);
            if (at == atom_of_state.end()) {
                target.carriers.push_back({it->second});
                at = atom_of_state.emplace(it->second, static_cast<int>(target.carriers.size()) - 1)
                         .first;
            }
            return AcceptFormula::atom_of(at->second);
        }
        throw SpecParseError(line, "unexpected token in accept formula: " + tok);
    }
};

// ---- block assembly ---------------------------------------------------

struct PendingBlock {
    std::string kind, name;
    int header_line = 0;
    std::vector<std::pair<int, std::vector<std::string>>> lines;
};

struct StateTable {
    std::map<std::string, int> ids;
    int init = -1;

    int declare(const std::string& id, bool is_init, int line) {
        if (ids.count(id)) throw SpecParseError(line, "duplicate state: " + id);
        int n = static_cast<int>(ids.size());
        ids.emplace(id, n);
        if (is_init) {
            if (init >= 0) throw SpecParseError(line, "two init states");
            init = n;
        }
        return n;
    }
    int lookup(const std::string& id, int line) const {
        auto it = ids.find(id);
        if (it == ids.end()) throw SemanticError("undefined state '" + id + "' (line " +
                                                 std::to_string(line) + ")");
        return it->second;
    }
};

int letter_token(const std::string& tok, int line) {
    if (tok != "0" && tok != "1") throw SpecParseError(line, "letter must be 0 or 1");
    return tok[0] - '0';
}

}  // namespace

Model parse_spec(const std::string& text) {
    Model model;
    std::vector<PendingBlock> blocks;
    {
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        PendingBlock* cur = nullptr;
        while (std::getline(is, line)) {
            ++lineno;
            auto toks = tokenize_line(line);
            if (toks.empty()) continue;
            const std::string& head = toks[0];
            if (head == "safety" || head == "regset" || head == "transducer" || head == "table") {
                if (toks.size() != 2) throw SpecParseError(lineno, head + " needs exactly a name");
                blocks.push_back({head, toks[1], lineno, {}});
                cur = &blocks.back();
            } else {
                if (!cur) throw SpecParseError(lineno, "content before any block header");
                cur->lines.emplace_back(lineno, toks);
            }
        }
    }

    // Transducers resolve their domains after every block is read.
    std::vector<std::pair<PendingBlock*, std::string>> transducer_domains;
    std::vector<Transducer> raw_transducers;
    std::vector<std::string> transducer_names;

    for (auto& blk : blocks) {
        if (blk.kind == "safety") {
            StateTable st;
            std::vector<std::tuple<int, int, std::string>> edges;  // src, letter, dst-name
            for (auto& [ln, toks] : blk.lines) {
                if (toks[0] == "state") {
                    bool is_init = toks.size() == 3 && toks[2] == "init";
                    if (toks.size() != 2 && !is_init) throw SpecParseError(ln, "state <id> [init]");
                    st.declare(toks[1], is_init, ln);
                } else if (toks[0] == "edge") {
                    if (toks.size() != 4) throw SpecParseError(ln, "edge <src> <letter> <dst>");
                    edges.emplace_back(st.lookup(toks[1], ln), letter_token(toks[2], ln), toks[3]);
                } else {
                    throw SpecParseError(ln, "unexpected line in safety block: " + toks[0]);
                }
            }
            if (st.init < 0 && !st.ids.empty())
                throw SemanticError("safety '" + blk.name + "' has no init state");
            RawAutomaton raw;
            raw.trans.assign(st.ids.size(), {kNoState, kNoState});
            raw.init = st.init;
            for (auto& [src, letter, dst] : edges) {
                int d = st.lookup(dst, blk.header_line);
                if (raw.trans[src][letter] != kNoState)
                    throw SemanticError("safety '" + blk.name + "': nondeterministic edge");
                raw.trans[src][letter] = d;
            }
            model.closed_sets.emplace(blk.name, prune(raw));
        } else if (blk.kind == "regset") {
            StateTable st;
            std::vector<std::tuple<int, int, std::string>> edges;
            std::pair<int, std::string> accept_line{-1, ""};
            for (auto& [ln, toks] : blk.lines) {
                if (toks[0] == "state") {
                    bool is_init = toks.size() == 3 && toks[2] == "init";
                    if (toks.size() != 2 && !is_init) throw SpecParseError(ln, "state <id> [init]");
                    st.declare(toks[1], is_init, ln);
                } else if (toks[0] == "edge") {
                    if (toks.size() != 4) throw SpecParseError(ln, "edge <src> <letter> <dst>");
                    edges.emplace_back(st.lookup(toks[1], ln), letter_token(toks[2], ln), toks[3]);
                } else if (toks[0] == "accept") {
                    std::string rest;
                    for (std::size_t i = 1; i < toks.size(); ++i) rest += toks[i] + " ";
                    accept_line = {ln, rest};
                } else {
                    throw SpecParseError(ln, "unexpected line in regset block: " + toks[0]);
                }
            }
            if (st.ids.empty()) throw SemanticError("regset '" + blk.name + "' has no states");
            if (st.init < 0) throw SemanticError("regset '" + blk.name + "' has no init state");
            if (accept_line.first < 0) throw SemanticError("regset '" + blk.name + "' has no accept line");
            RegSet e;
            e.trans.assign(st.ids.size(), {kNoState, kNoState});
            e.init = st.init;
            for (auto& [src, letter, dst] : edges) {
                int d = st.lookup(dst, accept_line.first);
                if (e.trans[src][letter] != kNoState)
                    throw SemanticError("regset '" + blk.name + "': nondeterministic edge");
                e.trans[src][letter] = d;
            }
            for (std::size_t q = 0; q < e.trans.size(); ++q)
                for (int b = 0; b < 2; ++b)
                    if (e.trans[q][b] == kNoState)
                        throw SemanticError("regset '" + blk.name + "': non-total transitions");
            std::map<int, int> atoms;
            FormulaParser fp(accept_line.second, accept_line.first, st.ids, atoms, e);
            e.accept = fp.parse();
            model.regsets.emplace(blk.name, std::move(e));
        } else if (blk.kind == "transducer") {
            StateTable st;
            struct TEdge { int src, letter; std::string dst; Word out; };
            std::vector<TEdge> edges;
            std::string domain_name;
            for (auto& [ln, toks] : blk.lines) {
                if (toks[0] == "state") {
                    bool is_init = toks.size() == 3 && toks[2] == "init";
                    if (toks.size() != 2 && !is_init) throw SpecParseError(ln, "state <id> [init]");
                    st.declare(toks[1], is_init, ln);
                } else if (toks[0] == "edge") {
                    if (toks.size() != 5)
                        throw SpecParseError(ln, "edge <src> <letter> <dst> <out|eps>");
                    edges.push_back({st.lookup(toks[1], ln), letter_token(toks[2], ln), toks[3],
                                     word_token(toks[4], ln)});
                } else if (toks[0] == "domain") {
                    if (toks.size() != 2) throw SpecParseError(ln, "domain <closed-name>");
                    domain_name = toks[1];
                } else {
                    throw SpecParseError(ln, "unexpected line in transducer block: " + toks[0]);
                }
            }
            if (st.ids.empty()) throw SemanticError("transducer '" + blk.name + "' has no states");
            if (st.init < 0) throw SemanticError("transducer '" + blk.name + "' has no init state");
            Transducer t;
            t.step.assign(st.ids.size(), {});
            t.init = st.init;
            std::vector<std::array<bool, 2>> defined(st.ids.size(), {false, false});
            for (auto& e : edges) {
                if (defined[e.src][e.letter])
                    throw SemanticError("transducer '" + blk.name + "': nondeterministic edge");
                defined[e.src][e.letter] = true;
                t.step[e.src][e.letter] = TransducerStep{st.lookup(e.dst, blk.header_line), e.out};
            }
            for (std::size_t q = 0; q < defined.size(); ++q)
                for (int b = 0; b < 2; ++b)
                    if (!defined[q][b])
                        throw SemanticError("transducer '" + blk.name + "': non-total step map");
            raw_transducers.push_back(std::move(t));
            transducer_names.push_back(blk.name);
            transducer_domains.emplace_back(&blk, domain_name);
        } else if (blk.kind == "table") {
            unsigned depth = 0;
            std::map<Word, Word> entries;
            std::vector<Word> domain_stems;
            bool domain_full = true;
            for (auto& [ln, toks] : blk.lines) {
                if (toks[0] == "depth") {
                    if (toks.size() != 2) throw SpecParseError(ln, "depth <k>");
                    depth = static_cast<unsigned>(std::stoul(toks[1]));
                } else if (toks[0] == "domain") {
                    if (toks.size() == 2 && toks[1] == "full") {
                        domain_full = true;
                    } else {
                        domain_full = false;
                        for (std::size_t i = 1; i < toks.size(); ++i)
                            domain_stems.push_back(word_token(toks[i], ln));
                    }
                } else if (toks[0] == "map") {
                    if (toks.size() != 3) throw SpecParseError(ln, "map <word|eps> <out|eps>");
                    Word in = word_token(toks[1], ln);
                    if (entries.count(in)) throw SpecParseError(ln, "duplicate table entry: " + toks[1]);
                    entries.emplace(in, word_token(toks[2], ln));
                } else {
                    throw SpecParseError(ln, "unexpected line in table block: " + toks[0]);
                }
            }
            if (depth == 0) throw SemanticError("table '" + blk.name + "' missing depth");
            model.tables.emplace(blk.name,
                                 FiniteStageMap(depth, std::move(entries),
                                                domain_full ? std::vector<Word>{} : domain_stems));
        }
    }

    for (std::size_t i = 0; i < raw_transducers.size(); ++i) {
        const std::string& dom = transducer_domains[i].second;
        Transducer& t = raw_transducers[i];
        if (dom.empty()) {
            t.domain = full_space();
        } else {
            auto it = model.closed_sets.find(dom);
            if (it == model.closed_sets.end())
                throw SemanticError("transducer '" + transducer_names[i] +
                                    "': undefined domain '" + dom + "'");
            t.domain = it->second;
        }
        check_productive(t);
        model.transducers.emplace(transducer_names[i], std::move(t));
    }
    return model;
}

Model parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

// ---- set expressions ---------------------------------------------------

namespace {

struct ExprParser {
    const std::string& s;
    std::size_t pos = 0;
    const Model& model;

    ExprParser(const std::string& text, const Model& m) : s(text), model(m) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
                                  s[pos] == ':'))
            ++pos;
        return s.substr(start, pos - start);
    }

    RegSet parse() {
        RegSet e = parse_expr();
        skip_ws();
        if (pos != s.size()) throw SemanticError("trailing characters in set expression: " + s);
        return e;
    }

    RegSet parse_expr() {
        std::string id = ident();
        if (id == "cyl") {
            if (!eat('(')) throw SemanticError("cyl expects (word)");
            skip_ws();
            std::size_t start = pos;
            while (pos < s.size() && s[pos] != ')') ++pos;
            std::string w = s.substr(start, pos - start);
            while (!w.empty() && std::isspace(static_cast<unsigned char>(w.back()))) w.pop_back();
            if (!eat(')')) throw SemanticError("cyl missing )");
            if (w == "eps") w.clear();
            if (!is_binary_word(w)) throw SemanticError("cyl expects a binary word");
            return from_clopen(ClopenSet({w}));
        }
        if (id == "union" || id == "inter" || id == "diff") {
            if (!eat('(')) throw SemanticError(id + " expects (a,b)");
            RegSet a = parse_expr();
            if (!eat(',')) throw SemanticError(id + " expects two arguments");
            RegSet b = parse_expr();
            if (!eat(')')) throw SemanticError(id + " missing )");
            CombineOp op = id == "union" ? CombineOp::Union
                          : id == "inter" ? CombineOp::Intersect
                                          : CombineOp::Difference;
            return combine(op, a, &b);
        }
        if (id == "compl") {
            if (!eat('(')) throw SemanticError("compl expects (a)");
            RegSet a = parse_expr();
            if (!eat(')')) throw SemanticError("compl missing )");
            return combine(CombineOp::Complement, a);
        }
        if (id.rfind("closed:", 0) == 0) {
            std::string name = id.substr(7);
            auto it = model.closed_sets.find(name);
            if (it == model.closed_sets.end()) throw SemanticError("undefined closed set: " + name);
            return from_closed(it->second);
        }
        if (id.rfind("regset:", 0) == 0) {
            std::string name = id.substr(7);
            auto it = model.regsets.find(name);
            if (it == model.regsets.end()) throw SemanticError("undefined regset: " + name);
            return it->second;
        }
        throw SemanticError("bad set expression near: " + (id.empty() ? s.substr(pos) : id));
    }
};

}  // namespace

RegSet eval_regset_expr(const Model& m, const std::string& expr) {
    ExprParser p(expr, m);
    return p.parse();
}

SafetyAutomaton eval_closed_expr(const Model& m, const std::string& expr) {
    // Closed mode: only constructs that stay closed.
    std::string id;
    std::size_t paren = expr.find('(');
    std::string head = expr.substr(0, paren == std::string::npos ? expr.size() : paren);
    head.erase(std::remove_if(head.begin(), head.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               head.end());
    (void)id;
    if (head.rfind("closed:", 0) == 0) {
        std::string name = head.substr(7);
        auto it = m.closed_sets.find(name);
        if (it == m.closed_sets.end()) throw SemanticError("undefined closed set: " + name);
        return it->second;
    }
    if (head == "cyl") {
        std::size_t close = expr.rfind(')');
        if (paren == std::string::npos || close == std::string::npos)
            throw SemanticError("cyl expects (word)");
        std::string w = expr.substr(paren + 1, close - paren - 1);
        w.erase(std::remove_if(w.begin(), w.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                w.end());
        if (w == "eps") w.clear();
        if (!is_binary_word(w)) throw SemanticError("cyl expects a binary word");
        return closed_from_clopen(ClopenSet({w}));
    }
    if (head == "union" || head == "inter") {
        std::size_t close = expr.rfind(')');
        if (paren == std::string::npos || close == std::string::npos)
            throw SemanticError(head + " expects (a,b)");
        std::string inner = expr.substr(paren + 1, close - paren - 1);
        // split on the top-level comma
        int depth = 0;
        std::size_t split = std::string::npos;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            else if (inner[i] == ')') --depth;
            else if (inner[i] == ',' && depth == 0) { split = i; break; }
        }
        if (split == std::string::npos) throw SemanticError(head + " expects two arguments");
        SafetyAutomaton a = eval_closed_expr(m, inner.substr(0, split));
        SafetyAutomaton b = eval_closed_expr(m, inner.substr(split + 1));
        return boolean_op(head == "union" ? BoolOp::Union : BoolOp::Intersect, a, b);
    }
    throw SemanticError("expression is not closed-evaluable: " + expr);
}

// ---- serialization -----------------------------------------------------

namespace {

std::string render_formula(const AcceptFormula& f, const std::vector<std::vector<int>>& carriers) {
    switch (f.kind) {
        case AcceptFormula::Kind::True: return "true";
        case AcceptFormula::Kind::False: return "false";
        case AcceptFormula::Kind::Atom: {
            const auto& carrier = carriers[f.atom];
            if (carrier.empty()) return "false";
            if (carrier.size() == 1) return "inf(s" + std::to_string(carrier[0]) + ")";
            std::string out = "(";
            for (std::size_t i = 0; i < carrier.size(); ++i) {
                if (i) out += " or ";
                out += "inf(s" + std::to_string(carrier[i]) + ")";
            }
            return out + ")";
        }
        case AcceptFormula::Kind::Not:
            return "not (" + render_formula(f.children[0], carriers) + ")";
        case AcceptFormula::Kind::And: {
            std::string out = "(";
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) out += " and ";
                out += render_formula(f.children[i], carriers);
            }
            return out + ")";
        }
        case AcceptFormula::Kind::Or: {
            std::string out = "(";
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) out += " or ";
                out += render_formula(f.children[i], carriers);
            }
            return out + ")";
        }
    }
    return "false";
}

}  // namespace

std::string serialize_closed(const std::string& name, const SafetyAutomaton& f) {
    std::ostringstream os;
    os << "safety " << name << "\n";
    for (std::size_t q = 0; q < f.size(); ++q)
        os << "state s" << q << (static_cast<int>(q) == f.init ? " init" : "") << "\n";
    for (std::size_t q = 0; q < f.size(); ++q)
        for (int b = 0; b < 2; ++b)
            if (f.trans[q][b] != kNoState)
                os << "edge s" << q << " " << b << " s" << f.trans[q][b] << "\n";
    return os.str();
}

std::string serialize_regset(const std::string& name, const RegSet& e) {
    std::ostringstream os;
    os << "regset " << name << "\n";
    for (std::size_t q = 0; q < e.size(); ++q)
        os << "state s" << q << (static_cast<int>(q) == e.init ? " init" : "") << "\n";
    for (std::size_t q = 0; q < e.size(); ++q)
        for (int b = 0; b < 2; ++b)
            os << "edge s" << q << " " << b << " s" << e.trans[q][b] << "\n";
    os << "accept " << render_formula(e.accept, e.carriers) << "\n";
    return os.str();
}

std::string serialize_transducer(const std::string& name, const Transducer& t,
                                 const std::string& domain_name) {
    std::ostringstream os;
    os << "transducer " << name << "\n";
    for (std::size_t q = 0; q < t.size(); ++q)
        os << "state s" << q << (static_cast<int>(q) == t.init ? " init" : "") << "\n";
    for (std::size_t q = 0; q < t.size(); ++q)
        for (int b = 0; b < 2; ++b) {
            const TransducerStep& st = t.step[q][b];
            os << "edge s" << q << " " << b << " s" << st.dst << " "
               << (st.out.empty() ? "eps" : st.out) << "\n";
        }
    os << "domain " << domain_name << "\n";
    return os.str();
}

std::string serialize_table(const std::string& name, const FiniteStageMap& t) {
    std::ostringstream os;
    os << "table " << name << "\n";
    os << "depth " << t.depth() << "\n";
    if (t.domain_stems().empty()) {
        os << "domain full\n";
    } else {
        os << "domain";
        for (const Word& s : t.domain_stems()) os << " " << (s.empty() ? "eps" : s);
        os << "\n";
    }
    for (const auto& [w, out] : t.entries())
        os << "map " << (w.empty() ? "eps" : w) << " " << (out.empty() ? "eps" : out) << "\n";
    return os.str();
}

std::string serialize_model(const Model& m) {
    std::ostringstream os;
    for (const auto& [name, f] : m.closed_sets) os << serialize_closed(name, f) << "\n";
    for (const auto& [name, e] : m.regsets) os << serialize_regset(name, e) << "\n";
    for (const auto& [name, t] : m.transducers) {
        // Domains serialize as dedicated closed sets.
        std::string dom_name = "dom_" + name;
        os << serialize_closed(dom_name, t.domain) << "\n";
        os << serialize_transducer(name, t, dom_name) << "\n";
    }
    for (const auto& [name, t] : m.tables) os << serialize_table(name, t) << "\n";
    return os.str();
}

}  // namespace cantor
