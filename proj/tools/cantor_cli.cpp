// Command-line surface of the engine. Reports are line-oriented
// `key = value` text with automaton blocks inlined; exit code 0 for definite
// verdicts, 2 for budget-capped ones, 1 for errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cantor/decompose.hpp"
#include "cantor/hset.hpp"
#include "cantor/oracle.hpp"
#include "cantor/parser.hpp"
#include "cantor/resolve.hpp"
#include "cantor/table.hpp"

using namespace cantor;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCapped = 2;

Model load_models(const std::vector<std::string>& paths) {
    Model merged;
    for (const std::string& p : paths) {
        Model m = parse_spec_file(p);
        for (auto& [k, v] : m.closed_sets) merged.closed_sets.insert_or_assign(k, std::move(v));
        for (auto& [k, v] : m.regsets) merged.regsets.insert_or_assign(k, std::move(v));
        for (auto& [k, v] : m.transducers) merged.transducers.insert_or_assign(k, std::move(v));
        for (auto& [k, v] : m.tables) merged.tables.insert_or_assign(k, std::move(v));
    }
    return merged;
}

unsigned env_budget(unsigned fallback) {
    const char* v = std::getenv("ENGINE_BUDGET");
    if (!v) return fallback;
    char* end = nullptr;
    unsigned long parsed = std::strtoul(v, &end, 10);
    if (end == v || parsed == 0) return fallback;
    return static_cast<unsigned>(parsed);
}

void emit_closed(const std::string& key, const SafetyAutomaton& f) {
    std::cout << key << " =\n";
    std::istringstream is(serialize_closed(key, f));
    std::string line;
    while (std::getline(is, line)) std::cout << "  " << line << "\n";
}

std::string word_or_eps(const Word& w) { return w.empty() ? "eps" : w; }

struct MapRef {
    bool is_table = false;
    std::string name;
};

MapRef parse_map_ref(const std::string& ref) {
    MapRef out;
    if (ref.rfind("table:", 0) == 0) {
        out.is_table = true;
        out.name = ref.substr(6);
    } else if (ref.rfind("transducer:", 0) == 0) {
        out.name = ref.substr(11);
    } else {
        out.name = ref;
    }
    return out;
}

const Transducer& get_transducer(const Model& m, const MapRef& ref) {
    auto it = m.transducers.find(ref.name);
    if (it == m.transducers.end()) throw SemanticError("undefined transducer: " + ref.name);
    return it->second;
}

const FiniteStageMap& get_table(const Model& m, const MapRef& ref) {
    auto it = m.tables.find(ref.name);
    if (it == m.tables.end()) throw SemanticError("undefined table: " + ref.name);
    return it->second;
}

std::string openness_str(OpennessStatus s) {
    switch (s) {
        case OpennessStatus::Open: return "open";
        case OpennessStatus::NotOpen: return "not-open";
        case OpennessStatus::OpenUpToDepth: return "open-up-to-depth";
    }
    return "?";
}

int report_nowhere(const NowhereOpenVerdict& v) {
    if (v.status == NowhereStatus::NotNowhereOpen) {
        std::cout << "status = not-nowhere-open\n";
        std::cout << "witness = " << word_or_eps(*v.witness) << "\n";
        std::cout << "depth = " << v.depth << "\n";
        return kExitOk;
    }
    std::cout << "status = nowhere-open-up-to-depth\n";
    std::cout << "depth = " << v.depth << "\n";
    return kExitCapped;
}

void print_dconstruction(const DConstruction& c) {
    std::cout << "root_x = " << c.root.x.str() << "\n";
    std::cout << "root_p = " << c.root.p.str() << "\n";
    std::cout << "selected = " << c.nodes.size() << "\n";
    std::cout << "d_points = " << c.d_points().size() << "\n";
    for (const auto& [idx, node] : c.nodes) {
        std::cout << (c.is_odd(idx) ? "d" : "h") << " " << index_str(idx) << " " << node.x.str()
                  << " " << word_or_eps(node.x_stem) << " " << index_str(idx) << "\n";
    }
    for (const auto& [idx, node] : c.nodes)
        std::cout << "h_point " << index_str(idx) << " " << node.p.str() << " "
                  << word_or_eps(node.p_stem) << "\n";
}

HFamily read_hfamily(std::istream& in) {
    HFamily h;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tuple_s, stem_s;
        if (!(ls >> tuple_s >> stem_s)) continue;
        IndexTuple idx;
        std::istringstream ts(tuple_s);
        std::string part;
        while (std::getline(ts, part, ',')) idx.push_back(std::stoi(part));
        if (idx.empty()) continue;
        Word stem = stem_s == "eps" ? Word{} : stem_s;
        if (!is_binary_word(stem)) throw ParseError("bad stem in H line: " + stem_s);
        h.codes.emplace(idx, stem);
        h.k_max = std::max<unsigned>(h.k_max, idx.size());
        for (int i : idx) h.i_max = std::max<unsigned>(h.i_max, static_cast<unsigned>(i));
    }
    return h;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic topology engine over Cantor space"};
    app.require_subcommand(1);

    std::vector<std::string> spec_paths;
    std::string set_expr, ambient_expr = "closed:full", map_ref_s, z_expr;
    std::string clopen_stems, within = "", op, part_expr, all_expr, f_expr, in_path = "-";
    unsigned budget = 0, depth = 12, rounds = 32, kk = 4, ii = 6, nn = 2, dd = 3, odepth = 8;

    auto* c_resolvable = app.add_subcommand("resolvable", "decide resolvability of a set");
    c_resolvable->add_option("--spec", spec_paths)->required();
    c_resolvable->add_option("--set", set_expr)->required();
    c_resolvable->add_option("--ambient", ambient_expr);
    c_resolvable->add_option("--budget", budget);

    auto* c_closure = app.add_subcommand("closure", "topological closure of a set");
    c_closure->add_option("--spec", spec_paths)->required();
    c_closure->add_option("--set", set_expr)->required();

    auto* c_cbderiv = app.add_subcommand("cbderiv", "Cantor-Bendixson derivative");
    c_cbderiv->add_option("--spec", spec_paths)->required();
    c_cbderiv->add_option("--set", set_expr)->required();

    auto* c_kernel = app.add_subcommand("kernel", "perfect kernel and rank");
    c_kernel->add_option("--spec", spec_paths)->required();
    c_kernel->add_option("--set", set_expr)->required();
    c_kernel->add_option("--budget", budget);

    auto* c_image = app.add_subcommand("image", "image of a closed set");
    c_image->add_option("--spec", spec_paths)->required();
    c_image->add_option("--map", map_ref_s)->required();
    c_image->add_option("--set", set_expr)->required();

    auto* c_preimage = app.add_subcommand("preimage", "preimage of a clopen set");
    c_preimage->add_option("--spec", spec_paths)->required();
    c_preimage->add_option("--map", map_ref_s)->required();
    c_preimage->add_option("--clopen", clopen_stems)->required();

    auto* c_open = app.add_subcommand("open-check", "openness of a map onto its image");
    c_open->add_option("--spec", spec_paths)->required();
    c_open->add_option("--map", map_ref_s)->required();
    c_open->add_option("--depth", depth);

    auto* c_nowhere = app.add_subcommand("nowhere-open", "nowhere-openness on a closed set");
    c_nowhere->add_option("--spec", spec_paths)->required();
    c_nowhere->add_option("--map", map_ref_s)->required();
    c_nowhere->add_option("--z", z_expr);
    c_nowhere->add_option("--depth", depth)->default_val(3u);

    auto* c_decompose = app.add_subcommand("decompose", "piecewise-open kernel decomposition");
    c_decompose->add_option("--spec", spec_paths)->required();
    c_decompose->add_option("--map", map_ref_s)->required();
    c_decompose->add_option("--depth", depth)->default_val(10u);
    c_decompose->add_option("--rounds", rounds);

    auto* c_injective = app.add_subcommand("injective", "injectivity of a transducer");
    c_injective->add_option("--spec", spec_paths)->required();
    c_injective->add_option("--map", map_ref_s)->required();
    c_injective->add_option("--budget", budget);

    auto* c_genh = app.add_subcommand("gen-h", "generate the standard family H");
    c_genh->add_option("--k", kk);
    c_genh->add_option("--i", ii);

    auto* c_checkh = app.add_subcommand("check-h", "check H-family conditions");
    c_checkh->add_option("--in", in_path);

    auto* c_dcon = app.add_subcommand("d-construct", "finite-stage discrete set construction");
    c_dcon->add_option("--spec", spec_paths)->required();
    c_dcon->add_option("--map", map_ref_s)->required();
    c_dcon->add_option("--z", z_expr);
    c_dcon->add_option("--n", nn);
    c_dcon->add_option("--d", dd);

    auto* c_verifyd = app.add_subcommand("verify-d", "construct and verify the discrete set");
    c_verifyd->add_option("--spec", spec_paths)->required();
    c_verifyd->add_option("--map", map_ref_s)->required();
    c_verifyd->add_option("--z", z_expr);
    c_verifyd->add_option("--n", nn);
    c_verifyd->add_option("--d", dd);

    auto* c_oracle = app.add_subcommand("oracle-check", "engine vs brute-force oracle");
    c_oracle->add_option("--spec", spec_paths)->required();
    c_oracle->add_option("--op", op)->required();
    c_oracle->add_option("--depth", odepth);
    c_oracle->add_option("--set", set_expr);
    c_oracle->add_option("--map", map_ref_s);
    c_oracle->add_option("--within", within);
    c_oracle->add_option("--f", f_expr);
    c_oracle->add_option("--ambient", ambient_expr);
    c_oracle->add_option("--part", part_expr);
    c_oracle->add_option("--all", all_expr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;  // --help stays success
    }

    try {
        if (*c_resolvable) {
            Model m = load_models(spec_paths);
            RegSet e = eval_regset_expr(m, set_expr);
            SafetyAutomaton ambient =
                ambient_expr == "closed:full" && !m.closed_sets.count("full")
                    ? full_space()
                    : eval_closed_expr(m, ambient_expr);
            unsigned b = budget ? budget : env_budget(50);
            ResolvabilityVerdict v = check_resolvable(e, ambient, b);
            std::cout << "status = "
                      << (v.status == ResolvabilityStatus::Resolvable      ? "resolvable"
                          : v.status == ResolvabilityStatus::NotResolvable ? "not-resolvable"
                                                                           : "unknown")
                      << "\n";
            std::cout << "steps = " << v.steps << "\n";
            if (v.status == ResolvabilityStatus::NotResolvable) emit_closed("witness", v.witness);
            return v.status == ResolvabilityStatus::Unknown ? kExitCapped : kExitOk;
        }
        if (*c_closure) {
            Model m = load_models(spec_paths);
            RegSet e = eval_regset_expr(m, set_expr);
            emit_closed("closure", closure(e));
            return kExitOk;
        }
        if (*c_cbderiv) {
            Model m = load_models(spec_paths);
            SafetyAutomaton f = eval_closed_expr(m, set_expr);
            emit_closed("derivative", cb_derivative(f));
            return kExitOk;
        }
        if (*c_kernel) {
            Model m = load_models(spec_paths);
            SafetyAutomaton f = eval_closed_expr(m, set_expr);
            PerfectKernelResult r = perfect_kernel(f, budget ? budget : env_budget(64));
            std::cout << "rank = " << r.rank << "\n";
            std::cout << "countable = " << (r.countable ? "true" : "false") << "\n";
            emit_closed("kernel", r.kernel);
            return kExitOk;
        }
        if (*c_image) {
            Model m = load_models(spec_paths);
            const Transducer& t = get_transducer(m, parse_map_ref(map_ref_s));
            SafetyAutomaton f = eval_closed_expr(m, set_expr);
            emit_closed("image", image_closed(t, f));
            return kExitOk;
        }
        if (*c_preimage) {
            Model m = load_models(spec_paths);
            const Transducer& t = get_transducer(m, parse_map_ref(map_ref_s));
            std::vector<Word> stems;
            std::istringstream is(clopen_stems);
            std::string s;
            while (is >> s) stems.push_back(s == "eps" ? Word{} : s);
            emit_closed("preimage", preimage_clopen(t, ClopenSet(stems)));
            return kExitOk;
        }
        if (*c_open) {
            Model m = load_models(spec_paths);
            const Transducer& t = get_transducer(m, parse_map_ref(map_ref_s));
            OpennessVerdict v = check_open(t, depth);
            std::cout << "status = " << openness_str(v.status) << "\n";
            std::cout << "depth = " << v.depth << "\n";
            if (v.witness) std::cout << "witness = " << word_or_eps(*v.witness) << "\n";
            return v.status == OpennessStatus::OpenUpToDepth ? kExitCapped : kExitOk;
        }
        if (*c_nowhere) {
            Model m = load_models(spec_paths);
            MapRef ref = parse_map_ref(map_ref_s);
            if (ref.is_table) {
                const FiniteStageMap& t = get_table(m, ref);
                return report_nowhere(table_check_nowhere_open(t, t.leaves(), depth));
            }
            const Transducer& t = get_transducer(m, ref);
            SafetyAutomaton z = z_expr.empty() ? t.domain : eval_closed_expr(m, z_expr);
            return report_nowhere(check_nowhere_open(t, z, depth));
        }
        if (*c_decompose) {
            Model m = load_models(spec_paths);
            MapRef ref = parse_map_ref(map_ref_s);
            if (ref.is_table) {
                const FiniteStageMap& t = get_table(m, ref);
                unsigned stage = std::min(depth, 3u);
                TableDecompositionResult r = table_decompose(t, depth, rounds, stage);
                std::cout << "pieces = " << r.pieces.size() << "\n";
                for (const auto& p : r.pieces)
                    std::cout << "piece " << word_or_eps(p.stem) << " leaves " << p.leaves.size()
                              << "\n";
                std::cout << "residual_leaves = " << r.residual.size() << "\n";
                std::cout << "status = "
                          << (r.status == DecompositionStatus::FullyDecomposed ? "fully-decomposed"
                              : r.status == DecompositionStatus::ResidualRemains
                                  ? "residual-remains"
                                  : "depth-capped")
                          << "\n";
                if (r.residual_verdict) {
                    std::cout << "residual_verdict = "
                              << (r.residual_verdict->status == NowhereStatus::NowhereOpenUpToDepth
                                      ? "nowhere-open-up-to-depth"
                                      : "not-nowhere-open")
                              << "\n";
                    std::cout << "residual_depth = " << r.residual_verdict->depth << "\n";
                }
                return r.status == DecompositionStatus::FullyDecomposed ? kExitOk : kExitCapped;
            }
            const Transducer& t = get_transducer(m, ref);
            DecompositionResult r = kernel_decompose(t, depth, rounds);
            std::cout << "pieces = " << r.pieces.size() << "\n";
            for (const auto& p : r.pieces) std::cout << "piece " << word_or_eps(p.stem) << "\n";
            std::cout << "status = "
                      << (r.status == DecompositionStatus::FullyDecomposed   ? "fully-decomposed"
                          : r.status == DecompositionStatus::ResidualRemains ? "residual-remains"
                                                                             : "depth-capped")
                      << "\n";
            emit_closed("residual", r.residual);
            std::cout << "piecewise_open_certified = "
                      << (r.piecewise_open_certified ? "true" : "false") << "\n";
            std::cout << "piecewise_homeomorphism = "
                      << (r.piecewise_homeomorphism ? "true" : "false") << "\n";
            if (r.residual_verdict) {
                std::cout << "residual_verdict = "
                          << (r.residual_verdict->status == NowhereStatus::NowhereOpenUpToDepth
                                  ? "nowhere-open-up-to-depth"
                                  : "not-nowhere-open")
                          << "\n";
            }
            return r.status == DecompositionStatus::FullyDecomposed ? kExitOk : kExitCapped;
        }
        if (*c_injective) {
            Model m = load_models(spec_paths);
            const Transducer& t = get_transducer(m, parse_map_ref(map_ref_s));
            InjectivityVerdict v = is_injective(t, budget ? budget : env_budget(16));
            std::cout << "status = " << (v.injective ? "injective" : "not-injective") << "\n";
            std::cout << "delay_budget = " << v.delay_budget << "\n";
            std::cout << "saturated = " << (v.saturated ? "true" : "false") << "\n";
            if (v.witness)
                std::cout << "witness = " << v.witness->first.str() << " "
                          << v.witness->second.str() << "\n";
            return v.injective && !v.saturated ? kExitCapped : kExitOk;
        }
        if (*c_genh) {
            HFamily h = generate_h(kk, ii);
            for (const auto& [idx, stem] : h.codes)
                std::cout << index_str(idx) << " " << word_or_eps(stem) << "\n";
            return kExitOk;
        }
        if (*c_checkh) {
            HFamily h;
            if (in_path == "-") {
                h = read_hfamily(std::cin);
            } else {
                std::ifstream in(in_path);
                if (!in) throw std::runtime_error("cannot open " + in_path);
                h = read_hfamily(in);
            }
            HConditionReport r = check_h_conditions(h);
            std::cout << "a = " << (r.a ? "true" : "false") << "\n";
            std::cout << "a_printed = " << (r.a_printed ? "true" : "false") << "\n";
            std::cout << "b = " << (r.b ? "true" : "false") << "\n";
            std::cout << "c = " << (r.c ? "true" : "false") << "\n";
            std::cout << "no_isolated = " << (r.no_isolated ? "true" : "false") << "\n";
            return kExitOk;
        }
        if (*c_dcon || *c_verifyd) {
            Model m = load_models(spec_paths);
            MapRef ref = parse_map_ref(map_ref_s);
            try {
                if (ref.is_table) {
                    const FiniteStageMap& t = get_table(m, ref);
                    DConstruction c = construct_d(t, {}, nn, dd);
                    std::cout << "status = constructed\n";
                    print_dconstruction(c);
                    if (*c_verifyd) {
                        DVerification v = verify_d(c, t);
                        std::cout << "discrete = " << (v.discrete ? "true" : "false") << "\n";
                        std::cout << "dense = " << (v.dense ? "true" : "false") << "\n";
                        std::cout << "codense = " << (v.codense ? "true" : "false") << "\n";
                        std::cout << "image_match = "
                                  << (v.image_match == ImageMatch::True    ? "true"
                                      : v.image_match == ImageMatch::False ? "false"
                                                                           : "not-applicable")
                                  << "\n";
                        std::cout << "preimage_equations = "
                                  << (v.preimage_equations ? "true" : "false") << "\n";
                        std::cout << "neighborhood_reading = " << v.neighborhood_reading << "\n";
                    }
                } else {
                    const Transducer& t = get_transducer(m, ref);
                    SafetyAutomaton z = z_expr.empty() ? t.domain : eval_closed_expr(m, z_expr);
                    DConstruction c = construct_d(t, z, nn, dd);
                    std::cout << "status = constructed\n";
                    print_dconstruction(c);
                    if (*c_verifyd) {
                        DVerification v = verify_d(c, t, z);
                        std::cout << "discrete = " << (v.discrete ? "true" : "false") << "\n";
                        std::cout << "dense = " << (v.dense ? "true" : "false") << "\n";
                        std::cout << "codense = " << (v.codense ? "true" : "false") << "\n";
                        std::cout << "image_match = "
                                  << (v.image_match == ImageMatch::True    ? "true"
                                      : v.image_match == ImageMatch::False ? "false"
                                                                           : "not-applicable")
                                  << "\n";
                        std::cout << "preimage_equations = "
                                  << (v.preimage_equations ? "true" : "false") << "\n";
                        std::cout << "neighborhood_reading = " << v.neighborhood_reading << "\n";
                    }
                }
            } catch (const ConstructionObstructed& e) {
                std::cout << "status = obstructed\n";
                std::cout << "obstructed_at = " << index_str(e.index) << "\n";
                std::cout << "reason = " << e.reason << "\n";
                return kExitError;
            }
            return kExitOk;
        }
        if (*c_oracle) {
            Model m = load_models(spec_paths);
            OracleReport r;
            if (op == "closure") {
                r = compare_closure(eval_regset_expr(m, set_expr), odepth);
            } else if (op == "image") {
                const Transducer& t = get_transducer(m, parse_map_ref(map_ref_s));
                r = compare_image(t, eval_closed_expr(m, set_expr), odepth);
            } else if (op == "empty") {
                r = compare_empty(eval_regset_expr(m, set_expr),
                                  within == "eps" ? Word{} : within, odepth);
            } else if (op == "derivative") {
                SafetyAutomaton f = eval_closed_expr(m, f_expr);
                SafetyAutomaton amb = ambient_expr == "closed:full" && !m.closed_sets.count("full")
                                          ? full_space()
                                          : eval_closed_expr(m, ambient_expr);
                r = compare_derivative(eval_regset_expr(m, set_expr), f, amb, odepth);
            } else if (op == "relopen") {
                r = compare_rel_open(eval_closed_expr(m, part_expr), eval_closed_expr(m, all_expr),
                                     odepth);
            } else {
                throw SemanticError("unknown oracle op: " + op);
            }
            std::cout << "kind = " << r.kind << "\n";
            std::cout << "depth = " << r.depth << "\n";
            std::cout << "agree = " << (r.agree ? "true" : "false") << "\n";
            std::cout << "exact_equal = " << (r.exact_equal ? "true" : "false") << "\n";
            if (!r.detail.empty()) std::cout << "detail = " << r.detail << "\n";
            return r.agree ? kExitOk : kExitError;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
