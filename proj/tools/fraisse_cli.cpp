// Command-line front door: structure I/O, class checks, amalgamation, SWIR
// audits, lazy limit building, witness generation and machine-readable
// reports. Exit codes: 0 success, 1 audited failure (with certificate),
// 2 usage or I/O error, 3 budget exhaustion.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fraisse/audits.hpp"
#include "fraisse/commutator.hpp"
#include "fraisse/constructions.hpp"
#include "fraisse/graphzoo.hpp"
#include "fraisse/json_io.hpp"
#include "fraisse/limits.hpp"
#include "fraisse/transversal.hpp"

using namespace fraisse;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ReportSink {
    Json j;
    std::string out_path;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    ReportSink(const std::string& command, std::uint64_t seed, const Budget& budget) {
        j["command"] = command;
        j["version"] = kVersion;
        j["seed"] = seed;
        j["budgets"] = Json{{"per_query", budget.per_query}, {"total", budget.total}};
    }

    int finish(bool pass, int fail_code = 1) {
        j["pass"] = pass;
        j["timing_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                .count();
        if (out_path.empty()) {
            std::cout << j.dump(2) << std::endl;
        } else {
            std::ofstream f(out_path);
            f << j.dump(2) << std::endl;
        }
        return pass ? 0 : fail_code;
    }
};

Budget default_budget() {
    Budget b;
    b.total = 4096;
    b.per_query = 64;
    if (const char* env = std::getenv("FRAISSE_BUDGET")) {
        b.total = std::atoi(env);
        if (b.total <= 0) b.total = 4096;
    }
    return b;
}

FiniteStructure load_structure(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw StructureError("cannot open " + path);
    Json j = Json::parse(f, nullptr, true);
    return structure_from_json(j);
}

Json axiom_to_json(const AxiomResult& a) {
    Json cert = Json::array();
    for (const auto& s : a.certificate) cert.push_back(s);
    return Json{{"axiom", a.axiom},     {"instances", a.instances}, {"vacuous", a.vacuous},
                {"failed", a.failed},   {"certificate", cert},      {"note", a.note}};
}

std::map<ElemId, ElemId> parse_map(const std::string& text) {
    std::map<ElemId, ElemId> m;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        std::string entry = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        auto colon = entry.find(':');
        if (colon == std::string::npos) throw StructureError("malformed map entry: " + entry);
        m[static_cast<ElemId>(std::stoul(entry.substr(0, colon)))] =
            static_cast<ElemId>(std::stoul(entry.substr(colon + 1)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return m;
}

/// The seeded part-swapping host used by the transversal command: a
/// semigeneric limit with a directed 4-cycle and the cyclic map.
struct CycleHost {
    std::unique_ptr<LazyLimit> limit;
    LazyAutomorphism::Ptr g;
    Tuple cycle;
};

CycleHost make_cycle_host(int steps, std::uint64_t seed) {
    auto limit = std::make_unique<LazyLimit>(make_class("semigeneric"), seed);
    for (int i = 0; i < steps; ++i) limit->step();
    auto types = limit->spec().one_point_extensions(limit->current(), {});
    ElemId v0 = limit->add_point(types[0]);
    auto ext = [&](const IdSet& base, const std::vector<std::pair<ElemId, int>>& edges) {
        FiniteStructure scratch = limit->current().induced(base);
        ElemId x = scratch.fresh_id();
        scratch.add_element(x);
        for (auto& [t, d] : edges) scratch.add_tuple(kEdgeRel, d ? Tuple{x, t} : Tuple{t, x});
        return limit->add_point(qftp(scratch, {x}, base));
    };
    ElemId v1 = ext({v0}, {{v0, 0}});
    ElemId v2 = ext({v0, v1}, {{v1, 0}});
    ElemId v3 = ext({v0, v1, v2}, {{v2, 0}, {v0, 1}});
    auto g = LazyAutomorphism::atom(*limit, {{v0, v1}, {v1, v2}, {v2, v3}, {v3, v0}});
    return CycleHost{std::move(limit), std::move(g), {v0, v1, v2, v3}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite workbench for amalgamation classes, independence relations and lazy limits"};
    app.require_subcommand(1);

    std::string command_echo;
    for (int i = 0; i < argc; ++i) command_echo += std::string(i ? " " : "") + argv[i];

    Budget budget = default_budget();
    std::uint64_t seed = 0;
    std::string report_path;
    app.add_option("--seed", seed, "random seed (default 0)");
    app.add_option("--report", report_path, "write the JSON report to this file");

    // ---- check-class ----
    auto* chk = app.add_subcommand("check-class", "validate a structure against a class");
    std::string chk_class, chk_input;
    chk->add_option("--class", chk_class, "class kind")->required();
    chk->add_option("--input", chk_input, "structure JSON file")->required();

    // ---- amalgamate ----
    auto* ama = app.add_subcommand("amalgamate", "strong amalgam of two structures over a base");
    std::string ama_class, ama_base, ama_left, ama_right, ama_out;
    ama->add_option("--class", ama_class, "class kind (or srho/delta canonical operators)")->required();
    ama->add_option("--base", ama_base)->required();
    ama->add_option("--left", ama_left)->required();
    ama->add_option("--right", ama_right)->required();
    ama->add_option("--out", ama_out, "write the amalgam JSON here");

    // ---- swir-audit ----
    auto* aud = app.add_subcommand("swir-audit", "axiom audit of an independence predicate");
    std::string aud_kind, aud_window = "2,2,2";
    int aud_stage = 200, aud_floor = 50;
    bool aud_mutate = false, aud_freeness = false, aud_symmetry = false;
    aud->add_option("--swir", aud_kind, "predicate kind")->required();
    aud->add_option("--stage", aud_stage, "limit build steps (default 200)");
    aud->add_option("--window", aud_window, "max sizes a,b,c (default 2,2,2)");
    aud->add_option("--floor", aud_floor, "instance floor per axiom (default 50)");
    aud->add_flag("--mutate", aud_mutate, "audit the mutant predicate instead");
    aud->add_flag("--freeness", aud_freeness, "also run the freeness audit");
    aud->add_flag("--symmetry", aud_symmetry, "also run the symmetry audit");

    // ---- limit ----
    auto* lim = app.add_subcommand("limit", "build or verify a lazy limit");
    std::string lim_mode, lim_class, lim_out;
    int lim_steps = 200, lim_k = 3, lim_budget = 4000;
    lim->add_option("mode", lim_mode, "build|verify")->required();
    lim->add_option("--class", lim_class)->required();
    lim->add_option("--steps", lim_steps);
    lim->add_option("--k", lim_k, "base size for the extension-property audit");
    lim->add_option("--budget", lim_budget, "growth budget for verify");
    lim->add_option("--out", lim_out, "write the structure JSON here");

    // ---- auto ----
    auto* aut = app.add_subcommand("auto", "lazy automorphisms: extend, apply, commutator");
    std::string aut_mode, aut_class = "t2", aut_map = "", aut_apply;
    int aut_steps = 60, aut_stages = 2;
    aut->add_option("mode", aut_mode, "extend|apply|commutator")->required();
    aut->add_option("--class", aut_class);
    aut->add_option("--steps", aut_steps);
    aut->add_option("--map", aut_map, "seed map, e.g. 0:1,1:0");
    aut->add_option("--apply", aut_apply, "comma-separated points to apply to");
    aut->add_option("--stages", aut_stages, "chain stages for commutator mode");

    // ---- transversal ----
    auto* tra = app.add_subcommand("transversal", "transversal chain constructions");
    std::string tra_mode = "step2";
    int tra_steps = 5;
    tra->add_option("--mode", tra_mode, "step2|step3");
    tra->add_option("--steps", tra_steps);

    // ---- circle ----
    auto* cir = app.add_subcommand("circle", "exact circle-order operations");
    std::string cir_mode, cir_input, cir_out;
    int cir_n = 2;
    cir->add_option("mode", cir_mode, "realize")->required();
    cir->add_option("--input", cir_input, "abstract structure JSON");
    cir->add_option("--n", cir_n, "sector count");
    cir->add_option("--out", cir_out);

    // ---- witness ----
    auto* wit = app.add_subcommand("witness", "finite counterexample witnesses");
    std::string wit_kind, wit_structure = "t3";
    int wit_bound = 4;
    wit->add_option("kind", wit_kind, "no-dense-conjugacy|no-swir")->required();
    wit->add_option("--structure", wit_structure, "t3|s2|s3 (no-dense-conjugacy)");
    wit->add_option("--bound", wit_bound, "joint-embedding search bound");

    // ---- maximal-moves ----
    auto* mm = app.add_subcommand("maximal-moves", "commutator chain plus per-type witness report");
    std::string mm_class = "t23", mm_map = "";
    int mm_steps = 30, mm_stages = 3, mm_params = 1, mm_len = 1, mm_pool = 2, mm_types = 6;
    mm->add_option("--class", mm_class, "t23|srho");
    mm->add_option("--steps", mm_steps);
    mm->add_option("--stages", mm_stages);
    mm->add_option("--map", mm_map, "seed map for g");
    mm->add_option("--params", mm_params, "max parameter-set size in the type window");
    mm->add_option("--len", mm_len, "max tuple length in the type window");
    mm->add_option("--pool", mm_pool, "parameter pool size");
    mm->add_option("--types", mm_types, "type window cap");

    // ---- p3 ----
    auto* p3 = app.add_subcommand("p3", "twisted-order operations");
    std::string p3_mode, p3_input, p3_out;
    p3->add_option("mode", p3_mode, "twist|untwist|apex")->required();
    p3->add_option("--input", p3_input)->required();
    p3->add_option("--out", p3_out);

    CLI11_PARSE(app, argc, argv);

    try {
        ReportSink report(command_echo, seed, budget);
        report.out_path = report_path;

        if (*chk) {
            auto s = load_structure(chk_input);
            auto cls = make_class(chk_class);
            std::string why;
            bool ok = cls->member(s, &why);
            report.j["class"] = cls->name();
            report.j["points"] = s.size();
            if (!ok) report.j["violation"] = why;
            return report.finish(ok);
        }

        if (*ama) {
            auto A = load_structure(ama_base);
            auto B = load_structure(ama_left);
            auto C = load_structure(ama_right);
            FiniteStructure E(A.signature());
            if (ama_class == "srho") {
                E = srho_canonical_amalgam(A, B, C);
            } else if (ama_class == "semigeneric") {
                E = strong_amalgam_semigeneric(A, B, C);
            } else if (ama_class == "delta" || ama_class == "t23") {
                MultiHypertournamentSpec spec({{"R2", 2}, {"R3", 3}}, "R2");
                E = canonical_amalgam_delta(spec, A, B, C);
            } else {
                E = make_class(ama_class)->amalgam(A, B, C);
            }
            report.j["amalgam"] = structure_to_json(E);
            if (!ama_out.empty()) {
                std::ofstream f(ama_out);
                f << structure_to_json(E).dump(2) << std::endl;
            }
            return report.finish(true);
        }

        if (*aud) {
            auto pred = aud_mutate ? make_mutant_predicate(aud_kind) : make_predicate(aud_kind);
            auto op = make_operator(aud_kind);
            auto limit = LazyLimit::build(pred.cls, aud_stage, seed);
            int a = 2, b = 2, c = 2;
            std::sscanf(aud_window.c_str(), "%d,%d,%d", &a, &b, &c);
            auto rep = audit_axioms(pred, op, limit, a, std::max(b, c), 12, aud_floor);
            report.j["predicate"] = pred.kind;
            report.j["window_points"] = rep.window_points;
            Json axioms = Json::array();
            for (const auto& ax : rep.axioms) axioms.push_back(axiom_to_json(ax));
            report.j["axioms"] = axioms;
            bool pass = rep.pass();
            if (aud_mutate) {
                bool broke = rep.any_of_failed({"LSta", "RSta", "LMon", "RMon"});
                report.j["mutant_detected"] = broke;
                pass = broke;
            }
            if (aud_freeness) {
                auto fr = audit_freeness(pred, limit, a, std::max(b, c));
                report.j["freeness"] =
                    Json{{"pass", fr.pass},
                         {"instances", fr.instances},
                         {"counterexample", fr.counterexample ? Json(*fr.counterexample) : Json()}};
            }
            if (aud_symmetry) {
                auto sy = audit_symmetry(pred, limit, a, std::max(b, c));
                report.j["symmetry"] =
                    Json{{"pass", sy.pass},
                         {"instances", sy.instances},
                         {"counterexample", sy.counterexample ? Json(*sy.counterexample) : Json()}};
            }
            return report.finish(pass);
        }

        if (*lim) {
            auto limit = LazyLimit::build(make_class(lim_class), lim_steps, seed);
            report.j["class"] = lim_class;
            report.j["steps"] = lim_steps;
            report.j["points"] = limit.current().size();
            report.j["growths"] = limit.growth_count();
            if (lim_mode == "build") {
                if (!lim_out.empty()) {
                    std::ofstream f(lim_out);
                    f << structure_to_json(limit.current()).dump(2) << std::endl;
                }
                std::string why;
                bool ok = limit.spec().member(limit.current(), &why);
                if (!ok) report.j["violation"] = why;
                return report.finish(ok);
            }
            if (lim_mode == "verify") {
                auto rep = verify_extension_property(limit, lim_k, lim_budget);
                report.j["bases_checked"] = rep.bases_checked;
                report.j["types_checked"] = rep.types_checked;
                report.j["found_existing"] = rep.found_existing;
                report.j["realized_by_growth"] = rep.realized_by_growth;
                report.j["failures"] = rep.failures;
                return report.finish(rep.pass());
            }
            throw CLI::ValidationError("limit", "mode must be build or verify");
        }

        if (*aut) {
            auto limit = std::make_unique<LazyLimit>(make_class(aut_class), seed);
            for (int i = 0; i < aut_steps; ++i) limit->step();
            std::map<ElemId, ElemId> seed_map;
            if (!aut_map.empty()) {
                seed_map = parse_map(aut_map);
            } else {
                const auto& u = limit->current().universe();
                if (u.size() >= 2) seed_map[u[0]] = u[1];
            }
            auto g = LazyAutomorphism::atom(*limit, seed_map);
            report.j["class"] = aut_class;
            report.j["seed_map"] = Json::object();
            for (auto& [k, v] : seed_map) report.j["seed_map"][std::to_string(k)] = v;
            if (aut_mode == "extend" || aut_mode == "apply") {
                Json images = Json::object();
                Tuple targets;
                if (!aut_apply.empty()) {
                    std::size_t pos = 0;
                    while (pos < aut_apply.size()) {
                        auto comma = aut_apply.find(',', pos);
                        targets.push_back(static_cast<ElemId>(
                            std::stoul(aut_apply.substr(pos, comma - pos))));
                        if (comma == std::string::npos) break;
                        pos = comma + 1;
                    }
                } else {
                    const auto& u = limit->current().universe();
                    for (std::size_t i = 0; i < 5 && i < u.size(); ++i) targets.push_back(u[i]);
                }
                for (ElemId v : targets) images[std::to_string(v)] = g->apply(v);
                report.j["images"] = images;
                return report.finish(true);
            }
            if (aut_mode == "commutator") {
                auto mode = aut_class == "srho" ? CommutatorBuilder::Mode::Srho
                                                : CommutatorBuilder::Mode::FreeSwir;
                Budget big = budget;
                big.total = std::max(big.total, 2000000);
                big.per_query = std::max(big.per_query, 256);
                auto builder = CommutatorBuilder(*limit, g, mode, big);
                builder.run_stages(aut_stages);
                Json stages = Json::array();
                for (const auto& w : builder.log())
                    stages.push_back(Json{{"r_verified", w.r_verified},
                                          {"l_verified", w.l_verified},
                                          {"b_R", w.b_R},
                                          {"fb_R", w.fb_R},
                                          {"b_L", w.b_L},
                                          {"fb_L", w.fb_L}});
                report.j["stages"] = stages;
                bool pass = builder.revalidate();
                for (const auto& w : builder.log()) pass = pass && w.r_verified && w.l_verified;
                report.j["revalidated"] = pass;
                return report.finish(pass);
            }
            throw CLI::ValidationError("auto", "mode must be extend, apply or commutator");
        }

        if (*tra) {
            auto host = make_cycle_host(40, seed);
            Budget big = budget;
            big.total = std::max(big.total, 4000000);
            big.per_query = std::max(big.per_query, 256);
            TransversalResult res = tra_mode == "step3"
                                        ? double_transversal(*host.limit, host.g, tra_steps, big)
                                        : generic_transversal_vs_image(*host.limit, host.g, tra_steps, big);
            Json stages = Json::array();
            for (const auto& st : res.log)
                stages.push_back(Json{{"stage", st.stage},
                                      {"absorbed", st.absorbed},
                                      {"case", st.absorb_case},
                                      {"solved_problem", st.solved_problem},
                                      {"conditions",
                                       Json{{"points", st.cond_points},
                                            {"images", st.cond_images},
                                            {"schedule", st.cond_schedule},
                                            {"realized", st.cond_realized},
                                            {"triple_valid", st.triple_valid}}}});
            report.j["mode"] = tra_mode;
            report.j["stages"] = stages;
            report.j["problems_solved"] = res.chain.solved;
            return report.finish(res.all_stages_pass());
        }

        if (*cir) {
            if (cir_mode != "realize") throw CLI::ValidationError("circle", "mode must be realize");
            auto s = load_structure(cir_input);
            auto res = circle_realizable(s, cir_n);
            if (std::holds_alternative<LocalOrderConfig>(res)) {
                auto cfg = std::get<LocalOrderConfig>(res);
                report.j["realizable"] = true;
                report.j["config"] = circle_config_to_json(cfg);
                if (!cir_out.empty()) {
                    std::ofstream f(cir_out);
                    f << circle_config_to_json(cfg).dump(2) << std::endl;
                }
                return report.finish(true);
            }
            report.j["realizable"] = false;
            report.j["branches_tried"] = std::get<CircleUnsat>(res).branches_tried;
            report.j["certificate"] = std::get<CircleUnsat>(res).reason;
            return report.finish(true);  // the question was decided either way
        }

        if (*wit) {
            if (wit_kind == "no-dense-conjugacy") {
                if (wit_structure == "t3") {
                    auto cls = make_class("t3");
                    FiniteStructure A(cls->signature());
                    A.add_element(0);
                    A.add_element(1);
                    FiniteStructure B(cls->signature());
                    B.add_element(0);
                    auto res = kr_jep_check(*cls, A, {{0, 1}, {1, 0}}, B, {{0, 0}}, wit_bound);
                    bool exhausted = std::holds_alternative<JepExhaustion>(res);
                    report.j["witness"] = "a 2-point swap and a 1-point identity";
                    report.j["exhausted"] = exhausted;
                    if (exhausted) {
                        report.j["structures_tried"] = std::get<JepExhaustion>(res).structures_tried;
                        report.j["note"] =
                            "any joint embedding would restrict a transposition to a 3-point "
                            "substructure whose automorphisms are the even permutations, so "
                            "exhaustion at bound >= 3 is a genuine obstruction";
                    }
                    return report.finish(exhausted);
                }
                int n = wit_structure == "s3" ? 3 : 2;
                auto w = no_dense_conjugacy_witness(n);
                report.j["n"] = n;
                report.j["q"] = rational_to_string(w.q);
                report.j["cycle"] = circle_config_to_json(w.A);
                report.j["shift_verified"] = w.fA_verified;
                Json obs = Json::array();
                bool all_unsat = true;
                for (std::size_t l = 0; l < w.obstructions.size(); ++l) {
                    obs.push_back(Json{{"l", static_cast<int>(l)}, {"unsat", static_cast<bool>(w.obstruction_unsat[l])}});
                    all_unsat = all_unsat && w.obstruction_unsat[l];
                }
                report.j["obstructions"] = obs;
                return report.finish(w.fA_verified && all_unsat);
            }
            if (wit_kind == "no-swir") {
                FiniteStructure cyc(oriented_graph_signature());
                for (ElemId v = 0; v < 4; ++v) cyc.add_element(v);
                cyc.add_tuple(kEdgeRel, {0, 1});
                cyc.add_tuple(kEdgeRel, {1, 2});
                cyc.add_tuple(kEdgeRel, {2, 3});
                cyc.add_tuple(kEdgeRel, {3, 0});
                FiniteStructure aux = cyc;
                aux.add_element(4);
                aux.add_tuple(kEdgeRel, {4, 1});
                aux.add_tuple(kEdgeRel, {3, 4});
                auto left = qftp(aux, {4}, {0, 2});
                auto in_class = [](const FiniteStructure& s) {
                    return std::holds_alternative<SemigenericStructure>(check_semigeneric(s));
                };
                auto cert = stationarity_obstruction_search(in_class, cyc, {0, 2}, left, {1, 3});
                report.j["obstruction"] = cert.has_value();
                if (cert) {
                    report.j["candidates"] = cert->candidates.size();
                    Json movers = Json::array();
                    for (const auto& m : cert->movers) {
                        Json mm2 = Json::object();
                        for (auto& [k, v] : m) mm2[std::to_string(k)] = v;
                        movers.push_back(mm2);
                    }
                    report.j["movers"] = movers;
                }
                return report.finish(cert.has_value());
            }
            throw CLI::ValidationError("witness", "kind must be no-dense-conjugacy or no-swir");
        }

        if (*mm) {
            auto limit = std::make_unique<LazyLimit>(make_class(mm_class), seed);
            for (int i = 0; i < mm_steps; ++i) limit->step();
            std::map<ElemId, ElemId> seed_map;
            if (!mm_map.empty()) {
                seed_map = parse_map(mm_map);
            } else {
                const auto& u = limit->current().universe();
                seed_map[u[0]] = u[1];
            }
            auto g = LazyAutomorphism::atom(*limit, seed_map);
            auto mode =
                mm_class == "srho" ? CommutatorBuilder::Mode::Srho : CommutatorBuilder::Mode::FreeSwir;
            Budget big = budget;
            big.total = std::max(big.total, 4000000);
            big.per_query = std::max(big.per_query, 256);
            CommutatorBuilder builder(*limit, g, mode, big);
            builder.run_stages(mm_stages);
            auto rep = moves_maximally_verify(builder, mm_params, mm_len, mm_pool, mm_types);
            Json entries = Json::array();
            for (const auto& e : rep.entries)
                entries.push_back(Json{{"r_ok", e.r_ok}, {"l_ok", e.l_ok}});
            report.j["class"] = mm_class;
            report.j["stages"] = mm_stages;
            report.j["types_checked"] = rep.entries.size();
            report.j["entries"] = entries;
            report.j["log_revalidated"] = builder.revalidate();
            return report.finish(rep.pass() && builder.revalidate());
        }

        if (*p3) {
            auto s = load_structure(p3_input);
            Json out;
            bool ok = true;
            if (p3_mode == "twist") {
                out = structure_to_json(p3_twist(s));
            } else if (p3_mode == "untwist") {
                auto res = p3_untwist(s);
                if (std::holds_alternative<FiniteStructure>(res)) {
                    out = structure_to_json(std::get<FiniteStructure>(res));
                } else {
                    ok = false;
                    report.j["violation"] = std::get<ColouredPosetViolation>(res).reason;
                }
            } else if (p3_mode == "apex") {
                out = structure_to_json(p3_attach_apex(s));
            } else {
                throw CLI::ValidationError("p3", "mode must be twist, untwist or apex");
            }
            if (ok) {
                report.j["result"] = out;
                if (!p3_out.empty()) {
                    std::ofstream f(p3_out);
                    f << out.dump(2) << std::endl;
                }
            }
            return report.finish(ok);
        }

        std::cerr << "no subcommand selected" << std::endl;
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << std::endl;
        return 3;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis failure: " << e.what() << std::endl;
        return 1;
    } catch (const StructureError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
