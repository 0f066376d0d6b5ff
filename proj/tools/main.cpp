#include "toda/dsl.hpp"
#include "toda/examples.hpp"
#include "toda/polytope.hpp"
#include "toda/report.hpp"
#include "toda/simp.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace toda;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int finish(const Report& rep) {
    std::cout << rep.emit();
    return rep.exit_code();
}

Report invalid(const std::string& cmd, const std::string& msg) {
    Report rep;
    rep.command = cmd;
    rep.status = "invalid";
    rep.payload["error"] = msg;
    return rep;
}

std::optional<PresentationFile> load(const std::string& cmd, const std::string& path,
                                     Report& err_out) {
    std::string text;
    try {
        text = read_input(path);
    } catch (std::exception& e) {
        err_out = invalid(cmd, e.what());
        return std::nullopt;
    }
    auto res = parse(text);
    if (!res.ok()) {
        err_out = invalid(cmd, res.error->to_string());
        err_out.payload["error_kind"] = res.error->code();
        err_out.payload["line"] = res.error->line;
        err_out.payload["col"] = res.error->col;
        return std::nullopt;
    }
    return std::move(*res.file);
}

GradedMap lookup_map(const PresentationFile& f, const std::string& name) {
    auto it = f.maps.find(name);
    if (it == f.maps.end()) throw std::runtime_error("unknown map " + name);
    return resolve_map(f, it->second);
}

Json stage_json(const StageCoset& s) {
    Json j;
    j["arity"] = s.stage;
    j["coset"] = coset_json(s.coset);
    return j;
}

PresentationFile export_fixtures(int m, int n) {
    PresentationFile f;
    auto P = build_rational_pair(m);
    f.dgls.emplace("Astar", P.A);
    f.dgls.emplace("Bstar", P.B);
    f.order.push_back("Astar");
    f.order.push_back("Bstar");
    auto M = build_moore_fixture(n);
    f.chains.emplace("sphere_n", M.sphere_n);
    f.chains.emplace("sphere_n1", M.sphere_n1);
    f.chains.emplace("moore", M.moore);
    f.order.push_back("sphere_n");
    f.order.push_back("sphere_n1");
    f.order.push_back("moore");
    auto store = [&](const std::string& nm, const GradedMap& g, const std::string& src,
                     const std::string& dst) {
        MapItem mi;
        mi.name = nm;
        mi.src = src;
        mi.dst = dst;
        mi.shift = g.shift;
        for (auto& [d, mat] : g.comp) mi.comp[d] = mat;
        f.maps.emplace(nm, mi);
        f.order.push_back(nm);
    };
    store("mult2", M.two, "sphere_n", "sphere_n");
    store("inc", M.inc, "sphere_n", "moore");
    store("pinch", M.pinch, "moore", "sphere_n1");
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact obstruction calculus: Toda brackets, DGL homology, "
                 "simplicial resolutions, folding polytopes"};
    app.require_subcommand(1);

    std::string file, item, cls, fname, gname, hname, target = "A";
    std::vector<std::string> map_names;
    std::string u = "a", v = "b", w = "c", alpha = "x", beta = "y", gamma = "z";
    int n = 3, m = 2, lo = 0, hi = -1, stages = 2;
    unsigned long seed = 1;
    bool modified = false, collapse = false;
    std::string ring_name = "Q";

    auto* c_check = app.add_subcommand("check", "validate every item of a presentation");
    c_check->add_option("file", file, "presentation file, or - for stdin")->required();

    auto* c_hom = app.add_subcommand("homology", "homology of a chain complex or DGL");
    c_hom->add_option("file", file)->required();
    c_hom->add_option("--item", item, "item name")->required();
    c_hom->add_option("--from", lo, "lowest degree");
    c_hom->add_option("--to", hi, "highest degree");

    auto* c_isb = app.add_subcommand("is-boundary", "solve d(u) = z in a DGL");
    c_isb->add_option("file", file)->required();
    c_isb->add_option("--item", item)->required();
    c_isb->add_option("--class", cls, "a Lie expression, e.g. \"[a,x]+[b,y]+[c,z]\"")->required();

    auto* c_massey = app.add_subcommand("massey", "symmetric triple Lie-Massey product");
    c_massey->add_option("file", file)->required();
    c_massey->add_option("--item", item)->required();
    c_massey->add_option("--u", u);
    c_massey->add_option("--v", v);
    c_massey->add_option("--w", w);
    c_massey->add_option("--alpha", alpha, "bounding element with d(alpha) = [v,w]");
    c_massey->add_option("--beta", beta, "bounding element with d(beta) = [w,u]");
    c_massey->add_option("--gamma", gamma, "bounding element with d(gamma) = [u,v]");

    auto* c_toda = app.add_subcommand("toda", "triple Toda bracket coset <f, g, h>");
    c_toda->add_option("file", file)->required();
    c_toda->add_option("fmap", fname, "outer map name")->required();
    c_toda->add_option("gmap", gname, "middle map name")->required();
    c_toda->add_option("hmap", hname, "inner map name")->required();

    auto* c_long = app.add_subcommand("long-toda", "staged long Toda bracket descent");
    c_long->add_option("file", file)->required();
    c_long->add_option("--maps", map_names, "comma-separated map names d1,...,dn")
        ->required()
        ->delimiter(',');

    auto* c_poly = app.add_subcommand("polytope", "folding polytope homology report");
    c_poly->add_option("--n", n)->required();
    c_poly->add_flag("--modified", modified);

    auto* c_resolve =
        app.add_subcommand("resolve", "realize a seeded random acyclic module resolution");
    c_resolve->add_option("--stages", stages);
    c_resolve->add_option("--seed", seed);
    c_resolve->add_option("--ring", ring_name)->check(CLI::IsMember({"Q", "F2"}));

    auto* c_aug = app.add_subcommand("augment", "augment the simplicial resolution fixture");
    c_aug->add_option("--m", m, "even parameter, degrees truncated at 4m");
    c_aug->add_option("--target", target)->check(CLI::IsMember({"A", "B", "A-minus-w"}));

    auto* c_ex = app.add_subcommand("example", "run a built-in example");
    std::string which = "moore";
    c_ex->add_option("which", which)->check(CLI::IsMember({"rational", "moore", "export"}));
    c_ex->add_option("--m", m);
    c_ex->add_option("--n", n);
    c_ex->add_flag("--collapse-to-zero", collapse, "replace the degree-2 map by zero");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints usage or help
        return code == 0 ? 0 : 1;
    }

    try {
        if (*c_check) {
            Report err;
            auto f = load("check", file, err);
            if (!f) return finish(err);
            Report rep;
            rep.command = "check";
            Json items = Json::object();
            bool all_ok = true;
            for (auto& [nm, D] : f->dgls) {
                auto r = check_dgl(D);
                items[nm] = Json{{"kind", "dgl"}, {"ok", r.ok}, {"failures", r.failures}};
                all_ok &= r.ok;
            }
            for (auto& [nm, C] : f->chains) {
                auto r = validate(C);
                items[nm] = Json{{"kind", "chain"}, {"ok", r.ok}, {"failures", r.failures}};
                all_ok &= r.ok;
            }
            for (auto& [nm, mi] : f->maps) {
                bool ok = is_chain_map(resolve_map(*f, mi));
                items[nm] =
                    Json{{"kind", "map"},
                         {"ok", ok},
                         {"failures",
                          ok ? Json::array() : Json::array({"not a chain map for its shift"})}};
                all_ok &= ok;
            }
            rep.payload["items"] = items;
            if (!all_ok) rep.status = "invalid";
            return finish(rep);
        }

        if (*c_hom) {
            Report err;
            auto f = load("homology", file, err);
            if (!f) return finish(err);
            Report rep;
            rep.command = "homology";
            Json table = Json::object();
            if (f->dgls.count(item)) {
                const FreeDGL& D = f->dgls.at(item);
                int a = std::max(lo, 1), b = std::min(hi >= 0 ? hi : D.truncation, D.truncation);
                auto dims = homology_dims(D, a, b);
                for (auto& [d, dim] : dims)
                    if (dim != 0) table[std::to_string(d)] = dim;
            } else if (f->chains.count(item)) {
                const FreeChainComplex& C = f->chains.at(item);
                int a = std::max(hi >= 0 ? lo : C.lo, C.lo - 1),
                    b = std::min(hi >= 0 ? hi : C.hi(), C.hi() + 1);
                for (int d = a; d <= b; ++d) {
                    auto g = homology(C, d);
                    if (g.text != "0") table[std::to_string(d)] = g.text;
                }
            } else {
                return finish(invalid("homology", "unknown item " + item));
            }
            rep.payload["homology"] = table;
            return finish(rep);
        }

        if (*c_isb) {
            Report err;
            auto f = load("is-boundary", file, err);
            if (!f) return finish(err);
            if (!f->dgls.count(item))
                return finish(invalid("is-boundary", "unknown dgl " + item));
            const FreeDGL& D = f->dgls.at(item);
            auto pe = parse_lie(D, cls);
            if (!pe.expr) return finish(invalid("is-boundary", pe.error->to_string()));
            Report rep;
            rep.command = "is-boundary";
            try {
                auto wit = is_boundary(D, *pe.expr);
                if (wit) rep.payload["witness"] = print_lie(D, *wit);
                else rep.payload["witness"] = nullptr;
            } catch (std::exception& e) {
                return finish(invalid("is-boundary", e.what()));
            }
            return finish(rep);
        }

        if (*c_massey) {
            Report err;
            auto f = load("massey", file, err);
            if (!f) return finish(err);
            if (!f->dgls.count(item)) return finish(invalid("massey", "unknown dgl " + item));
            const FreeDGL& D = f->dgls.at(item);
            auto pl = [&](const std::string& s) {
                auto r = parse_lie(D, s);
                if (!r.expr) throw std::runtime_error(r.error->to_string());
                return *r.expr;
            };
            Report rep;
            rep.command = "massey";
            auto res = lie_massey(D, pl(u), pl(v), pl(w), pl(alpha), pl(beta), pl(gamma));
            rep.payload["representative"] = print_lie(D, res.representative);
            rep.payload["class"] = vec_json(res.rep_class);
            Json ind = Json::array();
            for (auto& g : res.indeterminacy) ind.push_back(vec_json(g));
            rep.payload["indeterminacy"] = ind;
            rep.payload["vanishes"] = res.vanishes;
            return finish(rep);
        }

        if (*c_toda) {
            Report err;
            auto f = load("toda", file, err);
            if (!f) return finish(err);
            auto F = lookup_map(*f, fname), G = lookup_map(*f, gname), H = lookup_map(*f, hname);
            Report rep;
            rep.command = "toda";
            auto res = toda_coset(F, G, H);
            if (!res.ok()) {
                rep.status = "obstruction";
                rep.payload["error"] = res.error->what;
                rep.payload["obstruction_class"] = vec_json(res.error->obstruction_class);
                return finish(rep);
            }
            rep.payload["coset"] = coset_json(*res.coset);
            return finish(rep);
        }

        if (*c_long) {
            Report err;
            auto f = load("long-toda", file, err);
            if (!f) return finish(err);
            std::vector<GradedMap> ms;
            for (auto& nm : map_names) ms.push_back(lookup_map(*f, nm));
            Report rep;
            rep.command = "long-toda";
            auto res = long_toda(ms);
            Json stages_j = Json::array();
            for (auto& s : res.stages) stages_j.push_back(stage_json(s));
            rep.payload["stages"] = stages_j;
            if (res.ok()) {
                rep.payload["final"] = coset_json(*res.final);
            } else {
                rep.status = "obstruction";
                rep.payload["halt"] = *res.halt_reason;
            }
            return finish(rep);
        }

        if (*c_poly) {
            Report rep;
            rep.command = "polytope";
            if (n < 1) return finish(invalid("polytope", "n must be >= 1"));
            auto P = modified ? modified_folding_polytope(n) : folding_polytope(n);
            rep.payload = polytope_json(homology_report(P));
            return finish(rep);
        }

        if (*c_resolve) {
            Report rep;
            rep.command = "resolve";
            if (stages < 1 || stages > 4)
                return finish(invalid("resolve", "stages must be between 1 and 4"));
            std::mt19937 rng(seed);
            Ring R = ring_name == "F2" ? Ring::prime_field(2) : Ring::rationals();
            int lam = 1 + (int)(rng() % 2);
            FreeChainComplex Lambda = FreeChainComplex::module(R, lam, 0);
            int r0 = lam + (int)(rng() % 2);
            FreeChainComplex B0 = FreeChainComplex::module(R, r0, 0);
            Mat e(lam, r0);
            for (int i = 0; i < lam; ++i) e(i, i) = 1;
            for (int i = 0; i < lam; ++i)
                for (int j = lam; j < r0; ++j) e(i, j) = R.canon(Rat((long)(rng() % 2)));
            GradedMap eps(B0, Lambda, 0);
            eps.set(0, e);
            CWObjectData V = cw_start(R, Lambda, B0, eps, stages + 1);
            for (int k = 1; k <= stages; ++k) {
                SimplicialObject G = V.object();
                MooreData M = moore_complex(G);
                GradedMap zincl = compose(M.include[k - 1], M.cycle_incl[k - 1]);
                int z = M.cycles[k - 1].rank(0);
                FreeChainComplex Bk = FreeChainComplex::module(R, z, 0);
                GradedMap attach(Bk, G.level[k - 1], 0);
                if (z > 0) attach.set(0, zincl.at(0));
                attach_cw(V, Bk, attach);
            }
            auto res = build_sequential_realization(V, stages);
            Json log = Json::array();
            for (auto& stage_list : res.descent_log) {
                Json sj = Json::array();
                for (auto& st : stage_list)
                    sj.push_back(Json{{"moore_degree", st.k},
                                      {"obstruction_class", vec_json(st.obstruction)},
                                      {"corrected", st.corrected}});
                log.push_back(sj);
            }
            rep.payload["descent"] = log;
            rep.payload["seed"] = (int64_t)seed;
            rep.payload["stages"] = stages;
            if (!res.ok) {
                rep.status = "obstruction";
                rep.payload["note"] = res.note;
                return finish(rep);
            }
            MooreData WM = moore_complex(res.real->W.object());
            MooreData VM = moore_complex(V.object());
            std::vector<std::string> why;
            bool match = realization_matches(WM, VM, stages, &why);
            rep.payload["moore_homology_matches"] = match;
            if (!match) rep.payload["mismatches"] = why;
            return finish(rep);
        }

        if (*c_aug) {
            Report rep;
            rep.command = "augment";
            if (m < 2 || m % 2 != 0)
                return finish(invalid("augment", "m must be even and >= 2"));
            auto F = build_resolution_fixture(m);
            FreeDGL tgt;
            if (target == "A") tgt = F.pair.A;
            else if (target == "B") tgt = F.pair.B;
            else {
                tgt = F.pair.B;
                tgt.add_generator("e", 3 * m + 1);
            }
            auto res = attempt_augmentation(F, tgt);
            rep.payload["target"] = target;
            rep.payload["notes"] = res.notes;
            if (res.ok) {
                Json images = Json::object();
                const FreeDGL& L0 = *F.W.level[0];
                for (size_t i = 0; i < L0.gens.size(); ++i)
                    images[L0.gens[i].name] = print_lie(tgt, res.images[i]);
                rep.payload["images"] = images;
            } else {
                rep.status = "obstruction";
                rep.payload["obstructed_generator"] = res.obstructed_generator;
                rep.payload["obstructed_degree"] = res.obstructed_degree;
                rep.payload["surviving_cycle"] = print_lie(tgt, res.surviving_cycle);
                rep.payload["surviving_class"] = vec_json(res.surviving_class);
            }
            return finish(rep);
        }

        if (*c_ex) {
            Report rep;
            rep.command = "example " + which;
            if (which == "moore") {
                if (n < 3) return finish(invalid(rep.command, "n must be >= 3 (stable range)"));
                auto f = filtration_example(n, collapse);
                rep.payload["coset"] = coset_json(f.coset);
                rep.payload["filtration_index"] = f.index;
                rep.payload["banner"] = f.banner;
                return finish(rep);
            }
            if (which == "rational") {
                if (m < 2 || m % 2 != 0)
                    return finish(invalid(rep.command, "m must be even and >= 2"));
                auto F = build_resolution_fixture(m);
                auto ver = verify_resolution_fixture(F);
                rep.payload["fixture_identities_hold"] = ver.all_identities_hold;
                rep.payload["fixture_discrepancies"] = ver.discrepancies;
                auto a = attempt_augmentation(F, F.pair.A);
                auto b = attempt_augmentation(F, F.pair.B);
                rep.payload["augment_A_ok"] = a.ok;
                rep.payload["augment_B_ok"] = b.ok;
                if (!b.ok) {
                    rep.payload["B_obstructed_generator"] = b.obstructed_generator;
                    rep.payload["B_obstructed_degree"] = b.obstructed_degree;
                    rep.payload["B_surviving_cycle"] = print_lie(F.pair.B, b.surviving_cycle);
                }
                auto wit = is_boundary(F.pair.A, F.pair.f_in(F.pair.A));
                rep.payload["f_bounds_in_A"] = wit.has_value();
                rep.payload["f_bounds_in_B"] =
                    is_boundary(F.pair.B, F.pair.f_in(F.pair.B)).has_value();
                return finish(rep);
            }
            if (which == "export") {
                std::cout << print(export_fixtures(m, n));
                return 0;
            }
        }
    } catch (std::exception& e) {
        Report rep = invalid(app.get_subcommands().empty()
                                 ? std::string("?")
                                 : app.get_subcommands()[0]->get_name(),
                             e.what());
        return finish(rep);
    }
    return 1;
}
