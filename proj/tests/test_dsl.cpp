#include "doctest.h"
#include "toda/dsl.hpp"
#include "toda/examples.hpp"
#include "toda/report.hpp"

#include <random>

using namespace toda;

namespace {

PresentationFile exported_fixture() {
    PresentationFile f;
    auto P = build_rational_pair(2);
    f.dgls.emplace("Astar", P.A);
    f.dgls.emplace("Bstar", P.B);
    f.order = {"Astar", "Bstar"};
    auto M = build_moore_fixture(3);
    f.chains.emplace("moore", M.moore);
    f.chains.emplace("sphere", M.sphere_n);
    f.order.push_back("moore");
    f.order.push_back("sphere");
    MapItem mi;
    mi.name = "inc";
    mi.src = "sphere";
    mi.dst = "moore";
    mi.comp[3] = M.inc.at(3);
    f.maps.emplace("inc", mi);
    f.order.push_back("inc");
    return f;
}

bool same_file(const PresentationFile& a, const PresentationFile& b) {
    if (a.order != b.order) return false;
    for (auto& [nm, D] : a.dgls) {
        if (!b.dgls.count(nm)) return false;
        const FreeDGL& E = b.dgls.at(nm);
        if (D.gens.size() != E.gens.size() || D.truncation != E.truncation) return false;
        for (size_t i = 0; i < D.gens.size(); ++i) {
            if (D.gens[i].name != E.gens[i].name || D.gens[i].degree != E.gens[i].degree)
                return false;
            if (!E.expand(D.diff[i] - E.diff[i]).empty()) return false;
        }
    }
    for (auto& [nm, C] : a.chains) {
        if (!b.chains.count(nm)) return false;
        const FreeChainComplex& E = b.chains.at(nm);
        if (C.ring != E.ring) return false;
        int lo = std::min(C.lo, E.lo), hi = std::max(C.hi(), E.hi());
        for (int d = lo; d <= hi; ++d) {
            if (C.rank(d) != E.rank(d)) return false;
            if (C.boundary(d) != E.boundary(d)) return false;
        }
    }
    for (auto& [nm, m] : a.maps) {
        if (!b.maps.count(nm)) return false;
        const MapItem& e = b.maps.at(nm);
        if (m.src != e.src || m.dst != e.dst || m.shift != e.shift) return false;
        if (m.comp.size() != e.comp.size()) return false;
        for (auto& [d, mat] : m.comp) {
            if (!e.comp.count(d) || e.comp.at(d) != mat) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("grammar basics: one dgl with one generator") {
    auto res = parse("dgl A { gen a : 2; d a = 0; truncate 8; }");
    REQUIRE(res.ok());
    REQUIRE(res.file->dgls.count("A"));
    const FreeDGL& D = res.file->dgls.at("A");
    CHECK(D.gens.size() == 1);
    CHECK(D.gens[0].degree == 2);
    CHECK(D.diff[0].is_zero());
    CHECK(D.truncation == 8);
}

TEST_CASE("chains and maps parse with dimension checks") {
    auto res = parse(
        "chain C over Z { deg 0 rank 2; deg 1 rank 1; boundary 1 = [2; 0]; }\n"
        "chain D over Z { deg 0 rank 1; }\n"
        "chain E over F 2 { deg 0 rank 1; }\n"
        "map p : C -> D { deg 0 = [1, 1]; }\n");
    REQUIRE(res.ok());
    CHECK(res.file->chains.at("C").boundary(1)(0, 0) == 2);
    CHECK(res.file->chains.at("E").ring.kind == Ring::Kind::Fp);
    auto g = resolve_map(*res.file, res.file->maps.at("p"));
    CHECK(g.at(0).cols == 2);

    // dimension mismatch is a semantic error
    auto bad = parse("chain C over Z { deg 0 rank 2; boundary 0 = [1]; }");
    CHECK(!bad.ok());
    CHECK(bad.error->kind == ParseErrorKind::Semantic);

    // ring mismatch between source and target is a semantic error
    auto mixed = parse(
        "chain C over Z { deg 0 rank 1; }\n"
        "chain E over F 2 { deg 0 rank 1; }\n"
        "map p : C -> E { deg 0 = [1]; }\n");
    CHECK(!mixed.ok());
    CHECK(mixed.error->kind == ParseErrorKind::Semantic);
}

TEST_CASE("unclosed bracket reports a located syntax error") {
    auto res = parse("dgl A { gen a : 2; gen b : 3; d b = [a, a\n; }");
    CHECK(!res.ok());
    CHECK(res.error->kind == ParseErrorKind::Syntax);
    CHECK(res.error->line >= 1);
}

TEST_CASE("lexical, syntax, and semantic errors carry distinct codes") {
    auto lexical = parse("dgl A { gen a : 2; } $");
    REQUIRE(!lexical.ok());
    CHECK(lexical.error->code() == "lexical");
    auto syntax = parse("dgl A { gen : 2; }");
    REQUIRE(!syntax.ok());
    CHECK(syntax.error->code() == "syntax");
    auto semantic = parse("dgl A { gen a : 2; d q = a; }");
    REQUIRE(!semantic.ok());
    CHECK(semantic.error->code() == "semantic");
    auto dup = parse("dgl A { gen a : 2; } dgl A { gen b : 2; }");
    REQUIRE(!dup.ok());
    CHECK(dup.error->code() == "semantic");
}

TEST_CASE("exported fixture round-trips: parse(print(x)) = x") {
    auto f = exported_fixture();
    std::string text = print(f);
    auto res = parse(text);
    REQUIRE(res.ok());
    CHECK(same_file(f, *res.file));
    // print . parse . print = print
    CHECK(print(*res.file) == text);
}

TEST_CASE("negative coefficients and rationals round-trip in Lie expressions") {
    auto res = parse(
        "dgl A { gen a : 2; gen b : 2; gen x : 5; truncate 10;"
        " d x = -[a, b] + 3/2*[b, a]; }");
    REQUIRE(res.ok());
    const FreeDGL& D = res.file->dgls.at("A");
    std::string text = print(*res.file);
    auto re = parse(text);
    REQUIRE(re.ok());
    CHECK(re.file->dgls.at("A").expand(re.file->dgls.at("A").diff[D.gen_index("x")] -
                                       D.diff[D.gen_index("x")])
              .empty());
}

TEST_CASE("parser is total on fuzzed input") {
    std::mt19937 rng(314159);
    const std::string alphabet = "dgl chain map gen truncate boundary deg rank over { } [ ] ( ) ; : , = + - / 0 1 2 9 a b Z Q F _ \n";
    for (int t = 0; t < 300; ++t) {
        std::string s;
        int len = (int)(rng() % 120);
        for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
        auto res = parse(s);  // must not crash; either ok or a located error
        if (!res.ok()) {
            CHECK(res.error->line >= 1);
            CHECK(res.error->col >= 1);
        }
    }
    // raw bytes too
    for (int t = 0; t < 100; ++t) {
        std::string s;
        int len = (int)(rng() % 60);
        for (int i = 0; i < len; ++i) s += (char)(rng() % 256);
        auto res = parse(s);
        if (!res.ok()) CHECK(!res.error->message.empty());
    }
}

TEST_CASE("reports are deterministic and keys are sorted") {
    auto bc = moore_space_bracket(3);
    Report rep;
    rep.command = "toda";
    rep.payload["coset"] = coset_json(bc);
    std::string a = rep.emit();
    std::string b = rep.emit();
    CHECK(a == b);
    // spec shape for the Moore coset
    Json j = coset_json(bc);
    CHECK(j["representative"] == "1");
    CHECK(j["indeterminacy"] == Json::array({"2"}));
    CHECK(j["contains_zero"] == false);
    // empty homology table prints as {}
    Report rep2;
    rep2.command = "homology";
    rep2.payload["homology"] = Json::object();
    CHECK(rep2.emit().find("\"homology\": {}") != std::string::npos);
}

TEST_CASE("oversized integer literals are a located error, not a crash") {
    auto res = parse("dgl A { gen a : 99999999999999999999999999; }");
    REQUIRE(!res.ok());
    CHECK(res.error->code() == "semantic");
    auto res2 = parse("chain C over Z { deg 123456789123456789123456789 rank 1; }");
    CHECK(!res2.ok());
}
