// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include "test_util.hpp"
#include "toda/examples.hpp"
#include "toda/polytope.hpp"
#include "toda/simp.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace toda;
using namespace toda::testutil;

namespace {

struct Criterion {
    int number;
    std::string title;
    bool (*run)(std::string& detail);
};

// -------------------------------------------------------------- criterion 1
bool crit_rational_separation(std::string& detail) {
    auto F = build_resolution_fixture(2);
    auto fA = F.pair.f_in(F.pair.A);
    auto fB = F.pair.f_in(F.pair.B);
    auto wA = is_boundary(F.pair.A, fA);
    if (!wA) { detail = "no witness for f in A"; return false; }
    if (!F.pair.A.expand(F.pair.A.differential(*wA) - fA).empty()) {
        detail = "witness does not bound f";
        return false;
    }
    if (is_boundary(F.pair.B, fB)) { detail = "f bounds in B"; return false; }
    auto aug_a = attempt_augmentation(F, F.pair.A);
    if (!aug_a.ok) { detail = "augmentation to A failed"; return false; }
    auto aug_b = attempt_augmentation(F, F.pair.B);
    if (aug_b.ok) { detail = "augmentation to B unexpectedly succeeded"; return false; }
    if (aug_b.obstructed_degree != 3 * 2 + 2) {
        detail = "obstruction not at degree 3m+2";
        return false;
    }
    bool pm_f = F.pair.B.expand(aug_b.surviving_cycle - fB).empty() ||
                F.pair.B.expand(aug_b.surviving_cycle + fB).empty();
    if (!pm_f) { detail = "surviving cycle is not +-f"; return false; }
    detail = "witness d(" + to_string(F.pair.A, *wA) + ") = f in A; B obstructed at " +
             aug_b.obstructed_generator + " (degree 8)";
    return true;
}

// -------------------------------------------------------------- criterion 2
bool crit_homology_agreement(std::string& detail) {
    auto P = build_rational_pair(2);
    auto hA = homology_dims(P.A, 1, 8);
    auto hB = homology_dims(P.B, 1, 8);
    for (int d = 1; d <= 8; ++d)
        if (hA[d] != hB[d]) {
            detail = "dims differ in degree " + std::to_string(d);
            return false;
        }
    std::string why;
    if (!homology_brackets_vanish(P.A, 8, &why)) { detail = "A: " + why; return false; }
    if (!homology_brackets_vanish(P.B, 8, &why)) { detail = "B: " + why; return false; }
    std::ostringstream os;
    os << "dims";
    for (int d = 1; d <= 8; ++d) os << " " << hA[d];
    detail = os.str() + "; all homology brackets bound";
    return true;
}

// -------------------------------------------------------------- criterion 3
bool crit_moore_bracket(std::string& detail) {
    auto bc = moore_space_bracket(3);
    if (bc.ambient != "Z") { detail = "ambient group is not Z"; return false; }
    Int r = bc.rep[0].get_num();
    if (!(r == 1 || r == -1)) { detail = "representative is not +-1"; return false; }
    bool two_found = false;
    for (auto& g : bc.indeterminacy) {
        Int v = g[0].get_num();
        if (v != 0 && v % 2 != 0) { detail = "odd indeterminacy generator"; return false; }
        if (v == 2 || v == -2) two_found = true;
    }
    if (!two_found) { detail = "indeterminacy is not 2Z"; return false; }
    if (bc.contains_zero) { detail = "bracket vanishes"; return false; }
    for (int n : {4, 5}) {
        auto b2 = moore_space_bracket(n);
        if (b2.contains_zero || !(b2.rep[0].get_num() == 1 || b2.rep[0].get_num() == -1)) {
            detail = "bracket changed at n = " + std::to_string(n);
            return false;
        }
    }
    auto fr = filtration_example(3);
    if (fr.index != 1) { detail = "filtration index is not 1"; return false; }
    detail = "coset 1 + 2Z, contains_zero = false, filtration index 1";
    return true;
}

// -------------------------------------------------------------- criterion 4
bool crit_folding_polytopes(std::string& detail) {
    auto P1 = folding_polytope(1);
    if (P1.complex.f_vector() != std::vector<int>({3, 2})) {
        detail = "P(1) f-vector mismatch";
        return false;
    }
    auto P2 = folding_polytope(2);
    if (P2.complex.f_vector() != std::vector<int>({5, 7, 3})) {
        detail = "P(2) f-vector mismatch";
        return false;
    }
    for (int n = 1; n <= 5; ++n) {
        auto rep = homology_report(folding_polytope(n));
        if (rep.euler != 1 || !rep.ball_like || !rep.boundary_sphere || !rep.edge_acyclic) {
            detail = "P(" + std::to_string(n) + ") failed the ball/sphere/edge checks";
            return false;
        }
        auto mrep = homology_report(modified_folding_polytope(n));
        if (!mrep.boundary_sphere || mrep.euler != 1) {
            detail = "Phat(" + std::to_string(n) + ") boundary is not a sphere";
            return false;
        }
    }
    detail = "n = 1..5: P(n) ball with S^{n-1} boundary and acyclic edge; Phat(n) likewise";
    return true;
}

// -------------------------------------------------------------- criterion 5
bool crit_descent_soundness(std::string& detail) {
    std::mt19937 rng(20260808);
    int done = 0, attempts = 0;
    while (done < 50 && attempts < 500) {
        ++attempts;
        Ring R = (done % 2) ? Ring::rationals() : Ring::prime_field(2);
        int N = 2 + (int)(rng() % 2);
        auto V = random_cw_resolution(rng, R, N, N + 1);
        int total = 0;
        for (int k = 0; k <= V.object().top_dim(); ++k) total += V.basis.size() > (size_t)k
                                                                   ? V.basis[k].rank(0)
                                                                   : 0;
        if (total > 12) continue;
        auto res = build_sequential_realization(V, N);
        if (!res.ok || !res.relations_verified) {
            detail = "descent failed on an acyclic resolution (attempt " +
                     std::to_string(attempts) + "): " + res.note;
            return false;
        }
        MooreData WM = moore_complex(res.real->W.object());
        MooreData VM = moore_complex(V.object());
        if (!realization_matches(WM, VM, N)) {
            detail = "Moore homology mismatch after realization";
            return false;
        }
        ++done;
    }
    if (done < 50) { detail = "could not generate 50 admissible resolutions"; return false; }

    // broken fixture 1: the attaching class is not a Moore cycle
    {
        Ring Q = Ring::rationals();
        SimplicialObject G(Q);
        G.aug = FreeChainComplex::zero(Q);
        FreeChainComplex L0 = FreeChainComplex::from_ranks(Q, 0, {1, 1});
        FreeChainComplex L1 = FreeChainComplex::module(Q, 1, 0);
        G.level = {L0, L1};
        GradedMap eps(L0, G.aug, 0);
        G.face.push_back({eps});
        GradedMap d0(L1, L0, 0), d1(L1, L0, 0);
        d0.set(0, Mat::from_rows({{1}}));
        G.face.push_back({d0, d1});
        MooreData M = moore_complex(G);
        auto B = FreeChainComplex::module(Q, 1, 0);
        GradedMap F_top(B, M.chains[1], 0);
        F_top.set(0, Mat::identity(1));
        auto R = realize_attaching(M, standard_replacement(B, 2), F_top);
        bool nonzero = false;
        if (!R.stages.empty())
            for (auto& c : R.stages.back().obstruction) nonzero |= (c != 0);
        if (R.ok || !nonzero) {
            detail = "broken fixture 1 did not report a nonzero obstruction";
            return false;
        }
    }
    // broken fixture 2: deep stage obstruction against non-acyclic Moore homology
    {
        Ring Q = Ring::rationals();
        SimplicialObject G(Q);
        G.aug = FreeChainComplex::zero(Q);
        FreeChainComplex L0 = FreeChainComplex::module(Q, 1, 1);
        FreeChainComplex L1 = FreeChainComplex::from_ranks(Q, 0, {1, 1});
        L1.set_boundary(1, Mat::identity(1));
        FreeChainComplex L2 = FreeChainComplex::module(Q, 1, 0);
        G.level = {L0, L1, L2};
        GradedMap eps(L0, G.aug, 0);
        G.face.push_back({eps});
        GradedMap d0(L1, L0, 0), d1(L1, L0, 0);
        d0.set(1, Mat::identity(1));
        G.face.push_back({d0, d1});
        GradedMap e0(L2, L1, 0), e1(L2, L1, 0), e2(L2, L1, 0);
        e0.set(0, Mat::from_rows({{1}}));
        G.face.push_back({e0, e1, e2});
        MooreData M = moore_complex(G);
        auto B = FreeChainComplex::module(Q, 1, 0);
        GradedMap F_top(B, M.chains[2], 0);
        F_top.set(0, Mat::identity(1));
        auto R = realize_attaching(M, standard_replacement(B, 3), F_top);
        bool nonzero = false;
        if (!R.stages.empty())
            for (auto& c : R.stages.back().obstruction) nonzero |= (c != 0);
        if (R.ok || R.obstructed_stage != 0 || !nonzero) {
            detail = "broken fixture 2 did not report a deep nonzero obstruction";
            return false;
        }
    }
    detail = "50 acyclic resolutions realized with the stage relations verified; both "
             "broken fixtures reported nonzero stage obstructions";
    return true;
}

// -------------------------------------------------------------- criterion 6
bool crit_bracket_cosets(std::string& detail) {
    std::mt19937 rng(606060);
    Ring F2 = Ring::prime_field(2);
    int done = 0, attempts = 0, long_checked = 0;
    while (done < 20 && attempts < 4000) {
        ++attempts;
        auto A = random_complex(rng, F2, 0, 3, 2);
        auto B = random_complex(rng, F2, 0, 3, 2);
        auto C = random_complex(rng, F2, 0, 3, 2);
        auto D = random_complex(rng, F2, 0, 3, 2);
        if (A.total_rank() + B.total_rank() + C.total_rank() + D.total_rank() > 6) continue;
        auto h = random_chain_map(rng, A, B);
        auto g = random_chain_map(rng, B, C);
        auto f = random_chain_map(rng, C, D);
        auto res = toda_coset(f, g, h);
        if (!res.ok()) continue;
        auto Hghs = all_nullhomotopies_f2(compose(g, h), 12);
        auto Hfgs = all_nullhomotopies_f2(compose(f, g), 12);
        if (Hghs.empty() || Hfgs.empty()) continue;
        if (res.coset->indet_coords.cols > 18) continue;
        HomotopyClasses amb = homotopy_classes(A, D, 1);
        std::set<std::vector<Rat>> brute;
        for (auto& Hgh : Hghs)
            for (auto& Hfg : Hfgs) brute.insert(amb.class_of(triple_toda(f, g, h, Hgh, Hfg)));
        std::set<std::vector<Rat>> coset;
        {
            int mgen = res.coset->indet_coords.cols;
            for (unsigned long mask = 0; mask < (1ul << mgen); ++mask) {
                std::vector<Rat> v = res.coset->rep_coords;
                for (int j = 0; j < mgen; ++j)
                    if (mask & (1ul << j))
                        for (size_t i = 0; i < v.size(); ++i)
                            v[i] = F2.add(v[i], res.coset->indet_coords(i, j));
                coset.insert(res.coset->pres.canon(v));
            }
        }
        if (brute != coset) {
            detail = "value set mismatch at instance " + std::to_string(done);
            return false;
        }
        // arity-3 long_toda agreement when f g vanishes strictly
        if (compose(f, g).is_zero()) {
            auto lt = long_toda({f, g, h});
            if (!lt.ok() || !coset_equal(*lt.final, *res.coset)) {
                detail = "long_toda disagrees with toda_coset";
                return false;
            }
            ++long_checked;
        }
        ++done;
    }
    if (done < 20) { detail = "could not generate 20 admissible instances"; return false; }
    // guarantee a healthy number of arity-3 agreements: strict fg = 0 instances
    std::mt19937 rng2(707070);
    while (long_checked < 10) {
        auto X3 = random_complex(rng2, F2, 0, 3, 2);
        auto X2 = random_complex(rng2, F2, 0, 3, 2);
        auto X1 = random_complex(rng2, F2, 0, 3, 2);
        auto X0 = random_complex(rng2, F2, 0, 3, 2);
        auto f3 = random_chain_map(rng2, X3, X2);
        auto f2 = random_chain_map(rng2, X2, X1);
        HomComplex H10 = hom_complex(X1, X0);
        HomComplex H20 = hom_complex(X2, X0);
        if (H10.dim(0) == 0) continue;
        Mat P(H20.dim(0), H10.dim(0));
        for (int j = 0; j < H10.dim(0); ++j) {
            std::vector<Rat> e((size_t)H10.dim(0), Rat(0));
            e[j] = 1;
            P.set_col(j, H20.flatten(compose(H10.unflatten(0, e), f2)));
        }
        Mat A = vstack(H10.cx.boundary(0), P);
        Mat K = kernel(F2, A);
        if (K.cols == 0) continue;
        std::vector<Rat> v((size_t)H10.dim(0), Rat(0));
        for (int j = 0; j < K.cols; ++j)
            if (rng2() % 2)
                for (int i = 0; i < K.rows; ++i) v[i] = F2.add(v[i], K(i, j));
        GradedMap f1 = H10.unflatten(0, v);
        if (!compose(f1, f2).is_zero()) continue;
        auto tc = toda_coset(f1, f2, f3);
        if (!tc.ok()) continue;
        auto lt = long_toda({f1, f2, f3});
        if (!lt.ok() || !coset_equal(*lt.final, *tc.coset)) {
            detail = "long_toda disagrees with toda_coset on a strict instance";
            return false;
        }
        ++long_checked;
    }
    detail = "20 brute-force value-set matches; " + std::to_string(long_checked) +
             " arity-3 long_toda/toda_coset agreements";
    return true;
}

// -------------------------------------------------------------- criterion 7
bool crit_structural_identities(std::string& detail) {
    std::mt19937 rng(777);
    // Moore . E = identity
    for (int t = 0; t < 20; ++t) {
        Ring R = (t % 2) ? Ring::rationals() : Ring::prime_field(2);
        auto A = random_complex(rng, R, 0, 4, 3);
        A.trim();
        if (A.total_rank() == 0 || A.lo < 0) continue;
        auto M = moore_complex(e_functor(A));
        auto F = moore_flat(M);
        for (int d = A.lo; d <= A.hi(); ++d)
            if (F.rank(d) != A.rank(d) || F.boundary(d) != A.boundary(d)) {
                detail = "Moore . E is not the identity";
                return false;
            }
    }
    // cone face identities on 100 random inputs
    int cones = 0;
    Ring F2 = Ring::prime_field(2);
    while (cones < 100) {
        auto A0 = random_complex(rng, F2, 0, 3, 2);
        auto B0 = random_complex(rng, F2, 0, 3, 2);
        A0.trim();
        B0.trim();
        if (A0.lo < 0 || B0.lo < 0) continue;
        auto A = e_functor(A0), B = e_functor(B0);
        std::vector<GradedMap> f;
        f.push_back(GradedMap::zero(A.aug, B.aug, 0));
        for (int nn = 0; nn <= A.top_dim(); ++nn) {
            FreeChainComplex target =
                nn <= B.top_dim() ? B.level[nn] : FreeChainComplex::zero(F2);
            f.push_back(GradedMap::zero(A.level[nn], target, 0));
        }
        auto C = cone_restricted(A, B, f);
        if (!check_identities(C.cone).ok) {
            detail = "cone face identities failed";
            return false;
        }
        ++cones;
    }
    // latching ranks vs the direct degenerate-part oracle through dimension 4
    bool discrepancy_flagged = false;
    for (int t = 0; t < 8; ++t) {
        Ring R = (t % 2) ? Ring::rationals() : Ring::prime_field(2);
        auto cw = random_cw_resolution(rng, R, 2, 4);
        for (int n = 1; n <= 4; ++n) {
            auto L = latching(cw, n);
            if (L.formula_rank != L.direct_rank) {
                detail = "latching rank mismatch at dimension " + std::to_string(n);
                return false;
            }
            if (n == 2 && !L.seq_indexed_matches) discrepancy_flagged = true;
        }
    }
    if (!discrepancy_flagged) {
        detail = "the sequence-indexed latching count discrepancy was never flagged";
        return false;
    }
    detail = "Moore.E = id; 100 cones pass the face identities; latching ranks match "
             "the direct oracle (sequence-indexed count discrepancy flagged)";
    return true;
}

// -------------------------------------------------------------- criterion 8
bool crit_algebra_kernel(std::string& detail) {
    std::mt19937 rng(888);
    FreeDGL D;
    D.truncation = 12;
    D.add_generator("a", 2);
    D.add_generator("u", 1);
    D.add_generator("x", 3);
    D.add_generator("v", 4);
    // d(x) = [u,u], a degree-2 cycle (u is odd, so [u,u] is nonzero)
    D.set_differential(D.gen_index("x"),
                       bracket(LieExpr::gen(D.gen_index("u")), LieExpr::gen(D.gen_index("u"))));
    if (!check_dgl(D).ok) { detail = "test DGL invalid"; return false; }

    auto random_hom = [&](int maxdeg) -> LieExpr {
        for (int tries = 0; tries < 60; ++tries) {
            int g0 = (int)(rng() % D.gens.size());
            LieExpr e = LieExpr::gen(g0);
            int deg = D.gens[g0].degree;
            int n = (int)(rng() % 3);
            bool ok = true;
            for (int i = 0; i < n; ++i) {
                int g1 = (int)(rng() % D.gens.size());
                if (deg + D.gens[g1].degree > maxdeg) { ok = false; break; }
                e = (rng() % 2) ? bracket(e, LieExpr::gen(g1)) : bracket(LieExpr::gen(g1), e);
                deg += D.gens[g1].degree;
            }
            if (ok && !e.is_zero()) return e;
        }
        return LieExpr::gen(0);
    };
    for (int t = 0; t < 60; ++t) {
        LieExpr u = random_hom(6), v = random_hom(6), w = random_hom(6);
        int du = *D.degree_of(u), dv = *D.degree_of(v), dw = *D.degree_of(w);
        if (du + dv <= 12) {
            Rat koszul = ((du * dv) % 2) ? Rat(-1) : Rat(1);
            if (!D.expand(bracket(u, v) + koszul * bracket(v, u)).empty()) {
                detail = "antisymmetry failed";
                return false;
            }
        }
        if (du + dv + dw <= 12) {
            LieExpr jac = bracket(u, bracket(v, w)) - bracket(bracket(u, v), w) -
                          ((du * dv) % 2 ? Rat(-1) : Rat(1)) * bracket(v, bracket(u, w));
            if (!D.expand(jac).empty()) { detail = "graded Jacobi failed"; return false; }
        }
        if (!D.expand(D.differential(D.differential(u))).empty()) {
            detail = "d^2 != 0";
            return false;
        }
    }
    // Witt/Lyndon counts for all-even generators
    for (int t = 0; t < 4; ++t) {
        FreeDGL E;
        E.truncation = 12;
        std::vector<int> weights;
        int ng = 2 + (int)(rng() % 2);
        for (int i = 0; i < ng; ++i) {
            int w2 = 2 * (1 + (int)(rng() % 2));
            E.add_generator("g" + std::to_string(i), w2);
            weights.push_back(w2);
        }
        for (int d = 1; d <= 12; ++d)
            if (E.dim(d) != lyndon_count(weights, d)) {
                detail = "free-Lie dimension differs from the Witt/Lyndon count in degree " +
                         std::to_string(d);
                return false;
            }
    }
    detail = "antisymmetry, graded Jacobi, d^2 = 0 on random expressions to degree 12; "
             "dimension counts match the Lyndon oracle";
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "rational example separation (m = 2)", crit_rational_separation},
        {2, "homology agreement and vanishing brackets (m = 2)", crit_homology_agreement},
        {3, "Moore space bracket 1 + 2Z and filtration index", crit_moore_bracket},
        {4, "folding polytopes P(n), Phat(n) for n = 1..5", crit_folding_polytopes},
        {5, "obstruction-descent soundness on 50 random resolutions", crit_descent_soundness},
        {6, "bracket coset correctness against brute force", crit_bracket_cosets},
        {7, "structural identities (Moore.E, cones, latching)", crit_structural_identities},
        {8, "algebra kernel properties and Witt counts", crit_algebra_kernel},
    };
    int failures = 0;
    for (auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": " << c.title
                  << " (" << ms << " ms)\n";
        std::cout << "       " << detail << "\n";
        if (!ok) ++failures;
    }
    if (failures == 0) std::cout << "all acceptance criteria passed\n";
    else std::cout << failures << " criteria failed\n";
    return failures;
}
