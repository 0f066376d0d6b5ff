#pragma once

#include "toda/chain.hpp"
#include "toda/simp.hpp"

#include <functional>
#include <random>

namespace toda::testutil {

// Random valid bounded complex: boundaries are chosen bottom-up so each new
// differential lands in the kernel of the one below it.
inline FreeChainComplex random_complex(std::mt19937& rng, Ring R, int lo, int len, int maxrank) {
    std::vector<int> ranks;
    for (int i = 0; i < len; ++i) ranks.push_back((int)(rng() % (maxrank + 1)));
    FreeChainComplex C = FreeChainComplex::from_ranks(R, lo, ranks);
    for (int d = C.lo + 1; d <= C.hi(); ++d) {
        Mat K = kernel(R, C.boundary(d - 1));
        if (K.cols == 0 || C.rank(d) == 0) continue;
        Mat coeff(K.cols, C.rank(d));
        for (int i = 0; i < coeff.rows; ++i)
            for (int j = 0; j < coeff.cols; ++j)
                coeff(i, j) = R.canon(Rat((long)(rng() % 3) - 1));
        C.set_boundary(d, mul(R, K, coeff));
    }
    return C;
}

// Random chain map A -> B (a random combination of hom-complex cycles).
inline GradedMap random_chain_map(std::mt19937& rng, const FreeChainComplex& A,
                                  const FreeChainComplex& B) {
    HomComplex H = hom_complex(A, B);
    if (H.dim(0) == 0) return GradedMap::zero(A, B, 0);
    Mat Z0 = kernel(A.ring, H.cx.boundary(0));
    std::vector<Rat> v((size_t)H.dim(0), Rat(0));
    for (int j = 0; j < Z0.cols; ++j) {
        if (rng() % 2 == 0) continue;
        for (int i = 0; i < Z0.rows; ++i) v[i] = A.ring.add(v[i], Z0(i, j));
    }
    return H.unflatten(0, v);
}

// Random surjective r x c matrix over a field (full row rank), r <= c.
inline Mat random_surjection(std::mt19937& rng, Ring R, int r, int c) {
    for (int tries = 0; tries < 200; ++tries) {
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                m(i, j) = R.canon(Rat((long)(rng() % (R.kind == Ring::Kind::Fp ? (unsigned long)R.p
                                                                               : 3ul))));
        if (rank(R, m) == r) return m;
    }
    // fall back to a padded identity
    Mat m(r, c);
    for (int i = 0; i < r && i < c; ++i) m(i, i) = 1;
    return m;
}

// Random acyclic module-level CW resolution of a random module, over a field.
// Every attaching map surjects onto the Moore cycles below, so the result is
// a resolution; total rank stays small.
inline CWObjectData random_cw_resolution(std::mt19937& rng, Ring R, int stages, int horizon,
                                         int max_extra = 1) {
    int lam = 1 + (int)(rng() % 2);
    FreeChainComplex Lambda = FreeChainComplex::module(R, lam, 0);
    int r0 = lam + (int)(rng() % (max_extra + 1));
    FreeChainComplex B0 = FreeChainComplex::module(R, r0, 0);
    GradedMap eps(B0, Lambda, 0);
    eps.set(0, random_surjection(rng, R, lam, r0));
    CWObjectData cw = cw_start(R, Lambda, B0, eps, horizon);
    for (int n = 1; n <= stages; ++n) {
        SimplicialObject G = cw.object();
        MooreData M = moore_complex(G);
        GradedMap zincl = compose(M.include[n - 1], M.cycle_incl[n - 1]);
        int z = M.cycles[n - 1].rank(0);
        int bn = z + (int)(rng() % (max_extra + 1));
        FreeChainComplex Bn = FreeChainComplex::module(R, bn, 0);
        GradedMap attach(Bn, G.level[n - 1], 0);
        if (bn > 0 && z > 0) {
            Mat coeff = random_surjection(rng, R, z, bn);
            attach.set(0, mul(R, zincl.at(0), coeff));
        }
        attach_cw(cw, Bn, attach);
    }
    return cw;
}

// All solutions H of D(H) = g over F2; empty when unsolvable or when the
// solution space is too large to enumerate.
inline std::vector<GradedMap> all_nullhomotopies_f2(const GradedMap& g, int max_dim) {
    std::vector<GradedMap> out;
    auto H0 = solve_nullhomotopy(g);
    if (!H0) return out;
    HomComplex H = hom_complex(g.src, g.dst);
    Mat D = H.cx.boundary(g.shift + 1);
    Mat K = D.cols > 0 ? kernel(g.ring, D) : Mat::zero(0, 0);
    if (K.cols > max_dim) return out;
    auto base = H.flatten(*H0);
    for (unsigned long mask = 0; mask < (1ul << K.cols); ++mask) {
        auto v = base;
        for (int j = 0; j < K.cols; ++j)
            if (mask & (1ul << j))
                for (int i = 0; i < K.rows; ++i) v[i] = g.ring.add(v[i], K(i, j));
        out.push_back(H.unflatten(g.shift + 1, v));
    }
    return out;
}

// Lyndon-word count: dimension of the weighted-degree-d piece of the free
// ungraded Lie algebra on letters with the given weights.
inline int lyndon_count(const std::vector<int>& weights, int d) {
    std::vector<std::vector<int>> words;
    std::vector<int> cur;
    std::function<void(int)> gen = [&](int left) {
        if (left == 0) {
            if (!cur.empty()) words.push_back(cur);
            return;
        }
        for (size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] > left) continue;
            cur.push_back((int)i);
            gen(left - weights[i]);
            cur.pop_back();
        }
    };
    gen(d);
    int count = 0;
    for (auto& w : words) {
        bool lyndon = true;
        for (size_t r = 1; r < w.size() && lyndon; ++r) {
            std::vector<int> rot(w.begin() + r, w.end());
            rot.insert(rot.end(), w.begin(), w.begin() + r);
            if (!(w < rot)) lyndon = false;
        }
        if (lyndon) ++count;
    }
    return count;
}

}  // namespace toda::testutil
