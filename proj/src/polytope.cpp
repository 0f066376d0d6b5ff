#include "toda/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace toda {

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::vector<int> GluedSimplicialComplex::facet_tuple(int s, int f) const {
    std::vector<int> t;
    for (int i = 0; i <= dim; ++i)
        if (i != f) t.push_back(vertex[s][i]);
    std::sort(t.begin(), t.end());
    return t;
}

std::vector<int> GluedSimplicialComplex::f_vector() const {
    std::vector<int> fv;
    for (int d = 0; d <= dim; ++d) fv.push_back(f_count(d));
    return fv;
}

int GluedSimplicialComplex::euler_characteristic() const {
    int chi = 0;
    for (int d = 0; d <= dim; ++d) chi += (d % 2 == 0 ? 1 : -1) * f_count(d);
    return chi;
}

GluedSimplicialComplex glue_simplices(int dim, int count,
                                      const std::vector<GluedSimplicialComplex::Gluing>& glue) {
    GluedSimplicialComplex C;
    C.dim = dim;
    C.num_simplices = count;
    C.gluings = glue;
    UnionFind uf(count * (dim + 1));
    auto slot = [&](int s, int v) { return s * (dim + 1) + v; };
    for (auto& g : glue) {
        // local vertices of the facets, in increasing order, matched in order
        std::vector<int> a, b;
        for (int i = 0; i <= dim; ++i) {
            if (i != g.f1) a.push_back(i);
            if (i != g.f2) b.push_back(i);
        }
        for (int i = 0; i < dim; ++i) uf.unite(slot(g.s1, a[i]), slot(g.s2, b[i]));
    }
    std::map<int, int> relabel;
    C.vertex.assign(count, std::vector<int>(dim + 1, -1));
    for (int s = 0; s < count; ++s)
        for (int v = 0; v <= dim; ++v) {
            int r = uf.find(slot(s, v));
            auto it = relabel.find(r);
            if (it == relabel.end()) it = relabel.emplace(r, (int)relabel.size()).first;
            C.vertex[s][v] = it->second;
        }
    C.num_vertices = (int)relabel.size();
    for (int s = 0; s < count; ++s) {
        std::set<int> distinct(C.vertex[s].begin(), C.vertex[s].end());
        if ((int)distinct.size() != dim + 1)
            throw std::invalid_argument("glue_simplices: a top simplex collapses");
        std::set<std::vector<int>> facets;
        for (int f = 0; f <= dim; ++f)
            if (!facets.insert(C.facet_tuple(s, f)).second)
                throw std::invalid_argument(
                    "glue_simplices: two facets of one simplex are identified");
    }
    C.faces.assign(dim + 1, {});
    C.face_idx.assign(dim + 1, {});
    std::set<std::vector<int>> seen;
    for (int s = 0; s < count; ++s) {
        std::vector<int> vs = C.vertex[s];
        std::sort(vs.begin(), vs.end());
        for (unsigned mask = 1; mask < (1u << (dim + 1)); ++mask) {
            std::vector<int> t;
            for (int i = 0; i <= dim; ++i)
                if (mask & (1u << i)) t.push_back(vs[i]);
            if (seen.insert(t).second) C.faces[(int)t.size() - 1].push_back(t);
        }
    }
    for (int d = 0; d <= dim; ++d) {
        std::sort(C.faces[d].begin(), C.faces[d].end());
        for (size_t i = 0; i < C.faces[d].size(); ++i) C.face_idx[d][C.faces[d][i]] = (int)i;
    }
    return C;
}

bool SubcomplexSelection::contains(int d, const std::vector<int>& t) const {
    if (d >= (int)faces.size()) return false;
    return std::binary_search(faces[d].begin(), faces[d].end(), t);
}

SubcomplexSelection close_faces(const GluedSimplicialComplex& C,
                                const std::vector<std::vector<int>>& generators) {
    SubcomplexSelection S;
    S.faces.assign(C.dim + 1, {});
    std::set<std::vector<int>> seen;
    for (auto& g : generators) {
        std::vector<int> t = g;
        std::sort(t.begin(), t.end());
        int m = (int)t.size();
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            std::vector<int> u;
            for (int i = 0; i < m; ++i)
                if (mask & (1u << i)) u.push_back(t[i]);
            if (seen.insert(u).second) S.faces[(int)u.size() - 1].push_back(u);
        }
    }
    for (auto& fs : S.faces) std::sort(fs.begin(), fs.end());
    return S;
}

FoldingPolytope folding_polytope(int n) {
    if (n < 1) throw std::invalid_argument("folding_polytope: n >= 1");
    std::vector<GluedSimplicialComplex::Gluing> glue;
    for (int k = 0; k < n; ++k) glue.push_back({k, n, k + 1, 1});
    FoldingPolytope P;
    P.n = n;
    P.complex = glue_simplices(n, n + 1, glue);
    std::set<std::pair<int, int>> glued;
    for (auto& g : glue) {
        glued.insert({g.s1, g.f1});
        glued.insert({g.s2, g.f2});
    }
    std::vector<std::vector<int>> bfaces, efaces;
    for (int k = 0; k <= n; ++k)
        for (int f = 0; f <= n; ++f)
            if (!glued.count({k, f})) bfaces.push_back(P.complex.facet_tuple(k, f));
    for (int k = 1; k <= n; ++k) efaces.push_back(P.complex.facet_tuple(k, 0));
    P.boundary = close_faces(P.complex, bfaces);
    P.edge = close_faces(P.complex, efaces);
    return P;
}

FoldingPolytope modified_folding_polytope(int n) {
    if (n < 1) throw std::invalid_argument("modified_folding_polytope: n >= 1");
    std::vector<GluedSimplicialComplex::Gluing> glue;
    for (int j = 1; j <= n - 1; ++j) glue.push_back({j - 1, n, j, 2});
    FoldingPolytope P;
    P.n = n;
    P.modified = true;
    P.complex = glue_simplices(n, n, glue);
    std::set<std::pair<int, int>> glued;
    for (auto& g : glue) {
        glued.insert({g.s1, g.f1});
        glued.insert({g.s2, g.f2});
    }
    std::vector<std::vector<int>> bfaces;
    for (int k = 0; k < n; ++k)
        for (int f = 0; f <= n; ++f)
            if (!glued.count({k, f})) bfaces.push_back(P.complex.facet_tuple(k, f));
    P.boundary = close_faces(P.complex, bfaces);
    return P;
}

namespace {

FreeChainComplex faces_to_complex(const std::vector<std::vector<std::vector<int>>>& faces,
                                  int dim, bool reduced) {
    Ring Z = Ring::integers();
    int lo = reduced ? -1 : 0;
    std::vector<int> ranks;
    if (reduced) ranks.push_back(1);
    for (int d = 0; d <= dim; ++d) ranks.push_back(d < (int)faces.size() ? (int)faces[d].size() : 0);
    FreeChainComplex C = FreeChainComplex::from_ranks(Z, lo, ranks);
    std::vector<std::map<std::vector<int>, int>> idx(dim + 1);
    for (int d = 0; d <= dim; ++d)
        if (d < (int)faces.size())
            for (size_t i = 0; i < faces[d].size(); ++i) idx[d][faces[d][i]] = (int)i;
    for (int d = 1; d <= dim; ++d) {
        if (C.rank(d) == 0) continue;
        Mat m(C.rank(d - 1), C.rank(d));
        for (size_t j = 0; j < faces[d].size(); ++j) {
            const auto& t = faces[d][j];
            for (size_t i = 0; i < t.size(); ++i) {
                std::vector<int> u;
                for (size_t l = 0; l < t.size(); ++l)
                    if (l != i) u.push_back(t[l]);
                auto it = idx[d - 1].find(u);
                if (it == idx[d - 1].end()) throw std::logic_error("missing face");
                m(it->second, (int)j) += (i % 2 == 0) ? 1 : -1;
            }
        }
        C.set_boundary(d, std::move(m));
    }
    if (reduced && C.rank(0) > 0) {
        Mat eps(1, C.rank(0));
        for (int j = 0; j < C.rank(0); ++j) eps(0, j) = 1;
        C.set_boundary(0, std::move(eps));
    }
    C.trim();
    return C;
}

}  // namespace

FreeChainComplex chain_complex(const GluedSimplicialComplex& C, bool reduced) {
    return faces_to_complex(C.faces, C.dim, reduced);
}

FreeChainComplex chain_complex(const GluedSimplicialComplex& C, const SubcomplexSelection& S,
                               bool reduced) {
    return faces_to_complex(S.faces, C.dim, reduced);
}

FreeChainComplex relative_chain_complex(const GluedSimplicialComplex& C,
                                        const SubcomplexSelection& S) {
    Ring Z = Ring::integers();
    // free on the faces of C not in S
    std::vector<std::vector<std::vector<int>>> rel(C.dim + 1);
    for (int d = 0; d <= C.dim; ++d)
        for (auto& t : C.faces[d])
            if (!S.contains(d, t)) rel[d].push_back(t);
    std::vector<std::map<std::vector<int>, int>> idx(C.dim + 1);
    for (int d = 0; d <= C.dim; ++d)
        for (size_t i = 0; i < rel[d].size(); ++i) idx[d][rel[d][i]] = (int)i;
    std::vector<int> ranks;
    for (int d = 0; d <= C.dim; ++d) ranks.push_back((int)rel[d].size());
    FreeChainComplex R = FreeChainComplex::from_ranks(Z, 0, ranks);
    for (int d = 1; d <= C.dim; ++d) {
        if (R.rank(d) == 0) continue;
        Mat m(R.rank(d - 1), R.rank(d));
        for (size_t j = 0; j < rel[d].size(); ++j) {
            const auto& t = rel[d][j];
            for (size_t i = 0; i < t.size(); ++i) {
                std::vector<int> u;
                for (size_t l = 0; l < t.size(); ++l)
                    if (l != i) u.push_back(t[l]);
                auto it = idx[d - 1].find(u);
                if (it == idx[d - 1].end()) continue;  // face lies in S: killed in the quotient
                m(it->second, (int)j) += (i % 2 == 0) ? 1 : -1;
            }
        }
        R.set_boundary(d, std::move(m));
    }
    R.trim();
    return R;
}

PolytopeReport homology_report(const FoldingPolytope& P) {
    PolytopeReport rep;
    rep.n = P.n;
    rep.modified = P.modified;
    rep.f_vector = P.complex.f_vector();
    rep.euler = P.complex.euler_characteristic();

    auto lines = [&](const FreeChainComplex& C, int lo, int hi) {
        std::vector<HomologyLine> out;
        for (int d = lo; d <= hi; ++d) out.push_back({d, homology(C, d).text});
        return out;
    };
    FreeChainComplex total = chain_complex(P.complex, true);
    rep.reduced_total = lines(total, 0, P.n);
    rep.ball_like = rep.euler == 1;
    for (auto& l : rep.reduced_total) rep.ball_like &= (l.group == "0");

    FreeChainComplex bnd = chain_complex(P.complex, P.boundary, true);
    rep.reduced_boundary = lines(bnd, 0, P.n);
    rep.boundary_sphere = true;
    for (auto& l : rep.reduced_boundary) {
        std::string expect = (l.degree == P.n - 1) ? "Z" : "0";
        rep.boundary_sphere &= (l.group == expect);
    }

    if (!P.modified) {
        FreeChainComplex ep = chain_complex(P.complex, P.edge, true);
        rep.reduced_edge = lines(ep, 0, P.n);
        rep.edge_acyclic = true;
        for (auto& l : rep.reduced_edge) rep.edge_acyclic &= (l.group == "0");
    }

    FreeChainComplex relc = relative_chain_complex(P.complex, P.boundary);
    rep.relative = lines(relc, 0, P.n);
    rep.relative_ball_sphere = true;
    for (auto& l : rep.relative) {
        std::string expect = (l.degree == P.n) ? "Z" : "0";
        rep.relative_ball_sphere &= (l.group == expect);
    }
    return rep;
}

std::vector<FacetRole> face_conditions_table(int n) {
    std::vector<FacetRole> out;
    for (int k = 0; k <= n; ++k)
        for (int f = 0; f <= n; ++f) {
            FacetRole r;
            r.simplex = k;
            r.facet = f;
            if (f <= k) r.role = "simplicial-direction";
            else if (f < n) r.role = "suspension";
            else r.role = "cone-base";
            if (f == n && k < n) {
                r.glued = true;
                r.partner_simplex = k + 1;
                r.partner_facet = 1;
            }
            if (f == 1 && k >= 1) {
                r.glued = true;
                r.partner_simplex = k - 1;
                r.partner_facet = n;
            }
            r.edge = (f == 0 && k >= 1);
            r.boundary = !r.glued;
            out.push_back(r);
        }
    return out;
}

}  // namespace toda
