#pragma once

#include "toda/chain.hpp"

#include <map>
#include <string>
#include <vector>

namespace toda {

// Abstract ordered simplicial complexes obtained by gluing top simplices along
// facets with order-preserving vertex matching.
struct GluedSimplicialComplex {
    int dim = 0;            // dimension of the top simplices
    int num_simplices = 0;
    struct Gluing {
        int s1, f1, s2, f2;  // facet f1 of simplex s1 ~ facet f2 of simplex s2
    };
    std::vector<Gluing> gluings;
    std::vector<std::vector<int>> vertex;  // vertex[s][i] = global id of vertex i of simplex s
    int num_vertices = 0;
    std::vector<std::vector<std::vector<int>>> faces;       // faces[d]: sorted global tuples
    std::vector<std::map<std::vector<int>, int>> face_idx;  // per dimension

    // sorted global tuple of a facet (the face opposite local vertex f)
    std::vector<int> facet_tuple(int s, int f) const;

    int f_count(int d) const { return d < (int)faces.size() ? (int)faces[d].size() : 0; }
    std::vector<int> f_vector() const;
    int euler_characteristic() const;
};

// Build the quotient complex; throws when a simplex collapses or two facets of
// the same simplex become identified.
GluedSimplicialComplex glue_simplices(int dim, int count,
                                      const std::vector<GluedSimplicialComplex::Gluing>& glue);

// A subcomplex selected by closing a set of faces downward.
struct SubcomplexSelection {
    std::vector<std::vector<std::vector<int>>> faces;  // per dimension, sorted tuples
    int f_count(int d) const { return d < (int)faces.size() ? (int)faces[d].size() : 0; }
    bool contains(int d, const std::vector<int>& t) const;
};

SubcomplexSelection close_faces(const GluedSimplicialComplex& C,
                                const std::vector<std::vector<int>>& generators);

struct FoldingPolytope {
    GluedSimplicialComplex complex;
    SubcomplexSelection boundary;  // non-identified facets
    SubcomplexSelection edge;      // union of the facets d_0 Delta^n_(k), k = 1..n (P only)
    bool modified = false;
    int n = 0;
};

// P(n): n+1 simplices, d_n Delta^n_(k) ~ d_1 Delta^n_(k+1), order-preserving.
FoldingPolytope folding_polytope(int n);
// Phat(n): n simplices, d_n Delta^n_(j-1) ~ d_2 Delta^n_(j).
FoldingPolytope modified_folding_polytope(int n);

// Simplicial chains over Z (augmented when `reduced`).
FreeChainComplex chain_complex(const GluedSimplicialComplex& C, bool reduced);
FreeChainComplex chain_complex(const GluedSimplicialComplex& C, const SubcomplexSelection& S,
                               bool reduced);
// Relative chains C(P)/C(S).
FreeChainComplex relative_chain_complex(const GluedSimplicialComplex& C,
                                        const SubcomplexSelection& S);

struct HomologyLine {
    int degree;
    std::string group;
};

struct PolytopeReport {
    int n = 0;
    bool modified = false;
    std::vector<int> f_vector;
    int euler = 0;
    std::vector<HomologyLine> reduced_total;     // Htilde_*(P)
    std::vector<HomologyLine> reduced_boundary;  // Htilde_*(dP)
    std::vector<HomologyLine> reduced_edge;      // Htilde_*(EP)  (P only)
    std::vector<HomologyLine> relative;          // H_*(P, dP)
    bool ball_like = false;       // Htilde(P) = 0 and chi = 1
    bool boundary_sphere = false; // Htilde(dP) = Htilde(S^{n-1})
    bool edge_acyclic = false;
    bool relative_ball_sphere = false;  // H(P,dP) = Z in degree n only
};

PolytopeReport homology_report(const FoldingPolytope& P);

struct FacetRole {
    int simplex, facet;
    std::string role;     // simplicial-direction | suspension | cone-base
    bool glued = false;
    int partner_simplex = -1, partner_facet = -1;
    bool edge = false;
    bool boundary = false;
};

std::vector<FacetRole> face_conditions_table(int n);

}  // namespace toda
