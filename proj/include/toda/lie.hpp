#pragma once

#include "toda/linalg.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace toda {

// ---------------------------------------------------------------------------
// Free graded Lie algebras over Q with a degree -1 differential
// ---------------------------------------------------------------------------

struct Generator {
    std::string name;
    int degree = 1;
};

// A bracket monomial: a leaf (generator index) or [left, right].
struct LieTree;
using TreePtr = std::shared_ptr<const LieTree>;

struct LieTree {
    int gen = -1;  // >= 0 for leaves
    TreePtr l, r;

    bool is_leaf() const { return gen >= 0; }
    static TreePtr leaf(int g);
    static TreePtr node(TreePtr a, TreePtr b);
};

int tree_cmp(const TreePtr& a, const TreePtr& b);

// Formal sum of rational multiples of bracket monomials (tree-level canonical:
// like terms combined, ordered, zero terms dropped).
struct LieExpr {
    std::vector<std::pair<Rat, TreePtr>> terms;

    bool is_zero() const { return terms.empty(); }
    void normalize();

    static LieExpr zero() { return {}; }
    static LieExpr gen(int g);
    static LieExpr single(Rat c, TreePtr t);
};

LieExpr operator+(const LieExpr& a, const LieExpr& b);
LieExpr operator-(const LieExpr& a, const LieExpr& b);
LieExpr operator*(const Rat& c, const LieExpr& a);
LieExpr bracket(const LieExpr& a, const LieExpr& b);  // formal bilinear [a,b]

// Tensor-algebra normal form: noncommutative words (generator index sequences)
// with rational coefficients. Equal Lie elements have identical normal forms.
using Word = std::vector<int>;
using TensorForm = std::map<Word, Rat>;

struct FreeDGL {
    std::vector<Generator> gens;
    std::vector<LieExpr> diff;  // differential on each generator
    int truncation = 0;         // degrees above this are dropped

    std::map<std::string, int> index;

    mutable std::mutex cache_mu;
    struct DegreeBasis {
        std::vector<LieExpr> elems;
        std::vector<Word> words;               // row space of the coordinate matrix
        std::map<Word, int> word_index;
        Mat coords;                            // words x elems
    };
    mutable std::map<int, DegreeBasis> basis_cache;

    FreeDGL() = default;
    FreeDGL(const FreeDGL& o)
        : gens(o.gens), diff(o.diff), truncation(o.truncation), index(o.index) {}
    FreeDGL& operator=(const FreeDGL& o) {
        gens = o.gens; diff = o.diff; truncation = o.truncation; index = o.index;
        basis_cache.clear();
        return *this;
    }

    int add_generator(const std::string& name, int degree);
    int gen_index(const std::string& name) const;
    void set_differential(int g, LieExpr e) { diff[g] = std::move(e); }

    int tree_degree(const TreePtr& t) const;
    // Degree of a homogeneous expression; throws when mixed.
    std::optional<int> degree_of(const LieExpr& e) const;

    LieExpr truncate_expr(const LieExpr& e) const;  // drop monomials above the cutoff

    TensorForm expand(const LieExpr& e) const;
    LieExpr differential(const LieExpr& e) const;  // Leibniz: d[u,v]=[du,v]+(-1)^|u|[u,dv]

    const DegreeBasis& graded_basis(int d) const;
    int dim(int d) const { return (int)graded_basis(d).elems.size(); }

    // Matrix of d : L_d -> L_{d-1} in the graded bases.
    Mat diff_matrix(int d) const;

    // Coordinates of a homogeneous expression in the degree-d basis.
    std::vector<Rat> coords(const LieExpr& e, int d) const;
    LieExpr from_coords(int d, const std::vector<Rat>& v) const;
};

struct DGLReport {
    bool ok = true;
    std::vector<std::string> failures;
};

DGLReport check_dgl(const FreeDGL& D);

std::map<int, int> homology_dims(const FreeDGL& D, int lo, int hi);

// Homology of the degree-d piece with cycle-coordinate bookkeeping.
struct LieHomologyView {
    int degree = 0;
    Mat cycles;      // columns in graded-basis coordinates
    GroupPres pres;  // cycle coords modulo boundaries
    std::vector<Rat> class_of(const FreeDGL& D, const LieExpr& z) const;
    std::vector<Rat> coords_of_cycle(const FreeDGL& D, const LieExpr& z) const;
};
LieHomologyView lie_homology_view(const FreeDGL& D, int d);

// Witness u with d(u) = z, when one exists (z must be a cycle).
std::optional<LieExpr> is_boundary(const FreeDGL& D, const LieExpr& z);

// Symmetric triple Lie-Massey product <u,v,w> with defining system
// d(alpha) = [v,w], d(beta) = [w,u], d(gamma) = [u,v]; representative
// [u,alpha] + [v,beta] + [w,gamma] (the even-degree cyclic convention).
struct LieMasseyResult {
    LieExpr representative;
    std::vector<Rat> rep_class;                  // canonical homology coords
    std::vector<std::vector<Rat>> indeterminacy; // spanning set, canonical coords
    bool vanishes = false;                       // class lies in the indeterminacy
};
LieMasseyResult lie_massey(const FreeDGL& D, const LieExpr& u, const LieExpr& v,
                           const LieExpr& w, const LieExpr& alpha, const LieExpr& beta,
                           const LieExpr& gamma);

// Lemma-1.9 style generation certificate: the classes generate freely iff the
// per-degree matrices of generator (indecomposable) coordinates are invertible.
bool generation_check(const FreeDGL& D, const std::vector<LieExpr>& classes);

// Morphisms of free DGLs, given by generator images.
struct DGLMorphism {
    const FreeDGL* src = nullptr;
    const FreeDGL* dst = nullptr;
    std::vector<LieExpr> images;  // per source generator

    LieExpr apply(const LieExpr& e) const;
};

struct MorphismReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// degree preservation + commutation with the differentials on generators
MorphismReport check_morphism(const DGLMorphism& f);

std::string to_string(const FreeDGL& D, const LieExpr& e);

}  // namespace toda
