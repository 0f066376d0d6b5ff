#pragma once

#include "toda/linalg.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toda {

// ---------------------------------------------------------------------------
// Bounded chain complexes of finitely generated free modules
// ---------------------------------------------------------------------------

struct FreeChainComplex {
    Ring ring;
    int lo = 0;                                    // lowest degree of the window
    std::vector<int> ranks;                        // ranks[i] = rank in degree lo+i
    std::vector<std::vector<std::string>> labels;  // basis labels per degree (optional)
    std::vector<Mat> bnd;                          // bnd[i] : degree lo+i -> lo+i-1

    FreeChainComplex() : ring(Ring::rationals()) {}
    explicit FreeChainComplex(Ring R) : ring(R) {}

    int hi() const { return lo + (int)ranks.size() - 1; }
    bool in_window(int d) const { return d >= lo && d <= hi(); }
    int rank(int d) const { return in_window(d) ? ranks[d - lo] : 0; }
    int total_rank() const;

    Mat boundary(int d) const {  // degree d -> d-1, sized rank(d-1) x rank(d)
        if (!in_window(d)) return Mat::zero(rank(d - 1), 0);
        return bnd[d - lo];
    }
    void set_boundary(int d, Mat m) {
        if (!in_window(d) || m.rows != rank(d - 1) || m.cols != rank(d))
            throw std::invalid_argument("set_boundary: dimension mismatch in degree " +
                                        std::to_string(d));
        bnd[d - lo] = std::move(m);
    }
    std::string label(int d, int i) const;

    // Builders
    static FreeChainComplex zero(Ring R) { return FreeChainComplex(R); }
    static FreeChainComplex from_ranks(Ring R, int lo, std::vector<int> ranks);
    // Single module placed in one degree ("B concentrated in degree n").
    static FreeChainComplex module(Ring R, int rank, int degree,
                                   std::vector<std::string> labels = {});

    void trim();  // drop zero-rank degrees at the window edges
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// d(d(x)) = 0 in every degree.
ValidationReport validate(const FreeChainComplex& C);

// ---------------------------------------------------------------------------
// Graded maps and chain maps
// ---------------------------------------------------------------------------

// A degree-s graded map f : A -> B, with components f_d : A_d -> B_{d+s}.
// It is a chain map when del f = (-1)^s f del, i.e. D(f) = 0 for the hom
// differential D(f) = del_B f - (-1)^s f del_A.
struct GradedMap {
    Ring ring;
    int shift = 0;
    FreeChainComplex src, dst;
    std::map<int, Mat> comp;  // degree -> matrix  (absent == zero)

    GradedMap() : ring(Ring::rationals()) {}
    GradedMap(const FreeChainComplex& A, const FreeChainComplex& B, int s)
        : ring(A.ring), shift(s), src(A), dst(B) {
        assert(A.ring == B.ring);
    }

    Mat at(int d) const {
        auto it = comp.find(d);
        if (it != comp.end()) return it->second;
        return Mat::zero(dst.rank(d + shift), src.rank(d));
    }
    void set(int d, Mat m) {
        if (m.rows != dst.rank(d + shift) || m.cols != src.rank(d))
            throw std::invalid_argument("GradedMap::set: dimension mismatch in degree " +
                                        std::to_string(d));
        if (m.is_zero()) comp.erase(d);
        else comp[d] = std::move(m);
    }
    bool is_zero() const {
        for (auto& [d, m] : comp)
            if (!m.is_zero()) return false;
        return true;
    }

    static GradedMap zero(const FreeChainComplex& A, const FreeChainComplex& B, int s) {
        return GradedMap(A, B, s);
    }
    static GradedMap identity(const FreeChainComplex& A);
};

GradedMap compose(const GradedMap& g, const GradedMap& f);     // g after f
GradedMap gm_add(const GradedMap& f, const GradedMap& g);
GradedMap gm_sub(const GradedMap& f, const GradedMap& g);
GradedMap gm_neg(const GradedMap& f);
bool gm_equal(const GradedMap& f, const GradedMap& g);

// Hom differential D(f) = del f - (-1)^{|f|} f del, of shift one lower.
GradedMap hom_diff(const GradedMap& f);
bool is_chain_map(const GradedMap& f);

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

// B.S^n and B.D^n cell complexes: the sphere has B in degree n only; the disk
// has B in degrees n and n-1 with the identity boundary between them.
FreeChainComplex sphere_complex(Ring R, int rank, int n, std::vector<std::string> labels = {});
FreeChainComplex disk_complex(Ring R, int rank, int n);

// Pushout cell attachment: adds `rank` in degree n with boundary given by the
// degree-(n-1) component of the attaching map from rank.S^{n-1}.
FreeChainComplex attach_cell(const FreeChainComplex& skeleton, const GradedMap& attaching, int n);

// Mapping cone C(f)_n = B_n + A_{n-1}, del(b,a) = (del b + f a, -del a).
FreeChainComplex cone(const GradedMap& f);
// Shift with sign: (Sigma C)_d = C_{d-1}, del = -del.
FreeChainComplex suspension(const FreeChainComplex& C, int times = 1);
GradedMap suspend_map(const GradedMap& f, int times = 1);  // same matrices, shifted degrees

// cone(id_M) together with the comparison maps i : M -> C(M), q : C(M) -> Sigma M.
struct ConeData {
    FreeChainComplex cx;
    GradedMap incl, quot;
};
ConeData cone_on_identity(const FreeChainComplex& M);

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

// ker(del_d) with a chosen basis, modulo im(del_{d+1}); gives canonical
// coordinates for homology classes of degree-d cycles.
struct HomologyView {
    Ring ring;
    int degree = 0;
    Mat cycles;      // columns: basis of ker(del_d) in chain coordinates
    GroupPres pres;  // presentation of cycle coordinates mod boundaries

    int class_len() const { return pres.canon_len(); }
    std::vector<Rat> coords_of_cycle(const std::vector<Rat>& chain) const;
    std::vector<Rat> class_of(const std::vector<Rat>& chain) const;  // canonical form
    bool is_boundary_class(const std::vector<Rat>& chain) const;
    std::string describe() const { return pres.describe(); }
};

HomologyView homology_view(const FreeChainComplex& C, int d);

struct GroupInfo {
    int free_rank = 0;
    std::vector<Int> torsion;
    std::string text;
};
GroupInfo homology(const FreeChainComplex& C, int d);

// ---------------------------------------------------------------------------
// Hom complexes, nullhomotopies, homotopy classes
// ---------------------------------------------------------------------------

// The internal hom complex Hom(A,B) with Hom_s = prod_t Hom(A_t, B_{t+s});
// provides flattening between graded maps and coordinate vectors.
struct HomComplex {
    FreeChainComplex cx;  // ring as A/B, degree = shift
    FreeChainComplex A, B;

    std::vector<Rat> flatten(const GradedMap& f) const;
    GradedMap unflatten(int shift, const std::vector<Rat>& v) const;
    int dim(int shift) const { return cx.rank(shift); }
};

HomComplex hom_complex(const FreeChainComplex& A, const FreeChainComplex& B);

// Solve D(H) = g for H of shift |g|+1; std::nullopt when no solution exists.
std::optional<GradedMap> solve_nullhomotopy(const GradedMap& g);

// [Sigma^k A, B] = H_k Hom(A,B).
struct HomotopyClasses {
    HomComplex hom;
    HomologyView view;
    std::vector<Rat> class_of(const GradedMap& f) const { return view.class_of(hom.flatten(f)); }
    std::vector<Rat> coords_of(const GradedMap& f) const {
        return view.coords_of_cycle(hom.flatten(f));
    }
    GroupInfo group() const;
};
HomotopyClasses homotopy_classes(const FreeChainComplex& A, const FreeChainComplex& B, int k);

// ---------------------------------------------------------------------------
// Toda brackets
// ---------------------------------------------------------------------------

// A coset in [Sigma^k A, B]: representative class plus indeterminacy subgroup.
struct BracketCoset {
    Ring ring;
    int arity = 3;
    std::string ambient;              // e.g. "Z", "F2^2"
    GroupPres pres;                   // homology presentation (cycle coords mod boundaries)
    std::vector<Rat> rep_coords;      // representative, cycle coordinates
    Mat indet_coords;                 // indeterminacy generators, cycle coordinates (columns)
    std::vector<Rat> rep;             // canonical form of the representative
    std::vector<std::vector<Rat>> indeterminacy;  // canonical forms of the generators
    bool contains_zero = false;

    bool member(const std::vector<Rat>& cycle_coords) const;
};

bool coset_equal(const BracketCoset& a, const BracketCoset& b);

// theta = f H_gh - H_fg h; anticommutes with the differentials.
GradedMap triple_toda(const GradedMap& f, const GradedMap& g, const GradedMap& h,
                      const GradedMap& H_gh, const GradedMap& H_fg);

struct TodaError {
    std::string what;          // which composite obstructs
    std::vector<Rat> obstruction_class;
};

struct TodaResult {
    std::optional<BracketCoset> coset;
    std::optional<TodaError> error;
    bool ok() const { return coset.has_value(); }
};

TodaResult toda_coset(const GradedMap& f, const GradedMap& g, const GradedMap& h);

// Long bracket: staged obstruction descent. Input maps d1..dn with
// d_i : X_i -> X_{i-1}; middle adjacent composites must vanish strictly.
struct StageCoset {
    int stage = 0;  // bracket window length reached (3 = triple stage, ...)
    BracketCoset coset;
};

struct LongTodaResult {
    std::vector<StageCoset> stages;
    std::optional<BracketCoset> final;      // present when the descent completed
    std::optional<std::string> halt_reason; // stage obstruction report otherwise
    bool ok() const { return final.has_value(); }
};

LongTodaResult long_toda(const std::vector<GradedMap>& maps);

// ---------------------------------------------------------------------------
// Standard strongly cofibrant replacement of B.S^{n-1}
// ---------------------------------------------------------------------------

// D_k = Cone(Sigma^{n-k-2} B) for k < n-1 and D_{n-1} = B, with the external
// differential factoring as epi (to the suspension) then mono (cone base).
struct StagedReplacement {
    int n = 1;
    FreeChainComplex B;
    std::vector<FreeChainComplex> stage;  // index k = 0..n-1
    std::vector<GradedMap> ext;           // ext[k] : stage[k] -> stage[k-1], k >= 1
    std::vector<FreeChainComplex> susp;   // susp[j] = Sigma^j B, j = 0..n-1
    std::vector<GradedMap> iota;          // iota[j] : Sigma^j B  -> stage[n-2-j]
    std::vector<GradedMap> quot;          // quot[j] : stage[n-2-j] -> Sigma^{j+1} B

    FreeChainComplex total() const;  // quasi-isomorphic to B.S^{n-1}
};

StagedReplacement standard_replacement(const FreeChainComplex& B, int n);

}  // namespace toda
