#pragma once

#include "toda/chain.hpp"
#include "toda/lie.hpp"

#include <optional>
#include <string>
#include <vector>

namespace toda {

// ---------------------------------------------------------------------------
// Restricted augmented simplicial objects over chain complexes
// ---------------------------------------------------------------------------
// Levels are bounded complexes of free modules; a "module-level" object is the
// special case where every level is concentrated in internal degree 0. Face
// maps are chain maps; face[0][0] is the augmentation to `aug`.

struct SimplicialObject {
    Ring ring;
    FreeChainComplex aug;
    std::vector<FreeChainComplex> level;
    std::vector<std::vector<GradedMap>> face;  // face[n][i] : level n -> level n-1

    SimplicialObject() : ring(Ring::rationals()) {}
    explicit SimplicialObject(Ring R) : ring(R), aug(FreeChainComplex::zero(R)) {}

    int top_dim() const { return (int)level.size() - 1; }
    const FreeChainComplex& at(int n) const { return n < 0 ? aug : level[n]; }
    const GradedMap& face_map(int n, int i) const { return face[n][i]; }
};

struct IdentityReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// d_i d_j = d_{j-1} d_i for i < j, in every dimension, plus the requirement
// that every face is a chain map for the internal differentials. The identity
// involving the augmentation row (eps d_1 = eps d_0) is included by default;
// pass include_augmentation = false to check the unaugmented identities only.
IdentityReport check_identities(const SimplicialObject& G, bool include_augmentation = true);

// ---------------------------------------------------------------------------
// Moore chains and cycles
// ---------------------------------------------------------------------------

struct MooreData {
    FreeChainComplex aug;
    std::vector<FreeChainComplex> chains;  // C_n, n = 0..top
    std::vector<GradedMap> include;        // w_n : C_n -> G_n
    std::vector<GradedMap> dbar;           // dbar[n] : C_n -> C_{n-1} (dbar[0] -> aug)
    std::vector<FreeChainComplex> cycles;  // Z_n = ker(dbar_n)
    std::vector<GradedMap> cycle_incl;     // v_n : Z_n -> C_n

    const FreeChainComplex& chain_at(int n) const { return n < 0 ? aug : chains[n]; }
    const GradedMap& differential(int n) const { return dbar[n]; }
};

MooreData moore_complex(const SimplicialObject& G);

// Module-level extraction: when every Moore chains complex is concentrated in
// internal degree 0, the Moore complex is an ordinary chain complex whose
// degree n is C_n (augmentation in degree -1).
FreeChainComplex moore_flat(const MooreData& M);

// E functor: d_0 = del, higher faces zero. Inverse to moore_flat on objects.
SimplicialObject e_functor(const FreeChainComplex& A);

// ---------------------------------------------------------------------------
// CW-style builder with latching bookkeeping
// ---------------------------------------------------------------------------

// Order-preserving surjections [n] ->> [k], as value vectors of length n+1.
std::vector<std::vector<int>> monotone_surjections(int n, int k);

struct Summand {
    int piece = 0;          // index into pieces
    std::vector<int> surj;  // theta : [dim] ->> [birth]; identity for the fresh copy
    bool degenerate() const { return (int)surj.size() - 1 != surj.back(); }
};

// Builds restricted augmented simplicial objects from attached pieces; every
// piece added in dimension b spawns latching copies in all higher dimensions,
// with faces derived from the simplicial identities and degeneracies recorded
// as summand relabelings.
struct SimplicialBuilder {
    Ring ring;
    FreeChainComplex aug;
    int horizon = 0;  // levels 0..horizon are maintained

    struct Piece {
        int birth;
        FreeChainComplex cx;
    };
    std::vector<Piece> pieces;
    std::vector<std::vector<Summand>> sums;      // per level
    std::vector<FreeChainComplex> level;
    std::vector<std::vector<GradedMap>> face;    // face[n][i], face[0][0] = augmentation
    std::vector<std::vector<GradedMap>> degen;   // degen[n][j] : level n -> level n+1

    SimplicialBuilder(Ring R, FreeChainComplex augment, int top);

    // Attach a piece in dimension `birth`. `faces` are the prescribed face maps
    // of the fresh copy into the CURRENT level (birth-1 <= horizon); size must
    // be birth+1 (d_0 .. d_birth); for birth = 0 a single map into `aug`.
    void add_piece(FreeChainComplex piece, int birth, std::vector<GradedMap> faces);

    // Inclusion of the fresh (non-degenerate) copy of piece p into its level.
    GradedMap fresh_inclusion(int p) const;

    SimplicialObject object() const;

private:
    void spawn_copies(int p);
    int summand_offset(int n, int s, int internal_degree) const;
    void append_summand(int n, Summand s);
    void rebuild_level(int n);
};

// ---------------------------------------------------------------------------
// CW objects over modules (Def-style: higher faces vanish on the basis)
// ---------------------------------------------------------------------------

struct CWObjectData {
    SimplicialBuilder builder;
    std::vector<FreeChainComplex> basis;   // CW basis per dimension
    std::vector<GradedMap> attaching;      // d0bar : basis[n] -> cycles Z_{n-1} (as map to level n-1)

    CWObjectData(Ring R, FreeChainComplex aug, int horizon)
        : builder(R, std::move(aug), horizon) {}
    SimplicialObject object() const { return builder.object(); }
};

// Start a CW object: dimension-0 basis with its augmentation.
CWObjectData cw_start(Ring R, FreeChainComplex aug, const FreeChainComplex& basis0,
                      const GradedMap& eps, int horizon);

// Attach basis[n] along a map landing in the Moore cycles Z_{n-1}; throws if
// the map misses the cycles. `attach` maps basis -> level n-1 coordinates.
void attach_cw(CWObjectData& cw, const FreeChainComplex& basis_n, const GradedMap& attach);

struct LatchingDecomposition {
    int dim = 0;
    std::vector<Summand> copies;      // degenerate summands of the level
    int formula_rank = 0;             // rank via the surjection-indexed formula
    int direct_rank = 0;              // rank of the degenerate part, computed directly
    // alternative count indexing the copies of basis[k] by strictly increasing
    // index sequences of length n-k-1; disagrees with the degenerate part at n = 2
    bool seq_indexed_matches = false;
    int seq_indexed_rank = 0;
    std::string note;
};

LatchingDecomposition latching(const CWObjectData& cw, int n);

// Mapping cone of a dimensionwise map of restricted augmented simplicial
// objects, with the inclusion of the target.
struct ConeRestricted {
    SimplicialObject cone;
    std::vector<GradedMap> incl;  // level n of B -> level n of the cone
};
ConeRestricted cone_restricted(const SimplicialObject& A, const SimplicialObject& B,
                               const std::vector<GradedMap>& f);

// ---------------------------------------------------------------------------
// Acyclicity (resolution property)
// ---------------------------------------------------------------------------

struct AcyclicityReport {
    bool acyclic = true;
    bool augmentation_surjective = true;
    std::vector<std::string> failures;
    // second formulation: attaching maps surject onto cycles (per dimension)
    std::optional<bool> attachings_surjective;
};

// Moore homology vanishes in positive dimensions and the augmentation induces
// an isomorphism onto `aug` (both formulations when CW data is supplied).
AcyclicityReport acyclicity_check(const SimplicialObject& G, const CWObjectData* cw = nullptr);

// ---------------------------------------------------------------------------
// Realization descent (obstruction theory)
// ---------------------------------------------------------------------------

struct DescentStage {
    int k = 0;                      // Moore degree whose relation was solved
    std::vector<Rat> obstruction;   // class of a_{k-1} before correction (canonical coords)
    bool corrected = false;         // an eta-correction was applied
};

struct RealizeResult {
    bool ok = false;
    // F[k] : replacement stage k -> chains[k]; Fm1 is the augmentation-level
    // cone map (the nullhomotopy data of the final obstruction).
    std::vector<GradedMap> F;
    std::optional<GradedMap> Fm1;
    std::vector<DescentStage> stages;
    int obstructed_stage = -2;      // Moore degree at which the descent halted
    std::string obstruction_note;
};

// Staged obstruction descent: realize an attaching map (given as the top
// chain map F_top : B -> chains[n-1]) by a strict chain map from the standard
// replacement into the Moore complex. The stage factorization relations hold
// exactly for the returned maps.
RealizeResult realize_attaching(const MooreData& M, const StagedReplacement& D,
                                const GradedMap& F_top);

// Verifies the stage factorization relations for a completed descent:
// dbar_k F_k = (F_{k-1} restricted along the cone base) q, at every stage.
bool verify_stage_relations(const MooreData& M, const StagedReplacement& D,
                            const RealizeResult& R);

// ---------------------------------------------------------------------------
// Extension by cone and sequential realization
// ---------------------------------------------------------------------------

// X[F]: adds the cone pieces of the replacement (and their latching copies)
// to the tower builder; level k gains Cone(Sigma^{n-k-1} B). M is the Moore
// data of the builder's object before the extension.
void extend_by_cone(SimplicialBuilder& W, const StagedReplacement& D, const RealizeResult& R,
                    const MooreData& M);

struct SequentialRealization {
    // V is the algebraic resolution (module-level CW object); W realizes it.
    std::vector<int> stages_built;
    SimplicialBuilder W;
    // sigma[k] : matrix of the section M_k(V) -> chains_k(W) at internal degree 0
    // (columns indexed by the Moore-chain basis of V at level k)
    std::vector<Mat> sigma;
    std::vector<MooreData> snapshots;  // Moore data of W^{(n)} after each stage

    explicit SequentialRealization(Ring R) : W(R, FreeChainComplex::zero(R), 0) {}
};

struct SeqRealResult {
    bool ok = false;
    std::optional<SequentialRealization> real;
    int obstructed_stage = -1;
    std::string note;
    std::vector<std::vector<DescentStage>> descent_log;  // per stage
    bool relations_verified = false;  // stage relations checked at every completed stage
};

// Iterates realize_attaching / extend_by_cone over the CW resolution data,
// then checks that the Moore homology of the result matches the resolution
// through dimension N.
SeqRealResult build_sequential_realization(const CWObjectData& V, int N);

// Realization condition: the Moore homology of W matches the Moore complex
// of V through dimension N (dimension counts per internal degree).
bool realization_matches(const MooreData& WM, const MooreData& VM, int N,
                         std::vector<std::string>* why = nullptr);

// ---------------------------------------------------------------------------
// Simplicial DGLs and per-degree linearization
// ---------------------------------------------------------------------------

struct SimplicialDGL {
    // levels are heap-allocated so the morphisms' pointers stay valid when the
    // fixture is moved around
    std::vector<std::shared_ptr<FreeDGL>> level;
    std::shared_ptr<FreeDGL> aug;  // dimension -1
    // face[n][i] images per generator of level n; face[0][0] = augmentation
    std::vector<std::vector<DGLMorphism>> face;
    std::vector<std::vector<DGLMorphism>> degen;  // degen[n][j] : level n -> level n+1

    const FreeDGL& at(int n) const { return n < 0 ? *aug : *level[n]; }
};

// The internal degree-t piece as a module-level simplicial object.
SimplicialObject per_degree_linearize(const SimplicialDGL& G, int t);

// All internal degrees <= T at once: levels become chain complexes with the
// DGL differentials as internal boundary.
SimplicialObject linearize_range(const SimplicialDGL& G, int T);

// ---------------------------------------------------------------------------
// Algebraic comparison maps
// ---------------------------------------------------------------------------

struct ComparisonReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// phi, rho: levelwise maps (including the augmentation level at index -1 is
// implicit: both objects share the augmentation target). Verifies that phi
// and rho are simplicial, rho . phi = id, the augmentations agree, and that
// phi restricted to the CW basis summands is a coordinate inclusion.
ComparisonReport check_algebraic_comparison(const CWObjectData& src, const CWObjectData& dst,
                                            const std::vector<GradedMap>& phi,
                                            const std::vector<GradedMap>& rho);

}  // namespace toda
