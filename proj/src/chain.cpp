#include "toda/chain.hpp"

#include <sstream>

namespace toda {

// ---------------------------------------------------------------------------
// FreeChainComplex basics
// ---------------------------------------------------------------------------

int FreeChainComplex::total_rank() const {
    int t = 0;
    for (int r : ranks) t += r;
    return t;
}

std::string FreeChainComplex::label(int d, int i) const {
    if (in_window(d)) {
        const auto& L = labels[d - lo];
        if (i < (int)L.size()) return L[i];
    }
    std::ostringstream os;
    os << "e" << d << "_" << i;
    return os.str();
}

FreeChainComplex FreeChainComplex::from_ranks(Ring R, int lo, std::vector<int> ranks) {
    FreeChainComplex C(R);
    C.lo = lo;
    C.ranks = std::move(ranks);
    C.labels.resize(C.ranks.size());
    for (size_t i = 0; i < C.ranks.size(); ++i) {
        int below = (i == 0) ? 0 : C.ranks[i - 1];
        C.bnd.push_back(Mat::zero(below, C.ranks[i]));
    }
    return C;
}

FreeChainComplex FreeChainComplex::module(Ring R, int rank, int degree,
                                          std::vector<std::string> lab) {
    FreeChainComplex C = from_ranks(R, degree, {rank});
    if (!lab.empty()) C.labels[0] = std::move(lab);
    return C;
}

void FreeChainComplex::trim() {
    while (!ranks.empty() && ranks.back() == 0) {
        ranks.pop_back();
        labels.pop_back();
        bnd.pop_back();
    }
    while (!ranks.empty() && ranks.front() == 0) {
        ranks.erase(ranks.begin());
        labels.erase(labels.begin());
        bnd.erase(bnd.begin());
        ++lo;
        if (!bnd.empty()) bnd[0] = Mat::zero(0, ranks[0]);
    }
}

namespace {

// Pad the window so that degree d lies inside it.
void ensure_window(FreeChainComplex& C, int d) {
    if (C.ranks.empty()) {
        C.lo = d;
        C.ranks = {0};
        C.labels.resize(1);
        C.bnd = {Mat::zero(0, 0)};
        return;
    }
    while (d < C.lo) {
        C.ranks.insert(C.ranks.begin(), 0);
        C.labels.insert(C.labels.begin(), {});
        C.bnd.insert(C.bnd.begin(), Mat::zero(0, 0));
        C.bnd[1] = Mat::zero(0, C.ranks[1]);
        --C.lo;
    }
    while (d > C.hi()) {
        C.bnd.push_back(Mat::zero(C.ranks.back(), 0));
        C.ranks.push_back(0);
        C.labels.push_back({});
    }
}

bool same_shape(const FreeChainComplex& A, const FreeChainComplex& B) {
    if (A.ring != B.ring) return false;
    int lo = std::min(A.lo, B.lo), hi = std::max(A.hi(), B.hi());
    for (int d = lo; d <= hi; ++d) {
        if (A.rank(d) != B.rank(d)) return false;
        if (A.boundary(d) != B.boundary(d)) return false;
    }
    return true;
}

}  // namespace

ValidationReport validate(const FreeChainComplex& C) {
    ValidationReport rep;
    for (int d = C.lo; d <= C.hi(); ++d) {
        Mat dd = mul(C.ring, C.boundary(d - 1), C.boundary(d));
        if (!dd.is_zero()) {
            rep.ok = false;
            std::ostringstream os;
            os << "del^2 != 0 from degree " << d << " to " << d - 2;
            rep.failures.push_back(os.str());
        }
        for (auto& x : C.boundary(d).a) C.ring.canon(x);  // throws on illegal scalars
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Graded maps
// ---------------------------------------------------------------------------

GradedMap GradedMap::identity(const FreeChainComplex& A) {
    GradedMap f(A, A, 0);
    for (int d = A.lo; d <= A.hi(); ++d)
        if (A.rank(d) > 0) f.set(d, Mat::identity(A.rank(d)));
    return f;
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
    if (g.ring != f.ring || !same_shape(g.src, f.dst))
        throw std::invalid_argument("compose: maps are not composable");
    GradedMap h(f.src, g.dst, f.shift + g.shift);
    for (int d = f.src.lo; d <= f.src.hi(); ++d) {
        if (f.src.rank(d) == 0) continue;
        Mat m = mul(h.ring, g.at(d + f.shift), f.at(d));
        if (!m.is_zero()) h.set(d, std::move(m));
    }
    return h;
}

GradedMap gm_add(const GradedMap& f, const GradedMap& g) {
    if (f.shift != g.shift || !same_shape(f.src, g.src) || !same_shape(f.dst, g.dst))
        throw std::invalid_argument("gm_add: shape mismatch");
    GradedMap h = f;
    for (int d = f.src.lo; d <= f.src.hi(); ++d) {
        Mat m = add(f.ring, f.at(d), g.at(d));
        h.set(d, std::move(m));
    }
    return h;
}

GradedMap gm_neg(const GradedMap& f) {
    GradedMap h = f;
    for (auto& [d, m] : h.comp) m = neg(f.ring, m);
    return h;
}

GradedMap gm_sub(const GradedMap& f, const GradedMap& g) { return gm_add(f, gm_neg(g)); }

bool gm_equal(const GradedMap& f, const GradedMap& g) {
    if (f.shift != g.shift) return false;
    int lo = std::min(f.src.lo, g.src.lo), hi = std::max(f.src.hi(), g.src.hi());
    for (int d = lo; d <= hi; ++d)
        if (f.at(d) != g.at(d)) return false;
    return true;
}

GradedMap hom_diff(const GradedMap& f) {
    // D(f) = del_B f - (-1)^s f del_A
    GradedMap r(f.src, f.dst, f.shift - 1);
    Rat sign = (f.shift % 2 == 0) ? Rat(1) : Rat(-1);
    for (int d = f.src.lo; d <= f.src.hi(); ++d) {
        if (f.src.rank(d) == 0) continue;
        Mat m = mul(f.ring, f.dst.boundary(d + f.shift), f.at(d));
        Mat m2 = mul(f.ring, f.at(d - 1), f.src.boundary(d));
        m = sub(f.ring, m, scale(f.ring, sign, m2));
        if (!m.is_zero()) r.set(d, std::move(m));
    }
    return r;
}

bool is_chain_map(const GradedMap& f) { return hom_diff(f).is_zero(); }

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

FreeChainComplex sphere_complex(Ring R, int rank, int n, std::vector<std::string> labels) {
    return FreeChainComplex::module(R, rank, n, std::move(labels));
}

FreeChainComplex disk_complex(Ring R, int rank, int n) {
    FreeChainComplex C = FreeChainComplex::from_ranks(R, n - 1, {rank, rank});
    C.set_boundary(n, Mat::identity(rank));
    return C;
}

FreeChainComplex attach_cell(const FreeChainComplex& skeleton, const GradedMap& attaching,
                             int n) {
    assert(attaching.shift == 0);
    if (!is_chain_map(attaching)) throw std::invalid_argument("attach_cell: attaching not a chain map");
    const FreeChainComplex& S = attaching.src;
    if (S.rank(n - 1) != S.total_rank())
        throw std::invalid_argument("attach_cell: attaching source must be a sphere in degree n-1");
    FreeChainComplex C = skeleton;
    ensure_window(C, n);
    ensure_window(C, n - 1);
    if (C.rank(n) != 0)
        throw std::invalid_argument("attach_cell: skeleton already has cells in degree n");
    int b = S.rank(n - 1);
    C.ranks[n - C.lo] = b;
    C.labels[n - C.lo] = {};
    C.bnd[n - C.lo] = attaching.at(n - 1);
    if (n + 1 <= C.hi()) C.bnd[n + 1 - C.lo] = Mat::zero(b, C.rank(n + 1));
    return C;
}

FreeChainComplex cone(const GradedMap& f) {
    assert(f.shift == 0);
    if (!is_chain_map(f)) throw std::invalid_argument("cone: not a chain map");
    const FreeChainComplex &A = f.src, &B = f.dst;
    int lo = std::min(B.lo, A.lo + 1), hi = std::max(B.hi(), A.hi() + 1);
    FreeChainComplex C(f.ring);
    C.lo = lo;
    for (int d = lo; d <= hi; ++d) {
        C.ranks.push_back(B.rank(d) + A.rank(d - 1));
        std::vector<std::string> L;
        for (int i = 0; i < B.rank(d); ++i) L.push_back("b:" + B.label(d, i));
        for (int i = 0; i < A.rank(d - 1); ++i) L.push_back("a:" + A.label(d - 1, i));
        C.labels.push_back(std::move(L));
    }
    for (int d = lo; d <= hi; ++d) {
        // del(b, a) = (del b + f a, -del a)
        Mat m(C.rank(d - 1), C.rank(d));
        Mat dB = B.boundary(d), fA = f.at(d - 1), dA = A.boundary(d - 1);
        for (int i = 0; i < dB.rows; ++i)
            for (int j = 0; j < dB.cols; ++j) m(i, j) = dB(i, j);
        for (int i = 0; i < fA.rows; ++i)
            for (int j = 0; j < fA.cols; ++j) m(i, B.rank(d) + j) = fA(i, j);
        for (int i = 0; i < dA.rows; ++i)
            for (int j = 0; j < dA.cols; ++j)
                m(B.rank(d - 1) + i, B.rank(d) + j) = f.ring.neg(dA(i, j));
        C.bnd.push_back(std::move(m));
    }
    C.trim();
    return C;
}

FreeChainComplex suspension(const FreeChainComplex& C, int times) {
    FreeChainComplex S = C;
    for (int t = 0; t < times; ++t) {
        S.lo += 1;
        for (auto& m : S.bnd)
            for (auto& x : m.a) x = -x;
    }
    return S;
}

GradedMap suspend_map(const GradedMap& f, int times) {
    GradedMap g(suspension(f.src, times), suspension(f.dst, times), f.shift);
    for (auto& [d, m] : f.comp) g.set(d + times, m);
    return g;
}

ConeData cone_on_identity(const FreeChainComplex& M) {
    ConeData cd;
    cd.cx = cone(GradedMap::identity(M));
    // i : M -> C(M), m -> (m, 0)
    GradedMap i(M, cd.cx, 0);
    for (int d = M.lo; d <= M.hi(); ++d) {
        if (M.rank(d) == 0) continue;
        Mat m(cd.cx.rank(d), M.rank(d));
        for (int r = 0; r < M.rank(d); ++r) m(r, r) = 1;
        i.set(d, std::move(m));
    }
    // q : C(M) -> Sigma M, (b, a) -> a
    FreeChainComplex SM = suspension(M);
    GradedMap q(cd.cx, SM, 0);
    for (int d = cd.cx.lo; d <= cd.cx.hi(); ++d) {
        if (cd.cx.rank(d) == 0 || SM.rank(d) == 0) continue;
        Mat m(SM.rank(d), cd.cx.rank(d));
        for (int r = 0; r < SM.rank(d); ++r) m(r, M.rank(d) + r) = 1;
        q.set(d, std::move(m));
    }
    cd.incl = std::move(i);
    cd.quot = std::move(q);
    return cd;
}

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

HomologyView homology_view(const FreeChainComplex& C, int d) {
    HomologyView v;
    v.ring = C.ring;
    v.degree = d;
    Mat del = C.boundary(d);
    if (del.rows == 0) {
        v.cycles = Mat::identity(C.rank(d));
    } else {
        v.cycles = kernel(C.ring, del);
    }
    // boundaries expressed in cycle coordinates
    Mat delUp = C.boundary(d + 1);
    Mat relations(v.cycles.cols, delUp.cols);
    if (delUp.cols > 0 && v.cycles.cols > 0) {
        auto sol = solve_linear(C.ring, v.cycles, delUp);
        if (!sol)
            throw std::invalid_argument(
                "homology_view: boundaries are not cycles (del^2 != 0 in degree " +
                std::to_string(d + 1) + ")");
        relations = *sol;
    }
    v.pres = GroupPres::quotient(C.ring, v.cycles.cols, relations);
    return v;
}

std::vector<Rat> HomologyView::coords_of_cycle(const std::vector<Rat>& chain) const {
    Mat b((int)chain.size(), 1);
    for (size_t i = 0; i < chain.size(); ++i) b((int)i, 0) = chain[i];
    auto sol = solve_linear(ring, cycles, b);
    if (!sol) throw std::invalid_argument("not a cycle");
    return sol->col(0);
}

std::vector<Rat> HomologyView::class_of(const std::vector<Rat>& chain) const {
    return pres.canon(coords_of_cycle(chain));
}

bool HomologyView::is_boundary_class(const std::vector<Rat>& chain) const {
    return pres.is_zero_class(coords_of_cycle(chain));
}

GroupInfo homology(const FreeChainComplex& C, int d) {
    auto v = homology_view(C, d);
    GroupInfo g;
    g.free_rank = v.pres.free_rank;
    g.torsion = v.pres.torsion;
    g.text = v.pres.describe();
    return g;
}

// ---------------------------------------------------------------------------
// Hom complexes
// ---------------------------------------------------------------------------

HomComplex hom_complex(const FreeChainComplex& A, const FreeChainComplex& B) {
    HomComplex H;
    H.A = A;
    H.B = B;
    if (A.total_rank() == 0 || B.total_rank() == 0) {
        H.cx = FreeChainComplex::zero(A.ring);
        return H;
    }
    int slo = B.lo - A.hi(), shi = B.hi() - A.lo;
    std::vector<int> dims;
    for (int s = slo; s <= shi; ++s) {
        int n = 0;
        for (int t = A.lo; t <= A.hi(); ++t) n += A.rank(t) * B.rank(t + s);
        dims.push_back(n);
    }
    H.cx = FreeChainComplex::from_ranks(A.ring, slo, dims);
    // Differential via the action on elementary maps.
    for (int s = slo; s <= shi; ++s) {
        if (H.cx.rank(s) == 0 || H.cx.rank(s - 1) == 0) continue;
        Mat D(H.cx.rank(s - 1), H.cx.rank(s));
        int col = 0;
        for (int t = A.lo; t <= A.hi(); ++t) {
            for (int j = 0; j < A.rank(t); ++j)
                for (int i = 0; i < B.rank(t + s); ++i) {
                    GradedMap e(A, B, s);
                    Mat m(B.rank(t + s), A.rank(t));
                    m(i, j) = 1;
                    e.set(t, std::move(m));
                    auto flat = H.flatten(hom_diff(e));
                    D.set_col(col, flat);
                    ++col;
                }
        }
        H.cx.set_boundary(s, std::move(D));
    }
    return H;
}

std::vector<Rat> HomComplex::flatten(const GradedMap& f) const {
    std::vector<Rat> v((size_t)cx.rank(f.shift), Rat(0));
    int off = 0;
    for (int t = A.lo; t <= A.hi(); ++t) {
        int ra = A.rank(t), rb = B.rank(t + f.shift);
        if (ra == 0 || rb == 0) { continue; }
        Mat m = f.at(t);
        for (int j = 0; j < ra; ++j)
            for (int i = 0; i < rb; ++i) v[off + j * rb + i] = m(i, j);
        off += ra * rb;
    }
    return v;
}

GradedMap HomComplex::unflatten(int shift, const std::vector<Rat>& v) const {
    GradedMap f(A, B, shift);
    int off = 0;
    for (int t = A.lo; t <= A.hi(); ++t) {
        int ra = A.rank(t), rb = B.rank(t + shift);
        if (ra == 0 || rb == 0) continue;
        Mat m(rb, ra);
        for (int j = 0; j < ra; ++j)
            for (int i = 0; i < rb; ++i) m(i, j) = v[off + j * rb + i];
        off += ra * rb;
        if (!m.is_zero()) f.set(t, std::move(m));
    }
    return f;
}

std::optional<GradedMap> solve_nullhomotopy(const GradedMap& g) {
    HomComplex H = hom_complex(g.src, g.dst);
    int s = g.shift;
    auto gv = H.flatten(g);
    Mat b((int)gv.size(), 1);
    for (size_t i = 0; i < gv.size(); ++i) b((int)i, 0) = gv[i];
    Mat D = H.cx.boundary(s + 1);
    if (D.cols == 0) {
        for (auto& x : gv)
            if (x != 0) return std::nullopt;
        return GradedMap::zero(g.src, g.dst, s + 1);
    }
    auto sol = solve_linear(g.ring, D, b);
    if (!sol) return std::nullopt;
    return H.unflatten(s + 1, sol->col(0));
}

HomotopyClasses homotopy_classes(const FreeChainComplex& A, const FreeChainComplex& B, int k) {
    HomotopyClasses hc;
    hc.hom = hom_complex(A, B);
    hc.view = homology_view(hc.hom.cx, k);
    return hc;
}

GroupInfo HomotopyClasses::group() const {
    GroupInfo g;
    g.free_rank = view.pres.free_rank;
    g.torsion = view.pres.torsion;
    g.text = view.pres.describe();
    return g;
}

// ---------------------------------------------------------------------------
// Toda brackets
// ---------------------------------------------------------------------------

bool BracketCoset::member(const std::vector<Rat>& cycle_coords) const {
    // x in rep + <indet>  <=>  x - rep in subgroup generated by indet (mod boundaries)
    std::vector<Rat> diff(cycle_coords.size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = ring.canon(cycle_coords[i] - rep_coords[i]);
    return pres.in_subgroup(indet_coords, diff);
}

bool coset_equal(const BracketCoset& a, const BracketCoset& b) {
    if (a.pres.canon_len() != b.pres.canon_len()) return false;
    // mutual inclusion of indeterminacy subgroups
    for (int j = 0; j < a.indet_coords.cols; ++j)
        if (!b.pres.in_subgroup(b.indet_coords, a.indet_coords.col(j))) return false;
    for (int j = 0; j < b.indet_coords.cols; ++j)
        if (!a.pres.in_subgroup(a.indet_coords, b.indet_coords.col(j))) return false;
    return a.member(b.rep_coords) && b.member(a.rep_coords);
}

GradedMap triple_toda(const GradedMap& f, const GradedMap& g, const GradedMap& h,
                      const GradedMap& H_gh, const GradedMap& H_fg) {
    if (!gm_equal(hom_diff(H_gh), compose(g, h)))
        throw std::invalid_argument("triple_toda: H_gh is not a nullhomotopy of g h");
    if (!gm_equal(hom_diff(H_fg), compose(f, g)))
        throw std::invalid_argument("triple_toda: H_fg is not a nullhomotopy of f g");
    return gm_sub(compose(f, H_gh), compose(H_fg, h));
}

namespace {

// Indeterminacy generators of a triple bracket <f,g,h> in cycle coordinates of
// Hom(A,D) at degree 1: classes of f.eta and xi.h over cycle bases eta, xi.
Mat triple_indet(const HomotopyClasses& ambient, const GradedMap& f, const GradedMap& h) {
    const FreeChainComplex &A = h.src, &B = h.dst, &C2 = f.src, &D = f.dst;
    HomotopyClasses ac = homotopy_classes(A, C2, 1);
    HomotopyClasses bd = homotopy_classes(B, D, 1);
    std::vector<std::vector<Rat>> cols;
    for (int j = 0; j < ac.view.cycles.cols; ++j) {
        GradedMap eta = ac.hom.unflatten(1, ac.view.cycles.col(j));
        cols.push_back(ambient.coords_of(compose(f, eta)));
    }
    for (int j = 0; j < bd.view.cycles.cols; ++j) {
        GradedMap xi = bd.hom.unflatten(1, bd.view.cycles.col(j));
        cols.push_back(ambient.coords_of(compose(xi, h)));
    }
    Mat G(ambient.view.cycles.cols, (int)cols.size());
    for (size_t j = 0; j < cols.size(); ++j) G.set_col((int)j, cols[j]);
    return G;
}

BracketCoset make_coset(const Ring& R, int arity, const HomotopyClasses& ambient,
                        const std::vector<Rat>& rep_coords, Mat indet_coords) {
    BracketCoset bc;
    bc.ring = R;
    bc.arity = arity;
    bc.ambient = ambient.view.describe();
    bc.pres = ambient.view.pres;
    bc.rep_coords = rep_coords;
    bc.indet_coords = std::move(indet_coords);
    bc.rep = bc.pres.canon(bc.rep_coords);
    for (int j = 0; j < bc.indet_coords.cols; ++j)
        bc.indeterminacy.push_back(bc.pres.canon(bc.indet_coords.col(j)));
    std::vector<Rat> zero(bc.rep_coords.size(), Rat(0));
    bc.contains_zero = bc.member(zero);
    return bc;
}

}  // namespace

TodaResult toda_coset(const GradedMap& f, const GradedMap& g, const GradedMap& h) {
    TodaResult res;
    GradedMap gh = compose(g, h), fg = compose(f, g);
    auto H_gh = solve_nullhomotopy(gh);
    if (!H_gh) {
        HomotopyClasses hc = homotopy_classes(h.src, g.dst, 0);
        res.error = TodaError{"g h not nullhomotopic", hc.class_of(gh)};
        return res;
    }
    auto H_fg = solve_nullhomotopy(fg);
    if (!H_fg) {
        HomotopyClasses hc = homotopy_classes(g.src, f.dst, 0);
        res.error = TodaError{"f g not nullhomotopic", hc.class_of(fg)};
        return res;
    }
    GradedMap theta = triple_toda(f, g, h, *H_gh, *H_fg);
    HomotopyClasses ambient = homotopy_classes(h.src, f.dst, 1);
    res.coset = make_coset(f.ring, 3, ambient, ambient.coords_of(theta),
                           triple_indet(ambient, f, h));
    return res;
}

// ---------------------------------------------------------------------------
// Long Toda brackets: staged descent with per-stage obstruction cosets
// ---------------------------------------------------------------------------

namespace {

// Matrix of the postcomposition operator  (f .) : Hom_s(X, A) -> Hom_s(X, B).
Mat postcompose_matrix(const HomComplex& from, const HomComplex& to, const GradedMap& f,
                       int s) {
    Mat M(to.dim(s), from.dim(s));
    for (int j = 0; j < from.dim(s); ++j) {
        std::vector<Rat> e((size_t)from.dim(s), Rat(0));
        e[j] = 1;
        GradedMap el = from.unflatten(s, e);
        M.set_col(j, to.flatten(compose(f, el)));
    }
    return M;
}

struct FlatSystem {
    // Block linear system over the ring: unknown blocks with given dims,
    // equations  sum_j  A_{ij} x_j = b_i.
    Ring ring;
    std::vector<int> dims;
    std::vector<std::vector<std::pair<int, Mat>>> rows;  // per equation block
    std::vector<std::vector<Rat>> rhs;

    int total_dim() const {
        int t = 0;
        for (int d : dims) t += d;
        return t;
    }
    int offset(int j) const {
        int t = 0;
        for (int i = 0; i < j; ++i) t += dims[i];
        return t;
    }

    std::pair<Mat, Mat> assemble() const {
        int eq = 0;
        for (auto& r : rhs) eq += (int)r.size();
        Mat A(eq, total_dim()), b(eq, 1);
        int row0 = 0;
        for (size_t i = 0; i < rows.size(); ++i) {
            for (auto& [j, M] : rows[i]) {
                int c0 = offset(j);
                for (int r = 0; r < M.rows; ++r)
                    for (int c = 0; c < M.cols; ++c)
                        if (M(r, c) != 0) A(row0 + r, c0 + c) = M(r, c);
            }
            for (size_t r = 0; r < rhs[i].size(); ++r) b(row0 + (int)r, 0) = rhs[i][r];
            row0 += (int)rhs[i].size();
        }
        return {A, b};
    }
};

}  // namespace

LongTodaResult long_toda(const std::vector<GradedMap>& maps) {
    LongTodaResult res;
    int n = (int)maps.size();
    if (n < 3) {
        res.halt_reason = "long_toda needs at least 3 maps";
        return res;
    }
    const Ring R = maps[0].ring;
    // maps[i-1] is f_i : X_i -> X_{i-1}; check middle composites vanish strictly.
    for (int i = 1; i + 1 <= n - 1; ++i) {
        if (!compose(maps[i - 1], maps[i]).is_zero()) {
            res.halt_reason = "adjacent composite f_" + std::to_string(i) + " f_" +
                              std::to_string(i + 1) + " is not strictly zero";
            return res;
        }
    }
    auto X = [&](int i) -> const FreeChainComplex& {
        return (i == n) ? maps[n - 1].src : maps[i].dst;  // X_i
    };
    const FreeChainComplex& top = X(n);

    // Unknown H_k : X_n -> X_{k-1} of shift n-k, for k = n-1 .. 2.
    std::vector<HomComplex> homXk(n + 1);  // Hom(X_n, X_k), indexed by k = 0..n-1
    for (int k = 0; k <= n - 1; ++k) homXk[k] = hom_complex(top, X(k));

    auto blockIndex = [&](int k) { return (n - 1) - k; };  // H_{n-1} first
    FlatSystem sys;
    sys.ring = R;
    for (int k = n - 1; k >= 2; --k) sys.dims.push_back(homXk[k - 1].dim(n - k));

    // Equation for stage k:  D(H_k) + f_k H_{k+1} = (k == n-1 ? -f_{n-1} f_n : 0)
    // written as a linear block row; for k = n-1 the H_{k+1} slot is absent.
    auto stage_equation = [&](int k) {
        std::vector<std::pair<int, Mat>> row;
        const HomComplex& tgt = homXk[k - 1];
        // D block on H_k, from hom degree n-k down to n-k-1
        Mat D = tgt.cx.boundary(n - k);
        row.push_back({blockIndex(k), D});
        std::vector<Rat> rhs((size_t)tgt.dim(n - k - 1), Rat(0));
        if (k == n - 1) {
            GradedMap c = compose(maps[n - 2], maps[n - 1]);  // f_{n-1} f_n
            auto flat = tgt.flatten(c);
            for (size_t i = 0; i < flat.size(); ++i) rhs[i] = R.neg(flat[i]);
        } else {
            Mat P = postcompose_matrix(homXk[k], homXk[k - 1], maps[k - 1], n - k - 1);
            row.push_back({blockIndex(k + 1), P});
        }
        sys.rows.push_back(std::move(row));
        sys.rhs.push_back(std::move(rhs));
    };

    // Witness solution so far (flat vector over the blocks added so far).
    std::vector<Rat> witness;
    auto solve_current = [&]() -> std::optional<std::pair<Mat, Mat>> {
        auto [A, b] = sys.assemble();
        auto sol = solve_linear(R, A, b);
        if (!sol) return std::nullopt;
        Mat K = kernel(R, A);
        return std::make_pair(*sol, K);
    };

    auto extract_block = [&](const Mat& flat, int k, int col) {
        int off = sys.offset(blockIndex(k));
        std::vector<Rat> v((size_t)sys.dims[blockIndex(k)]);
        for (size_t i = 0; i < v.size(); ++i) v[i] = flat(off + (int)i, col);
        return v;
    };

    Mat particular, homKernel;
    for (int k = n - 1; k >= 2; --k) {
        stage_equation(k);
        // Obstruction at this stage: class of a_k = f_k H_{k+1} (or f_{n-1} f_n),
        // a cycle in Hom_{n-k-1}(X_n, X_{k-1}); coset over all earlier choices.
        HomotopyClasses amb = homotopy_classes(top, X(k - 1), n - k - 1);
        std::vector<Rat> repc;
        {
            GradedMap a(top, X(k - 1), n - k - 1);
            if (k == n - 1) {
                a = compose(maps[n - 2], maps[n - 1]);
            } else {
                GradedMap Hk1 = homXk[k].unflatten(n - k, extract_block(particular, k + 1, 0));
                a = compose(maps[k - 1], Hk1);
            }
            repc = amb.coords_of(a);
        }
        Mat indet(amb.view.cycles.cols, 0);
        if (k < n - 1) {
            std::vector<std::vector<Rat>> cols;
            for (int j = 0; j < homKernel.cols; ++j) {
                GradedMap dH = homXk[k].unflatten(n - k, extract_block(homKernel, k + 1, j));
                GradedMap da = compose(maps[k - 1], dH);
                cols.push_back(amb.coords_of(da));
            }
            indet = Mat(amb.view.cycles.cols, (int)cols.size());
            for (size_t j = 0; j < cols.size(); ++j) indet.set_col((int)j, cols[j]);
        }
        BracketCoset stage = make_coset(R, n - k + 2, amb, repc, indet);
        res.stages.push_back({n - k + 2, stage});
        auto solved = solve_current();
        if (!solved) {
            res.halt_reason = "stage obstruction (bracket of length " +
                              std::to_string(n - k + 2) + ") does not vanish";
            return res;
        }
        particular = solved->first;
        homKernel = solved->second;
    }

    // Final value theta = -f_1 H_2, a class in [Sigma^{n-2} X_n, X_0].
    HomotopyClasses amb = homotopy_classes(top, X(0), n - 2);
    GradedMap H2 = homXk[1].unflatten(n - 2, extract_block(particular, 2, 0));
    GradedMap theta = gm_neg(compose(maps[0], H2));
    std::vector<Rat> repc = amb.coords_of(theta);

    std::vector<std::vector<Rat>> cols;
    // right-column variation: -f_1 dH_2 over the homogeneous solutions
    for (int j = 0; j < homKernel.cols; ++j) {
        GradedMap dH = homXk[1].unflatten(n - 2, extract_block(homKernel, 2, j));
        cols.push_back(amb.coords_of(gm_neg(compose(maps[0], dH))));
    }
    // top-row variation: unknowns G_t : X_t -> X_0 of shift t-1 (t = 2..n-1) with
    // D(G_2) = 0, D(G_t) = (-1)^t G_{t-1} f_t; contributes sum (-1)^t G_t H_{t+1}.
    {
        std::vector<HomComplex> homT(n);
        for (int t = 2; t <= n - 1; ++t) homT[t] = hom_complex(X(t), X(0));
        FlatSystem left;
        left.ring = R;
        for (int t = 2; t <= n - 1; ++t) left.dims.push_back(homT[t].dim(t - 1));
        auto lblock = [&](int t) { return t - 2; };
        for (int t = 2; t <= n - 1; ++t) {
            std::vector<std::pair<int, Mat>> row;
            row.push_back({lblock(t), homT[t].cx.boundary(t - 1)});
            if (t > 2) {
                // precomposition with f_t : X_t -> X_{t-1} maps Hom(X_{t-1},X_0) to Hom(X_t,X_0)
                Mat P(homT[t].dim(t - 2), homT[t - 1].dim(t - 2));
                for (int j = 0; j < homT[t - 1].dim(t - 2); ++j) {
                    std::vector<Rat> e((size_t)homT[t - 1].dim(t - 2), Rat(0));
                    e[j] = 1;
                    GradedMap el = homT[t - 1].unflatten(t - 2, e);
                    P.set_col(j, homT[t].flatten(compose(el, maps[t - 1])));
                }
                Rat sign = (t % 2 == 0) ? Rat(-1) : Rat(1);  // move G_{t-1} f_t to the left side
                row.push_back({lblock(t - 1), scale(R, sign, P)});
            }
            left.rows.push_back(std::move(row));
            left.rhs.push_back(std::vector<Rat>((size_t)homT[t].dim(t - 2), Rat(0)));
        }
        auto [A, b] = left.assemble();
        (void)b;
        Mat K = A.cols > 0 ? kernel(R, A) : Mat::zero(0, 0);
        for (int j = 0; j < K.cols; ++j) {
            GradedMap contrib(top, X(0), n - 2);
            for (int t = 2; t <= n - 1; ++t) {
                int off = left.offset(lblock(t));
                std::vector<Rat> v((size_t)left.dims[lblock(t)]);
                for (size_t i = 0; i < v.size(); ++i) v[i] = K(off + (int)i, j);
                GradedMap Gt = homT[t].unflatten(t - 1, v);
                GradedMap Ht1 = (t == n - 1) ? maps[n - 1]
                                             : homXk[t + 1 - 1].unflatten(
                                                   n - t - 1, extract_block(particular, t + 1, 0));
                // H_{t+1} : X_n -> X_t of shift n-t-1 (for t = n-1 it is f_n itself)
                GradedMap term = compose(Gt, Ht1);
                if (t % 2 == 1) term = gm_neg(term);
                contrib = gm_add(contrib, term);
            }
            cols.push_back(amb.coords_of(contrib));
        }
    }
    Mat indet(amb.view.cycles.cols, (int)cols.size());
    for (size_t j = 0; j < cols.size(); ++j) indet.set_col((int)j, cols[j]);
    res.final = make_coset(R, n, amb, repc, indet);
    return res;
}

// ---------------------------------------------------------------------------
// Standard strongly cofibrant replacement
// ---------------------------------------------------------------------------

StagedReplacement standard_replacement(const FreeChainComplex& B, int n) {
    if (n < 1) throw std::invalid_argument("standard_replacement: n >= 1 required");
    StagedReplacement sr;
    sr.n = n;
    sr.B = B;
    sr.susp.resize(n);
    sr.stage.resize(n);
    for (int j = 0; j < n; ++j) sr.susp[j] = suspension(B, j);
    sr.iota.resize(std::max(0, n - 1));
    sr.quot.resize(std::max(0, n - 1));
    sr.stage[n - 1] = B;
    for (int k = n - 2; k >= 0; --k) {
        ConeData cd = cone_on_identity(sr.susp[n - k - 2]);
        sr.stage[k] = cd.cx;
        sr.iota[n - k - 2] = cd.incl;
        sr.quot[n - k - 2] = cd.quot;
    }
    sr.ext.resize(n);
    for (int k = n - 1; k >= 1; --k) {
        // ext[k] = iota_{n-k-1} . q_{n-k-2} : stage[k] -> stage[k-1]
        GradedMap q = (k == n - 1) ? GradedMap::identity(B) : sr.quot[n - k - 2];
        sr.ext[k] = compose(sr.iota[n - k - 1], q);
    }
    return sr;
}

FreeChainComplex StagedReplacement::total() const {
    Ring R = B.ring;
    int lo = 0, hi = 0;
    bool first = true;
    for (int k = 0; k < n; ++k) {
        const auto& S = stage[k];
        if (S.total_rank() == 0) continue;
        int l = S.lo + k, h = S.hi() + k;
        if (first) { lo = l; hi = h; first = false; }
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    if (first) return FreeChainComplex::zero(R);
    std::vector<int> dims;
    for (int d = lo; d <= hi; ++d) {
        int r = 0;
        for (int k = 0; k < n; ++k) r += stage[k].rank(d - k);
        dims.push_back(r);
    }
    FreeChainComplex T = FreeChainComplex::from_ranks(R, lo, dims);
    auto offset = [&](int d, int k) {
        int off = 0;
        for (int j = 0; j < k; ++j) off += stage[j].rank(d - j);
        return off;
    };
    for (int d = lo; d <= hi; ++d) {
        Mat m(T.rank(d - 1), T.rank(d));
        for (int k = 0; k < n; ++k) {
            int t = d - k;  // internal degree
            int r = stage[k].rank(t);
            if (r == 0) continue;
            int c0 = offset(d, k);
            Mat di = stage[k].boundary(t);  // internal part, lands at (k, t-1)
            int r0 = offset(d - 1, k);
            for (int i = 0; i < di.rows; ++i)
                for (int j = 0; j < di.cols; ++j)
                    if (di(i, j) != 0) m(r0 + i, c0 + j) = di(i, j);
            if (k >= 1) {  // external part with sign (-1)^t, lands at (k-1, t)
                Mat de = ext[k].at(t);
                int r1 = offset(d - 1, k - 1);
                Rat sign = (((t % 2) + 2) % 2 == 0) ? Rat(1) : Rat(-1);
                for (int i = 0; i < de.rows; ++i)
                    for (int j = 0; j < de.cols; ++j)
                        if (de(i, j) != 0) m(r1 + i, c0 + j) = R.canon(sign * de(i, j));
            }
        }
        T.set_boundary(d, std::move(m));
    }
    return T;
}

}  // namespace toda
