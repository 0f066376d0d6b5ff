#include "toda/lie.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace toda {

// ---------------------------------------------------------------------------
// Trees and expressions
// ---------------------------------------------------------------------------

TreePtr LieTree::leaf(int g) {
    auto t = std::make_shared<LieTree>();
    t->gen = g;
    return t;
}

TreePtr LieTree::node(TreePtr a, TreePtr b) {
    auto t = std::make_shared<LieTree>();
    t->l = std::move(a);
    t->r = std::move(b);
    return t;
}

int tree_cmp(const TreePtr& a, const TreePtr& b) {
    if (a->is_leaf() != b->is_leaf()) return a->is_leaf() ? -1 : 1;
    if (a->is_leaf()) return a->gen < b->gen ? -1 : (a->gen > b->gen ? 1 : 0);
    if (int c = tree_cmp(a->l, b->l)) return c;
    return tree_cmp(a->r, b->r);
}

void LieExpr::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& x, const auto& y) { return tree_cmp(x.second, y.second) < 0; });
    std::vector<std::pair<Rat, TreePtr>> out;
    for (auto& [c, t] : terms) {
        if (!out.empty() && tree_cmp(out.back().second, t) == 0)
            out.back().first += c;
        else
            out.push_back({c, t});
    }
    terms.clear();
    for (auto& [c, t] : out)
        if (c != 0) terms.push_back({c, t});
}

LieExpr LieExpr::gen(int g) {
    LieExpr e;
    e.terms.push_back({Rat(1), LieTree::leaf(g)});
    return e;
}

LieExpr LieExpr::single(Rat c, TreePtr t) {
    LieExpr e;
    if (c != 0) e.terms.push_back({std::move(c), std::move(t)});
    return e;
}

LieExpr operator+(const LieExpr& a, const LieExpr& b) {
    LieExpr e;
    e.terms = a.terms;
    e.terms.insert(e.terms.end(), b.terms.begin(), b.terms.end());
    e.normalize();
    return e;
}

LieExpr operator-(const LieExpr& a, const LieExpr& b) { return a + (Rat(-1) * b); }

LieExpr operator*(const Rat& c, const LieExpr& a) {
    LieExpr e;
    if (c == 0) return e;
    for (auto& [x, t] : a.terms) e.terms.push_back({c * x, t});
    return e;
}

LieExpr bracket(const LieExpr& a, const LieExpr& b) {
    LieExpr e;
    for (auto& [ca, ta] : a.terms)
        for (auto& [cb, tb] : b.terms) e.terms.push_back({ca * cb, LieTree::node(ta, tb)});
    e.normalize();
    return e;
}

// ---------------------------------------------------------------------------
// FreeDGL
// ---------------------------------------------------------------------------

int FreeDGL::add_generator(const std::string& name, int degree) {
    if (index.count(name)) throw std::invalid_argument("duplicate generator " + name);
    if (degree < 1) throw std::invalid_argument("generator degree must be >= 1 (reduced DGL)");
    int g = (int)gens.size();
    gens.push_back({name, degree});
    diff.push_back(LieExpr::zero());
    index[name] = g;
    return g;
}

int FreeDGL::gen_index(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw std::invalid_argument("undeclared generator " + name);
    return it->second;
}

int FreeDGL::tree_degree(const TreePtr& t) const {
    if (t->is_leaf()) {
        if (t->gen < 0 || t->gen >= (int)gens.size())
            throw std::invalid_argument("undeclared generator index");
        return gens[t->gen].degree;
    }
    return tree_degree(t->l) + tree_degree(t->r);
}

std::optional<int> FreeDGL::degree_of(const LieExpr& e) const {
    std::optional<int> d;
    for (auto& [c, t] : e.terms) {
        int td = tree_degree(t);
        if (d && *d != td) throw std::invalid_argument("inhomogeneous expression");
        d = td;
    }
    return d;
}

LieExpr FreeDGL::truncate_expr(const LieExpr& e) const {
    LieExpr out;
    for (auto& [c, t] : e.terms)
        if (tree_degree(t) <= truncation) out.terms.push_back({c, t});
    out.normalize();
    return out;
}

namespace {

// word concatenation u.v
Word cat(const Word& u, const Word& v) {
    Word w = u;
    w.insert(w.end(), v.begin(), v.end());
    return w;
}

void tf_add(TensorForm& f, const Word& w, const Rat& c) {
    auto it = f.find(w);
    if (it == f.end()) {
        if (c != 0) f[w] = c;
    } else {
        it->second += c;
        if (it->second == 0) f.erase(it);
    }
}

}  // namespace

TensorForm FreeDGL::expand(const LieExpr& e) const {
    // [u,v] -> u@v - (-1)^{|u||v|} v@u, recursively
    std::function<TensorForm(const TreePtr&)> go = [&](const TreePtr& t) -> TensorForm {
        TensorForm f;
        if (t->is_leaf()) {
            if (t->gen < 0 || t->gen >= (int)gens.size())
                throw std::invalid_argument("undeclared generator index");
            f[Word{t->gen}] = 1;
            return f;
        }
        TensorForm fu = go(t->l), fv = go(t->r);
        int du = tree_degree(t->l), dv = tree_degree(t->r);
        Rat sign = (du % 2 != 0 && dv % 2 != 0) ? Rat(1) : Rat(-1);  // -(-1)^{|u||v|}
        for (auto& [wu, cu] : fu)
            for (auto& [wv, cv] : fv) {
                tf_add(f, cat(wu, wv), cu * cv);
                tf_add(f, cat(wv, wu), sign * cu * cv);
            }
        return f;
    };
    TensorForm out;
    for (auto& [c, t] : e.terms) {
        TensorForm f = go(t);
        for (auto& [w, x] : f) tf_add(out, w, c * x);
    }
    return out;
}

LieExpr FreeDGL::differential(const LieExpr& e) const {
    std::function<LieExpr(const TreePtr&)> go = [&](const TreePtr& t) -> LieExpr {
        if (t->is_leaf()) return diff[t->gen];
        LieExpr du = go(t->l), dv = go(t->r);
        LieExpr left = bracket(du, LieExpr::single(Rat(1), t->r));
        LieExpr right = bracket(LieExpr::single(Rat(1), t->l), dv);
        Rat sign = (tree_degree(t->l) % 2 == 0) ? Rat(1) : Rat(-1);
        return left + sign * right;
    };
    LieExpr out;
    for (auto& [c, t] : e.terms) out = out + c * go(t);
    return truncate_expr(out);
}

const FreeDGL::DegreeBasis& FreeDGL::graded_basis(int d) const {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = basis_cache.find(d);
    if (it != basis_cache.end()) return it->second;

    std::function<const DegreeBasis&(int)> get = [&](int k) -> const DegreeBasis& {
        auto i = basis_cache.find(k);
        if (i != basis_cache.end()) return i->second;
        DegreeBasis B;
        if (k >= 1 && k <= truncation) {
            std::vector<LieExpr> cand;
            for (size_t g = 0; g < gens.size(); ++g)
                if (gens[g].degree == k) cand.push_back(LieExpr::gen((int)g));
            for (int i2 = 1; i2 <= k / 2; ++i2) {
                const DegreeBasis& lo2 = get(i2);
                const DegreeBasis& hi2 = get(k - i2);
                for (size_t a = 0; a < lo2.elems.size(); ++a) {
                    size_t b0 = (i2 == k - i2) ? a : 0;
                    for (size_t b = b0; b < hi2.elems.size(); ++b)
                        cand.push_back(bracket(lo2.elems[a], hi2.elems[b]));
                }
            }
            // expand candidates, collect the word support, row reduce for a basis
            std::vector<TensorForm> forms;
            std::map<Word, int> widx;
            for (auto& e : cand) {
                forms.push_back(expand(e));
                for (auto& [w, c] : forms.back())
                    if (!widx.count(w)) {
                        int id = (int)widx.size();
                        widx[w] = id;
                    }
            }
            Mat M((int)widx.size(), (int)cand.size());
            for (size_t j = 0; j < forms.size(); ++j)
                for (auto& [w, c] : forms[j]) M(widx[w], (int)j) = c;
            Mat E = M;
            Ring Q = Ring::rationals();
            auto piv = rref(Q, E);
            for (int c : piv) {
                B.elems.push_back(cand[c]);
            }
            B.words.resize(widx.size());
            for (auto& [w, i3] : widx) B.words[i3] = w;
            B.word_index = widx;
            B.coords = Mat((int)widx.size(), (int)B.elems.size());
            for (size_t j = 0, c = 0; c < piv.size(); ++c) {
                (void)j;
                for (auto& [w, x] : forms[piv[c]]) B.coords(widx[w], (int)c) = x;
            }
        }
        auto [pos, _] = basis_cache.emplace(k, std::move(B));
        return pos->second;
    };
    return get(d);
}

std::vector<Rat> FreeDGL::coords(const LieExpr& e, int d) const {
    const DegreeBasis& B = graded_basis(d);
    TensorForm f = expand(truncate_expr(e));
    Mat b((int)B.words.size(), 1);
    for (auto& [w, c] : f) {
        auto it = B.word_index.find(w);
        if (it == B.word_index.end())
            throw std::invalid_argument("expression outside the degree-" + std::to_string(d) +
                                        " piece");
        b(it->second, 0) = c;
    }
    Ring Q = Ring::rationals();
    auto sol = field_solve(Q, B.coords, b);
    if (!sol) throw std::logic_error("graded_basis does not span its degree piece");
    return sol->col(0);
}

LieExpr FreeDGL::from_coords(int d, const std::vector<Rat>& v) const {
    const DegreeBasis& B = graded_basis(d);
    LieExpr e;
    for (size_t i = 0; i < v.size(); ++i) e = e + v[i] * B.elems[i];
    return e;
}

Mat FreeDGL::diff_matrix(int d) const {
    const DegreeBasis& B = graded_basis(d);
    int below = dim(d - 1);
    Mat M(below, (int)B.elems.size());
    for (size_t j = 0; j < B.elems.size(); ++j) {
        LieExpr de = differential(B.elems[j]);
        if (de.is_zero()) continue;
        auto v = coords(de, d - 1);
        for (int i = 0; i < below; ++i) M(i, (int)j) = v[i];
    }
    return M;
}

DGLReport check_dgl(const FreeDGL& D) {
    DGLReport rep;
    for (size_t g = 0; g < D.gens.size(); ++g) {
        const LieExpr& dg = D.diff[g];
        if (dg.is_zero()) continue;
        for (auto& [c, t] : dg.terms) {
            int td = D.tree_degree(t);
            if (td != D.gens[g].degree - 1) {
                rep.ok = false;
                rep.failures.push_back("d(" + D.gens[g].name + ") has a term of degree " +
                                       std::to_string(td) + ", expected " +
                                       std::to_string(D.gens[g].degree - 1));
            }
        }
        LieExpr dd = D.differential(dg);
        if (!D.expand(dd).empty()) {
            rep.ok = false;
            rep.failures.push_back("d(d(" + D.gens[g].name + ")) != 0");
        }
    }
    return rep;
}

std::map<int, int> homology_dims(const FreeDGL& D, int lo, int hi) {
    std::map<int, int> dims;
    Ring Q = Ring::rationals();
    std::map<int, int> rk;
    for (int d = lo; d <= hi + 1; ++d) rk[d] = (d > D.truncation) ? 0 : rank(Q, D.diff_matrix(d));
    for (int d = lo; d <= hi; ++d) {
        int z = D.dim(d) - rk[d];
        dims[d] = z - rk[d + 1];
    }
    return dims;
}

LieHomologyView lie_homology_view(const FreeDGL& D, int d) {
    LieHomologyView v;
    v.degree = d;
    Ring Q = Ring::rationals();
    v.cycles = field_nullspace(Q, D.diff_matrix(d));
    Mat up = (d + 1 > D.truncation) ? Mat::zero(D.dim(d), 0) : D.diff_matrix(d + 1);
    Mat rel(v.cycles.cols, up.cols);
    if (up.cols > 0 && v.cycles.cols > 0) {
        auto sol = field_solve(Q, v.cycles, up);
        assert(sol.has_value());
        rel = *sol;
    }
    v.pres = GroupPres::quotient(Q, v.cycles.cols, rel);
    return v;
}

std::vector<Rat> LieHomologyView::coords_of_cycle(const FreeDGL& D, const LieExpr& z) const {
    auto c = D.coords(z, degree);
    Mat b((int)c.size(), 1);
    for (size_t i = 0; i < c.size(); ++i) b((int)i, 0) = c[i];
    Ring Q = Ring::rationals();
    auto sol = field_solve(Q, cycles, b);
    if (!sol) throw std::invalid_argument("not a cycle");
    return sol->col(0);
}

std::vector<Rat> LieHomologyView::class_of(const FreeDGL& D, const LieExpr& z) const {
    return pres.canon(coords_of_cycle(D, z));
}

std::optional<LieExpr> is_boundary(const FreeDGL& D, const LieExpr& z) {
    LieExpr zt = D.truncate_expr(z);
    if (!D.expand(D.differential(zt)).empty())
        throw std::invalid_argument("is_boundary: input is not a cycle");
    auto deg = D.degree_of(zt);
    if (!deg) return LieExpr::zero();  // z == 0
    int d = *deg;
    if (d + 1 > D.truncation) return std::nullopt;
    Ring Q = Ring::rationals();
    Mat M = D.diff_matrix(d + 1);
    auto c = D.coords(zt, d);
    Mat b((int)c.size(), 1);
    for (size_t i = 0; i < c.size(); ++i) b((int)i, 0) = c[i];
    auto sol = field_solve(Q, M, b);
    if (!sol) return std::nullopt;
    return D.from_coords(d + 1, sol->col(0));
}

LieMasseyResult lie_massey(const FreeDGL& D, const LieExpr& u, const LieExpr& v,
                           const LieExpr& w, const LieExpr& alpha, const LieExpr& beta,
                           const LieExpr& gamma) {
    auto expect = [&](const LieExpr& got, const LieExpr& want, const std::string& what) {
        if (!D.expand(got - want).empty())
            throw std::invalid_argument("lie_massey: bounding condition fails for " + what);
    };
    for (auto* z : {&u, &v, &w})
        if (!D.expand(D.differential(*z)).empty())
            throw std::invalid_argument("lie_massey: inputs must be cycles");
    expect(D.differential(alpha), D.truncate_expr(bracket(v, w)), "alpha (needs d(alpha)=[v,w])");
    expect(D.differential(beta), D.truncate_expr(bracket(w, u)), "beta (needs d(beta)=[w,u])");
    expect(D.differential(gamma), D.truncate_expr(bracket(u, v)), "gamma (needs d(gamma)=[u,v])");

    LieMasseyResult res;
    res.representative =
        D.truncate_expr(bracket(u, alpha) + bracket(v, beta) + bracket(w, gamma));
    if (res.representative.is_zero()) {
        res.vanishes = true;
        return res;
    }
    if (!D.expand(D.differential(res.representative)).empty())
        throw std::invalid_argument(
            "lie_massey: representative is not a cycle (degree parity outside the even-degree "
            "convention)");
    int d = *D.degree_of(res.representative);
    LieHomologyView H = lie_homology_view(D, d);
    res.rep_class = H.class_of(D, res.representative);

    // Indeterminacy: [u, H_{|alpha|}] + [v, H_{|beta|}] + [w, H_{|gamma|}].
    std::vector<std::vector<Rat>> indet_cycle_coords;
    auto add_part = [&](const LieExpr& x, const LieExpr& bound) {
        auto bd = D.degree_of(bound);
        if (!bd) return;
        LieHomologyView Hb = lie_homology_view(D, *bd);
        for (int j = 0; j < Hb.cycles.cols; ++j) {
            LieExpr zeta = D.from_coords(*bd, Hb.cycles.col(j));
            LieExpr term = D.truncate_expr(bracket(x, zeta));
            if (term.is_zero()) continue;
            indet_cycle_coords.push_back(H.coords_of_cycle(D, term));
        }
    };
    add_part(u, alpha);
    add_part(v, beta);
    add_part(w, gamma);
    Mat G(H.cycles.cols, (int)indet_cycle_coords.size());
    for (size_t j = 0; j < indet_cycle_coords.size(); ++j)
        G.set_col((int)j, indet_cycle_coords[j]);
    for (auto& col : indet_cycle_coords) res.indeterminacy.push_back(H.pres.canon(col));
    res.vanishes = H.pres.in_subgroup(G, H.coords_of_cycle(D, res.representative));
    return res;
}

bool generation_check(const FreeDGL& D, const std::vector<LieExpr>& classes) {
    // Group the classes and the generators by degree; compare the matrices of
    // indecomposable (generator-coordinate) components.
    std::map<int, std::vector<int>> gens_by_deg;
    for (size_t g = 0; g < D.gens.size(); ++g) gens_by_deg[D.gens[g].degree].push_back((int)g);
    std::map<int, std::vector<const LieExpr*>> classes_by_deg;
    for (auto& e : classes) {
        auto d = D.degree_of(e);
        if (!d) return false;  // zero class can never be part of a generating set
        classes_by_deg[*d].push_back(&e);
    }
    if (classes.size() != D.gens.size()) return false;
    for (auto& [d, gl] : gens_by_deg) {
        auto it = classes_by_deg.find(d);
        if (it == classes_by_deg.end() || it->second.size() != gl.size()) return false;
        // generator coordinate = coefficient of the single-leaf tree
        Mat M((int)gl.size(), (int)gl.size());
        for (size_t j = 0; j < it->second.size(); ++j)
            for (auto& [c, t] : it->second[j]->terms)
                if (t->is_leaf())
                    for (size_t i = 0; i < gl.size(); ++i)
                        if (gl[i] == t->gen) M((int)i, (int)j) = c;
        Ring Q = Ring::rationals();
        if (rank(Q, M) != M.rows) return false;
    }
    for (auto& [d, cl] : classes_by_deg)
        if (!gens_by_deg.count(d)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

LieExpr DGLMorphism::apply(const LieExpr& e) const {
    std::function<LieExpr(const TreePtr&)> go = [&](const TreePtr& t) -> LieExpr {
        if (t->is_leaf()) return images[t->gen];
        return bracket(go(t->l), go(t->r));
    };
    LieExpr out;
    for (auto& [c, t] : e.terms) out = out + c * go(t);
    return dst->truncate_expr(out);
}

MorphismReport check_morphism(const DGLMorphism& f) {
    MorphismReport rep;
    for (size_t g = 0; g < f.src->gens.size(); ++g) {
        const auto& gen = f.src->gens[g];
        const LieExpr& im = f.images[g];
        if (!im.is_zero()) {
            for (auto& [c, t] : im.terms)
                if (f.dst->tree_degree(t) != gen.degree) {
                    rep.ok = false;
                    rep.failures.push_back("image of " + gen.name + " is not degree-preserving");
                    break;
                }
        }
        LieExpr lhs = f.apply(f.src->diff[g]);
        LieExpr rhs = f.dst->differential(im);
        if (!f.dst->expand(lhs - rhs).empty()) {
            rep.ok = false;
            rep.failures.push_back("differential does not commute on " + gen.name + ": f(d " +
                                   gen.name + ") = " + to_string(*f.dst, lhs) + " but d(f " +
                                   gen.name + ") = " + to_string(*f.dst, rhs));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

void print_tree(std::ostream& os, const FreeDGL& D, const TreePtr& t) {
    if (t->is_leaf()) {
        os << D.gens[t->gen].name;
        return;
    }
    os << "[";
    print_tree(os, D, t->l);
    os << ",";
    print_tree(os, D, t->r);
    os << "]";
}

}  // namespace

std::string to_string(const FreeDGL& D, const LieExpr& e) {
    if (e.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [c, t] : e.terms) {
        Rat a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        if (a != 1) os << a.get_str() << "*";
        print_tree(os, D, t);
        first = false;
    }
    return os.str();
}

}  // namespace toda
