#include "toda/dsl.hpp"

#include <cctype>
#include <sstream>

namespace toda {

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    void advance(char c) {
        ++pos;
        if (c == '\n') { ++line; col = 1; }
        else ++col;
    }

    std::variant<Token, ParseError> next() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '#') {  // comment to end of line
                while (pos < src.size() && src[pos] != '\n') advance(src[pos]);
                continue;
            }
            if (std::isspace((unsigned char)c)) { advance(c); continue; }
            break;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) return t;
        char c = src[pos];
        if (std::isalpha((unsigned char)c) || c == '_') {
            t.kind = Token::Ident;
            while (pos < src.size() &&
                   (std::isalnum((unsigned char)src[pos]) || src[pos] == '_')) {
                t.text += src[pos];
                advance(src[pos]);
            }
            return t;
        }
        if (std::isdigit((unsigned char)c)) {
            t.kind = Token::Number;
            while (pos < src.size() && (std::isdigit((unsigned char)src[pos]))) {
                t.text += src[pos];
                advance(src[pos]);
            }
            return t;
        }
        static const std::string puncts = "{}[]();:,=+-/<>*";
        if (puncts.find(c) != std::string::npos) {
            t.kind = Token::Punct;
            t.text += c;
            advance(c);
            if (t.text == "-" && pos < src.size() && src[pos] == '>') {
                t.text = "->";
                advance('>');
            }
            return t;
        }
        return ParseError{ParseErrorKind::Lexical, line, col,
                          std::string("unexpected character '") + c + "'"};
    }
};

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;
    std::optional<ParseError> err;

    const Token& peek() const { return toks[std::min(at, toks.size() - 1)]; }
    Token take() { return toks[std::min(at++, toks.size() - 1)]; }
    bool is(const std::string& p) const {
        return peek().kind == Token::Punct && peek().text == p;
    }
    bool is_ident(const std::string& w) const {
        return peek().kind == Token::Ident && peek().text == w;
    }

    void fail(ParseErrorKind k, const std::string& msg) {
        if (!err) err = ParseError{k, peek().line, peek().col, msg};
    }
    bool expect_punct(const std::string& p) {
        if (is(p)) { take(); return true; }
        fail(ParseErrorKind::Syntax, "expected '" + p + "'");
        return false;
    }
    std::optional<std::string> expect_ident(const std::string& what) {
        if (peek().kind == Token::Ident) return take().text;
        fail(ParseErrorKind::Syntax, "expected " + what);
        return std::nullopt;
    }
    std::optional<long> expect_int() {
        bool negated = false;
        if (is("-")) { take(); negated = true; }
        if (peek().kind != Token::Number) {
            fail(ParseErrorKind::Syntax, "expected an integer");
            return std::nullopt;
        }
        long v = 0;
        try {
            v = std::stol(take().text);
        } catch (std::exception&) {
            fail(ParseErrorKind::Semantic, "integer literal out of range");
            return std::nullopt;
        }
        return negated ? -v : v;
    }
    // RAT := INT ("/" INT)?
    std::optional<Rat> expect_rat() {
        auto num = expect_int();
        if (!num) return std::nullopt;
        Rat r(*num);
        if (is("/")) {
            take();
            auto den = expect_int();
            if (!den) return std::nullopt;
            if (*den == 0) {
                fail(ParseErrorKind::Semantic, "zero denominator");
                return std::nullopt;
            }
            r = Rat(*num) / Rat(*den);
            r.canonicalize();
        }
        return r;
    }

    std::optional<Mat> parse_matrix() {
        if (!expect_punct("[")) return std::nullopt;
        std::vector<std::vector<Rat>> rows;
        if (is("]")) {  // empty matrix
            take();
            return Mat(0, 0);
        }
        while (true) {
            std::vector<Rat> row;
            while (true) {
                auto v = expect_rat();
                if (!v) return std::nullopt;
                row.push_back(*v);
                if (is(",")) { take(); continue; }
                break;
            }
            rows.push_back(std::move(row));
            if (is(";")) { take(); continue; }
            break;
        }
        if (!expect_punct("]")) return std::nullopt;
        Mat m((int)rows.size(), (int)rows[0].size());
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size()) {
                fail(ParseErrorKind::Semantic, "ragged matrix rows");
                return std::nullopt;
            }
            for (size_t j = 0; j < rows[i].size(); ++j) m((int)i, (int)j) = rows[i][j];
        }
        return m;
    }

    // lie := term (("+"|"-") term)*
    // term := RAT ("*")? factor | factor
    // factor := ID | "[" lie "," lie "]" | "0"
    std::optional<LieExpr> parse_lie_expr(const FreeDGL& D) {
        auto factor = [&](auto&& self) -> std::optional<LieExpr> {
            if (peek().kind == Token::Number && peek().text == "0") {
                take();
                return LieExpr::zero();
            }
            if (peek().kind == Token::Ident) {
                std::string nm = take().text;
                auto it = D.index.find(nm);
                if (it == D.index.end()) {
                    fail(ParseErrorKind::Semantic, "undeclared generator " + nm);
                    return std::nullopt;
                }
                return LieExpr::gen(it->second);
            }
            if (is("[")) {
                take();
                auto a = self(self);
                if (!a) return std::nullopt;
                if (!expect_punct(",")) return std::nullopt;
                auto b = self(self);
                if (!b) return std::nullopt;
                if (!expect_punct("]")) return std::nullopt;
                return bracket(*a, *b);
            }
            fail(ParseErrorKind::Syntax, "expected a generator, bracket, or 0");
            return std::nullopt;
        };
        auto term = [&]() -> std::optional<LieExpr> {
            Rat coeff(1);
            while (is("-") || is("+")) {  // sign prefix (the canonical printer emits them)
                if (take().text == "-") coeff = -coeff;
            }
            if (peek().kind == Token::Number && peek().text == "0") {
                take();
                return LieExpr::zero();
            }
            if (peek().kind == Token::Number) {
                auto r = expect_rat();
                if (!r) return std::nullopt;
                coeff = coeff * *r;
                if (is("*")) take();
            }
            auto f = factor(factor);
            if (!f) return std::nullopt;
            return coeff * *f;
        };
        auto lhs = term();
        if (!lhs) return std::nullopt;
        LieExpr acc = *lhs;
        while (is("+") || is("-")) {
            bool minus = take().text == "-";
            auto rhs = term();
            if (!rhs) return std::nullopt;
            acc = minus ? acc - *rhs : acc + *rhs;
        }
        return acc;
    }

    bool parse_dgl(PresentationFile& out) {
        take();  // "dgl"
        auto name = expect_ident("a dgl name");
        if (!name) return false;
        if (out.dgls.count(*name) || out.chains.count(*name) || out.maps.count(*name)) {
            fail(ParseErrorKind::Semantic, "duplicate identifier " + *name);
            return false;
        }
        if (!expect_punct("{")) return false;
        FreeDGL D;
        D.truncation = 0;
        struct PendingDiff {
            std::string gen;
            size_t tok_at;
            int line, col;
        };
        // two passes over the body: declare generators first, then parse the
        // differentials (so forward references work)
        size_t body_start = at;
        int depth = 0;
        while (at < toks.size()) {
            if (is("}") && depth == 0) break;
            if (is("{")) ++depth;
            if (is("}")) --depth;
            if (is_ident("gen")) {
                take();
                auto g = expect_ident("a generator name");
                if (!g) return false;
                if (!expect_punct(":")) return false;
                auto deg = expect_int();
                if (!deg) return false;
                if (!expect_punct(";")) return false;
                if (D.index.count(*g)) {
                    fail(ParseErrorKind::Semantic, "duplicate generator " + *g);
                    return false;
                }
                if (*deg < 1) {
                    fail(ParseErrorKind::Semantic,
                         "generator degree must be >= 1 (reduced DGLs)");
                    return false;
                }
                D.add_generator(*g, (int)*deg);
            } else if (is_ident("truncate")) {
                take();
                auto tr = expect_int();
                if (!tr) return false;
                if (!expect_punct(";")) return false;
                if (*tr < 0) {
                    fail(ParseErrorKind::Semantic, "truncation must be >= 0 (bounded input)");
                    return false;
                }
                D.truncation = (int)*tr;
            } else {
                take();
            }
            if (err) return false;
        }
        if (D.truncation == 0) {
            // default: twice the largest generator degree, so differentials fit
            int mx = 0;
            for (auto& g2 : D.gens) mx = std::max(mx, g2.degree);
            D.truncation = 2 * mx;
        }
        // second pass: the differentials
        at = body_start;
        while (at < toks.size() && !is("}")) {
            if (is_ident("d")) {
                take();
                auto g2 = expect_ident("a generator name");
                if (!g2) return false;
                if (!D.index.count(*g2)) {
                    fail(ParseErrorKind::Semantic, "undeclared generator " + *g2);
                    return false;
                }
                if (!expect_punct("=")) return false;
                auto e = parse_lie_expr(D);
                if (!e) return false;
                if (!expect_punct(";")) return false;
                D.set_differential(D.gen_index(*g2), D.truncate_expr(*e));
            } else if (is_ident("gen") || is_ident("truncate")) {
                // skip: handled in the first pass
                while (at < toks.size() && !is(";")) take();
                if (!expect_punct(";")) return false;
            } else {
                fail(ParseErrorKind::Syntax, "expected 'gen', 'd', or 'truncate'");
                return false;
            }
        }
        if (!expect_punct("}")) return false;
        out.dgls.emplace(*name, D);
        out.order.push_back(*name);
        return true;
    }

    bool parse_chain(PresentationFile& out) {
        take();  // "chain"
        auto name = expect_ident("a chain complex name");
        if (!name) return false;
        if (out.dgls.count(*name) || out.chains.count(*name) || out.maps.count(*name)) {
            fail(ParseErrorKind::Semantic, "duplicate identifier " + *name);
            return false;
        }
        if (!is_ident("over")) {
            fail(ParseErrorKind::Syntax, "expected 'over'");
            return false;
        }
        take();
        Ring R = Ring::integers();
        if (is_ident("Z")) { take(); R = Ring::integers(); }
        else if (is_ident("Q")) { take(); R = Ring::rationals(); }
        else if (is_ident("F")) {
            take();
            auto p = expect_int();
            if (!p) return false;
            if (*p < 2) {
                fail(ParseErrorKind::Semantic, "field characteristic must be >= 2");
                return false;
            }
            R = Ring::prime_field(*p);
        } else {
            fail(ParseErrorKind::Syntax, "expected a ring: Z, Q, or F p");
            return false;
        }
        if (!expect_punct("{")) return false;
        std::map<int, int> deg_rank;
        std::map<int, Mat> boundaries;
        while (!is("}")) {
            if (is_ident("deg")) {
                take();
                auto d = expect_int();
                if (!d) return false;
                if (!is_ident("rank")) {
                    fail(ParseErrorKind::Syntax, "expected 'rank'");
                    return false;
                }
                take();
                auto r = expect_int();
                if (!r) return false;
                if (!expect_punct(";")) return false;
                if (*r < 0) {
                    fail(ParseErrorKind::Semantic, "negative rank");
                    return false;
                }
                deg_rank[(int)*d] = (int)*r;
            } else if (is_ident("boundary")) {
                take();
                auto d = expect_int();
                if (!d) return false;
                if (!expect_punct("=")) return false;
                auto m = parse_matrix();
                if (!m) return false;
                if (!expect_punct(";")) return false;
                boundaries[(int)*d] = *m;
            } else {
                fail(ParseErrorKind::Syntax, "expected 'deg' or 'boundary'");
                return false;
            }
            if (err) return false;
        }
        if (!expect_punct("}")) return false;
        FreeChainComplex C(R);
        if (!deg_rank.empty()) {
            int lo = deg_rank.begin()->first, hi = deg_rank.rbegin()->first;
            std::vector<int> ranks;
            for (int d = lo; d <= hi; ++d)
                ranks.push_back(deg_rank.count(d) ? deg_rank[d] : 0);
            C = FreeChainComplex::from_ranks(R, lo, ranks);
            for (auto& [d, m] : boundaries) {
                if (m.rows != C.rank(d - 1) || m.cols != C.rank(d)) {
                    fail(ParseErrorKind::Semantic,
                         "boundary " + std::to_string(d) + " must be " +
                             std::to_string(C.rank(d - 1)) + " x " + std::to_string(C.rank(d)));
                    return false;
                }
                try {
                    Mat mm = m;
                    for (auto& x : mm.a) x = R.canon(x);
                    C.set_boundary(d, mm);
                } catch (std::exception& ex) {
                    fail(ParseErrorKind::Semantic, ex.what());
                    return false;
                }
            }
        }
        out.chains.emplace(*name, C);
        out.order.push_back(*name);
        return true;
    }

    bool parse_map(PresentationFile& out) {
        take();  // "map"
        auto name = expect_ident("a map name");
        if (!name) return false;
        if (out.dgls.count(*name) || out.chains.count(*name) || out.maps.count(*name)) {
            fail(ParseErrorKind::Semantic, "duplicate identifier " + *name);
            return false;
        }
        MapItem m;
        m.name = *name;
        if (!expect_punct(":")) return false;
        auto s = expect_ident("a source name");
        if (!s) return false;
        m.src = *s;
        if (!expect_punct("->")) return false;
        auto t = expect_ident("a target name");
        if (!t) return false;
        m.dst = *t;
        if (is_ident("shift")) {
            take();
            auto sh = expect_int();
            if (!sh) return false;
            m.shift = (int)*sh;
        }
        if (!expect_punct("{")) return false;
        while (!is("}")) {
            if (is_ident("deg")) {
                take();
                auto d = expect_int();
                if (!d) return false;
                if (!expect_punct("=")) return false;
                auto mm = parse_matrix();
                if (!mm) return false;
                if (!expect_punct(";")) return false;
                m.comp[(int)*d] = *mm;
            } else {
                fail(ParseErrorKind::Syntax, "expected 'deg'");
                return false;
            }
            if (err) return false;
        }
        if (!expect_punct("}")) return false;
        if (!out.chains.count(m.src)) {
            fail(ParseErrorKind::Semantic, "unknown source complex " + m.src);
            return false;
        }
        if (!out.chains.count(m.dst)) {
            fail(ParseErrorKind::Semantic, "unknown target complex " + m.dst);
            return false;
        }
        const FreeChainComplex& S = out.chains.at(m.src);
        const FreeChainComplex& T = out.chains.at(m.dst);
        if (S.ring != T.ring) {
            fail(ParseErrorKind::Semantic,
                 "map between complexes over different rings (" + S.ring.name() + " vs " +
                     T.ring.name() + ")");
            return false;
        }
        for (auto& [d, mat] : m.comp)
            if (mat.rows != T.rank(d + m.shift) || mat.cols != S.rank(d)) {
                fail(ParseErrorKind::Semantic,
                     "component at degree " + std::to_string(d) + " must be " +
                         std::to_string(T.rank(d + m.shift)) + " x " + std::to_string(S.rank(d)));
                return false;
            }
        out.maps.emplace(m.name, m);
        out.order.push_back(m.name);
        return true;
    }
};

}  // namespace

ParseResult parse(const std::string& text) {
    ParseResult res;
    Lexer lex(text);
    std::vector<Token> toks;
    while (true) {
        auto t = lex.next();
        if (std::holds_alternative<ParseError>(t)) {
            res.error = std::get<ParseError>(t);
            return res;
        }
        toks.push_back(std::get<Token>(t));
        if (toks.back().kind == Token::End) break;
    }
    Parser P{std::move(toks), 0, std::nullopt};
    PresentationFile out;
    while (P.peek().kind != Token::End) {
        bool ok = false;
        if (P.is_ident("dgl")) ok = P.parse_dgl(out);
        else if (P.is_ident("chain")) ok = P.parse_chain(out);
        else if (P.is_ident("map")) ok = P.parse_map(out);
        else P.fail(ParseErrorKind::Syntax, "expected 'dgl', 'chain', or 'map'");
        if (!ok || P.err) {
            res.error = P.err ? *P.err
                              : ParseError{ParseErrorKind::Syntax, P.peek().line, P.peek().col,
                                           "invalid item"};
            return res;
        }
    }
    res.file = std::move(out);
    return res;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

std::string rat_str(const Rat& r) { return r.get_str(); }

std::string matrix_str(const Mat& m) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < m.rows; ++i) {
        if (i) os << "; ";
        for (int j = 0; j < m.cols; ++j) {
            if (j) os << ", ";
            os << rat_str(m(i, j));
        }
    }
    os << "]";
    return os.str();
}

}  // namespace

std::string print_lie(const FreeDGL& D, const LieExpr& e) {
    if (e.terms.empty()) return "0";
    std::ostringstream os;
    std::function<void(const TreePtr&)> pt = [&](const TreePtr& t) {
        if (t->is_leaf()) {
            os << D.gens[t->gen].name;
            return;
        }
        os << "[";
        pt(t->l);
        os << ", ";
        pt(t->r);
        os << "]";
    };
    bool first = true;
    for (auto& [c, t] : e.terms) {
        Rat a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        if (a != 1) os << rat_str(a) << "*";
        pt(t);
        first = false;
    }
    return os.str();
}

std::string print(const PresentationFile& f) {
    std::ostringstream os;
    for (auto& name : f.order) {
        if (f.dgls.count(name)) {
            const FreeDGL& D = f.dgls.at(name);
            os << "dgl " << name << " {\n";
            for (auto& g : D.gens) os << "  gen " << g.name << " : " << g.degree << ";\n";
            os << "  truncate " << D.truncation << ";\n";
            for (size_t i = 0; i < D.gens.size(); ++i)
                if (!D.diff[i].is_zero())
                    os << "  d " << D.gens[i].name << " = " << print_lie(D, D.diff[i]) << ";\n";
            os << "}\n";
        } else if (f.chains.count(name)) {
            const FreeChainComplex& C = f.chains.at(name);
            os << "chain " << name << " over " << C.ring.name() << " {\n";
            for (int d = C.lo; d <= C.hi(); ++d)
                if (C.rank(d) > 0) os << "  deg " << d << " rank " << C.rank(d) << ";\n";
            for (int d = C.lo; d <= C.hi(); ++d)
                if (!C.boundary(d).is_zero())
                    os << "  boundary " << d << " = " << matrix_str(C.boundary(d)) << ";\n";
            os << "}\n";
        } else if (f.maps.count(name)) {
            const MapItem& m = f.maps.at(name);
            os << "map " << m.name << " : " << m.src << " -> " << m.dst;
            if (m.shift != 0) os << " shift " << m.shift;
            os << " {\n";
            for (auto& [d, mat] : m.comp)
                if (!mat.is_zero()) os << "  deg " << d << " = " << matrix_str(mat) << ";\n";
            os << "}\n";
        }
    }
    return os.str();
}

GradedMap resolve_map(const PresentationFile& f, const MapItem& m) {
    const FreeChainComplex& S = f.chains.at(m.src);
    const FreeChainComplex& T = f.chains.at(m.dst);
    GradedMap g(S, T, m.shift);
    for (auto& [d, mat] : m.comp) {
        Mat mm = mat;
        for (auto& x : mm.a) x = S.ring.canon(x);
        g.set(d, mm);
    }
    return g;
}

LieParseResult parse_lie(const FreeDGL& D, const std::string& text) {
    LieParseResult out;
    Lexer lex(text);
    std::vector<Token> toks;
    while (true) {
        auto t = lex.next();
        if (std::holds_alternative<ParseError>(t)) {
            out.error = std::get<ParseError>(t);
            return out;
        }
        toks.push_back(std::get<Token>(t));
        if (toks.back().kind == Token::End) break;
    }
    Parser P{std::move(toks), 0, std::nullopt};
    auto e = P.parse_lie_expr(D);
    if (!e || P.err) {
        out.error = P.err ? *P.err
                          : ParseError{ParseErrorKind::Syntax, 1, 1, "invalid expression"};
        return out;
    }
    if (P.peek().kind != Token::End) {
        out.error = ParseError{ParseErrorKind::Syntax, P.peek().line, P.peek().col,
                               "trailing input after the expression"};
        return out;
    }
    out.expr = D.truncate_expr(*e);
    return out;
}

}  // namespace toda
