#include "doctest.h"
#include "toda/linalg.hpp"

#include <random>

using namespace toda;

namespace {

Mat random_int_matrix(std::mt19937& rng, int r, int c, int lo = -4, int hi = 4) {
    std::uniform_int_distribution<int> d(lo, hi);
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

}  // namespace

TEST_CASE("rref solves and nullspace over Q") {
    Ring Q = Ring::rationals();
    Mat A = Mat::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}});
    CHECK(rank(Q, A) == 2);
    Mat K = field_nullspace(Q, A);
    CHECK(K.cols == 1);
    CHECK(mul(Q, A, K).is_zero());

    Mat b(3, 1);
    b(0, 0) = 6; b(1, 0) = 12; b(2, 0) = 3;
    auto x = field_solve(Q, A, b);
    REQUIRE(x.has_value());
    CHECK(mul(Q, A, *x) == b);
}

TEST_CASE("F2 arithmetic canonicalizes") {
    Ring F2 = Ring::prime_field(2);
    CHECK(F2.canon(Rat(3)) == 1);
    CHECK(F2.canon(Rat(-1)) == 1);
    CHECK(F2.canon(Rat(1) / 3) == 1);  // 1/3 = 1 mod 2
    Mat A = Mat::from_rows({{1, 1}, {1, 1}});
    CHECK(rank(F2, A) == 1);
}

TEST_CASE("smith normal form: frozen small cases") {
    // diag(2) stays diag(2)
    auto s1 = smith_normal_form(Mat::from_rows({{2}}));
    CHECK(s1.D(0, 0) == 2);
    // [[2,4],[6,8]] -> diag(2,4): det = -8, gcd = 2
    auto s2 = smith_normal_form(Mat::from_rows({{2, 4}, {6, 8}}));
    CHECK(s2.D(0, 0) == 2);
    CHECK(s2.D(1, 1) == 4);
    // identity stays identity
    auto s3 = smith_normal_form(Mat::identity(3));
    for (int i = 0; i < 3; ++i) CHECK(s3.D(i, i) == 1);
}

TEST_CASE("smith normal form invariants on random matrices") {
    std::mt19937 rng(12345);
    Ring Z = Ring::integers();
    for (int trial = 0; trial < 30; ++trial) {
        int r = 1 + (int)(rng() % 5), c = 1 + (int)(rng() % 5);
        Mat M = random_int_matrix(rng, r, c);
        auto s = smith_normal_form(M);
        CHECK(mul(Z, mul(Z, s.U, M), s.V) == s.D);
        // divisibility chain
        auto d = s.diagonal();
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i] == 0) CHECK(d[i + 1] == 0);
            else if (d[i + 1] != 0)
                CHECK(mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t()));
        }
        // U, V unimodular: integer inverses exist
        CHECK(zsolve(s.U, Mat::identity(r)).has_value());
        CHECK(zsolve(s.V, Mat::identity(c)).has_value());
        // kernel is a genuine kernel
        Mat K = zkernel(M);
        CHECK(mul(Z, M, K).is_zero());
        CHECK(K.cols == c - s.rank());
    }
}

TEST_CASE("integer solve finds solutions exactly when they exist") {
    Mat A = Mat::from_rows({{2, 0}, {0, 3}});
    Mat b(2, 1);
    b(0, 0) = 4; b(1, 0) = 6;
    auto x = zsolve(A, b);
    REQUIRE(x.has_value());
    CHECK((*x)(0, 0) == 2);
    CHECK((*x)(1, 0) == 2);
    b(0, 0) = 1;
    CHECK(!zsolve(A, b).has_value());  // 2x = 1 has no integer solution
}

TEST_CASE("quotient presentations over Z") {
    Ring Z = Ring::integers();
    // Z^2 / <(2,0)> = Z/2 + Z
    Mat rel(2, 1);
    rel(0, 0) = 2;
    auto P = GroupPres::quotient(Z, 2, rel);
    CHECK(P.free_rank == 1);
    REQUIRE(P.torsion.size() == 1);
    CHECK(P.torsion[0] == 2);
    CHECK(P.describe() == "Z + Z/2");
    // (1,0) is not zero in the quotient; (2,0) is
    CHECK(!P.is_zero_class({Rat(1), Rat(0)}));
    CHECK(P.is_zero_class({Rat(2), Rat(0)}));
    // subgroup membership: is (1,1) in <(1,1)> mod rel? yes
    Mat G(2, 1);
    G(0, 0) = 1; G(1, 0) = 1;
    CHECK(P.in_subgroup(G, {Rat(1), Rat(1)}));
    CHECK(P.in_subgroup(G, {Rat(3), Rat(1)}));   // (3,1) = (1,1) + (2,0)
    CHECK(!P.in_subgroup(G, {Rat(0), Rat(1)}));
}

TEST_CASE("quotient presentations over a field") {
    Ring Q = Ring::rationals();
    Mat rel(3, 1);
    rel(0, 0) = 1; rel(1, 0) = 1; rel(2, 0) = 0;
    auto P = GroupPres::quotient(Q, 3, rel);
    CHECK(P.free_rank == 2);
    CHECK(P.is_zero_class({Rat(2), Rat(2), Rat(0)}));
    CHECK(!P.is_zero_class({Rat(1), Rat(0), Rat(0)}));
    auto a = P.canon({Rat(1), Rat(0), Rat(5)});
    auto b = P.canon({Rat(0), Rat(-1), Rat(5)});
    CHECK(a == b);  // differ by the relation
}
