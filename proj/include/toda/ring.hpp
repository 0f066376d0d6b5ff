#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace toda {

using Int = mpz_class;
using Rat = mpq_class;

// Coefficient ring of a complex: the integers, the rationals, or a prime field.
// All scalars are stored as exact rationals; the ring tag decides which values
// are legal and how arithmetic is normalized (F_p entries are kept in [0,p)).
struct Ring {
    enum class Kind { Z, Q, Fp };
    Kind kind = Kind::Q;
    long p = 0;  // prime, only for Fp

    static Ring integers() { return {Kind::Z, 0}; }
    static Ring rationals() { return {Kind::Q, 0}; }
    static Ring prime_field(long p) {
        if (p < 2) throw std::invalid_argument("prime_field: p must be >= 2");
        return {Kind::Fp, p};
    }

    bool is_field() const { return kind != Kind::Z; }
    bool operator==(const Ring& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const Ring& o) const { return !(*this == o); }

    // Canonical representative of a scalar in this ring.
    Rat canon(const Rat& x) const {
        switch (kind) {
            case Kind::Q: return x;
            case Kind::Z:
                if (x.get_den() != 1) throw std::invalid_argument("non-integer scalar over Z");
                return x;
            case Kind::Fp: {
                if (mpz_divisible_ui_p(x.get_den().get_mpz_t(), (unsigned long)p))
                    throw std::invalid_argument("denominator divisible by p over F_p");
                Int num = x.get_num() % p, den = x.get_den() % p;
                if (num < 0) num += p;
                if (den < 0) den += p;
                Int inv;
                if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), Int(p).get_mpz_t()) == 0)
                    throw std::invalid_argument("non-invertible denominator over F_p");
                Int v = (num * inv) % p;
                return Rat(v);
            }
        }
        return x;
    }

    Rat add(const Rat& a, const Rat& b) const { return canon(a + b); }
    Rat sub(const Rat& a, const Rat& b) const { return canon(a - b); }
    Rat mul(const Rat& a, const Rat& b) const { return canon(a * b); }
    Rat neg(const Rat& a) const { return canon(-a); }

    bool is_unit(const Rat& a) const {
        if (a == 0) return false;
        if (kind == Kind::Z) return a == 1 || a == -1;
        return true;
    }

    Rat inv(const Rat& a) const {
        if (!is_unit(a)) throw std::invalid_argument("inverting a non-unit");
        if (kind == Kind::Fp) return canon(Rat(1) / a);
        return Rat(1) / a;
    }

    std::string name() const {
        switch (kind) {
            case Kind::Z: return "Z";
            case Kind::Q: return "Q";
            case Kind::Fp: return "F" + std::to_string(p);
        }
        return "?";
    }
};

inline std::string to_string(const Rat& x) { return x.get_str(); }
inline std::string to_string(const Int& x) { return x.get_str(); }

}  // namespace toda
