#ifndef LOGCLASS_GREENBERG_HPP
#define LOGCLASS_GREENBERG_HPP

#include "logclass/padic.hpp"
#include "logclass/quadfield.hpp"

namespace logclass {

struct greenberg_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precision_cap_exceeded : greenberg_error {
    long m;
    explicit precision_cap_exceeded(long m_)
        : greenberg_error("greenberg: precision cap exceeded at m = " +
                          std::to_string(m_)),
          m(m_)
    {
    }
};

/*
 * The two completions of Q(sqrt(m)) above a split ell, realized by the
 * Hensel root s of m: (x + y sqrt(m))/den maps to (x + y s)/den at l
 * and to (x - y s)/den at the conjugate place.  The branch is pinned to
 * the smallest positive square root of m mod ell.
 */
struct EmbeddingPair {
    PadicContextPtr ctx;
    PadicInt s;

    PadicInt at_l(const QuadElement & x) const;
    PadicInt at_lbar(const QuadElement & x) const;
};

EmbeddingPair embeddings(long m, long ell, unsigned precision);

/*
 * Valuations of the Iwasawa logarithms of the fundamental unit eps and
 * of the generator pi of l^k (k the order of [l] in the class group).
 * Both are computed mod ell^W with W escalating from precision_start by
 * doubling until the logarithm residues are nonzero; the unit part of
 * pi is read off the place where pi is a local unit, which by the
 * product formula Log x_l + Log x_lbar = Log N(x) = 0 carries the same
 * valuation as the other place.
 */
struct LogData {
    unsigned v_eps;
    unsigned v_pi;
    unsigned precision_used;
    unsigned escalations;
    int unit_norm; // N(eps), +1 or -1
};

LogData log_data(long m, long ell, unsigned precision_start = 16,
                 unsigned precision_cap = 1024);

/*
 * Full verdict for one field: the logarithmic ell-class group of
 * Q(sqrt(m)) is trivial iff the ell-part of the class group is
 * generated by the class of l (cl_prime_trivial) and
 * min(v_eps, v_pi) = 1, i.e. the semi-local logarithms of the ell-unit
 * generators span ell Z_ell.
 */
struct GrasReport {
    long m = 0;
    long ell = 0;
    unsigned precision_used = 0;
    unsigned escalations = 0;
    long h = 0;        // class number
    long h_narrow = 0; // narrow class number
    long h_ell = 0;    // ell-part of h
    long ord_l = 0;    // order of [l] in the ell-Sylow quotient
    long class_order_l = 0; // order of [l] in the class group
    bool cl_prime_trivial = false;
    bool wild_trivial = false;
    unsigned v_eps = 0;
    unsigned v_pi = 0;
    unsigned min_v = 0;
    bool log_class_trivial = false;
    unsigned bp_unit_exponent = 0; // v_eps - 1
    long bp_total = 0;             // h_ell * ell^(v_eps - 1)
    int level1_norm_index_exponent = 0; // t with (E' : E' cap N) = ell^t
    bool unresolved = false; // set by callers that catch the cap error
};

GrasReport gras_criterion(long m, long ell, unsigned precision_start = 16,
                          unsigned precision_cap = 1024);

/*
 * Exponent t with (E' : E' cap N_{K1/K}) = ell^t for the first
 * cyclotomic layer: an ell-unit is a local norm at l iff the valuation
 * of its logarithm is >= 2, so t = 1 exactly when min(v_eps, v_pi) = 1.
 * The ambiguous-class formula then predicts h_ell * ell^(1-t)
 * ambiguous classes, which ties this criterion to the triviality
 * verdict.
 */
int norm_index_level1(long m, long ell);

/*
 * Order of the Bertrandias-Payan torsion module:
 * |T^bp| = h_ell * ell^(v_eps - 1); total = 1 detects ell-rationality.
 */
struct BpTorsion {
    unsigned h_ell_exponent;
    unsigned unit_exponent;
    long total;
};

BpTorsion bp_torsion_order(long m, long ell);

} // namespace logclass

#endif
