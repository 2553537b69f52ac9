#ifndef LOGCLASS_IWASAWA_HPP
#define LOGCLASS_IWASAWA_HPP

#include "logclass/intmat.hpp"
#include "logclass/padic.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace logclass {

struct iwasawa_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct gamma_minus_one_divides : iwasawa_error {
    gamma_minus_one_divides()
        : iwasawa_error("iwasawa: T divides the characteristic polynomial")
    {
    }
};
struct not_coprime : iwasawa_error {
    not_coprime() : iwasawa_error("iwasawa: arguments share a root") {}
};
struct unsupported_delta : iwasawa_error {
    unsupported_delta() : iwasawa_error("iwasawa: order of Delta must divide ell - 1")
    {
    }
};
struct bad_module : iwasawa_error {
    using iwasawa_error::iwasawa_error;
};

/*
 * Polynomial in T = gamma - 1 with integer coefficients, low degree
 * first; normalized with no zero leading coefficient (zero polynomial
 * is the empty vector).
 */
struct IntPoly {
    std::vector<mpz_class> c;

    IntPoly() = default;
    IntPoly(std::initializer_list<mpz_class> v) : c(v) { normalize(); }
    explicit IntPoly(std::vector<mpz_class> v) : c(std::move(v)) { normalize(); }

    void normalize();
    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    mpz_class at0() const { return c.empty() ? mpz_class(0) : c[0]; }
    bool operator==(const IntPoly & o) const { return c == o.c; }
};

IntPoly poly_mul(const IntPoly & a, const IntPoly & b);

/* omega_n = (1+T)^(ell^n) - 1, and the exact quotient omega_n/omega_n0 */
IntPoly omega(long n, long ell);
IntPoly omega_quotient(long n, long n0, long ell);

/*
 * Finitely generated torsion Lambda-module given by its elementary
 * decomposition (+) Lambda/(f_i) together with an explicit finite part.
 */
struct FiniteModule {
    std::vector<unsigned> orders; // cyclic piece Z/ell^a_i per entry
    Mat T_action;                 // action of T on the chosen generators

    size_t rank() const { return orders.size(); }
};

struct LambdaModule {
    long ell;
    std::vector<IntPoly> elementary;
    std::optional<FiniteModule> finite;
};

/* rejects zero or unit f_i and ill-defined finite actions */
void validate(const LambdaModule & M);

/* product of the elementary parts; lambda = degree of the distinguished
 * factor, mu = ell-valuation of the content */
IntPoly char_poly(const LambdaModule & M);
unsigned lambda_of(const IntPoly & chi, long ell);
unsigned mu_of(const IntPoly & chi, long ell);

struct HerbrandData {
    mpz_class inv_order;   // |ker(T)| = |M^Gamma|
    mpz_class coinv_order; // |M/TM|
    bool pseudo_null;
};

HerbrandData herbrand(const LambdaModule & M);

/* exponent e_n with |M/omega_n M| = ell^(e_n) */
long quotient_order(const LambdaModule & M, long n);

struct IwasawaInvariants {
    long mu;
    long lambda;
    long nu;
};

/* fit e_n = mu ell^n + lambda n + nu on three consecutive stabilized
 * levels, verified on two more */
IwasawaInvariants iwasawa_invariants(const LambdaModule & M);

/* exponent of |Ker(j_{n,m})| for j = multiplication by omega_m/omega_n
 * from M/omega_n M to M/omega_m M */
long capitulation_kernel(const LambdaModule & M, long n, long m);

/* eventual kernel order exponent: |F / (F cap omega_n M)|, which is
 * |F| once n is large */
long stabilized_kernel(const LambdaModule & M, long n);

struct GreenbergEquiv {
    bool pseudo_null;    // Herbrand quotient trivial
    bool char_unit;      // lambda = mu = 0
    bool growth_bounded; // e_n bounded over the probe window
    bool consistent() const
    {
        return pseudo_null == char_unit && char_unit == growth_bounded;
    }
};

GreenbergEquiv greenberg_equiv_suite(const LambdaModule & M);

/*
 * Primitive idempotents of Z_ell[Delta] for Delta cyclic of order d,
 * d | ell - 1: e_j = (1/d) sum_i zeta^(ji) tau^(-i), as coefficient
 * vectors on (1, tau, ..., tau^(d-1)) at the context precision.
 */
struct GroupAlgebraElt {
    std::vector<mpz_class> coeff;
    PadicContextPtr ctx;
};

std::vector<GroupAlgebraElt> idempotents(long d, long ell, unsigned precision);
GroupAlgebraElt algebra_mul(const GroupAlgebraElt & a, const GroupAlgebraElt & b);

/* projector of the phi_j-component on a Z^r-module with tau acting by
 * `tau_action` (tau^d = 1): e_j evaluated on the action, mod ell^N */
Mat phi_component(const Mat & tau_action, long j, long d, long ell,
                  unsigned precision);

/* exponent of |Lambda/(rho, omega_n/omega_0)| for distinguished rho */
long circular_quotient_order(const IntPoly & rho, long n, long ell);

} // namespace logclass

#endif
