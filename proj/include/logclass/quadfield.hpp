#ifndef LOGCLASS_QUADFIELD_HPP
#define LOGCLASS_QUADFIELD_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace logclass {

struct quadfield_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct not_squarefree : quadfield_error {
    not_squarefree() : quadfield_error("quadfield: m is not squarefree > 1") {}
};
struct ramified_or_inert : quadfield_error {
    ramified_or_inert()
        : quadfield_error("quadfield: ell does not split in Q(sqrt(m))")
    {
    }
};
struct bound_exceeded : quadfield_error {
    bound_exceeded() : quadfield_error("quadfield: discriminant above desk bound") {}
};
struct not_principal : quadfield_error {
    not_principal() : quadfield_error("quadfield: ideal power is not principal") {}
};

/* K = Q(sqrt(m)); D is the fundamental discriminant. */
struct FieldSpec {
    long m;
    long D;
};

FieldSpec discriminant(long m);
bool is_squarefree(long m);

/* true iff ell splits in Q(sqrt(m)); throws if ell | D. */
bool splits(long m, long ell);

/* (x + y sqrt(m)) / den with den in {1,2} */
struct QuadElement {
    mpz_class x;
    mpz_class y;
    int den = 1;

    /* field norm (x^2 - m y^2) / den^2 */
    mpz_class norm(long m) const;
};

/*
 * Integral ideal content * (a Z + ((b+sqrt(D))/2) Z), b^2 == D mod 4a.
 */
struct IdealRep {
    mpz_class a;
    mpz_class b;
    mpz_class content = 1;
};

/* Binary quadratic form a x^2 + b xy + c y^2 of discriminant D. */
struct Form {
    int64_t a, b, c;
    bool operator==(const Form & o) const { return a == o.a && b == o.b && c == o.c; }
};

struct ClassGroupData {
    long h;        // wide class number
    long h_narrow; // number of cycles of reduced forms
    std::vector<long> cyclic_orders; // invariant factors of the form group
    std::vector<Form> generators;    // reduced, one per invariant factor
};

struct FundamentalUnit {
    QuadElement eps;
    int norm; // +1 or -1
    long period;
};

/* Fundamental unit of the maximal order, by the continued fraction of
 * the reduced surd (P0 + sqrt(D))/2; exact integer recurrences. */
FundamentalUnit fundamental_unit(long m);

/* Same expansion with convergents reduced mod `modulus`; returns
 * (x, y, den) of eps with x, y mod modulus, plus N(eps) and the period. */
struct FundamentalUnitMod {
    mpz_class x, y;
    int den;
    int norm;
    long period;
};
FundamentalUnitMod fundamental_unit_mod(long m, const mpz_class & modulus);

/*
 * The form class group of a real quadratic discriminant, realized by
 * full enumeration of reduced indefinite forms partitioned into
 * rho-cycles.  Classes are cycle ids; composition works on canonical
 * representatives with Gauss composition done as exact ideal
 * multiplication in Hermite form.
 */
class FormClassGroup {
  public:
    explicit FormClassGroup(long D);

    long discriminant() const { return D_; }
    long class_count() const { return (long)reps_.size(); } // narrow h
    int principal() const { return principal_; }
    // class of the form (-1, b0, *): trivial in the wide group
    int neg_principal() const { return neg_principal_; }

    /* class id of an arbitrary form of discriminant D */
    int class_of(Form f) const;
    int compose(int i, int j) const;
    int power(int i, long e) const;
    long order(int i) const;      // order in the narrow (form) group
    long wide_order(int i) const; // order in the ordinary class group
    const Form & representative(int i) const { return reps_[i]; }

    Form reduce(Form f) const;
    Form rho(const Form & f) const;
    bool is_reduced(const Form & f) const;

  private:
    long D_;
    long sqrt_floor_;
    std::vector<Form> reps_;
    int principal_;
    int neg_principal_;
    std::unordered_map<uint64_t, int> cycle_of_; // key(a,b) -> cycle id
};

ClassGroupData class_group(const FieldSpec & spec);

/* The prime above ell with 0 < b < 2*ell and b matching the Hensel
 * branch (smallest positive square root of D mod ell). */
IdealRep prime_above(const FieldSpec & spec, long ell);

long class_order(const FieldSpec & spec, const IdealRep & ideal);
long ell_part_order(const FieldSpec & spec, const IdealRep & ideal, long ell);

/*
 * Generator of ideal^k (k the order of the class): the ideal power is
 * computed exactly, the corresponding form is reduced to the principal
 * cycle with the SL2(Z) transformation tracked, and the generator is
 * read off the transformation.  Verified by exact Hermite-form ideal
 * equality; throws not_principal on failure.
 */
QuadElement principal_generator(const FieldSpec & spec, const IdealRep & ideal,
                                long k);

struct EllClassData {
    long h_ell;     // ell-part of the class number
    long ord_l;     // order of [l] in the ell-Sylow quotient
    bool cl_prime_trivial; // ell-Sylow generated by the class of l
    bool wild_trivial;     // ord_l == 1
    long h_narrow;
    long class_order_l; // full order of [l] in the form group
};

EllClassData ell_class_data(const FieldSpec & spec, long ell);
EllClassData ell_class_data(const FieldSpec & spec, long ell,
                            const FormClassGroup & G);

/* --- exact ideal machinery shared with greenberg/scan --- */

/* Hermite basis [[a, p], [0, q]] of a Z-module in the basis (1, w0),
 * w0 = (sigma + sqrt(D))/2, sigma = D mod 2. */
struct ModuleHNF {
    mpz_class a, p, q;
    bool operator==(const ModuleHNF & o) const
    {
        return a == o.a && p == o.p && q == o.q;
    }
};

ModuleHNF ideal_hnf(long D, const IdealRep & I);
ModuleHNF principal_hnf(long D, const QuadElement & pi, long m);

/* product of primitive ideals: returns (a3, b3) and the content factor */
struct IdealProduct {
    mpz_class a, b, content;
};
IdealProduct multiply_primitive(long D, const mpz_class & a1, const mpz_class & b1,
                                const mpz_class & a2, const mpz_class & b2);

/* sqrt(D) mod ell^k matching the given branch mod ell, with the parity
 * fixed so that b^2 == D mod 4 ell^k. */
mpz_class lift_sqrt_mod_ell_power(long D, long ell, long k, long branch);

/*
 * Cycle walk with transformation tracking: reduces f, walks its cycle
 * until the leading coefficient is +-1, and returns the first column
 * (p, r) of the accumulated SL2 matrix (mod `modulus` if nonzero).
 * Returns nullopt when the cycle closes without reaching +-1.
 */
struct WalkResult {
    mpz_class p, r;
    int lead; // +1 or -1
};
std::optional<WalkResult> reduce_to_unit_form(long D, const mpz_class & a,
                                              const mpz_class & b,
                                              const mpz_class & modulus);

/* shared smallest-prime-factor sieve (grown on demand, thread-safe) */
void sieve_ensure(long limit);
void factorize(long n, std::vector<std::pair<long, int>> & out);

} // namespace logclass

#endif
