#ifndef LOGCLASS_PADIC_HPP
#define LOGCLASS_PADIC_HPP

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace logclass {

/*
 * Exact arithmetic in Z_ell truncated at a fixed number of ell-adic
 * digits.  A context pins the odd prime ell and the precision N; every
 * value carries a shared pointer to its context so mixed-precision
 * mistakes are caught at run time.
 */
class PadicContext {
  public:
    PadicContext(mpz_class ell, unsigned precision);

    const mpz_class & ell() const { return ell_; }
    unsigned precision() const { return precision_; }
    const mpz_class & modulus() const { return modulus_; }

    bool operator==(const PadicContext & o) const
    {
        return ell_ == o.ell_ && precision_ == o.precision_;
    }

  private:
    mpz_class ell_;
    unsigned precision_;
    mpz_class modulus_; // ell^precision
};

using PadicContextPtr = std::shared_ptr<const PadicContext>;

PadicContextPtr make_context(const mpz_class & ell, unsigned precision);

struct padic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct non_unit : padic_error {
    non_unit() : padic_error("padic: argument is not an ell-adic unit") {}
};
struct not_a_residue : padic_error {
    not_a_residue() : padic_error("padic: not a quadratic residue mod ell") {}
};
struct bad_branch : padic_error {
    bad_branch() : padic_error("padic: branch^2 != a mod ell") {}
};
struct precision_exhausted : padic_error {
    precision_exhausted()
        : padic_error("padic: result indistinguishable from 0 at this precision")
    {
    }
};

class PadicInt {
  public:
    PadicInt(mpz_class residue, PadicContextPtr ctx);

    const mpz_class & residue() const { return residue_; }
    const PadicContextPtr & context() const { return ctx_; }
    unsigned precision() const { return ctx_->precision(); }

    bool is_zero() const { return residue_ == 0; }

    /* v_ell of the residue; meaningless (nullopt) when the residue is 0. */
    std::optional<unsigned> valuation() const { return valuation_; }

    bool is_unit() const { return valuation_ && *valuation_ == 0; }

    PadicInt operator+(const PadicInt & o) const;
    PadicInt operator-(const PadicInt & o) const;
    PadicInt operator*(const PadicInt & o) const;
    PadicInt operator-() const;
    bool operator==(const PadicInt & o) const;

    /* Multiplicative inverse; requires a unit. */
    PadicInt inverse() const;
    PadicInt pow(const mpz_class & e) const;

  private:
    mpz_class residue_;
    PadicContextPtr ctx_;
    std::optional<unsigned> valuation_;
};

/*
 * Square root of a unit a with prescribed branch mod ell, lifted by
 * Newton iteration to the full context precision.  The two branches
 * give s and ell^N - s.
 */
PadicInt hensel_sqrt(const PadicInt & a, const mpz_class & branch);

/* The (ell-1)-st root of unity congruent to u mod ell. */
PadicInt teichmuller(const PadicInt & u);

/*
 * Iwasawa logarithm of x = ell^ell_exponent * u, with Log(ell) = 0, so
 * only the unit part u contributes.  Computed from the series for
 * log(1 + t) with t = u/omega(u) - 1; guard digits cover the divisions
 * by the series index, so the result is exact at the context precision.
 */
PadicInt iwasawa_log(const PadicInt & x, const mpz_class & ell_exponent = 0);

/*
 * v_ell of a logarithm value.  A zero residue is indistinguishable from
 * an actual zero, so the caller must escalate precision (nullopt).
 */
std::optional<unsigned> log_valuation(const PadicInt & x);

} // namespace logclass

#endif
