#include "logclass/padic.hpp"

#include <cassert>

namespace logclass {

PadicContext::PadicContext(mpz_class ell, unsigned precision)
    : ell_(std::move(ell))
    , precision_(precision)
{
    if (ell_ < 3 || mpz_even_p(ell_.get_mpz_t())
        || !mpz_probab_prime_p(ell_.get_mpz_t(), 32))
        throw padic_error("padic: ell must be an odd prime >= 3");
    if (precision_ < 4)
        throw padic_error("padic: precision must be >= 4");
    mpz_pow_ui(modulus_.get_mpz_t(), ell_.get_mpz_t(), precision_);
}

PadicContextPtr make_context(const mpz_class & ell, unsigned precision)
{
    return std::make_shared<const PadicContext>(ell, precision);
}

PadicInt::PadicInt(mpz_class residue, PadicContextPtr ctx)
    : residue_(std::move(residue))
    , ctx_(std::move(ctx))
{
    mpz_fdiv_r(residue_.get_mpz_t(), residue_.get_mpz_t(),
               ctx_->modulus().get_mpz_t());
    if (residue_ != 0) {
        unsigned v = 0;
        mpz_class r = residue_;
        while (mpz_divisible_p(r.get_mpz_t(), ctx_->ell().get_mpz_t())) {
            mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), ctx_->ell().get_mpz_t());
            ++v;
        }
        valuation_ = v;
    }
}

static void check_same_context(const PadicInt & a, const PadicInt & b)
{
    if (!(*a.context() == *b.context()))
        throw padic_error("padic: mixed contexts");
}

PadicInt PadicInt::operator+(const PadicInt & o) const
{
    check_same_context(*this, o);
    return { residue_ + o.residue_, ctx_ };
}

PadicInt PadicInt::operator-(const PadicInt & o) const
{
    check_same_context(*this, o);
    return { residue_ - o.residue_, ctx_ };
}

PadicInt PadicInt::operator*(const PadicInt & o) const
{
    check_same_context(*this, o);
    return { residue_ * o.residue_, ctx_ };
}

PadicInt PadicInt::operator-() const { return { -residue_, ctx_ }; }

bool PadicInt::operator==(const PadicInt & o) const
{
    return *ctx_ == *o.ctx_ && residue_ == o.residue_;
}

PadicInt PadicInt::inverse() const
{
    if (!is_unit())
        throw non_unit();
    mpz_class r;
    mpz_invert(r.get_mpz_t(), residue_.get_mpz_t(), ctx_->modulus().get_mpz_t());
    return { r, ctx_ };
}

PadicInt PadicInt::pow(const mpz_class & e) const
{
    mpz_class base = residue_;
    if (e < 0) {
        base = inverse().residue();
    }
    mpz_class ee = abs(e);
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), ee.get_mpz_t(),
             ctx_->modulus().get_mpz_t());
    return { r, ctx_ };
}

PadicInt hensel_sqrt(const PadicInt & a, const mpz_class & branch)
{
    const auto & ctx = a.context();
    const mpz_class & ell = ctx->ell();
    if (!a.is_unit())
        throw non_unit();
    mpz_class a0 = a.residue() % ell;
    if (mpz_legendre(a0.get_mpz_t(), ell.get_mpz_t()) != 1)
        throw not_a_residue();
    mpz_class b = branch % ell;
    if (b < 0)
        b += ell;
    if ((b * b - a0) % ell != 0)
        throw bad_branch();

    // Newton: x <- x - (x^2 - a) / (2x), doubling the number of exact
    // digits each round.
    mpz_class x = b;
    mpz_class mod = ell;
    unsigned digits = 1;
    while (digits < ctx->precision()) {
        digits *= 2;
        if (digits > ctx->precision())
            digits = ctx->precision();
        mpz_pow_ui(mod.get_mpz_t(), ell.get_mpz_t(), digits);
        mpz_class two_x_inv;
        mpz_class two_x = 2 * x;
        mpz_invert(two_x_inv.get_mpz_t(), two_x.get_mpz_t(), mod.get_mpz_t());
        mpz_class num = x * x - a.residue();
        x = (x - num * two_x_inv) % mod;
        if (x < 0)
            x += mod;
    }
    return { x, ctx };
}

PadicInt teichmuller(const PadicInt & u)
{
    if (!u.is_unit())
        throw non_unit();
    const auto & ctx = u.context();
    // limit of u^(ell^k), iterated to stability
    mpz_class prev = u.residue();
    for (unsigned k = 0; k <= ctx->precision() + 1; ++k) {
        mpz_class next;
        mpz_powm(next.get_mpz_t(), prev.get_mpz_t(), ctx->ell().get_mpz_t(),
                 ctx->modulus().get_mpz_t());
        if (next == prev)
            break;
        prev = next;
    }
    return { prev, ctx };
}

PadicInt iwasawa_log(const PadicInt & x0, const mpz_class & ell_exponent)
{
    // The ell-power part is killed by the Iwasawa convention Log(ell)=0:
    // strip it and log the unit part.  The top ell_exponent digits of the
    // result are truncation artifacts; callers restricting to precision
    // N - ell_exponent get the exact value.
    PadicInt x = x0;
    if (ell_exponent > 0) {
        const auto & c = x0.context();
        mpz_class p;
        mpz_pow_ui(p.get_mpz_t(), c->ell().get_mpz_t(),
                   mpz_get_ui(ell_exponent.get_mpz_t()));
        if (!mpz_divisible_p(x0.residue().get_mpz_t(), p.get_mpz_t()))
            throw non_unit();
        mpz_class u;
        mpz_divexact(u.get_mpz_t(), x0.residue().get_mpz_t(), p.get_mpz_t());
        x = PadicInt(u, c);
    }
    if (!x.is_unit())
        throw non_unit();
    const auto & ctx = x.context();
    const mpz_class & ell = ctx->ell();
    const unsigned N = ctx->precision();

    // guard digits absorbing the divisions by the series index
    unsigned g = 1;
    {
        mpz_class p = ell;
        while (p <= N) {
            p *= ell;
            ++g;
        }
    }
    const unsigned W = N + g;
    mpz_class modW;
    mpz_pow_ui(modW.get_mpz_t(), ell.get_mpz_t(), W);

    // t = u/omega(u) - 1 has valuation >= 1
    mpz_class om = teichmuller(x).residue();
    mpz_class om_inv;
    mpz_invert(om_inv.get_mpz_t(), om.get_mpz_t(), ctx->modulus().get_mpz_t());
    mpz_class t = (x.residue() * om_inv - 1) % ctx->modulus();
    if (t < 0)
        t += ctx->modulus();
    if (t == 0)
        return { 0, ctx };

    unsigned v1 = 0;
    mpz_class s = t;
    while (mpz_divisible_p(s.get_mpz_t(), ell.get_mpz_t())) {
        mpz_divexact(s.get_mpz_t(), s.get_mpz_t(), ell.get_mpz_t());
        ++v1;
    }

    // log(1+t) = sum (-1)^(k+1) t^k / k with t = ell^v1 * s; each term
    // ell^(k*v1 - v(k)) * s^k / k' is exact mod ell^W.
    mpz_class sum = 0;
    mpz_class s_pow = 1;
    for (unsigned long k = 1;; ++k) {
        s_pow = (s_pow * s) % modW;
        unsigned long vk = 0;
        unsigned long kk = k;
        while (kk % mpz_get_ui(ell.get_mpz_t()) == 0) {
            kk /= mpz_get_ui(ell.get_mpz_t());
            ++vk;
        }
        // term exponent of ell
        unsigned long e = k * v1 - vk;
        if (e >= W)
            break;
        mpz_class kinv, kz = kk;
        mpz_invert(kinv.get_mpz_t(), kz.get_mpz_t(), modW.get_mpz_t());
        mpz_class ellpow;
        mpz_pow_ui(ellpow.get_mpz_t(), ell.get_mpz_t(), e);
        mpz_class term = (s_pow * kinv) % modW * ellpow % modW;
        if (k % 2 == 0)
            term = -term;
        sum = (sum + term) % modW;
    }
    if (sum < 0)
        sum += modW;
    return { sum % ctx->modulus(), ctx };
}

std::optional<unsigned> log_valuation(const PadicInt & x)
{
    // A nonzero residue pins v_ell exactly; only an all-zero residue is
    // ambiguous and asks the caller to escalate.
    if (x.is_zero())
        return std::nullopt;
    return *x.valuation();
}

} // namespace logclass
