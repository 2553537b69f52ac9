#include "logclass/greenberg.hpp"

namespace logclass {

namespace {

/* smallest positive r with r^2 == m mod ell */
long sqrt_branch(long m, long ell)
{
    long mm = m % ell;
    if (mm < 0)
        mm += ell;
    for (long r = 1; r < ell; ++r)
        if ((r * r) % ell == mm)
            return r;
    throw greenberg_error("greenberg: no square root of m mod ell");
}

PadicInt embed(const PadicInt & s, const QuadElement & x, int sign)
{
    const PadicContextPtr & ctx = s.context();
    PadicInt v = PadicInt(x.x, ctx) + PadicInt(sign * x.y, ctx) * s;
    if (x.den != 1)
        v = v * PadicInt(x.den, ctx).inverse();
    return v;
}

LogData log_data_impl(const FieldSpec & spec, long ell, long k,
                      unsigned precision_start, unsigned precision_cap)
{
    long branch = sqrt_branch(spec.m, ell);
    long branch_d = spec.D == spec.m ? branch : (2 * branch) % ell;
    unsigned esc = 0;
    for (unsigned W = precision_start; W <= precision_cap; W *= 2, ++esc) {
        PadicContextPtr ctx = make_context(ell, W);
        const mpz_class & mod = ctx->modulus();
        PadicInt s = hensel_sqrt(PadicInt(spec.m, ctx), branch);
        // sqrt(D) in Z_ell: 2s for D = 4m, s for D = m
        PadicInt sd = spec.D == spec.m ? s : s + s;

        FundamentalUnitMod u = fundamental_unit_mod(spec.m, mod);
        PadicInt eps_l = PadicInt(u.x, ctx) + PadicInt(u.y, ctx) * s;
        if (u.den == 2)
            eps_l = eps_l * PadicInt(2, ctx).inverse();
        std::optional<unsigned> ve = log_valuation(iwasawa_log(eps_l));

        // pi generating l^k = (ell^k, (b_k + sqrt(D))/2), read off at the
        // place where it is a local unit
        mpz_class ellk;
        mpz_pow_ui(ellk.get_mpz_t(), mpz_class(ell).get_mpz_t(),
                   static_cast<unsigned long>(k));
        mpz_class bk = lift_sqrt_mod_ell_power(spec.D, ell, k, branch_d);
        auto wr = reduce_to_unit_form(spec.D, ellk, bk, mod);
        if (!wr)
            throw greenberg_error("greenberg: l^k did not reduce to a unit form");
        PadicInt base = PadicInt(ellk % mod, ctx) * PadicInt(wr->p, ctx);
        PadicInt half = PadicInt(2, ctx).inverse();
        PadicInt r(wr->r, ctx);
        PadicInt bkp(bk % mod, ctx);
        PadicInt pi_plus = base + r * (bkp + sd) * half;
        PadicInt pi_minus = base + r * (bkp - sd) * half;
        const PadicInt & pi_unit = pi_plus.is_unit() ? pi_plus : pi_minus;
        if (!pi_unit.is_unit())
            throw greenberg_error("greenberg: pi is not a unit at either place");
        std::optional<unsigned> vp = log_valuation(iwasawa_log(pi_unit));

        if (ve && vp)
            return { *ve, *vp, W, esc, u.norm };
    }
    throw precision_cap_exceeded(spec.m);
}

} // namespace

PadicInt EmbeddingPair::at_l(const QuadElement & x) const
{
    return embed(s, x, +1);
}

PadicInt EmbeddingPair::at_lbar(const QuadElement & x) const
{
    return embed(s, x, -1);
}

EmbeddingPair embeddings(long m, long ell, unsigned precision)
{
    if (!splits(m, ell))
        throw ramified_or_inert();
    PadicContextPtr ctx = make_context(ell, precision);
    PadicInt s = hensel_sqrt(PadicInt(m, ctx), sqrt_branch(m, ell));
    return { ctx, s };
}

LogData log_data(long m, long ell, unsigned precision_start,
                 unsigned precision_cap)
{
    FieldSpec spec = discriminant(m);
    if (!splits(m, ell))
        throw ramified_or_inert();
    long k = class_order(spec, prime_above(spec, ell));
    return log_data_impl(spec, ell, k, precision_start, precision_cap);
}

GrasReport gras_criterion(long m, long ell, unsigned precision_start,
                          unsigned precision_cap)
{
    FieldSpec spec = discriminant(m);
    if (!splits(m, ell))
        throw ramified_or_inert();
    EllClassData cd = ell_class_data(spec, ell);
    LogData ld = log_data_impl(spec, ell, cd.class_order_l, precision_start,
                               precision_cap);
    if (ld.v_eps < 1 || ld.v_pi < 1)
        throw greenberg_error("greenberg: logarithm valuation below 1");

    GrasReport r;
    r.m = m;
    r.ell = ell;
    r.precision_used = ld.precision_used;
    r.escalations = ld.escalations;
    r.h_narrow = cd.h_narrow;
    if (ld.unit_norm == 1) {
        if (cd.h_narrow % 2)
            throw greenberg_error("greenberg: odd narrow h with N(eps) = 1");
        r.h = cd.h_narrow / 2;
    } else {
        r.h = cd.h_narrow;
    }
    r.h_ell = cd.h_ell;
    r.ord_l = cd.ord_l;
    r.class_order_l = cd.class_order_l;
    r.cl_prime_trivial = cd.cl_prime_trivial;
    r.wild_trivial = cd.wild_trivial;
    r.v_eps = ld.v_eps;
    r.v_pi = ld.v_pi;
    r.min_v = std::min(ld.v_eps, ld.v_pi);
    r.log_class_trivial = r.cl_prime_trivial && r.min_v == 1;
    r.bp_unit_exponent = ld.v_eps - 1;
    if (r.bp_unit_exponent > 30)
        throw greenberg_error("greenberg: bp exponent out of range");
    long p = 1;
    for (unsigned i = 0; i < r.bp_unit_exponent; ++i)
        p *= ell;
    r.bp_total = r.h_ell * p;
    r.level1_norm_index_exponent = r.min_v == 1 ? 1 : 0;
    return r;
}

int norm_index_level1(long m, long ell)
{
    return gras_criterion(m, ell).level1_norm_index_exponent;
}

BpTorsion bp_torsion_order(long m, long ell)
{
    GrasReport r = gras_criterion(m, ell);
    unsigned he = 0;
    long h = r.h_ell;
    while (h % ell == 0) {
        h /= ell;
        ++he;
    }
    return { he, r.bp_unit_exponent, r.bp_total };
}

} // namespace logclass
