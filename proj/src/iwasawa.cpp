#include "logclass/iwasawa.hpp"

#include <algorithm>

namespace logclass {

void IntPoly::normalize()
{
    while (!c.empty() && c.back() == 0)
        c.pop_back();
}

IntPoly poly_mul(const IntPoly & a, const IntPoly & b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<mpz_class> r(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r[i + j] += a.c[i] * b.c[j];
    return IntPoly(std::move(r));
}

/* coefficients of (1+T)^(ell^n) - 1 */
static std::vector<mpz_class> omega_coeffs(long n, long ell)
{
    mpz_class L;
    mpz_ui_pow_ui(L.get_mpz_t(), static_cast<unsigned long>(ell),
                  static_cast<unsigned long>(n));
    unsigned long Lu = mpz_get_ui(L.get_mpz_t());
    std::vector<mpz_class> c(Lu + 1);
    c[0] = 0;
    for (unsigned long k = 1; k <= Lu; ++k)
        mpz_bin_uiui(c[k].get_mpz_t(), Lu, k);
    return c;
}

IntPoly omega(long n, long ell)
{
    if (n < 0)
        throw iwasawa_error("iwasawa: negative level");
    return IntPoly(omega_coeffs(n, ell));
}

/* exact division by a monic divisor; entries reduced mod `mod` if nonzero */
static std::vector<mpz_class> poly_divexact_monic(std::vector<mpz_class> num,
                                                 const std::vector<mpz_class> & den,
                                                 const mpz_class & mod)
{
    size_t dn = den.size() - 1;
    if (num.size() - 1 < dn)
        throw iwasawa_error("iwasawa: bad polynomial division");
    std::vector<mpz_class> q(num.size() - dn);
    for (size_t i = q.size(); i-- > 0;) {
        mpz_class t = num[i + dn];
        if (mod != 0) {
            t %= mod;
            if (t < 0)
                t += mod;
        }
        q[i] = t;
        for (size_t j = 0; j <= dn; ++j)
            num[i + j] -= t * den[j];
    }
    for (size_t j = 0; j < dn; ++j)
        if (mod == 0 ? num[j] != 0 : num[j] % mod != 0)
            throw iwasawa_error("iwasawa: division is not exact");
    return q;
}

IntPoly omega_quotient(long n, long n0, long ell)
{
    if (n < n0 || n0 < 0)
        throw iwasawa_error("iwasawa: need n >= n0 >= 0");
    if (n == n0)
        return IntPoly({ 1 });
    return IntPoly(
        poly_divexact_monic(omega_coeffs(n, ell), omega_coeffs(n0, ell), 0));
}

/* ---------------- module validation and decomposition ---------------- */

static unsigned val(const mpz_class & x, long ell)
{
    mpz_class t = x;
    unsigned v = 0;
    while (t != 0 && mpz_divisible_ui_p(t.get_mpz_t(),
                                        static_cast<unsigned long>(ell))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(),
                        static_cast<unsigned long>(ell));
        ++v;
    }
    return v;
}

/* f = ell^mu * g with g = 1 or monic distinguished */
struct Decomp {
    unsigned mu;
    IntPoly g;
};

static Decomp decompose(const IntPoly & f, long ell)
{
    unsigned mu = UINT_MAX;
    for (const auto & x : f.c)
        if (x != 0)
            mu = std::min(mu, val(x, ell));
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(ell), mu);
    IntPoly g;
    g.c.resize(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i)
        mpz_divexact(g.c[i].get_mpz_t(), f.c[i].get_mpz_t(), p.get_mpz_t());
    return { mu, g };
}

void validate(const LambdaModule & M)
{
    if (M.ell < 3 || M.ell % 2 == 0)
        throw bad_module("iwasawa: ell must be an odd prime");
    for (long p = 3; p * p <= M.ell; p += 2)
        if (M.ell % p == 0)
            throw bad_module("iwasawa: ell must be an odd prime");
    for (const auto & f : M.elementary) {
        if (f.is_zero())
            throw bad_module("iwasawa: zero elementary divisor");
        Decomp d = decompose(f, M.ell);
        if (d.g.degree() == 0) {
            if (d.g.c[0] != 1 && d.g.c[0] != -1)
                throw bad_module("iwasawa: constant part is not an ell power");
            if (d.mu == 0)
                throw bad_module("iwasawa: unit elementary divisor");
        } else {
            if (d.g.c.back() != 1)
                throw bad_module("iwasawa: distinguished part is not monic");
            for (size_t i = 0; i + 1 < d.g.c.size(); ++i)
                if (!mpz_divisible_ui_p(d.g.c[i].get_mpz_t(),
                                        static_cast<unsigned long>(M.ell)))
                    throw bad_module("iwasawa: polynomial is not distinguished");
        }
    }
    if (M.finite) {
        const FiniteModule & F = *M.finite;
        size_t r = F.rank();
        if (F.T_action.size() != r)
            throw bad_module("iwasawa: T_action size mismatch");
        for (const auto & row : F.T_action)
            if (row.size() != r)
                throw bad_module("iwasawa: T_action is not square");
        // T maps the relation lattice diag(ell^a_j) into itself
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j)
                if (F.T_action[i][j] != 0 && F.orders[i] > F.orders[j] &&
                    val(F.T_action[i][j], M.ell) + F.orders[j] < F.orders[i])
                    throw bad_module("iwasawa: T_action not well defined");
    }
}

IntPoly char_poly(const LambdaModule & M)
{
    IntPoly chi({ 1 });
    for (const auto & f : M.elementary)
        chi = poly_mul(chi, f);
    return chi;
}

unsigned mu_of(const IntPoly & chi, long ell)
{
    unsigned mu = UINT_MAX;
    for (const auto & x : chi.c)
        if (x != 0)
            mu = std::min(mu, val(x, ell));
    return mu == UINT_MAX ? 0 : mu;
}

unsigned lambda_of(const IntPoly & chi, long ell)
{
    Decomp d = decompose(chi, ell);
    // Weierstrass: lambda = index of the first unit coefficient
    for (size_t i = 0; i < d.g.c.size(); ++i)
        if (!mpz_divisible_ui_p(d.g.c[i].get_mpz_t(),
                                static_cast<unsigned long>(ell)))
            return static_cast<unsigned>(i);
    throw iwasawa_error("iwasawa: no unit coefficient after content removal");
}

/* ---------------- finite-part order computations ---------------- */

static mpz_class ell_power(long ell, unsigned e)
{
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(ell), e);
    return p;
}

/* exponent of |coker(W)| on (+) Z/ell^a_i, W given mod ell^max(a) */
static long finite_coker_exponent(const FiniteModule & F, long ell,
                                  const Mat & W)
{
    size_t r = F.rank();
    if (r == 0)
        return 0;
    Mat cols(r, std::vector<mpz_class>(2 * r, 0));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
            cols[i][j] = W[i][j];
    for (size_t i = 0; i < r; ++i)
        cols[i][r + i] = ell_power(ell, F.orders[i]);
    mpz_class idx = lattice_index(cols);
    if (idx == 0)
        throw iwasawa_error("iwasawa: degenerate finite lattice");
    return val(idx, ell);
}

static long finite_order_exponent(const FiniteModule & F)
{
    long s = 0;
    for (unsigned a : F.orders)
        s += a;
    return s;
}

/* (1+T)^(ell^n) - 1 on the finite part, mod ell^max(a) */
static Mat finite_omega_matrix(const FiniteModule & F, long ell, long n)
{
    size_t r = F.rank();
    unsigned amax = 0;
    for (unsigned a : F.orders)
        amax = std::max(amax, a);
    mpz_class mod = ell_power(ell, amax);
    Mat g = mat_add(mat_identity(r), F.T_action, mod);
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(ell),
                  static_cast<unsigned long>(n));
    Mat w = mat_pow(g, e, mod);
    Mat id = mat_identity(r);
    for (size_t i = 0; i < r; ++i)
        w[i][i] = (w[i][i] - 1 + mod) % mod;
    return w;
}

/* (omega_m/omega_n)(T) on the finite part */
static Mat finite_quot_matrix(const FiniteModule & F, long ell, long n, long m)
{
    size_t r = F.rank();
    unsigned amax = 0;
    for (unsigned a : F.orders)
        amax = std::max(amax, a);
    mpz_class mod = ell_power(ell, amax);
    std::vector<mpz_class> q =
        poly_divexact_monic(omega_coeffs(m, ell), omega_coeffs(n, ell), 0);
    // Horner
    Mat acc(r, std::vector<mpz_class>(r, 0));
    for (size_t i = q.size(); i-- > 0;) {
        acc = mat_mul(acc, F.T_action, mod);
        for (size_t d = 0; d < r; ++d)
            acc[d][d] = (acc[d][d] + q[i]) % mod;
    }
    return acc;
}

/* ---------------- elementary-part order computations ---------------- */

static Mat companion(const IntPoly & g)
{
    size_t n = static_cast<size_t>(g.degree());
    Mat c(n, std::vector<mpz_class>(n, 0));
    for (size_t i = 0; i + 1 < n; ++i)
        c[i + 1][i] = 1;
    for (size_t i = 0; i < n; ++i)
        c[i][n - 1] = -g.c[i];
    return c;
}

/* v_ell(det(omega_n(C_g))) for distinguished g; not_coprime if 0 */
static long elementary_omega_exponent(const IntPoly & g, long ell, long n)
{
    if (g.degree() <= 0)
        return 0;
    Mat c = companion(g);
    size_t r = c.size();
    for (size_t i = 0; i < r; ++i)
        c[i][i] += 1; // I + C
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(ell),
                  static_cast<unsigned long>(n));
    Mat w = mat_pow(c, e, 0);
    for (size_t i = 0; i < r; ++i)
        w[i][i] -= 1;
    mpz_class det = mat_det(w);
    if (det == 0)
        throw not_coprime();
    return val(det, ell);
}

/* ---------------- public operations ---------------- */

HerbrandData herbrand(const LambdaModule & M)
{
    validate(M);
    IntPoly chi = char_poly(M);
    mpz_class chi0 = chi.at0();
    if (chi0 == 0)
        throw gamma_minus_one_divides();
    long coinv = val(chi0, M.ell);
    long fin = 0;
    if (M.finite && M.finite->rank() > 0)
        fin = finite_coker_exponent(*M.finite, M.ell, M.finite->T_action);
    HerbrandData h;
    h.inv_order = ell_power(M.ell, static_cast<unsigned>(fin));
    h.coinv_order = ell_power(M.ell, static_cast<unsigned>(coinv + fin));
    h.pseudo_null = coinv == 0;
    return h;
}

long quotient_order(const LambdaModule & M, long n)
{
    validate(M);
    mpz_class ln;
    mpz_ui_pow_ui(ln.get_mpz_t(), static_cast<unsigned long>(M.ell),
                  static_cast<unsigned long>(n));
    long e = 0;
    for (const auto & f : M.elementary) {
        Decomp d = decompose(f, M.ell);
        mpz_class muln = d.mu * ln;
        e += mpz_get_si(muln.get_mpz_t());
        e += elementary_omega_exponent(d.g, M.ell, n);
    }
    if (M.finite && M.finite->rank() > 0)
        e += finite_coker_exponent(*M.finite, M.ell,
                                   finite_omega_matrix(*M.finite, M.ell, n));
    return e;
}

IwasawaInvariants iwasawa_invariants(const LambdaModule & M)
{
    validate(M);
    std::vector<long> e;
    auto en = [&](long n) {
        while (static_cast<long>(e.size()) <= n)
            e.push_back(quotient_order(M, static_cast<long>(e.size())));
        return e[static_cast<size_t>(n)];
    };
    for (long t = 0; t <= 3; ++t) {
        long lt = 1;
        for (long i = 0; i < t; ++i)
            lt *= M.ell;
        long d2 = (en(t + 2) - en(t + 1)) - (en(t + 1) - en(t));
        long denom = lt * (M.ell - 1) * (M.ell - 1);
        if (d2 % denom)
            continue;
        long mu = d2 / denom;
        long lambda = (en(t + 1) - en(t)) - mu * (lt * M.ell - lt);
        long nu = en(t) - mu * lt - lambda * t;
        bool ok = true;
        for (long v = t + 3; v <= t + 4 && ok; ++v) {
            long lv = 1;
            for (long i = 0; i < v; ++i)
                lv *= M.ell;
            ok = en(v) == mu * lv + lambda * v + nu;
        }
        if (ok && mu >= 0 && lambda >= 0)
            return { mu, lambda, nu };
    }
    throw iwasawa_error("iwasawa: growth did not stabilize in the probe window");
}

long capitulation_kernel(const LambdaModule & M, long n, long m)
{
    validate(M);
    if (m < n)
        throw iwasawa_error("iwasawa: need m >= n");
    if (m == n)
        return 0;
    // |ker| = |M/w_n| * |M/(w_m/w_n)| / |M/w_m|; elementary parts cancel
    // exactly, the finite part is computed on its truncated presentation
    long e = 0;
    if (M.finite && M.finite->rank() > 0) {
        const FiniteModule & F = *M.finite;
        long qn = finite_coker_exponent(F, M.ell,
                                        finite_omega_matrix(F, M.ell, n));
        long qm = finite_coker_exponent(F, M.ell,
                                        finite_omega_matrix(F, M.ell, m));
        long qc = finite_coker_exponent(F, M.ell,
                                        finite_quot_matrix(F, M.ell, n, m));
        e = qn + qc - qm;
    }
    return e;
}

long stabilized_kernel(const LambdaModule & M, long n)
{
    validate(M);
    long bound = M.finite ? finite_order_exponent(*M.finite) : 0;
    long prev = -1;
    for (long m = n + 1; m <= n + 10; ++m) {
        long k = capitulation_kernel(M, n, m);
        if (k == prev || k == bound)
            return k;
        prev = k;
    }
    return prev;
}

GreenbergEquiv greenberg_equiv_suite(const LambdaModule & M)
{
    HerbrandData h = herbrand(M);
    IntPoly chi = char_poly(M);
    bool char_unit = mu_of(chi, M.ell) == 0 && lambda_of(chi, M.ell) == 0;
    long e5 = quotient_order(M, 5);
    long e6 = quotient_order(M, 6);
    long e7 = quotient_order(M, 7);
    bool bounded = e5 == e6 && e6 == e7;
    return { h.pseudo_null, char_unit, bounded };
}

/* ---------------- semi-simple decomposition ---------------- */

static mpz_class root_of_unity(long d, long ell, const PadicContextPtr & ctx)
{
    // primitive root mod ell, Teichmuller-lifted and raised to (ell-1)/d
    long g = 0;
    for (long c = 2; c < ell; ++c) {
        long x = 1;
        bool prim = true;
        for (long i = 1; i < ell - 1; ++i) {
            x = (x * c) % ell;
            if (x == 1) {
                prim = false;
                break;
            }
        }
        if (prim) {
            g = c;
            break;
        }
    }
    PadicInt w = teichmuller(PadicInt(g, ctx));
    return w.pow((ell - 1) / d).residue();
}

std::vector<GroupAlgebraElt> idempotents(long d, long ell, unsigned precision)
{
    if (d < 1 || (ell - 1) % d != 0)
        throw unsupported_delta();
    PadicContextPtr ctx = make_context(ell, precision);
    const mpz_class & mod = ctx->modulus();
    mpz_class dinv;
    mpz_invert(dinv.get_mpz_t(), mpz_class(d).get_mpz_t(), mod.get_mpz_t());
    mpz_class zeta = root_of_unity(d, ell, ctx);
    mpz_class zinv;
    mpz_invert(zinv.get_mpz_t(), zeta.get_mpz_t(), mod.get_mpz_t());
    std::vector<GroupAlgebraElt> es;
    for (long j = 0; j < d; ++j) {
        GroupAlgebraElt e;
        e.ctx = ctx;
        e.coeff.resize(static_cast<size_t>(d));
        // e_j = (1/d) sum_k zeta^(-jk) tau^k
        mpz_class step;
        mpz_powm(step.get_mpz_t(), zinv.get_mpz_t(),
                 mpz_class(j).get_mpz_t(), mod.get_mpz_t());
        mpz_class acc = 1;
        for (long k = 0; k < d; ++k) {
            e.coeff[static_cast<size_t>(k)] = dinv * acc % mod;
            acc = acc * step % mod;
        }
        es.push_back(std::move(e));
    }
    return es;
}

GroupAlgebraElt algebra_mul(const GroupAlgebraElt & a, const GroupAlgebraElt & b)
{
    if (!(*a.ctx == *b.ctx))
        throw iwasawa_error("iwasawa: mixed group-algebra contexts");
    size_t d = a.coeff.size();
    const mpz_class & mod = a.ctx->modulus();
    GroupAlgebraElt r;
    r.ctx = a.ctx;
    r.coeff.assign(d, 0);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            r.coeff[(i + j) % d] = (r.coeff[(i + j) % d] + a.coeff[i] * b.coeff[j]) % mod;
    return r;
}

Mat phi_component(const Mat & tau_action, long j, long d, long ell,
                  unsigned precision)
{
    std::vector<GroupAlgebraElt> es = idempotents(d, ell, precision);
    const mpz_class & mod = es[0].ctx->modulus();
    size_t r = tau_action.size();
    Mat acc(r, std::vector<mpz_class>(r, 0));
    Mat p = mat_identity(r);
    for (long k = 0; k < d; ++k) {
        for (size_t u = 0; u < r; ++u)
            for (size_t v = 0; v < r; ++v)
                acc[u][v] =
                    (acc[u][v] + es[static_cast<size_t>(j)].coeff[static_cast<size_t>(k)] * p[u][v]) % mod;
        p = mat_mul(p, tau_action, mod);
    }
    return acc;
}

long circular_quotient_order(const IntPoly & rho, long n, long ell)
{
    if (rho.is_zero())
        throw iwasawa_error("iwasawa: zero polynomial");
    IntPoly g = rho;
    long s = 0;
    while (!g.c.empty() && g.c[0] == 0) {
        g.c.erase(g.c.begin());
        ++s;
    }
    if (g.degree() == 0) {
        if (g.c[0] != 1)
            throw iwasawa_error("iwasawa: rho must be distinguished");
        return s * n;
    }
    if (g.c.back() != 1)
        throw iwasawa_error("iwasawa: rho must be distinguished");
    long num = elementary_omega_exponent(g, ell, n);
    long den = val(g.at0(), ell);
    return s * n + num - den;
}

} // namespace logclass
