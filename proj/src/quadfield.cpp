#include "logclass/quadfield.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <cassert>
#include <cstdlib>
#include <mutex>

namespace logclass {

/* ---------------- smallest-prime-factor sieve ---------------- */

namespace {
std::mutex sieve_mutex;
/* readers take a shared_ptr snapshot, so a concurrent regrow can never
 * pull the table out from under them */
std::shared_ptr<const std::vector<int32_t>> spf_table;
} // namespace

void sieve_ensure(long limit)
{
    auto cur = std::atomic_load_explicit(&spf_table, std::memory_order_acquire);
    if (cur && (long)cur->size() > limit)
        return;
    std::lock_guard<std::mutex> lk(sieve_mutex);
    cur = std::atomic_load(&spf_table);
    if (cur && (long)cur->size() > limit)
        return;
    auto t = std::make_shared<std::vector<int32_t>>(limit + 1, 0);
    for (long i = 2; i <= limit; ++i) {
        if ((*t)[i] == 0)
            for (long j = i; j <= limit; j += i)
                if ((*t)[j] == 0)
                    (*t)[j] = (int32_t)i;
    }
    std::atomic_store_explicit(&spf_table,
        std::shared_ptr<const std::vector<int32_t>>(std::move(t)),
        std::memory_order_release);
}

void factorize(long n, std::vector<std::pair<long, int>> & out)
{
    out.clear();
    if (n < 0)
        n = -n;
    auto tab = std::atomic_load_explicit(&spf_table, std::memory_order_acquire);
    if (tab && n < (long)tab->size()) {
        while (n > 1) {
            long p = (*tab)[n];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
        return;
    }
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1)
        out.emplace_back(n, 1);
}

bool is_squarefree(long m)
{
    if (m <= 1)
        return false;
    std::vector<std::pair<long, int>> f;
    factorize(m, f);
    for (auto & [p, e] : f)
        if (e > 1)
            return false;
    return true;
}

/* ---------------- basic field data ---------------- */

FieldSpec discriminant(long m)
{
    if (!is_squarefree(m))
        throw not_squarefree();
    long D = (m % 4 == 1) ? m : 4 * m;
    return { m, D };
}

bool splits(long m, long ell)
{
    FieldSpec spec = discriminant(m);
    if (spec.D % ell == 0)
        throw ramified_or_inert();
    mpz_class D = spec.D, l = ell;
    return mpz_legendre(D.get_mpz_t(), l.get_mpz_t()) == 1;
}

mpz_class QuadElement::norm(long m) const
{
    mpz_class n = x * x - mpz_class(m) * y * y;
    assert(n % (den * den) == 0);
    return n / (den * den);
}

static long sqrt_floor(long n)
{
    mpz_class r, nn = n;
    mpz_sqrt(r.get_mpz_t(), nn.get_mpz_t());
    return mpz_get_si(r.get_mpz_t());
}

/* ---------------- continued fraction of (P0 + sqrt(D))/2 ---------------- */

/*
 * Purely periodic expansion of the reduced surd w = (P0 + sqrt(D))/2
 * with P0 the largest integer below sqrt(D) of the parity of D.  After
 * one period p the convergent denominators give the fundamental unit
 * eps = B_{p-1} w + B_{p-2}, of norm (-1)^p.
 */
static FundamentalUnitMod cf_unit(long m, const mpz_class * modulus)
{
    FieldSpec spec = discriminant(m);
    long D = spec.D;
    long d = sqrt_floor(D);
    long P0 = (d % 2 == D % 2) ? d : d - 1;
    long P = P0, Q = 2;
    mpz_class Bm1 = 0, Bm2 = 1; // B_{-1}, B_{-2}
    long period = 0;
    while (true) {
        long a = (P + d) / Q;
        long Pn = a * Q - P;
        long Qn = (D - Pn * Pn) / Q;
        mpz_class B = a * Bm1 + Bm2;
        if (modulus)
            B %= *modulus;
        Bm2 = Bm1;
        Bm1 = B;
        P = Pn;
        Q = Qn;
        ++period;
        if (P == P0 && Q == 2)
            break;
    }
    // eps = (X + Y sqrt(D)) / 2, X = P0 B_{p-1} + 2 B_{p-2}, Y = B_{p-1}
    FundamentalUnitMod out;
    out.norm = (period % 2) ? -1 : +1;
    out.period = period;
    if (D == 4 * m) {
        // P0 even: eps = (P0/2) B_{p-1} + B_{p-2} + B_{p-1} sqrt(m)
        out.x = (P0 / 2) * Bm1 + Bm2;
        out.y = Bm1;
        out.den = 1;
    } else {
        out.x = P0 * Bm1 + 2 * Bm2;
        out.y = Bm1;
        out.den = 2;
        if (mpz_even_p(out.x.get_mpz_t()) && mpz_even_p(out.y.get_mpz_t())
            && !modulus) {
            out.x /= 2;
            out.y /= 2;
            out.den = 1;
        }
    }
    if (modulus) {
        out.x %= *modulus;
        if (out.x < 0)
            out.x += *modulus;
        out.y %= *modulus;
        if (out.y < 0)
            out.y += *modulus;
    }
    return out;
}

FundamentalUnit fundamental_unit(long m)
{
    FundamentalUnitMod u = cf_unit(m, nullptr);
    return { QuadElement{ u.x, u.y, u.den }, u.norm, u.period };
}

FundamentalUnitMod fundamental_unit_mod(long m, const mpz_class & modulus)
{
    return cf_unit(m, &modulus);
}

/* ---------------- reduced indefinite forms ---------------- */

static bool reduced64(int64_t a, int64_t b, long d)
{
    int64_t aa = a < 0 ? -a : a;
    return b >= 1 && b <= d && 2 * aa - b <= d && 2 * aa + b >= d + 1;
}

bool FormClassGroup::is_reduced(const Form & f) const
{
    return reduced64(f.a, f.b, sqrt_floor_);
}

/* next b: r == -b (mod 2|c|), placed in the standard window */
static int64_t rho_r(int64_t b, int64_t c, long d)
{
    int64_t cc = c < 0 ? -c : c;
    if (cc <= d) {
        int64_t t = (d + b) % (2 * cc);
        if (t < 0)
            t += 2 * cc;
        return d - t;
    }
    int64_t t = (-b) % (2 * cc);
    if (t < 0)
        t += 2 * cc;
    if (t > cc)
        t -= 2 * cc;
    return t;
}

Form FormClassGroup::rho(const Form & f) const
{
    int64_t r = rho_r(f.b, f.c, sqrt_floor_);
    return { f.c, r, (r * r - D_) / (4 * f.c) };
}

Form FormClassGroup::reduce(Form f) const
{
    while (!is_reduced(f))
        f = rho(f);
    return f;
}

static uint64_t form_key(int64_t a, int64_t b)
{
    return ((uint64_t)(uint32_t)(int32_t)a << 32) | (uint32_t)(int32_t)b;
}

FormClassGroup::FormClassGroup(long D)
    : D_(D)
{
    if (D >= 10000000)
        throw bound_exceeded();
    if (D <= 0 || (D % 4 != 0 && D % 4 != 1))
        throw quadfield_error("quadfield: not a positive discriminant");
    sqrt_floor_ = sqrt_floor(D);
    if (sqrt_floor_ * sqrt_floor_ == D)
        throw quadfield_error("quadfield: discriminant is a square");
    sieve_ensure(D / 4 + 2);

    // enumerate all reduced forms: for each b pick divisors a of (D-b^2)/4
    // in the window sqrt(D)-b < 2a < sqrt(D)+b
    std::vector<Form> forms;
    std::vector<std::pair<long, int>> fac;
    std::vector<long> divs;
    long d = sqrt_floor_;
    for (long b = (D % 2) ? 1 : 2; b <= d; b += 2) {
        long N = (D - b * b) / 4;
        factorize(N, fac);
        divs.assign(1, 1);
        for (auto & [p, e] : fac) {
            size_t sz = divs.size();
            long pe = 1;
            for (int i = 1; i <= e; ++i) {
                pe *= p;
                for (size_t j = 0; j < sz; ++j)
                    divs.push_back(divs[j] * pe);
            }
        }
        for (long a : divs) {
            if (2 * a - b <= d && 2 * a + b >= d + 1) {
                forms.push_back({ a, b, -(N / a) });
                forms.push_back({ -a, b, N / a });
            }
        }
    }

    // partition into rho-cycles
    cycle_of_.reserve(forms.size() * 2);
    for (auto & f : forms)
        cycle_of_.emplace(form_key(f.a, f.b), -1);
    int next_id = 0;
    for (auto & f : forms) {
        auto it = cycle_of_.find(form_key(f.a, f.b));
        if (it->second >= 0)
            continue;
        int id = next_id++;
        reps_.push_back(f);
        Form g = f;
        do {
            cycle_of_[form_key(g.a, g.b)] = id;
            g = rho(g);
        } while (!(g == f));
    }

    long b0 = (d % 2 == D % 2) ? d : d - 1;
    principal_ = class_of({ 1, b0, (b0 * b0 - D) / 4 });
    neg_principal_ = class_of({ -1, b0, -(b0 * b0 - D) / 4 });
}

int FormClassGroup::class_of(Form f) const
{
    f = reduce(f);
    auto it = cycle_of_.find(form_key(f.a, f.b));
    if (it == cycle_of_.end())
        throw quadfield_error("quadfield: form not of this discriminant");
    return it->second;
}

int FormClassGroup::compose(int i, int j) const
{
    const Form & f1 = reps_[i];
    const Form & f2 = reps_[j];
    // the underlying module forgets the orientation; composition of the
    // narrow classes carries sign(a1) * sign(a2) along
    IdealProduct p = multiply_primitive(D_, f1.a < 0 ? -f1.a : f1.a, f1.b,
                                        f2.a < 0 ? -f2.a : f2.a, f2.b);
    int64_t a3 = mpz_get_si(p.a.get_mpz_t());
    int64_t b3 = mpz_get_si(p.b.get_mpz_t());
    if ((f1.a < 0) != (f2.a < 0))
        a3 = -a3;
    Form f{ a3, b3, (b3 * b3 - D_) / (4 * a3) };
    return class_of(f);
}

int FormClassGroup::power(int i, long e) const
{
    int acc = principal_;
    int base = i;
    while (e > 0) {
        if (e & 1)
            acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

long FormClassGroup::order(int i) const
{
    long k = 1;
    int x = i;
    while (x != principal_) {
        x = compose(x, i);
        ++k;
    }
    return k;
}

long FormClassGroup::wide_order(int i) const
{
    long k = 1;
    int x = i;
    while (x != principal_ && x != neg_principal_) {
        x = compose(x, i);
        ++k;
    }
    return k;
}

/* ---------------- ideal machinery ---------------- */

/*
 * Column Hermite form of a rank-2 lattice in the basis (1, w0),
 * w0 = (sigma + sqrt(D))/2.  Input: generator columns (p_i, q_i).
 */
static ModuleHNF hnf2(std::vector<std::pair<mpz_class, mpz_class>> cols)
{
    // combine to a single vector with q = gcd of all q_i
    mpz_class g = 0, cp = 0; // the (p, q) pair carrying the q-gcd
    for (auto & [p, q] : cols) {
        if (q == 0)
            continue;
        if (g == 0) {
            g = q;
            cp = p;
        } else {
            mpz_class gg, u, v;
            mpz_gcdext(gg.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(),
                       g.get_mpz_t(), q.get_mpz_t());
            cp = u * cp + v * p;
            g = gg;
        }
    }
    if (g < 0) {
        g = -g;
        cp = -cp;
    }
    mpz_class A = 0;
    for (auto & [p, q] : cols) {
        mpz_class rem = p;
        if (g != 0)
            rem = p - (q / g) * cp; // q/g exact: g | q_i
        mpz_gcd(A.get_mpz_t(), A.get_mpz_t(), rem.get_mpz_t());
    }
    ModuleHNF out;
    out.a = A;
    out.q = g;
    out.p = cp;
    if (A != 0) {
        mpz_fdiv_r(out.p.get_mpz_t(), out.p.get_mpz_t(), A.get_mpz_t());
    }
    return out;
}

IdealProduct multiply_primitive(long D, const mpz_class & a1, const mpz_class & b1,
                                const mpz_class & a2, const mpz_class & b2)
{
    long sigma = ((D % 2) + 2) % 2;
    mpz_class t1 = (b1 - sigma) / 2;
    mpz_class t2 = (b2 - sigma) / 2;
    mpz_class w2 = (mpz_class(D) - sigma * sigma) / 4; // w0^2 = sigma*w0 + w2
    std::vector<std::pair<mpz_class, mpz_class>> cols;
    cols.emplace_back(a1 * a2, 0);
    cols.emplace_back(a1 * t2, a1);
    cols.emplace_back(a2 * t1, a2);
    cols.emplace_back(t1 * t2 + w2, t1 + t2 + sigma);
    ModuleHNF h = hnf2(std::move(cols));
    // an O-ideal in Hermite form has content q dividing everything
    if (h.a % h.q != 0 || h.p % h.q != 0)
        throw quadfield_error("quadfield: product module is not an O-ideal");
    IdealProduct out;
    out.content = h.q;
    out.a = h.a / h.q;
    mpz_class p0 = h.p / h.q;
    out.b = 2 * p0 + sigma;
    mpz_class twoa = 2 * out.a;
    mpz_fdiv_r(out.b.get_mpz_t(), out.b.get_mpz_t(), twoa.get_mpz_t());
    return out;
}

ModuleHNF ideal_hnf(long D, const IdealRep & I)
{
    long sigma = ((D % 2) + 2) % 2;
    ModuleHNF h;
    h.a = I.content * I.a;
    h.q = I.content;
    h.p = I.content * ((I.b - sigma) / 2);
    mpz_fdiv_r(h.p.get_mpz_t(), h.p.get_mpz_t(), h.a.get_mpz_t());
    return h;
}

ModuleHNF principal_hnf(long D, const QuadElement & pi, long m)
{
    long sigma = ((D % 2) + 2) % 2;
    // pi = u + v w0 in the (1, w0) basis
    mpz_class u, v;
    if (D == 4 * m) {
        // w0 = sqrt(m)
        assert(pi.den == 1);
        u = pi.x;
        v = pi.y;
    } else {
        // w0 = (1 + sqrt(m))/2, so (x + y sqrt(m))/den = (x - y)/den + (2y/den) w0
        if (pi.den == 2) {
            u = (pi.x - pi.y) / 2;
            v = pi.y;
        } else {
            u = pi.x - pi.y;
            v = 2 * pi.y;
        }
    }
    mpz_class w2 = (mpz_class(D) - sigma * sigma) / 4;
    std::vector<std::pair<mpz_class, mpz_class>> cols;
    cols.emplace_back(u, v);                          // pi * 1
    cols.emplace_back(v * w2, u + v * sigma);         // pi * w0
    return hnf2(std::move(cols));
}

mpz_class lift_sqrt_mod_ell_power(long D, long ell, long k, long branch)
{
    mpz_class mod = ell;
    mpz_class s = branch % ell;
    if (s < 0)
        s += ell;
    assert((s * s - D) % ell == 0);
    mpz_class target;
    mpz_pow_ui(target.get_mpz_t(), mpz_class(ell).get_mpz_t(), k);
    while (mod < target) {
        mod = mod * mod;
        if (mod > target)
            mod = target;
        mpz_class inv, twos = 2 * s;
        mpz_invert(inv.get_mpz_t(), twos.get_mpz_t(), mod.get_mpz_t());
        s = (s - (s * s - D) * inv) % mod;
        if (s < 0)
            s += mod;
    }
    // fix parity so that s^2 == D mod 4 ell^k as well
    if ((D % 2 + 2) % 2 != mpz_odd_p(s.get_mpz_t()))
        s += target;
    return s;
}

/* ---------------- matrix-tracked reduction and cycle walk ---------------- */

namespace {

struct TrackedForm {
    mpz_class a, b, c;
    // SL2 columns
    mpz_class p, q, r, s;
    const mpz_class * modulus = nullptr;
    long D;
    long d; // floor sqrt(D)

    bool reduced() const
    {
        mpz_class aa = abs(a);
        return b >= 1 && b <= d && 2 * aa - b <= d && 2 * aa + b >= d + 1;
    }

    void step()
    {
        mpz_class cc = abs(c);
        mpz_class rr;
        if (cc <= d) {
            mpz_class t = (d + b) % (2 * cc);
            if (t < 0)
                t += 2 * cc;
            rr = d - t;
        } else {
            rr = (-b) % (2 * cc);
            if (rr < 0)
                rr += 2 * cc;
            if (rr > cc)
                rr -= 2 * cc;
        }
        mpz_class t = (b + rr) / (2 * c);
        mpz_class na = c, nb = rr, nc = (rr * rr - D) / (4 * c);
        a = na;
        b = nb;
        c = nc;
        // M <- M * [[0,-1],[1,t]]
        mpz_class np = q, nq = -p + t * q;
        mpz_class nr = s, ns = -r + t * s;
        p = np;
        q = nq;
        r = nr;
        s = ns;
        if (modulus) {
            p %= *modulus;
            q %= *modulus;
            r %= *modulus;
            s %= *modulus;
        }
    }
};

} // namespace

std::optional<WalkResult> reduce_to_unit_form(long D, const mpz_class & a,
                                              const mpz_class & b,
                                              const mpz_class & modulus)
{
    TrackedForm f;
    f.D = D;
    f.d = sqrt_floor(D);
    f.a = a;
    f.b = b;
    f.c = (b * b - D) / (4 * a);
    f.p = 1;
    f.q = 0;
    f.r = 0;
    f.s = 1;
    f.modulus = (modulus != 0) ? &modulus : nullptr;

    auto hit = [&]() -> std::optional<WalkResult> {
        if (f.a == 1 || f.a == -1)
            return WalkResult{ f.p, f.r, f.a == 1 ? 1 : -1 };
        return std::nullopt;
    };

    if (auto w = hit())
        return w;
    while (!f.reduced()) {
        f.step();
        if (auto w = hit())
            return w;
    }
    mpz_class a0 = f.a, b0 = f.b;
    while (true) {
        f.step();
        if (auto w = hit())
            return w;
        if (f.a == a0 && f.b == b0)
            return std::nullopt; // cycle closed: not principal
    }
}

/* ---------------- prime above ell, orders ---------------- */

IdealRep prime_above(const FieldSpec & spec, long ell)
{
    if (!splits(spec.m, ell))
        throw ramified_or_inert();
    // smallest positive square root of D mod ell, then the 0 < b < 2 ell
    // representative of the right parity
    long r = 0;
    for (long x = 1; x < ell; ++x)
        if ((x * x - spec.D) % ell == 0) {
            r = x;
            break;
        }
    long b = r;
    if ((spec.D % 2 + 2) % 2 != (b % 2))
        b += ell; // ell odd flips parity
    return { ell, b, 1 };
}

long class_order(const FieldSpec & spec, const IdealRep & ideal)
{
    FormClassGroup G(spec.D);
    mpz_class c = (ideal.b * ideal.b - spec.D) / (4 * ideal.a);
    Form f{ mpz_get_si(ideal.a.get_mpz_t()), mpz_get_si(ideal.b.get_mpz_t()),
            mpz_get_si(c.get_mpz_t()) };
    return G.wide_order(G.class_of(f));
}

long ell_part_order(const FieldSpec & spec, const IdealRep & ideal, long ell)
{
    long c = class_order(spec, ideal);
    long e = 1;
    while (c % ell == 0) {
        c /= ell;
        e *= ell;
    }
    return e;
}

EllClassData ell_class_data(const FieldSpec & spec, long ell,
                            const FormClassGroup & G)
{
    IdealRep l = prime_above(spec, ell);
    mpz_class cc = (l.b * l.b - spec.D) / (4 * l.a);
    Form f{ mpz_get_si(l.a.get_mpz_t()), mpz_get_si(l.b.get_mpz_t()),
            mpz_get_si(cc.get_mpz_t()) };
    long c = G.wide_order(G.class_of(f));
    long h = G.class_count();
    long h_ell = 1;
    while (h % ell == 0) {
        h /= ell;
        h_ell *= ell;
    }
    long ord_l = 1, c2 = c;
    while (c2 % ell == 0) {
        c2 /= ell;
        ord_l *= ell;
    }
    return { h_ell, ord_l, h_ell == ord_l, ord_l == 1, G.class_count(), c };
}

EllClassData ell_class_data(const FieldSpec & spec, long ell)
{
    FormClassGroup G(spec.D);
    return ell_class_data(spec, ell, G);
}

/* ---------------- class group structure ---------------- */

namespace {

/* basis of the p-Sylow subgroup of the class group, by greedy maximal
 * image order, with generators corrected to split off as direct factors */
struct SylowBasis {
    std::vector<int> gens;
    std::vector<long> orders; // p-powers, non-increasing
};

SylowBasis sylow_basis(const FormClassGroup & G, long p)
{
    long h = G.class_count();
    long pv = 1, cof = h;
    while (cof % p == 0) {
        cof /= p;
        pv *= p;
    }
    std::vector<int> S;
    {
        std::vector<char> seen(h, 0);
        for (int i = 0; i < h; ++i) {
            int x = G.power(i, cof);
            if (!seen[x]) {
                seen[x] = 1;
                S.push_back(x);
            }
        }
    }
    SylowBasis bs;
    // span: element -> exponent vector over current basis
    std::unordered_map<int, std::vector<long>> span;
    span.emplace(G.principal(), std::vector<long>{});

    auto rebuild_span = [&]() {
        span.clear();
        std::vector<long> idx(bs.gens.size(), 0);
        while (true) {
            int e = G.principal();
            for (size_t i = 0; i < bs.gens.size(); ++i)
                e = G.compose(e, G.power(bs.gens[i], idx[i]));
            span.emplace(e, idx);
            size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < bs.orders[i])
                    break;
                idx[i] = 0;
            }
            if (i == idx.size())
                break;
        }
    };

    while ((long)span.size() < (long)S.size()) {
        // element with maximal order in the quotient by the current span
        int best = -1;
        long bestq = 0;
        for (int x : S) {
            if (span.count(x))
                continue;
            long q = 1;
            int y = x;
            while (!span.count(y)) {
                y = G.power(y, p);
                q *= p;
            }
            if (q > bestq) {
                bestq = q;
                best = x;
            }
        }
        // correct best so its order equals its image order: find f with
        // prod g_i^(q f_i) = best^q, then divide it out
        int target = G.power(best, bestq);
        int z = best;
        if (target != G.principal()) {
            bool found = false;
            for (auto & [e, idx] : span) {
                int t = G.principal();
                for (size_t i = 0; i < idx.size(); ++i)
                    t = G.compose(t, G.power(bs.gens[i],
                                             idx[i] * bestq % bs.orders[i]));
                if (t == target) {
                    int corr = G.principal();
                    for (size_t i = 0; i < idx.size(); ++i)
                        if (idx[i] != 0)
                            corr = G.compose(
                                corr,
                                G.power(bs.gens[i], bs.orders[i] - idx[i]));
                    z = G.compose(best, corr);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw quadfield_error("quadfield: sylow basis correction failed");
        }
        if (G.power(z, bestq) != G.principal())
            throw quadfield_error("quadfield: sylow generator order mismatch");
        bs.gens.push_back(z);
        bs.orders.push_back(bestq);
        rebuild_span();
    }
    return bs;
}

} // namespace

ClassGroupData class_group(const FieldSpec & spec)
{
    FormClassGroup G(spec.D);
    long h_narrow = G.class_count();

    std::vector<std::pair<long, int>> fac;
    factorize(h_narrow, fac);
    std::vector<SylowBasis> bases;
    size_t rank = 0;
    for (auto & [p, e] : fac) {
        bases.push_back(sylow_basis(G, p));
        rank = std::max(rank, bases.back().gens.size());
    }
    ClassGroupData out;
    out.h_narrow = h_narrow;
    long check = 1;
    for (size_t i = 0; i < rank; ++i) {
        long d = 1;
        int g = G.principal();
        for (auto & b : bases) {
            if (i < b.gens.size()) {
                d *= b.orders[i];
                g = G.compose(g, b.gens[i]);
            }
        }
        out.cyclic_orders.push_back(d);
        out.generators.push_back(G.representative(g));
        check *= d;
    }
    if (check != h_narrow)
        throw quadfield_error("quadfield: invariant factors do not multiply to h");

    // wide class number from the norm of the fundamental unit
    FundamentalUnitMod u = fundamental_unit_mod(spec.m, 4);
    if (u.norm == -1) {
        out.h = h_narrow;
    } else {
        if (h_narrow % 2 != 0)
            throw quadfield_error("quadfield: norm +1 forces even narrow h");
        out.h = h_narrow / 2;
    }
    return out;
}

/* ---------------- principal generators ---------------- */

QuadElement principal_generator(const FieldSpec & spec, const IdealRep & ideal,
                                long k)
{
    long D = spec.D;
    // exact ideal power
    mpz_class A = ideal.a, B = ideal.b, content = 1;
    {
        mpz_class twoa = 2 * A;
        mpz_fdiv_r(B.get_mpz_t(), B.get_mpz_t(), twoa.get_mpz_t());
    }
    mpz_class Ak = A, Bk = B;
    for (long i = 1; i < k; ++i) {
        IdealProduct pr = multiply_primitive(D, Ak, Bk, A, B);
        Ak = pr.a;
        Bk = pr.b;
        content *= pr.content;
    }
    for (long i = 0; i < k; ++i)
        content *= ideal.content;

    auto w = reduce_to_unit_form(D, Ak, Bk, 0);
    if (!w)
        throw not_principal();

    // pi = A p + r (B + sqrt(D))/2 generates the primitive part
    QuadElement pi;
    if (D == 4 * spec.m) {
        pi.x = Ak * w->p + w->r * (Bk / 2);
        pi.y = w->r;
        pi.den = 1;
    } else {
        pi.x = 2 * Ak * w->p + w->r * Bk;
        pi.y = w->r;
        pi.den = 2;
        if (mpz_even_p(pi.x.get_mpz_t()) && mpz_even_p(pi.y.get_mpz_t())) {
            pi.x /= 2;
            pi.y /= 2;
            pi.den = 1;
        }
    }
    pi.x *= content;
    pi.y *= content;

    // exact verification: (pi) == ideal^k as Z-modules
    IdealRep Ik{ Ak, Bk, content };
    if (!(principal_hnf(D, pi, spec.m) == ideal_hnf(D, Ik)))
        throw not_principal();
    return pi;
}

} // namespace logclass
