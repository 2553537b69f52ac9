#include "logclass/intmat.hpp"

#include <cassert>

namespace logclass {

Mat mat_identity(size_t n)
{
    Mat r(n, std::vector<mpz_class>(n, 0));
    for (size_t i = 0; i < n; ++i)
        r[i][i] = 1;
    return r;
}

static void reduce(mpz_class & x, const mpz_class & mod)
{
    if (mod != 0) {
        x %= mod;
        if (x < 0)
            x += mod;
    }
}

Mat mat_mul(const Mat & a, const Mat & b, const mpz_class & mod)
{
    size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    Mat r(n, std::vector<mpz_class>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0)
                continue;
            for (size_t j = 0; j < m; ++j)
                r[i][j] += a[i][t] * b[t][j];
        }
    if (mod != 0)
        for (auto & row : r)
            for (auto & x : row)
                reduce(x, mod);
    return r;
}

Mat mat_add(const Mat & a, const Mat & b, const mpz_class & mod)
{
    Mat r = a;
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = 0; j < r[i].size(); ++j) {
            r[i][j] += b[i][j];
            reduce(r[i][j], mod);
        }
    return r;
}

Mat mat_pow(const Mat & a, const mpz_class & e, const mpz_class & mod)
{
    assert(e >= 0);
    Mat acc = mat_identity(a.size());
    Mat base = a;
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            acc = mat_mul(acc, base, mod);
        base = mat_mul(base, base, mod);
        k >>= 1;
    }
    return acc;
}

mpz_class mat_det(const Mat & a)
{
    size_t n = a.size();
    if (n == 0)
        return 1;
    Mat m = a;
    mpz_class prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && m[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(),
                             prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

mpz_class lattice_index(const Mat & cols)
{
    size_t n = cols.size();
    if (n == 0)
        return 1;
    size_t m = cols[0].size();
    Mat w = cols; // columns indexed by j < m
    mpz_class idx = 1;
    size_t col = 0;
    for (size_t row = 0; row < n; ++row) {
        // gcd-combine all columns >= col into column col on this row
        size_t piv = col;
        while (piv < m && w[row][piv] == 0)
            ++piv;
        if (piv == m)
            return 0;
        for (size_t j = 0; j < n; ++j)
            std::swap(w[j][piv], w[j][col]);
        for (size_t k = col + 1; k < m; ++k) {
            while (w[row][k] != 0) {
                mpz_class q = w[row][col] / w[row][k];
                for (size_t j = 0; j < n; ++j)
                    w[j][col] -= q * w[j][k];
                for (size_t j = 0; j < n; ++j)
                    std::swap(w[j][col], w[j][k]);
            }
        }
        if (w[row][col] < 0)
            for (size_t j = 0; j < n; ++j)
                w[j][col] = -w[j][col];
        idx *= w[row][col];
        ++col;
    }
    return idx;
}

} // namespace logclass
