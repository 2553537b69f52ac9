#ifndef LOGCLASS_INTMAT_HPP
#define LOGCLASS_INTMAT_HPP

#include <gmpxx.h>

#include <vector>

namespace logclass {

/* dense row-major matrices over Z, sized for small module presentations */
using Mat = std::vector<std::vector<mpz_class>>;

Mat mat_identity(size_t n);

/* product, entries reduced mod `mod` when nonzero */
Mat mat_mul(const Mat & a, const Mat & b, const mpz_class & mod = 0);
Mat mat_add(const Mat & a, const Mat & b, const mpz_class & mod = 0);
Mat mat_pow(const Mat & a, const mpz_class & e, const mpz_class & mod = 0);

/* exact determinant (fraction-free elimination) */
mpz_class mat_det(const Mat & a);

/*
 * Index of the column span of an n x m matrix (m >= n) in Z^n, via
 * column Hermite reduction; returns 0 when the span has rank < n.
 */
mpz_class lattice_index(const Mat & cols);

} // namespace logclass

#endif
