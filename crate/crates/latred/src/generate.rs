//! Deterministic lattice generators: random bases in Hermite normal form
//! (the Goldstein-Mayer shape used by SVP benchmarks) and the critical
//! bases A_n(alpha) that sit exactly on the worst-case reduction bounds.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::basis::{IntBasis, RationalBasis};
use crate::error::{Error, Result};
use crate::rng::Prng64;

/// Random Goldstein-Mayer basis: row 1 = (p, 0, ..., 0) with p the smallest
/// prime at least some uniform `bits`-bit integer, row i = x_i*e_1 + e_i with
/// x_i uniform in [0, p). The lattice volume equals p.
///
/// Pure function of (dim, bits, seed); identical output on every platform.
pub fn gen_random_hnf(dim: usize, bits: u64, seed: u64) -> Result<IntBasis> {
    if dim < 2 {
        return Err(Error::InvalidParams(format!("dim must be >= 2, got {dim}")));
    }
    if !(8..=4096).contains(&bits) {
        return Err(Error::InvalidParams(format!("bits must be in [8, 4096], got {bits}")));
    }
    let mut rng = Prng64::new(seed);
    let r = rng.next_exact_bits(bits);
    let p = next_prime(&r);
    let mut rows = Vec::with_capacity(dim);
    let mut first = vec![BigInt::ZERO; dim];
    first[0] = BigInt::from(p.clone());
    rows.push(first);
    for i in 1..dim {
        let x = rng.next_below(&p);
        let mut row = vec![BigInt::ZERO; dim];
        row[0] = BigInt::from(x);
        row[i] = BigInt::one();
        rows.push(row);
    }
    IntBasis::new(rows)
}

/// Smallest prime >= n.
pub fn next_prime(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u8);
    if *n <= two {
        return two;
    }
    let mut c = n.clone();
    if (&c % 2u8).is_zero() {
        c += 1u8;
    }
    while !is_prime(&c) {
        c += 2u8;
    }
    c
}

const SMALL_PRIMES: [u32; 46] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211,
];

/// Deterministic Miller-Rabin with bases {2,...,37} (proven complete below
/// 3.3 * 10^24), extended by 64 pseudo-random rounds keyed on the candidate
/// for larger inputs.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u8);
    if *n < two {
        return false;
    }
    if *n == two {
        return true;
    }
    if (n % 2u8).is_zero() {
        return false;
    }
    for &sp in SMALL_PRIMES.iter() {
        let spb = BigUint::from(sp);
        if *n == spb {
            return true;
        }
        if (n % sp).is_zero() {
            return false;
        }
    }

    // n - 1 = 2^s * d with d odd
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;

    let fixed: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &a in fixed.iter() {
        if !miller_rabin_round(n, &BigUint::from(a), &d, s, &n_minus_1) {
            return false;
        }
    }
    // Deterministic below ~2^81; add keyed pseudo-random rounds beyond.
    if n.bits() > 81 {
        let key = n.iter_u64_digits().next().unwrap_or(1) ^ 0xA5A5_5A5A_C0FF_EE11;
        let mut rng = Prng64::new(key);
        let span = n - 3u8; // witnesses in [2, n-2]
        for _ in 0..64 {
            let a = rng.next_below(&span) + 2u8;
            if !miller_rabin_round(n, &a, &d, s, &n_minus_1) {
                return false;
            }
        }
    }
    true
}

fn miller_rabin_round(n: &BigUint, a: &BigUint, d: &BigUint, s: u64, n_minus_1: &BigUint) -> bool {
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let mut x = a.modpow(d, n);
    if x.is_one() || x == *n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == *n_minus_1 {
            return true;
        }
    }
    false
}

/// The critical basis A_n(alpha) with alpha = sqrt(3/4).
///
/// Entries mix rational and irrational powers of alpha, so the exact object
/// is the Gram matrix (all entries rational): diagonal 1, and
/// G[i][j] = 1 - (3/4)^min(i,j) / 2 off the diagonal (0-based indices).
/// The numeric form evaluates the matrix itself in f64 for feeding the
/// floating reduction path.
pub struct CriticalBasis {
    /// Exact rational Gram matrix, as rows of the verification carrier.
    pub gram: RationalBasis,
    /// Floating evaluation of A_n(alpha).
    pub numeric: Vec<Vec<f64>>,
}

pub fn gen_critical(dim: usize) -> CriticalBasis {
    assert!(dim >= 2, "critical basis needs dim >= 2");
    let beta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let one = BigRational::one();

    let mut gram = vec![vec![BigRational::zero(); dim]; dim];
    let mut beta_pow = one.clone(); // beta^min(i,j), 0-based
    for k in 0..dim {
        gram[k][k] = one.clone();
        for j in k + 1..dim {
            let v = &one - &beta_pow * &half;
            gram[j][k] = v.clone();
            gram[k][j] = v;
        }
        beta_pow *= &beta;
    }

    let alpha = (3.0f64 / 4.0).sqrt();
    let mut numeric = vec![vec![0.0f64; dim]; dim];
    for i in 0..dim {
        for j in 0..i {
            numeric[i][j] = alpha.powi(j as i32) / 2.0;
        }
        numeric[i][i] = alpha.powi(i as i32);
    }

    CriticalBasis { gram: RationalBasis::new(gram).expect("square gram"), numeric }
}

/// Integer approximation of A_n(alpha), scaled so the smallest diagonal
/// entry carries about 48 significant bits. Relative rounding error is
/// ~2^-49, far below the reduction tolerance, so the scaled basis behaves
/// like the critical basis for every delta <= 0.99 (and for delta = 1 within
/// the floating guard).
pub fn critical_int_basis(dim: usize) -> IntBasis {
    let crit = gen_critical(dim);
    let alpha = (3.0f64 / 4.0).sqrt();
    // alpha^(dim-1) * 2^s >= 2^48
    let extra = ((dim as f64 - 1.0) * (1.0 / alpha).log2()).ceil() as i64;
    let s = 48 + extra;
    let rows = crit
        .numeric
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| {
                    let scaled = x * 2f64.powi(s as i32);
                    BigInt::from((scaled + 0.5).floor() as i128)
                })
                .collect()
        })
        .collect();
    IntBasis::new(rows).expect("valid critical basis")
}

/// Scale exponent used by [`critical_int_basis`]; exposed for diagnostics.
pub fn critical_scale_bits(dim: usize) -> i64 {
    let alpha = (3.0f64 / 4.0).sqrt();
    48 + ((dim as f64 - 1.0) * (1.0 / alpha).log2()).ceil() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn small_primes() {
        let primes: Vec<u32> = (0..60).filter(|&x| is_prime(&BigUint::from(x as u32))).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert_eq!(next_prime(&BigUint::from(90u8)), BigUint::from(97u8));
        assert_eq!(next_prime(&BigUint::from(97u8)), BigUint::from(97u8));
    }

    #[test]
    fn big_prime_roundtrip() {
        // 2^89 - 1 is a Mersenne prime; exercises the keyed extra rounds.
        let m89 = (BigUint::from(1u8) << 89) - 1u8;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m89 + 2u8)));
    }

    #[test]
    fn gen_shape_and_determinism() {
        let b1 = gen_random_hnf(2, 8, 0).unwrap();
        let b2 = gen_random_hnf(2, 8, 0).unwrap();
        assert_eq!(b1, b2);
        let p = b1.row(0)[0].clone();
        assert!(p >= BigInt::from(128) && is_prime(&p.to_biguint().unwrap()));
        let x = &b1.row(1)[0];
        assert!(*x >= BigInt::ZERO && x < &p);
        assert_eq!(b1.row(1)[1], BigInt::one());

        let b3 = gen_random_hnf(2, 8, 1).unwrap();
        assert_ne!(b1, b3);
    }

    #[test]
    fn gen_det_is_p() {
        let b = gen_random_hnf(6, 24, 3).unwrap();
        let det = crate::hnf::bareiss_det(b.rows());
        assert_eq!(det.abs(), b.row(0)[0].clone());
    }

    #[test]
    fn gen_rejects_bad_params() {
        assert!(gen_random_hnf(1, 16, 0).is_err());
        assert!(gen_random_hnf(4, 7, 0).is_err());
        assert!(gen_random_hnf(4, 5000, 0).is_err());
    }

    #[test]
    fn critical_gram_dim2() {
        let c = gen_critical(2);
        let g = c.gram.rows();
        let one = BigRational::one();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(g[0][0], one);
        assert_eq!(g[1][1], one);
        assert_eq!(g[0][1], half);
        assert_eq!(g[1][0], half);
    }

    #[test]
    fn critical_gram_matches_numeric() {
        let c = gen_critical(6);
        for i in 0..6 {
            for j in 0..6 {
                let num: f64 = (0..6).map(|t| c.numeric[i][t] * c.numeric[j][t]).sum();
                let exact: f64 = {
                    let r = &c.gram.rows()[i][j];
                    let n = r.numer().to_string().parse::<f64>().unwrap();
                    let d = r.denom().to_string().parse::<f64>().unwrap();
                    n / d
                };
                assert!((num - exact).abs() < 1e-12, "({i},{j}): {num} vs {exact}");
            }
        }
    }

    #[test]
    fn critical_int_scaled_shape() {
        let b = critical_int_basis(8);
        assert_eq!(b.dim(), 8);
        // First row is (2^s, 0, ..., 0).
        let s = critical_scale_bits(8);
        assert_eq!(b.row(0)[0], BigInt::from(1) << s as u32);
        assert!(b.row(0)[1..].iter().all(|x| x.is_zero()));
        // Smallest diagonal entry still carries ~48 bits.
        assert!(b.row(7)[7].bits() >= 48);
    }
}
