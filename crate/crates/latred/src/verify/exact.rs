//! All-integer exact Gram-Schmidt over an exact Gram matrix.
//!
//! Instead of rational GSO this keeps the classical integral data
//!
//! * `d[j]`   - the j-th leading principal minor of the (scaled) Gram matrix,
//! * `lambda[i][j] = mu_{i,j} * d[j+1]` - integral Gram-Schmidt coefficients,
//!
//! computed with exact divisions only. Every derived quantity (`mu`,
//! `||b*_i||^2`, projection norms, potentials) is reconstructed as an exact
//! rational on demand. Rational Gram matrices are scaled to integral ones by
//! the lcm of the denominators; the scale cancels everywhere it must.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::basis::{IntBasis, RationalBasis};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ExactGso {
    n: usize,
    /// Leading principal minors of the scaled Gram matrix; d[0] = 1.
    d: Vec<BigInt>,
    /// lambda[i][j] for j < i.
    lambda: Vec<Vec<BigInt>>,
    /// Gram scale: the stored Gram matrix is `scale` times the true one.
    scale: BigInt,
}

impl ExactGso {
    pub fn from_int_basis(basis: &IntBasis) -> Result<Self> {
        Self::from_scaled_gram(basis.gram(), BigInt::one())
    }

    pub fn from_rational_basis(basis: &RationalBasis) -> Result<Self> {
        Self::from_rational_gram(&basis.gram())
    }

    /// `gram` must be symmetric positive definite (up to rank deficiency,
    /// which is reported as an error).
    pub fn from_rational_gram(gram: &[Vec<BigRational>]) -> Result<Self> {
        let n = gram.len();
        let mut scale = BigInt::one();
        for row in gram {
            assert_eq!(row.len(), n, "square Gram matrix required");
            for x in row {
                scale = scale.lcm(x.denom());
            }
        }
        let scaled: Vec<Vec<BigInt>> = gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.numer() * (&scale / x.denom()))
                    .collect()
            })
            .collect();
        Self::from_scaled_gram(scaled, scale)
    }

    fn from_scaled_gram(gram: Vec<Vec<BigInt>>, scale: BigInt) -> Result<Self> {
        let n = gram.len();
        let mut d: Vec<BigInt> = Vec::with_capacity(n + 1);
        d.push(BigInt::one());
        let mut lambda: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row: Vec<BigInt> = Vec::with_capacity(i);
            for j in 0..=i {
                let mut u = gram[i][j].clone();
                for t in 0..j {
                    let lambda_jt = if j < i { &lambda[j][t] } else { &row[t] };
                    u = (&d[t + 1] * &u - &row[t] * lambda_jt) / &d[t];
                }
                if j < i {
                    row.push(u);
                } else {
                    if u <= BigInt::ZERO {
                        return Err(Error::RankDeficient { row: i + 1 });
                    }
                    d.push(u);
                }
            }
            lambda.push(row);
        }
        Ok(ExactGso { n, d, lambda, scale })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// mu_{i,j} for j < i (0-based), exact.
    pub fn mu(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.lambda[i][j].clone(), self.d[j + 1].clone())
    }

    /// ||b*_i||^2, exact.
    pub fn bstar_sq(&self, i: usize) -> BigRational {
        BigRational::new(self.d[i + 1].clone(), &self.d[i] * &self.scale)
    }

    /// ||pi_k(b_l)||^2 for k <= l (0-based): squared norm of b_l projected
    /// orthogonally to the span of the first k rows.
    pub fn proj_sq(&self, k: usize, l: usize) -> BigRational {
        assert!(k <= l && l < self.n);
        let mut acc = self.bstar_sq(l);
        for t in k..l {
            let mu = self.mu(l, t);
            acc += &mu * &mu * self.bstar_sq(t);
        }
        acc
    }

    /// Exact potential ratio Pot(sigma_{k,l} B) / Pot(B) for k <= l, via the
    /// product of projection quotients.
    pub fn pot_ratio(&self, k: usize, l: usize) -> BigRational {
        assert!(k <= l && l < self.n);
        let mut ratio = BigRational::one();
        let mut proj = self.bstar_sq(l);
        // descending t: proj accumulates ||pi_t(b_l)||^2
        for t in (k..=l).rev() {
            if t < l {
                let mu = self.mu(l, t);
                proj += &mu * &mu * self.bstar_sq(t);
            }
            ratio *= proj.clone() / self.bstar_sq(t);
        }
        ratio
    }

    /// Product of all ||b*_i||^2 = squared volume (Gram determinant).
    pub fn vol_sq(&self) -> BigRational {
        let mut acc = BigRational::one();
        for i in 0..self.n {
            acc *= self.bstar_sq(i);
        }
        acc
    }
}


/// First violated inequality of a reducedness predicate, with 1-based
/// indices and decimal renderings of both sides.
#[derive(Debug, Clone)]
pub struct Violation {
    pub what: &'static str,
    pub k: usize,
    pub l: usize,
    pub lhs: String,
    pub rhs: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} violated at (k, l) = ({}, {}): lhs = {} vs rhs = {}",
            self.what, self.k, self.l, self.lhs, self.rhs
        )
    }
}

fn rational_str(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{} (~{:.6})", x.numer(), x.denom(), rational_f64(x))
    }
}

fn rational_f64(x: &BigRational) -> f64 {
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = (nb.max(db) - 62).max(0);
    let n: f64 = (x.numer() >> shift).to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = (x.denom() >> shift).to_string().parse().unwrap_or(f64::NAN);
    n / d
}

pub fn delta_rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Size reduction: |mu_{i,j}| <= 1/2 for all j < i.
/// Integral form: 2 |lambda_{i,j}| <= d_{j+1}.
pub fn check_size_reduced(gso: &ExactGso) -> Option<Violation> {
    for i in 1..gso.n {
        for j in (0..i).rev() {
            let two_lambda = gso.lambda[i][j].abs() * 2;
            if two_lambda > gso.d[j + 1] {
                return Some(Violation {
                    what: "size reduction |mu| <= 1/2",
                    k: j + 1,
                    l: i + 1,
                    lhs: rational_str(&gso.mu(i, j)),
                    rhs: "1/2".into(),
                });
            }
        }
    }
    None
}

/// Lovasz condition: delta ||pi_k(b_k)||^2 <= ||pi_k(b_{k+1})||^2 for all k.
pub fn check_lovasz(gso: &ExactGso, delta: &BigRational) -> Option<Violation> {
    for k in 0..gso.n - 1 {
        let lhs = delta * gso.bstar_sq(k);
        let rhs = gso.proj_sq(k, k + 1);
        if lhs > rhs {
            return Some(Violation {
                what: "Lovasz condition",
                k: k + 1,
                l: k + 2,
                lhs: rational_str(&lhs),
                rhs: rational_str(&rhs),
            });
        }
    }
    None
}

pub fn check_lll_reduced(gso: &ExactGso, delta: &BigRational) -> Option<Violation> {
    check_size_reduced(gso).or_else(|| check_lovasz(gso, delta))
}

/// Deep-insertion condition with blocksize beta:
/// delta ||pi_k(b_k)||^2 <= ||pi_k(b_l)||^2 for all k < l with
/// k <= beta or l - k <= beta (1-based k).
pub fn check_deep_reduced(gso: &ExactGso, delta: &BigRational, beta: usize) -> Option<Violation> {
    if let Some(v) = check_size_reduced(gso) {
        return Some(v);
    }
    for l in 1..gso.n {
        let mut proj = gso.bstar_sq(l);
        for k in (0..l).rev() {
            let mu = gso.mu(l, k);
            proj += &mu * &mu * gso.bstar_sq(k);
            let allowed = (k + 1) <= beta || (l - k) <= beta;
            if !allowed {
                continue;
            }
            let lhs = delta * gso.bstar_sq(k);
            if lhs > proj {
                return Some(Violation {
                    what: "deep insertion condition",
                    k: k + 1,
                    l: l + 1,
                    lhs: rational_str(&lhs),
                    rhs: rational_str(&proj),
                });
            }
        }
    }
    None
}

/// Potential condition: delta Pot(B) <= Pot(sigma_{k,l} B) for all k < l,
/// i.e. delta <= prod_{i=k}^{l-1} ||pi_i(b_l)||^2 / ||b*_i||^2.
pub fn check_pot_reduced(gso: &ExactGso, delta: &BigRational) -> Option<Violation> {
    if let Some(v) = check_size_reduced(gso) {
        return Some(v);
    }
    for l in 1..gso.n {
        let mut proj = gso.bstar_sq(l);
        let mut ratio = BigRational::one();
        for k in (0..l).rev() {
            let mu = gso.mu(l, k);
            proj += &mu * &mu * gso.bstar_sq(k);
            ratio *= proj.clone() / gso.bstar_sq(k);
            if *delta > ratio {
                return Some(Violation {
                    what: "potential condition",
                    k: k + 1,
                    l: l + 1,
                    lhs: rational_str(delta),
                    rhs: rational_str(&ratio),
                });
            }
        }
    }
    None
}

/// Exact potential of an integer basis: product of the leading principal
/// Gram minors d_1 * d_2 * ... * d_n.
pub fn potential_exact(basis: &IntBasis) -> Result<BigRational> {
    let gso = ExactGso::from_int_basis(basis)?;
    let mut pot = BigInt::one();
    for j in 1..=gso.n {
        pot *= &gso.d[j];
    }
    Ok(BigRational::from_integer(pot))
}

/// Natural log of the potential, from the same exact minors.
pub fn log_potential_exact(basis: &IntBasis) -> Result<f64> {
    let gso = ExactGso::from_int_basis(basis)?;
    Ok((1..=gso.n).map(|j| ln_bigint(&gso.d[j])).sum())
}

/// ln of a positive big integer via its top bits.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    let bits = x.bits();
    if bits <= 62 {
        let v: f64 = x.to_string().parse().unwrap();
        return v.ln();
    }
    let shift = bits - 62;
    let top: f64 = (x >> shift).to_string().parse().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gso_of(rows: &[&[i64]]) -> ExactGso {
        ExactGso::from_int_basis(&IntBasis::from_i64(rows)).unwrap()
    }

    #[test]
    fn lambda_gso_small_example() {
        let g = gso_of(&[&[2, 0], &[1, 1]]);
        assert_eq!(g.mu(1, 0), delta_rational(1, 2));
        assert_eq!(g.bstar_sq(0), delta_rational(4, 1));
        assert_eq!(g.bstar_sq(1), delta_rational(1, 1));
        // ||pi_0(b_1)||^2 = ||b_1||^2 = 2
        assert_eq!(g.proj_sq(0, 1), delta_rational(2, 1));
    }

    #[test]
    fn rank_deficiency_detected() {
        let b = IntBasis::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            ExactGso::from_int_basis(&b),
            Err(Error::RankDeficient { row: 2 })
        ));
    }

    #[test]
    fn identity_is_everything_reduced() {
        let g = gso_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let one = BigRational::one();
        assert!(check_lll_reduced(&g, &one).is_none());
        assert!(check_deep_reduced(&g, &one, 3).is_none());
        assert!(check_pot_reduced(&g, &one).is_none());
    }

    #[test]
    fn unreduced_example_fails_lovasz() {
        // 0.99 * 4 > 2
        let g = gso_of(&[&[2, 0], &[1, 1]]);
        let delta = delta_rational(99, 100);
        let v = check_lovasz(&g, &delta).expect("violation");
        assert_eq!((v.k, v.l), (1, 2));
        assert!(check_size_reduced(&g).is_none());
    }

    #[test]
    fn potential_small_values() {
        let id3 = IntBasis::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(potential_exact(&id3).unwrap(), BigRational::one());

        let b = IntBasis::from_i64(&[&[2, 0], &[1, 1]]);
        assert_eq!(potential_exact(&b).unwrap(), BigRational::from_integer(16.into()));
        let sigma_b = IntBasis::from_i64(&[&[1, 1], &[2, 0]]);
        assert_eq!(potential_exact(&sigma_b).unwrap(), BigRational::from_integer(8.into()));
        // ... consistent with the exact ratio from the GSO of b:
        let g = ExactGso::from_int_basis(&b).unwrap();
        assert_eq!(g.pot_ratio(0, 1), delta_rational(1, 2));
    }

    #[test]
    fn potential_two_formulas_agree() {
        let mut rng = crate::rng::Prng64::new(11);
        for _ in 0..20 {
            let rows: Vec<Vec<BigInt>> = (0..5)
                .map(|_| (0..5).map(|_| BigInt::from(rng.next_range_i64(-30, 30))).collect())
                .collect();
            let Ok(b) = IntBasis::new(rows) else { continue };
            let Ok(gso) = ExactGso::from_int_basis(&b) else { continue };
            let pot = potential_exact(&b).unwrap();
            // Pot = prod ||b*_i||^{2(n-i)} with 0-based i
            let mut alt = BigRational::one();
            for i in 0..5 {
                let e = (5 - i) as i32;
                let b2 = gso.bstar_sq(i);
                let mut p = BigRational::one();
                for _ in 0..e {
                    p *= &b2;
                }
                alt *= p;
            }
            assert_eq!(pot, alt);
        }
    }

    #[test]
    fn critical_basis_exact_properties() {
        // mu = 1/2 everywhere, ||b*_j||^2 = (3/4)^j, and every projection
        // quotient equals one.
        for n in 2..=8usize {
            let crit = crate::generate::gen_critical(n);
            let gso = ExactGso::from_rational_gram(&crit.gram.gram()).unwrap();
            let half = delta_rational(1, 2);
            let beta = delta_rational(3, 4);
            let mut pw = BigRational::one();
            for i in 0..n {
                assert_eq!(gso.bstar_sq(i), pw, "bstar {i} at n={n}");
                pw *= &beta;
                for j in 0..i {
                    assert_eq!(gso.mu(i, j), half);
                }
            }
            let one = BigRational::one();
            for l in 0..n {
                for k in 0..=l {
                    assert_eq!(gso.pot_ratio(k, l), one, "ratio ({k},{l}) at n={n}");
                }
            }
            assert!(check_deep_reduced(&gso, &one, n).is_none());
            assert!(check_pot_reduced(&gso, &one).is_none());
            assert!(check_lll_reduced(&gso, &one).is_none());
        }
    }

    #[test]
    fn critical_gram_gso_values_dim3() {
        let crit = crate::generate::gen_critical(3);
        let gso = ExactGso::from_rational_gram(&crit.gram.gram()).unwrap();
        assert_eq!(gso.mu(2, 0), delta_rational(1, 2));
        assert_eq!(gso.mu(2, 1), delta_rational(1, 2));
        assert_eq!(gso.bstar_sq(2), delta_rational(9, 16));
    }
}
