use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gf::{Elem, Gf};
use super::upoly::UniPoly;
use crate::arith::mul_mod;
use crate::error::{Error, Result};

/// A field embedding `small -> big`, determined by the image of the
/// generator of `small` (the least root of its modulus in `big`).
#[derive(Clone, Debug)]
pub struct Embedding {
    small: Gf,
    big: Gf,
    /// Images of `1, X, X^2, ...` of the small field.
    basis: Vec<Elem>,
    solver: DigitSolver,
}

impl Embedding {
    pub fn new(small: &Gf, big: &Gf) -> Result<Embedding> {
        let p = small.characteristic();
        if p != big.characteristic() || !big.degree().is_multiple_of(small.degree()) {
            return Err(Error::FieldMismatch(small.spec_string(), big.spec_string()));
        }
        let m = small.degree() as usize;
        let image = if m == 1 {
            Elem::ONE
        } else {
            let poly = UniPoly::new(small.modulus().iter().map(|&c| big.from_u64(c)).collect());
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            *poly
                .roots(big, &mut rng)
                .first()
                .ok_or_else(|| Error::Inconsistent("modulus has no root in the larger field".into()))?
        };
        let mut basis = Vec::with_capacity(m);
        let mut pw = Elem::ONE;
        for _ in 0..m {
            basis.push(pw);
            pw = big.mul(pw, image);
        }
        let solver = DigitSolver::new(&basis, big);
        Ok(Embedding {
            small: small.clone(),
            big: big.clone(),
            basis,
            solver,
        })
    }

    pub fn small(&self) -> &Gf {
        &self.small
    }

    pub fn big(&self) -> &Gf {
        &self.big
    }

    pub fn embed(&self, a: Elem) -> Elem {
        if self.small.degree() == 1 {
            return self.big.from_u64(a.0);
        }
        let big = &self.big;
        self.small
            .coeffs(a)
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| **c != 0)
            .fold(Elem::ZERO, |acc, (&c, &b)| big.add(acc, big.mul(big.from_u64(c), b)))
    }

    /// Preimage of an element of the image subfield, `None` otherwise.
    pub fn preimage(&self, b: Elem) -> Option<Elem> {
        let coeffs = self.solver.solve(b, &self.big);
        let a = self.small.from_coeffs(&coeffs).ok()?;
        (self.embed(a) == b).then_some(a)
    }

    pub fn embed_poly(&self, a: &UniPoly) -> UniPoly {
        UniPoly::new(a.coeffs.iter().map(|&c| self.embed(c)).collect())
    }
}

/// Expresses elements of a field in a `GF(p)`-independent family of
/// elements: picks `m` independent digit rows and inverts that submatrix.
/// `solve` returns the unique coefficients when the element lies in the
/// span (callers re-check membership).
#[derive(Clone, Debug)]
pub struct DigitSolver {
    pivots: Vec<usize>,
    inv: Vec<Vec<u64>>,
}

impl DigitSolver {
    pub fn new(basis: &[Elem], big: &Gf) -> DigitSolver {
        let (pivots, inv) = pivot_inverse(basis, big);
        DigitSolver { pivots, inv }
    }

    pub fn solve(&self, b: Elem, big: &Gf) -> Vec<u64> {
        let p = big.characteristic();
        let digits = big.coeffs(b);
        let rhs: Vec<u64> = self.pivots.iter().map(|&r| digits[r]).collect();
        self.inv
            .iter()
            .map(|row| row.iter().zip(&rhs).fold(0u64, |acc, (&a, &x)| (acc + mul_mod(a, x, p)) % p))
            .collect()
    }
}

fn pivot_inverse(basis: &[Elem], big: &Gf) -> (Vec<usize>, Vec<Vec<u64>>) {
    let p = big.characteristic();
    let m = basis.len();
    let n = big.degree() as usize;
    // rows: digit index r, columns: basis index j
    let cols: Vec<Vec<u64>> = basis.iter().map(|&b| big.coeffs(b)).collect();
    let mut pivots = Vec::new();
    let mut reduced: Vec<Vec<u64>> = Vec::new();
    for r in 0..n {
        let mut row: Vec<u64> = (0..m).map(|j| cols[j][r]).collect();
        for prow in reduced.iter() {
            let lead = pivot_col(prow).unwrap();
            if row[lead] != 0 {
                let c = row[lead];
                for j in 0..m {
                    row[j] = (row[j] + mul_mod(p - c, prow[j], p)) % p;
                }
            }
        }
        if let Some(lead) = pivot_col(&row) {
            let inv = crate::arith::pow_mod(row[lead], p - 2, p);
            for x in row.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            for prow in reduced.iter_mut() {
                let c = prow[lead];
                if c != 0 {
                    for j in 0..m {
                        prow[j] = (prow[j] + mul_mod(p - c, row[j], p)) % p;
                    }
                }
            }
            reduced.push(row);
            pivots.push(r);
            if pivots.len() == m {
                break;
            }
        }
    }
    assert_eq!(pivots.len(), m, "basis images are independent");
    // invert the square submatrix S (rows = pivots) by Gauss-Jordan
    let mut aug: Vec<Vec<u64>> = pivots
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut v: Vec<u64> = (0..m).map(|j| cols[j][r]).collect();
            v.extend((0..m).map(|k| u64::from(k == i)));
            v
        })
        .collect();
    for c in 0..m {
        let piv = (c..m).find(|&i| aug[i][c] != 0).expect("invertible");
        aug.swap(c, piv);
        let inv = crate::arith::pow_mod(aug[c][c], p - 2, p);
        for x in aug[c].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..m {
            if i != c && aug[i][c] != 0 {
                let f = aug[i][c];
                let pivot_row = aug[c].clone();
                for (x, y) in aug[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + mul_mod(p - f, *y, p)) % p;
                }
            }
        }
    }
    let inv = aug.into_iter().map(|r| r[m..].to_vec()).collect();
    (pivots, inv)
}

fn pivot_col(row: &[u64]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_into_gf16_is_a_homomorphism() {
        let small = Gf::new(2, 2).unwrap();
        let big = Gf::new(2, 4).unwrap();
        let e = Embedding::new(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.embed(small.mul(a, b)), big.mul(e.embed(a), e.embed(b)));
                assert_eq!(e.embed(small.add(a, b)), big.add(e.embed(a), e.embed(b)));
            }
            assert_eq!(e.preimage(e.embed(a)), Some(a));
        }
        let outside = big.elements().filter(|&x| !big.in_subfield(x, 2)).count();
        assert_eq!(outside, 12);
        assert!(big.elements().filter(|&x| !big.in_subfield(x, 2)).all(|x| e.preimage(x).is_none()));
    }
}
