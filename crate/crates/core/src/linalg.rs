//! Exact linear algebra over a [`Gf`]: 3x3 helpers for collineations and a
//! row-reduction nullspace for interpolation systems.

use crate::error::{Error, Result};
use crate::fields::{Elem, Gf};

pub type Mat3 = [[Elem; 3]; 3];

pub fn identity3() -> Mat3 {
    let mut m = [[Elem::ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Elem::ONE;
    }
    m
}

pub fn diag3(d: [Elem; 3]) -> Mat3 {
    let mut m = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        m[i][i] = d[i];
    }
    m
}

pub fn mul3(f: &Gf, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = f.sum((0..3).map(|k| f.mul(a[i][k], b[k][j])));
        }
    }
    m
}

/// Row vector times matrix.
pub fn vec_mul3(f: &Gf, v: &[Elem; 3], m: &Mat3) -> [Elem; 3] {
    let mut out = [Elem::ZERO; 3];
    for (j, o) in out.iter_mut().enumerate() {
        *o = f.sum((0..3).map(|k| f.mul(v[k], m[k][j])));
    }
    out
}

/// Matrix times column vector.
pub fn mul_vec3(f: &Gf, m: &Mat3, v: &[Elem; 3]) -> [Elem; 3] {
    let mut out = [Elem::ZERO; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = f.sum((0..3).map(|k| f.mul(m[i][k], v[k])));
    }
    out
}

pub fn det3(f: &Gf, m: &Mat3) -> Elem {
    let t = |a: Elem, b: Elem, c: Elem| f.mul(a, f.mul(b, c));
    let pos = f.sum([
        t(m[0][0], m[1][1], m[2][2]),
        t(m[0][1], m[1][2], m[2][0]),
        t(m[0][2], m[1][0], m[2][1]),
    ]);
    let neg = f.sum([
        t(m[0][2], m[1][1], m[2][0]),
        t(m[0][0], m[1][2], m[2][1]),
        t(m[0][1], m[1][0], m[2][2]),
    ]);
    f.sub(pos, neg)
}

pub fn inverse3(f: &Gf, m: &Mat3) -> Result<Mat3> {
    let d = det3(f, m);
    let dinv = f.inv(d).map_err(|_| Error::NotInvertible("singular 3x3 matrix".into()))?;
    let mut out = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of (j, i)
            let (r0, r1) = other_two(j);
            let (c0, c1) = other_two(i);
            let minor = f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
            let cof = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
            out[i][j] = f.mul(cof, dinv);
        }
    }
    Ok(out)
}

fn other_two(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

pub fn transpose3(m: &Mat3) -> Mat3 {
    let mut t = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn map3(m: &Mat3, g: impl Fn(Elem) -> Elem) -> Mat3 {
    let mut out = *m;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = g(*x);
        }
    }
    out
}

/// `Some(lambda)` with `a = lambda * b` when the matrices are proportional
/// by a nonzero scalar.
pub fn proportional3(f: &Gf, a: &Mat3, b: &Mat3) -> Option<Elem> {
    proportional(f, a.iter().flatten().copied(), b.iter().flatten().copied())
}

/// Proportionality test on two equal-length sequences, comparing term
/// ratios without normalizing by a leading entry.
pub fn proportional(f: &Gf, a: impl IntoIterator<Item = Elem>, b: impl IntoIterator<Item = Elem>) -> Option<Elem> {
    let mut ratio: Option<Elem> = None;
    for (x, y) in a.into_iter().zip(b) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let r = f.div(x, y).unwrap();
                match ratio {
                    None => ratio = Some(r),
                    Some(s) if s == r => {}
                    Some(_) => return None,
                }
            }
            _ => return None,
        }
    }
    ratio
}

/// Dense matrix over a field, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let n = rows.len();
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, f: &Gf) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Gf) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right nullspace `{ v : M v = 0 }`, one vector per free
    /// column, each with a 1 in its free position.
    pub fn nullspace(&self, f: &Gf) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[fc] = Elem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, f: &Gf, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows)
            .map(|i| f.sum(self.row(i).iter().zip(v).map(|(&a, &b)| f.mul(a, b))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_3x3() {
        let f = Gf::prime(7).unwrap();
        let m = [[Elem(1), Elem(2), Elem(0)], [Elem(0), Elem(1), Elem(3)], [Elem(4), Elem(0), Elem(1)]];
        let inv = inverse3(&f, &m).unwrap();
        assert_eq!(mul3(&f, &m, &inv), identity3());
        let sing = [[Elem(1), Elem(2), Elem(3)], [Elem(2), Elem(4), Elem(6)], [Elem(0), Elem(0), Elem(1)]];
        assert!(inverse3(&f, &sing).is_err());
    }

    #[test]
    fn nullspace_dimension() {
        let f = Gf::prime(5).unwrap();
        let m = Matrix::from_rows(vec![
            vec![Elem(1), Elem(2), Elem(3), Elem(4)],
            vec![Elem(2), Elem(4), Elem(1), Elem(1)],
        ]);
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(&f, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn proportionality() {
        let f = Gf::prime(7).unwrap();
        let a = identity3();
        let b = map3(&a, |x| f.mul(x, Elem(3)));
        assert_eq!(proportional3(&f, &b, &a), Some(Elem(3)));
        let mut c = b;
        c[0][1] = Elem(1);
        assert_eq!(proportional3(&f, &c, &a), None);
    }
}
