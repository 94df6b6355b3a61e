use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{qf, Q};

/// Half-integral symmetric matrix T, stored as the integral matrix B = 2T.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfIntMat {
    b: Vec<Vec<i64>>,
}

impl HalfIntMat {
    /// Validates B = 2T: square, symmetric, even diagonal.
    pub fn from_twice(b: Vec<Vec<i64>>) -> Result<Self> {
        let g = b.len();
        if g == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        for (i, row) in b.iter().enumerate() {
            if row.len() != g {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has length {} but the matrix has {g} rows",
                    row.len()
                )));
            }
            if row[i] % 2 != 0 {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry 2T[{i}][{i}] = {} is odd; 2T must have even diagonal",
                    row[i]
                )));
            }
            for j in 0..i {
                if b[j][i] != row[j] {
                    return Err(Error::InvalidMatrix(format!(
                        "2T is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(HalfIntMat { b })
    }

    /// T = diag(t), so 2T = diag(2t).
    pub fn diag(t: &[i64]) -> Self {
        let g = t.len();
        let mut b = vec![vec![0; g]; g];
        for (i, &x) in t.iter().enumerate() {
            b[i][i] = 2 * x;
        }
        HalfIntMat { b }
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let b: Vec<Vec<i64>> = serde_json::from_str(s)
            .map_err(|e| Error::InvalidMatrix(format!("expected a JSON integer matrix: {e}")))?;
        Self::from_twice(b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.b).expect("integer matrix serializes")
    }

    pub fn size(&self) -> usize {
        self.b.len()
    }

    /// Entries of 2T.
    pub fn twice(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn entry(&self, i: usize, j: usize) -> Q {
        qf(self.b[i][j], 2)
    }

    /// Gram matrix of T over Q.
    pub fn gram(&self) -> Vec<Vec<Q>> {
        let g = self.size();
        (0..g)
            .map(|i| (0..g).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// det(2T).
    pub fn det2(&self) -> BigInt {
        bareiss(&self.b)
    }

    /// D_T = (-4)^[g/2] det T.
    pub fn d_t(&self) -> BigInt {
        let g = self.size() as u32;
        let num = num_traits::pow(BigInt::from(-4), (g / 2) as usize) * self.det2();
        let den = BigInt::one() << g;
        assert!((&num % &den).is_zero(), "D_T is integral for half-integral T");
        num / den
    }

    pub fn is_positive_definite(&self) -> bool {
        (1..=self.size()).all(|k| self.leading(k).det2().is_positive())
    }

    /// Leading principal k x k block.
    pub fn leading(&self, k: usize) -> HalfIntMat {
        HalfIntMat {
            b: self.b[..k].iter().map(|r| r[..k].to_vec()).collect(),
        }
    }

    /// T[U] = tU T U for an integral matrix U with `size` rows.
    pub fn transform(&self, u: &[Vec<i64>]) -> HalfIntMat {
        let g = self.size();
        let n = u[0].len();
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0i64;
                for k in 0..g {
                    for l in 0..g {
                        s += u[k][i] * self.b[k][l] * u[l][j];
                    }
                }
                out[i][j] = s;
            }
        }
        HalfIntMat { b: out }
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, o: &HalfIntMat) -> HalfIntMat {
        let (g, h) = (self.size(), o.size());
        let mut b = vec![vec![0; g + h]; g + h];
        for i in 0..g {
            b[i][..g].copy_from_slice(&self.b[i]);
        }
        for i in 0..h {
            b[g + i][g..].copy_from_slice(&o.b[i]);
        }
        HalfIntMat { b }
    }

    /// Orthogonal sum of k hyperbolic planes (2T = [[0,1],[1,0]] blocks).
    pub fn hyperbolic(k: usize) -> HalfIntMat {
        let mut b = vec![vec![0; 2 * k]; 2 * k];
        for i in 0..k {
            b[2 * i][2 * i + 1] = 1;
            b[2 * i + 1][2 * i] = 1;
        }
        HalfIntMat { b }
    }
}

impl Serialize for HalfIntMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.b.serialize(s)
    }
}

impl std::fmt::Display for HalfIntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Fraction-free determinant.
pub fn bareiss(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
