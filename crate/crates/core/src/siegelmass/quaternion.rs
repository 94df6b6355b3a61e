//! Maximal orders in definite quaternion algebras ramified at one prime.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, kronecker, q, qf, Q};

/// The algebra (a, b): i² = a, j² = b, ij = -ji = k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuatAlgebra {
    pub a: i64,
    pub b: i64,
}

/// Coordinates in the basis 1, i, j, k.
pub type Quat = [Q; 4];

impl QuatAlgebra {
    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let (a, b) = (q(self.a), q(self.b));
        let ab = &a * &b;
        [
            &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3],
            &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2],
            &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1],
            &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
        ]
    }

    /// Trd(x conj(y)).
    pub fn trace_pairing(&self, x: &Quat, y: &Quat) -> Q {
        let (a, b) = (q(self.a), q(self.b));
        q(2) * (&x[0] * &y[0] - &a * &x[1] * &y[1] - &b * &x[2] * &y[2] + &a * &b * &x[3] * &y[3])
    }

    pub fn nrd(&self, x: &Quat) -> Q {
        self.trace_pairing(x, x) / q(2)
    }
}

/// Solve x = sum c_i basis_i over Q.
fn coordinates(basis: &[Quat; 4], x: &Quat) -> Result<[Q; 4]> {
    // augmented 4x5 system with the basis vectors as columns
    let mut m: Vec<Vec<Q>> = (0..4)
        .map(|r| {
            let mut row: Vec<Q> = (0..4).map(|c| basis[c][r].clone()).collect();
            row.push(x[r].clone());
            row
        })
        .collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, piv);
        let inv = Q::one() / &m[col][col];
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..4 {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..5 {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Ok([m[0][4].clone(), m[1][4].clone(), m[2][4].clone(), m[3][4].clone()])
}

/// A Z-order given by a basis of the algebra.
#[derive(Clone, Debug)]
pub struct QuatOrder {
    pub algebra: QuatAlgebra,
    pub basis: [Quat; 4],
}

impl QuatOrder {
    /// Maximal order of the definite algebra ramified exactly at p.
    pub fn maximal(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadPrime(p, "not a prime"));
        }
        let h = qf(1, 2);
        let f = qf(1, 4);
        let z = Q::zero;
        let o = Q::one;
        let pi = p as i64;
        let (algebra, basis) = if p == 2 {
            (
                QuatAlgebra { a: -1, b: -1 },
                [
                    [o(), z(), z(), z()],
                    [z(), o(), z(), z()],
                    [z(), z(), o(), z()],
                    [h.clone(), h.clone(), h.clone(), h.clone()],
                ],
            )
        } else if p % 4 == 3 {
            (
                QuatAlgebra { a: -1, b: -pi },
                [
                    [o(), z(), z(), z()],
                    [z(), o(), z(), z()],
                    [h.clone(), z(), h.clone(), z()],
                    [z(), h.clone(), z(), h.clone()],
                ],
            )
        } else if p % 8 == 5 {
            (
                QuatAlgebra { a: -2, b: -pi },
                [
                    [o(), z(), z(), z()],
                    [h.clone(), z(), h.clone(), h.clone()],
                    [z(), f.clone(), h.clone(), f.clone()],
                    [z(), z(), z(), o()],
                ],
            )
        } else {
            // (-p, -l) with l = 3 mod 4 prime, (p/l) = -1 and r^2 = -p mod l; the last
            // generator is (r j + k)/l
            let l = (3..)
                .step_by(4)
                .find(|&l: &i64| is_prime(l as u64) && kronecker(pi, l) == -1)
                .unwrap();
            let r = (0..l).find(|r| (r * r + pi) % l == 0).unwrap();
            (
                QuatAlgebra { a: -pi, b: -l },
                [
                    [o(), z(), z(), z()],
                    [h.clone(), z(), h.clone(), z()],
                    [z(), h.clone(), z(), h.clone()],
                    [z(), z(), qf(r, l), qf(1, l)],
                ],
            )
        };
        Ok(QuatOrder { algebra, basis })
    }

    /// Twice the Gram matrix of Nrd: entries Trd(b_i conj(b_j)).
    pub fn gram_twice(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = vec![vec![0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let v = self.algebra.trace_pairing(&self.basis[i], &self.basis[j]);
                if !v.is_integer() {
                    return Err(Error::Inconsistent("order is not integral".into()));
                }
                out[i][j] = v.to_integer().try_into().map_err(|_| Error::Inconsistent("overflow".into()))?;
            }
        }
        Ok(out)
    }

    /// Whether every product of basis elements lies in the lattice.
    pub fn is_closed(&self) -> Result<bool> {
        for x in &self.basis {
            for y in &self.basis {
                let c = coordinates(&self.basis, &self.algebra.mul(x, y))?;
                if c.iter().any(|v| !v.is_integer()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
