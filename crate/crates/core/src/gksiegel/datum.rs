use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Nondecreasing exponent tuple (a_1, ..., a_g).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GkDatum(Vec<u32>);

impl GkDatum {
    pub fn new(a: Vec<u32>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidDatum("empty GK tuple".into()));
        }
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidDatum(format!("GK tuple {a:?} is not nondecreasing")));
        }
        Ok(GkDatum(a))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for GkDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Naive extended Gross–Keating datum (a_1..a_g; ε_1..ε_g) for odd p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EgkDatum {
    pub a: GkDatum,
    pub eps: Vec<i8>,
}

impl EgkDatum {
    /// Validates the sign rules: ε_1 = 1, ε_i = ±1 at odd positions, and at even
    /// positions ε_i = 0 exactly when a_1 + ... + a_i is odd.
    pub fn new(a: Vec<u32>, eps: Vec<i8>) -> Result<Self> {
        let a = GkDatum::new(a)?;
        if eps.len() != a.len() {
            return Err(Error::InvalidDatum(format!(
                "{} exponents but {} signs",
                a.len(),
                eps.len()
            )));
        }
        if eps[0] != 1 {
            return Err(Error::InvalidDatum("ε_1 must be 1".into()));
        }
        let mut partial = 0u32;
        for (i, (&ai, &e)) in a.as_slice().iter().zip(&eps).enumerate() {
            partial += ai;
            let pos = i + 1;
            if !(-1..=1).contains(&e) {
                return Err(Error::InvalidDatum(format!("ε_{pos} = {e} is not in {{-1,0,1}}")));
            }
            if pos % 2 == 1 && e == 0 {
                return Err(Error::InvalidDatum(format!("ε_{pos} = 0 at an odd position")));
            }
            if pos % 2 == 0 && (e == 0) != (partial % 2 == 1) {
                return Err(Error::InvalidDatum(format!(
                    "ε_{pos} must be 0 exactly when a_1+...+a_{pos} is odd"
                )));
            }
        }
        Ok(EgkDatum { a, eps })
    }

    /// Parses "a1,...,ag:e2,...,eg" (ε_1 = 1 implied) or "a1,...,ag:e1,...,eg".
    pub fn parse(s: &str) -> Result<Self> {
        let (lhs, rhs) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidDatum(format!("expected 'a1,..:e..', got {s:?}")))?;
        let nums = |t: &str| -> Result<Vec<i64>> {
            t.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidDatum(format!("bad number {x:?}")))
                })
                .collect()
        };
        let a = nums(lhs)?;
        let mut e = nums(rhs)?;
        if a.iter().any(|&x| x < 0) {
            return Err(Error::InvalidDatum("negative exponent".into()));
        }
        if e.len() + 1 == a.len() {
            e.insert(0, 1);
        }
        Self::new(
            a.into_iter().map(|x| x as u32).collect(),
            e.into_iter().map(|x| x as i8).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn exps(&self) -> &[u32] {
        self.a.as_slice()
    }

    /// Last sign: ξ for even length, η for odd length.
    pub fn last_eps(&self) -> i8 {
        *self.eps.last().unwrap()
    }
}

impl fmt::Display for EgkDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.exps().iter().map(|x| x.to_string()).collect();
        let e: Vec<String> = self.eps.iter().map(|x| x.to_string()).collect();
        write!(f, "({};{})", a.join(","), e.join(","))
    }
}

/// Drops the last (a, ε) pair.
pub fn egk_truncate(h: &EgkDatum) -> Result<EgkDatum> {
    if h.len() < 2 {
        return Err(Error::InvalidDatum("cannot truncate a datum of length 1".into()));
    }
    let n = h.len() - 1;
    Ok(EgkDatum {
        a: GkDatum(h.exps()[..n].to_vec()),
        eps: h.eps[..n].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GkDatum::new(vec![0, 1, 1]).is_ok());
        assert!(GkDatum::new(vec![1, 0]).is_err());
        assert!(EgkDatum::new(vec![0, 0, 1, 1], vec![1, -1, -1, 1]).is_ok());
        assert!(EgkDatum::new(vec![0, 1, 1], vec![1, 0, -1]).is_ok());
        // ε_2 = 0 needs a_1 + a_2 odd
        assert!(EgkDatum::new(vec![0, 0, 1], vec![1, 0, -1]).is_err());
        assert!(EgkDatum::new(vec![0, 1, 1], vec![1, -1, -1]).is_err());
        assert!(EgkDatum::new(vec![0, 0, 1], vec![1, -1, 0]).is_err());
        assert!(EgkDatum::new(vec![0, 0], vec![-1, 1]).is_err());
    }

    #[test]
    fn parsing_and_truncation() {
        let h = EgkDatum::parse("0,0,1,1:-1,-1,1").unwrap();
        assert_eq!(h.eps, vec![1, -1, -1, 1]);
        let t = egk_truncate(&h).unwrap();
        assert_eq!(t.to_string(), "(0,0,1;1,-1,-1)");
        let t2 = egk_truncate(&egk_truncate(&t).unwrap()).unwrap();
        assert_eq!(t2.len(), 1);
        assert!(egk_truncate(&t2).is_err());
        assert!(EgkDatum::parse("0,1").is_err());
        assert_eq!(EgkDatum::parse("0,1,1:0,-1").unwrap().eps, vec![1, 0, -1]);
    }
}
