//! Acceptance suites, one per criterion. Each suite runs its checks against
//! an independent route (brute force, closed values, a second formula) and
//! reports counts instead of panicking.

use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::{interpolate_f, series_f_at, DEFAULT_MAX_OPS};
use crate::eisenstein::{
    admissible_data, conjecture51_check, cor52_bounds, cor52_datum, prop51_prefactor, thm12_decompose,
    thm51_value, triple_intersection,
};
use crate::error::{Error, Result};
use crate::exactnum::{q, qf, qpow, Q};
use crate::gksiegel::{
    anisotropic_ternary, lemma53_value, ternary_f, theorem41_check, EgkDatum, ThirdSumLimit,
};
use crate::localform::{local_invariants, nonresidue, HalfIntMat};
use crate::siegelmass::{automorphism_count, build_maximal_order, mass_maximal_order, siegel_product_quaternary, sublattice_family};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub max_ops: u128,
    pub seed: u64,
    /// random (a_1, a_2, a_3) triples for the ternary closed value
    pub lemma_samples: usize,
    pub cor52_primes: Vec<u64>,
    pub max_a: u32,
    pub triples: Vec<[i64; 3]>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_ops: DEFAULT_MAX_OPS,
            seed: 20240601,
            lemma_samples: 64,
            cor52_primes: vec![3, 5, 7, 11],
            max_a: 5,
            triples: vec![[1, 1, 1], [2, 3, 4]],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub criterion: u8,
    pub name: String,
    pub pass: bool,
    pub checks: usize,
    pub failed: usize,
    /// first few failing cases
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    /// wall time, left out of serialized output so reports are reproducible
    #[serde(skip)]
    pub millis: u128,
}

const MAX_LISTED: usize = 12;

struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failed: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(what());
            }
        }
    }

    /// An error counts as a failed check.
    fn check_res(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                let w = what();
                self.check(false, || format!("{w}: {e}"));
            }
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

pub const SUITES: [(u8, &str); 9] = [
    (1, "prefactor"),
    (2, "lemma53"),
    (3, "thm41"),
    (4, "fpoly"),
    (5, "mass"),
    (6, "thm12"),
    (7, "cor52"),
    (8, "conj51"),
    (9, "triple"),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.1).collect()
}

/// Runs one suite by name or criterion number.
pub fn run_suite(which: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let (n, name) = SUITES
        .iter()
        .copied()
        .find(|(n, s)| *s == which || n.to_string() == which)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {which}; known: {}", suite_names().join(", "))))?;
    let start = Instant::now();
    let mut t = Tally::new();
    match n {
        1 => prefactor(&mut t),
        2 => lemma53(&mut t, cfg),
        3 => thm41(&mut t, cfg),
        4 => fpoly(&mut t, cfg),
        5 => mass(&mut t, cfg),
        6 => thm12(&mut t, cfg),
        7 => cor52(&mut t, cfg),
        8 => conj51(&mut t, cfg),
        _ => triple(&mut t, cfg),
    }
    Ok(SuiteReport {
        criterion: n,
        name: name.to_string(),
        pass: t.failed == 0 && t.checks > 0,
        checks: t.checks,
        failed: t.failed,
        failures: t.failures,
        notes: t.notes,
        millis: start.elapsed().as_millis(),
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, s)| run_suite(s, cfg).expect("known suite")).collect()
}

fn prefactor(t: &mut Tally) {
    let pre = prop51_prefactor(4);
    t.check(pre.as_ref().ok() == Some(&q(-1152)), || format!("prefactor(4) = {pre:?}"));
    // 2^7 3^2 is twice the 2^6 3^2 in thm51_value, the factor 2 of R = 2R'
    t.check(q(2) * q(576) == q(1152), || "2 * 2^6 3^2 != 2^7 3^2".into());
    t.check(prop51_prefactor(3).is_err(), || "odd g accepted".into());
}

fn lemma53(t: &mut Tally, cfg: &VerifyConfig) {
    for p in [3u64, 5, 7] {
        let pq = q(p as i64);
        let v = lemma53_value(0, 1, 1, p);
        t.check(v.as_ref().ok() == Some(&(q(1) - &pq * &pq)), || format!("(0,1,1) at p={p}: {v:?}"));
        let v = lemma53_value(0, 0, 1, p);
        t.check(v.as_ref().ok() == Some(&q(1)), || format!("(0,0,1) at p={p}: {v:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut off_display = 0;
    let mut explained = 0;
    for _ in 0..cfg.lemma_samples {
        let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let mut a = [rng.gen_range(0..6u32), rng.gen_range(0..6u32), rng.gen_range(0..6u32)];
        a.sort();
        let x = qf(1, p as i64);
        let closed = match lemma53_value(a[0], a[1], a[2], p) {
            Ok(v) => v,
            Err(e) => {
                t.check(false, || format!("{a:?} p={p}: {e}"));
                continue;
            }
        };
        let reading = |limit| -> Result<Q> { ternary_f(&anisotropic_ternary(a[0], a[1], a[2])?, p, limit)?.eval(&x) };
        let sum = reading(ThirdSumLimit::ClosedForm);
        if let Ok(v) = &sum {
            if *v != closed && &closed - v == negative_length_term(a, p) {
                explained += 1;
            }
        }
        t.check_res(sum.map(|v| v == closed), || format!("{a:?} p={p}"));
        if reading(ThirdSumLimit::Display).map(|v| v != closed).unwrap_or(true) {
            off_display += 1;
        }
    }
    t.note(format!(
        "{explained} of {} mismatches are the third sum at a_1 < a_2, a_1 = a_2 mod 2, where the double sum is empty but the closed form keeps its geometric continuation",
        t.failed
    ));
    t.note(format!(
        "closed value differs from the display reading (the one the series oracle confirms) on {off_display} of {} triples",
        cfg.lemma_samples
    ));
}

/// p^{(a_1+3a_2)/2} (p^{a_1+1}-1)(p^{a_1-a_2+1}+1)/(p^2-1) when a_1 < a_2 have
/// equal parity, else 0: the value (1-(-p)^n)/(1+p) keeps at n = a_1-a_2+1 < 0.
fn negative_length_term(a: [u32; 3], p: u64) -> Q {
    if a[0] == a[1] || (a[1] - a[0]) % 2 == 1 {
        return Q::zero();
    }
    let pq = q(p as i64);
    let (a1, a2) = (a[0] as i64, a[1] as i64);
    qpow(&pq, (a1 + 3 * a2) / 2) * (qpow(&pq, a1 + 1) - q(1)) * (qpow(&pq, a1 - a2 + 1) + q(1)) / (&pq * &pq - q(1))
}

fn thm41(t: &mut Tally, cfg: &VerifyConfig) {
    for p in [3u64, 5, 7] {
        let data = match admissible_data(p, cfg.max_a) {
            Ok(d) => d,
            Err(e) => {
                t.check(false, || format!("admissible data at p={p}: {e}"));
                continue;
            }
        };
        for h in data {
            let r = theorem41_check(&h, p, ThirdSumLimit::Display)
                .map(|r| r.value_identity && r.derivative_identity == Some(true) && r.eta_inferred == -1);
            t.check_res(r, || format!("{h} p={p}"));
        }
    }
}

fn fpoly(t: &mut Tally, cfg: &VerifyConfig) {
    for p in [2u64, 3, 5] {
        let units: Vec<i64> = if p == 2 { vec![1, 3, 5, 7] } else { vec![1, nonresidue(p)] };
        let pi = p as i64;
        for a in 0..=3u32 {
            for b in a..=3 - a {
                for &u in &units {
                    for &v in &units {
                        if a == b && v < u {
                            continue;
                        }
                        let m = HalfIntMat::diag(&[u * pi.pow(a), v * pi.pow(b)]);
                        let r = (|| -> Result<bool> {
                            let e = local_invariants(&m, p)?.e as usize;
                            let s = series_f_at(&m, p, 3, cfg.max_ops)?;
                            let i = interpolate_f(&m, p, cfg.max_ops)?;
                            Ok(s == i
                                && s.is_integral()
                                && s.constant_is_one()
                                && s.degree() == e
                                && s.functional_equation_check())
                        })();
                        t.check_res(r, || format!("{m} p={p}"));
                    }
                }
            }
        }
    }
}

fn mass(t: &mut Tally, cfg: &VerifyConfig) {
    for p in [2u64, 3, 5, 7] {
        let r = (|| -> Result<bool> {
            let s = build_maximal_order(p)?.gram;
            let aut = automorphism_count(&s, cfg.max_ops)?;
            // one class: m'(O_p) = 1/|O(S_p)|, so R' = m' * product must be 1
            let oracle = qf(1, aut as i64);
            let product = siegel_product_quaternary(&s, p, cfg.max_ops)?.value;
            let mass = mass_maximal_order(p)?;
            if p == 2 && mass != qf(1, 1152) {
                return Ok(false);
            }
            Ok(mass == oracle && &oracle * product == q(1))
        })();
        t.check_res(r, || format!("p={p}"));
    }
}

/// S_3, S_5, S_7 and the e = 4 members of the index-3 family of S_3.
fn thm12_forms() -> Result<Vec<(HalfIntMat, u64)>> {
    let mut out = Vec::new();
    for p in [3u64, 5, 7] {
        out.push((build_maximal_order(p)?.gram, p));
    }
    let s3 = build_maximal_order(3)?.gram;
    for (h, m) in sublattice_family(&s3, 3, 3)? {
        if h.exps().iter().sum::<u32>() == 4 {
            out.push((m, 3));
        }
    }
    Ok(out)
}

fn thm12(t: &mut Tally, cfg: &VerifyConfig) {
    let forms = match thm12_forms() {
        Ok(f) => f,
        Err(e) => return t.check(false, || format!("building forms: {e}")),
    };
    t.note(format!("{} forms, {} with e = 4", forms.len(), forms.len() - 3));
    for (m, p) in forms {
        let r = (|| -> Result<bool> {
            let rep = thm12_decompose(&m, cfg.max_ops)?;
            Ok(rep.c4 == thm51_value(&m, p, cfg.max_ops)? && rep.identity == Some(true))
        })();
        t.check_res(r, || format!("{m} p={p}"));
    }
}

/// One explicit form per admissible datum, from the index-p family of S_p.
fn family_forms(p: u64, max_a: u32) -> Result<Vec<(EgkDatum, HalfIntMat)>> {
    let s = build_maximal_order(p)?.gram;
    Ok(sublattice_family(&s, p, max_a)?.into_iter().collect())
}

fn cor52(t: &mut Tally, cfg: &VerifyConfig) {
    let (mut fine, mut crude, mut proof) = (0, 0, 0);
    let mut total = 0;
    for &p in &cfg.cor52_primes {
        let data = match admissible_data(p, cfg.max_a) {
            Ok(d) => d,
            Err(e) => return t.check(false, || format!("admissible data at p={p}: {e}")),
        };
        let mut fine_p = 0;
        for h in &data {
            total += 1;
            match cor52_datum(h, p) {
                Ok(r) => {
                    t.check(r.pass_crude, || format!("crude {h} p={p}"));
                    t.check(r.proof_inequality, || format!("proof inequality {h} p={p}"));
                    t.check(r.pass_fine, || {
                        format!("fine {h} p={p}: lhs {:.5} > {:.5}", r.lhs.to_f64().unwrap_or(f64::NAN), r.fine_rhs.to_f64())
                    });
                    crude += r.pass_crude as usize;
                    proof += r.proof_inequality as usize;
                    fine += r.pass_fine as usize;
                    fine_p += !r.pass_fine as usize;
                }
                Err(e) => t.check(false, || format!("{h} p={p}: {e}")),
            }
        }
        t.note(format!("p={p}: {} data, fine bound fails on {fine_p}", data.len()));
        // the ratio recomputed from C_4 and deg Z on explicit forms
        match family_forms(p, cfg.max_a) {
            Ok(forms) => {
                let keys: Vec<&EgkDatum> = forms.iter().map(|f| &f.0).collect();
                t.check(keys == data.iter().collect::<Vec<_>>(), || format!("family at p={p} misses data"));
                for (h, m) in &forms {
                    let r = cor52_bounds(m, cfg.max_ops).map(|r| r.pipeline_agrees == Some(true));
                    t.check_res(r, || format!("pipeline {h} p={p}"));
                }
            }
            Err(e) => t.check(false, || format!("family at p={p}: {e}")),
        }
    }
    t.note(format!("{total} data: crude {crude}, proof inequality {proof}, fine {fine}"));
}

fn conj51(t: &mut Tally, cfg: &VerifyConfig) {
    let mut forms = match thm12_forms() {
        Ok(f) => f,
        Err(e) => return t.check(false, || format!("building forms: {e}")),
    };
    for &p in &cfg.cor52_primes {
        match family_forms(p, cfg.max_a) {
            Ok(f) => forms.extend(f.into_iter().map(|(_, m)| (m, p))),
            Err(e) => t.check(false, || format!("family at p={p}: {e}")),
        }
    }
    for (m, p) in forms {
        let r = conjecture51_check(&m, p, cfg.max_ops);
        t.check_res(r, || format!("{m} p={p}"));
    }
}

fn triple(t: &mut Tally, cfg: &VerifyConfig) {
    for &m in &cfg.triples {
        let first = triple_intersection(m, cfg.max_ops);
        let second = triple_intersection(m, cfg.max_ops);
        let (a, b) = match (first, second) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                t.check(false, || format!("{m:?}: {e}"));
                continue;
            }
        };
        t.check(a == b, || format!("{m:?}: two runs differ"));
        t.check(!a.table.is_empty(), || format!("{m:?}: empty table"));
        for e in &a.table {
            let c = e.diff.first().and_then(|&p| e.deg_z.log_coefficient(p));
            t.check(c.is_some_and(|c| c > Q::zero()), || format!("{m:?} {}: deg Z = {:?}", e.b, e.deg_z));
        }
        let totals: Vec<String> = a.totals.iter().map(|x| format!("log {}: {}", x.p, x.log_coefficient)).collect();
        t.note(format!("{m:?}: {} entries, totals {}", a.table.len(), totals.join(", ")));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactor_suite_passes() {
        let r = run_suite("prefactor", &VerifyConfig::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(run_suite("1", &VerifyConfig::default()).unwrap().name, "prefactor");
        assert!(run_suite("nope", &VerifyConfig::default()).is_err());
    }

    #[test]
    fn lemma_suite_is_seeded() {
        let cfg = VerifyConfig { lemma_samples: 8, ..Default::default() };
        let a = run_suite("lemma53", &cfg).unwrap();
        let b = run_suite("lemma53", &cfg).unwrap();
        assert_eq!(a.notes, b.notes);
        assert_eq!(a.checks, 6 + 8);
    }

    #[test]
    fn negative_length_term_values() {
        assert_eq!(negative_length_term([0, 2, 3], 3), q(9));
        assert_eq!(negative_length_term([1, 3, 4], 5), q(3750));
        assert!(negative_length_term([1, 1, 2], 3).is_zero());
        assert!(negative_length_term([0, 1, 1], 3).is_zero());
    }

    #[test]
    fn config_round_trips() {
        let cfg: VerifyConfig = serde_json::from_str(r#"{"max_a": 3}"#).unwrap();
        assert_eq!(cfg.max_a, 3);
        assert_eq!(cfg.cor52_primes, vec![3, 5, 7, 11]);
    }
}
