//! Exhaustive ground truth over all `2^(n-2)` link vectors.
//!
//! [`exhaustive`] evaluates every chain on its realized graph (as [`ti_direct`]
//! does); it never touches the increment table or the dynamic program.
//! [`cross_check`] then compares that ground truth against the engine.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::chain::{edge_degree_multiset, EdgeDegreeMultiset, Link, LinkVector};
use crate::dp::{Engine, MIN_SQUARES};
use crate::error::{Error, Result};
use crate::index::{ti_direct, ti_of_multiset, IndexFunction};
use crate::report::{chain_list, VerificationReport};
use crate::value::Value;

/// Largest square count searched unless overridden.
pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub index: String,
    pub max_value: Value,
    pub min_value: Value,
    pub argmax: Vec<LinkVector>,
    pub argmin: Vec<LinkVector>,
    /// Maximum per last link, `[1, 2]`.
    pub end_max: [Value; 2],
    pub end_argmax: [Vec<LinkVector>; 2],
    pub end_min: [Value; 2],
    pub end_argmin: [Vec<LinkVector>; 2],
}

/// Running best value and the chains (by bit pattern) attaining it.
#[derive(Debug, Clone)]
struct Best {
    maximize: bool,
    value: Option<Value>,
    /// Degree-pair multiset behind `value`; equal multisets give equal values.
    key: Option<EdgeDegreeMultiset>,
    members: Vec<(u64, Value)>,
}

impl Best {
    fn new(maximize: bool) -> Self {
        Best {
            maximize,
            value: None,
            key: None,
            members: Vec::new(),
        }
    }

    /// `Greater` when `a` is strictly better than `b`.
    fn rank(&self, a: &Value, b: &Value) -> Ordering {
        let ord = a.compare(b).expect("single-mode index");
        if self.maximize {
            ord
        } else {
            ord.reverse()
        }
    }

    fn offer(&mut self, bits: u64, key: Option<&EdgeDegreeMultiset>, v: &Value) {
        let Some(best) = &self.value else {
            self.value = Some(v.clone());
            self.key = key.cloned();
            self.members.push((bits, v.clone()));
            return;
        };
        if key.is_some() && key == self.key.as_ref() {
            self.members.push((bits, v.clone()));
            return;
        }
        match self.rank(v, best) {
            Ordering::Less => {}
            Ordering::Equal => {
                let raw_better = match (v, best) {
                    (Value::Float { value: a, .. }, Value::Float { value: b, .. }) => {
                        (a > b) == self.maximize && a != b
                    }
                    _ => false,
                };
                self.members.push((bits, v.clone()));
                if raw_better {
                    self.raise(v, key);
                }
            }
            Ordering::Greater => {
                self.members.push((bits, v.clone()));
                self.raise(v, key);
            }
        }
    }

    fn raise(&mut self, v: &Value, key: Option<&EdgeDegreeMultiset>) {
        self.members
            .retain(|(_, m)| m.compare(v).expect("single-mode index") == Ordering::Equal);
        self.value = Some(v.clone());
        self.key = key.cloned();
    }

    #[cfg(feature = "parallel")]
    fn merge(mut self, other: Best) -> Best {
        for (bits, v) in other.members {
            self.offer(bits, None, &v);
        }
        self
    }

    fn finish(mut self, len: usize) -> (Value, Vec<LinkVector>) {
        self.members.sort_unstable_by_key(|(bits, _)| *bits);
        let chains = self
            .members
            .iter()
            .map(|(bits, _)| LinkVector::from_bits(*bits, len))
            .collect();
        (self.value.expect("at least one chain"), chains)
    }
}

/// Per-end maxima and minima.
#[derive(Debug, Clone)]
struct Sweep {
    max: [Best; 2],
    min: [Best; 2],
    /// Values already summed, by multiset.
    seen: HashMap<EdgeDegreeMultiset, Value>,
}

impl Sweep {
    fn new() -> Self {
        Sweep {
            max: [Best::new(true), Best::new(true)],
            min: [Best::new(false), Best::new(false)],
            seen: HashMap::new(),
        }
    }

    fn offer(mut self, bits: u64, len: usize, f: &IndexFunction) -> Self {
        let chain = LinkVector::from_bits(bits, len);
        let multiset = edge_degree_multiset(&chain);
        let v = match self.seen.get(&multiset) {
            Some(v) => v.clone(),
            None => {
                let v = ti_of_multiset(&multiset, f);
                self.seen.insert(multiset.clone(), v.clone());
                v
            }
        };
        let end = chain.last().expect("n >= 3").slot();
        self.max[end].offer(bits, Some(&multiset), &v);
        self.min[end].offer(bits, Some(&multiset), &v);
        self
    }

    #[cfg(feature = "parallel")]
    fn merge(self, other: Sweep) -> Sweep {
        let [a0, a1] = self.max;
        let [b0, b1] = other.max;
        let [c0, c1] = self.min;
        let [d0, d1] = other.min;
        Sweep {
            max: [a0.merge(b0), a1.merge(b1)],
            min: [c0.merge(d0), c1.merge(d1)],
            seen: HashMap::new(),
        }
    }
}

/// Combines per-end optima into the overall optimum and its argument set.
fn combine(
    ends: [(Value, Vec<LinkVector>); 2],
    maximize: bool,
) -> (Value, Vec<LinkVector>) {
    let [(v1, s1), (v2, s2)] = ends;
    let ord = v1.compare(&v2).expect("single-mode index");
    let ord = if maximize { ord } else { ord.reverse() };
    match ord {
        Ordering::Greater => (v1, s1),
        Ordering::Less => (v2, s2),
        Ordering::Equal => {
            let mut all = s1;
            all.extend(s2);
            all.sort();
            (v1, all)
        }
    }
}

pub fn exhaustive(f: &IndexFunction, n: usize) -> Result<OracleReport> {
    exhaustive_capped(f, n, DEFAULT_CAP)
}

/// [`exhaustive`] with an explicit cap on `n`.
pub fn exhaustive_capped(f: &IndexFunction, n: usize, cap: usize) -> Result<OracleReport> {
    if n < MIN_SQUARES {
        return Err(Error::TooFewSquares {
            what: "exhaustive search",
            min: MIN_SQUARES,
            n,
        });
    }
    if n > cap || n - 2 >= 64 {
        return Err(Error::OracleCap {
            n,
            cap,
            evaluations: 1u128.checked_shl((n - 2) as u32).unwrap_or(u128::MAX),
        });
    }
    let len = n - 2;
    let total = 1u64 << len;
    let sweep = sweep(f, len, total);

    let end_max = sweep.max.map(|b| b.finish(len));
    let end_min = sweep.min.map(|b| b.finish(len));
    let (max_value, argmax) = combine(end_max.clone(), true);
    let (min_value, argmin) = combine(end_min.clone(), false);
    let [(mx1, ax1), (mx2, ax2)] = end_max;
    let [(mn1, an1), (mn2, an2)] = end_min;
    Ok(OracleReport {
        n,
        index: f.name().to_string(),
        max_value,
        min_value,
        argmax,
        argmin,
        end_max: [mx1, mx2],
        end_argmax: [ax1, ax2],
        end_min: [mn1, mn2],
        end_argmin: [an1, an2],
    })
}

#[cfg(feature = "parallel")]
fn sweep(f: &IndexFunction, len: usize, total: u64) -> Sweep {
    use rayon::prelude::*;
    (0..total)
        .into_par_iter()
        .fold(Sweep::new, |acc, bits| acc.offer(bits, len, f))
        .reduce(Sweep::new, Sweep::merge)
}

#[cfg(not(feature = "parallel"))]
fn sweep(f: &IndexFunction, len: usize, total: u64) -> Sweep {
    (0..total).fold(Sweep::new(), |acc, bits| acc.offer(bits, len, f))
}

/// Outcome of comparing the engine to the oracle at one `n`.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub n: usize,
    pub agrees: bool,
    pub report: VerificationReport,
}

pub fn cross_check(f: &IndexFunction, n: usize) -> Result<CrossCheck> {
    cross_check_engine(f, &Engine::new(f), n)
}

/// Compares `engine` (which may run an altered table) with exhaustive search on `f`.
pub fn cross_check_engine(f: &IndexFunction, engine: &Engine, n: usize) -> Result<CrossCheck> {
    let truth = exhaustive(f, n)?;
    let mut report = VerificationReport::new();

    let max_table = engine.run(n)?;
    let min_table = engine.negate().run(n)?;
    let max = engine.maximize(n, None)?;
    let min = engine.minimize(n, None)?;

    let mut values = |claim: &str, expected: &Value, actual: &Value| {
        report.check(Some(n), claim, expected, actual, expected.tie(actual));
    };
    values("maximum value", &truth.max_value, &max.value);
    values("minimum value", &truth.min_value, &min.value);
    for end in Link::ALL {
        let s = end.slot();
        values(&format!("maximum value, end {end}"), &truth.end_max[s], &max.end_values[s]);
        values(&format!("minimum value, end {end}"), &truth.end_min[s], &min.end_values[s]);
    }
    let witness_max = ti_direct(&max.witness, f);
    let witness_min = ti_direct(&min.witness, f);
    report.check(Some(n), "maximizing witness value", &truth.max_value, &witness_max, truth.max_value.tie(&witness_max));
    report.check(Some(n), "minimizing witness value", &truth.min_value, &witness_min, truth.min_value.tie(&witness_min));

    let mut sets = |claim: String, expected: &[LinkVector], actual: Vec<LinkVector>, count: BigUint| {
        report.check(
            Some(n),
            claim.clone(),
            chain_list(expected),
            chain_list(&actual),
            expected == actual.as_slice(),
        );
        report.check(
            Some(n),
            format!("{claim} count"),
            expected.len(),
            &count,
            BigUint::from(expected.len()) == count,
        );
    };
    sets("maximal set".into(), &truth.argmax, max_table.optimal_chains(None).collect(), max.labeled_count.clone());
    sets("minimal set".into(), &truth.argmin, min_table.optimal_chains(None).collect(), min.labeled_count.clone());
    for end in Link::ALL {
        let s = end.slot();
        sets(
            format!("maximal set, end {end}"),
            &truth.end_argmax[s],
            max_table.optimal_chains(Some(end)).collect(),
            max_table.count(n, end),
        );
        sets(
            format!("minimal set, end {end}"),
            &truth.end_argmin[s],
            min_table.optimal_chains(Some(end)).collect(),
            min_table.count(n, end),
        );
    }

    Ok(CrossCheck {
        n,
        agrees: report.passed(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{g_table, preset};
    use crate::value::Value;

    fn lv(s: &str) -> LinkVector {
        s.parse().unwrap()
    }

    #[test]
    fn azi_six_squares() {
        let r = exhaustive(&preset("azi").unwrap(), 6).unwrap();
        assert!(r.max_value.tie(&Value::ratio(10790359, 54000)));
        assert_eq!(r.argmax, vec![lv("1,2,2,1")]);
        // Li6 = domino + 4 * g11 = 3801/64 + 4 * 2187/64
        assert!(r.min_value.tie(&Value::ratio(3801 + 4 * 2187, 64)));
        assert!((r.min_value.to_f64() - 196.078125).abs() < 1e-12);
        assert_eq!(r.argmin, vec![lv("1,1,1,1")]);
    }

    #[test]
    fn azi_four_squares() {
        let r = exhaustive(&preset("azi").unwrap(), 4).unwrap();
        assert_eq!(r.argmax, vec![lv("1,2"), lv("2,1")]);
    }

    #[test]
    fn three_squares_cover_two_chains() {
        let r = exhaustive(&preset("zagreb1").unwrap(), 3).unwrap();
        let total = r.end_argmax[0].len() + r.end_argmax[1].len();
        assert_eq!(total, 2);
    }

    #[test]
    fn refuses_above_cap() {
        let f = preset("azi").unwrap();
        assert!(matches!(exhaustive(&f, 25), Err(Error::OracleCap { n: 25, cap: 24, .. })));
        assert!(exhaustive_capped(&f, 8, 7).is_err());
        assert!(exhaustive(&f, 2).is_err());
    }

    #[test]
    fn cross_checks_agree() {
        for n in 3..=12 {
            let c = cross_check(&preset("azi").unwrap(), n).unwrap();
            assert!(c.agrees, "{:?}", c.report.first_failure());
            let c = cross_check(&preset("harmonic").unwrap(), n).unwrap();
            assert!(c.agrees);
            let truth = exhaustive(&preset("harmonic").unwrap(), n).unwrap();
            assert_eq!(truth.argmax, vec![crate::chain::linear_chain(n).unwrap()]);
        }
        let c = cross_check(&preset("randic").unwrap(), 12).unwrap();
        assert!(c.agrees, "{:?}", c.report.first_failure());
    }

    #[test]
    fn detects_a_corrupted_table() {
        let f = preset("azi").unwrap();
        let mut g = g_table(&f);
        g.g22 = g.g22.checked_add(&Value::ratio(1, 1)).unwrap();
        let engine = Engine::from_gtable("azi-faulty", g).unwrap();
        let c = cross_check_engine(&f, &engine, 8).unwrap();
        assert!(!c.agrees);
        assert!(c.report.first_failure().is_some());
    }
}
