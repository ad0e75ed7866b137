//! Extremal chains for the augmented Zagreb index, as checkable claims.
//!
//! For `n >= 5` the maximum is
//! `4456/125 n - 26763/2000 - 2312/3375 [n even]`, attained by the type-1
//! augmented zigzag with `(n-1)/2` segments when `n` is odd and by the
//! `(n-6)/2 + 1` labeled type-2 augmented zigzags with `n/2` segments when
//! `n` is even (`ceil(n/4 - 1)` of them up to reversal). The minimum is the
//! zigzag chain for `n <= 5` and the linear chain from `n = 6` on.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::chain::{az1, az2_family, linear_chain, zigzag_chain, LinkVector};
use crate::dp::{classify_table, dedup_reversal, ClassifierCase, Engine, MIN_SQUARES};
use crate::error::{Error, Result};
use crate::index::{preset, ti_direct, IndexFunction};
use crate::oracle::exhaustive;
use crate::report::{chain_list, VerificationReport};
use crate::value::{Mode, Value};

pub fn azi() -> IndexFunction {
    preset("azi").expect("built-in preset")
}

/// Whether `f` is the augmented Zagreb table in exact arithmetic.
pub fn is_azi(f: &IndexFunction) -> bool {
    f.is_exact() && f.values().iter().zip(azi().values().iter()).all(|(a, b)| a.tie(b))
}

/// Family of the maximizing chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Linear,
    Zigzag,
    /// Type-1 augmented zigzag with the given segment count.
    Az1(usize),
    /// Type-2 augmented zigzags with the given segment count.
    Az2(usize),
    /// `PC(1,2)` and `PC(2,1)`.
    PairN4,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Linear => f.write_str("Li"),
            Family::Zigzag => f.write_str("Z"),
            Family::Az1(m) => write!(f, "AZ1({m})"),
            Family::Az2(m) => write!(f, "AZ2({m})"),
            Family::PairN4 => f.write_str("Pair_n4"),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainFamilyReport {
    pub n: usize,
    pub family: Family,
    pub closed_value: Value,
    pub labeled_count: u64,
    pub iso_count: u64,
}

/// Closed-form maximum, `n >= 5`.
pub fn azi_max_closed_form(n: usize) -> Result<BigRational> {
    if n < 5 {
        return Err(Error::TooFewSquares {
            what: "closed form (stated for n >= 5)",
            min: 5,
            n,
        });
    }
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let mut m = q(4456, 125) * BigRational::from_integer(BigInt::from(n)) - q(26763, 2000);
    if n.is_multiple_of(2) {
        m -= q(2312, 3375);
    }
    Ok(m)
}

/// The claimed maximizers and their counts for `n >= 3`.
pub fn azi_extremal_report(n: usize) -> Result<ChainFamilyReport> {
    if n < MIN_SQUARES {
        return Err(Error::TooFewSquares {
            what: "AZI extremal report",
            min: MIN_SQUARES,
            n,
        });
    }
    let (family, labeled_count, iso_count) = match n {
        3 => (Family::Linear, 1, 1),
        4 => (Family::PairN4, 2, 1),
        _ if n % 2 == 1 => (Family::Az1((n - 1) / 2), 1, 1),
        _ => {
            let n = n as u64;
            (Family::Az2(n as usize / 2), (n - 6) / 2 + 1, (n - 4).div_ceil(4))
        }
    };
    // No closed form below five squares; take the program's value.
    let closed_value = if n < 5 {
        Engine::new(&azi()).maximize(n, None)?.value
    } else {
        Value::Rational(azi_max_closed_form(n)?)
    };
    Ok(ChainFamilyReport {
        n,
        family,
        closed_value,
        labeled_count,
        iso_count,
    })
}

/// Labeled maximizers claimed for `n`, sorted.
pub fn claimed_maximizers(n: usize) -> Result<Vec<LinkVector>> {
    let mut chains = match azi_extremal_report(n)?.family {
        Family::Linear => vec![linear_chain(n)?],
        Family::Zigzag => vec![zigzag_chain(n)?],
        Family::Az1(m) => vec![az1(m)?],
        Family::Az2(m) => az2_family(m)?,
        Family::PairN4 => vec!["1,2".parse()?, "2,1".parse()?],
    };
    chains.sort();
    Ok(chains)
}

/// Claimed unique minimizer for `n >= 3`.
pub fn claimed_minimizer(n: usize) -> Result<LinkVector> {
    if n <= 5 {
        zigzag_chain(n)
    } else {
        linear_chain(n)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AziCheckOptions {
    pub n_max: usize,
    /// Enumerated sets and counts are compared up to this `n`; values beyond.
    pub structure_max: usize,
    /// Exhaustive search is run up to this `n`.
    pub oracle_max: usize,
}

impl AziCheckOptions {
    pub fn new(n_max: usize) -> Self {
        AziCheckOptions {
            n_max,
            structure_max: 200,
            oracle_max: 16,
        }
    }
}

pub fn verify_azi_theorem(n_max: usize) -> Result<VerificationReport> {
    verify_azi_theorem_with(&Engine::new(&azi()), &AziCheckOptions::new(n_max))
}

/// Checks the maximization claims for `5 <= n <= n_max` against `engine`.
pub fn verify_azi_theorem_with(engine: &Engine, opts: &AziCheckOptions) -> Result<VerificationReport> {
    if opts.n_max < 5 {
        return Err(Error::TooFewSquares {
            what: "AZI theorem verification",
            min: 5,
            n: opts.n_max,
        });
    }
    if engine.mode() != Mode::Rational {
        return Err(Error::RequiresRational("AZI theorem verification"));
    }
    let f = azi();
    let table = engine.run(opts.n_max)?;
    let mut report = VerificationReport::new();

    for n in 5..=opts.n_max {
        let claim = azi_extremal_report(n)?;
        let ends = table.winning_ends(n);
        let best = table.value(n, ends.first().expect("nonempty"));
        report.check(Some(n), "maximum equals closed form", &claim.closed_value, &best, best.tie(&claim.closed_value));
        let strict = ends == crate::dp::LinkSet::single(crate::chain::Link::Straight);
        report.check(Some(n), "M(n,1) > M(n,2)", "end 1 strictly best", format!("winning ends {ends:?}"), strict);

        if n <= opts.structure_max {
            let expected = claimed_maximizers(n)?;
            let found: Vec<LinkVector> = table.optimal_chains_at(n, None).take(expected.len() + 1).collect();
            report.check(Some(n), format!("maximal set is {}", claim.family), chain_list(&expected), chain_list(&found), found == expected);

            let labeled: BigUint = ends.iter().map(|l| table.count(n, l)).sum();
            report.check(Some(n), "labeled count", claim.labeled_count, &labeled, labeled == BigUint::from(claim.labeled_count));
            let iso = dedup_reversal(found.into_iter()).count() as u64;
            report.check(Some(n), "count up to reversal", claim.iso_count, iso, iso == claim.iso_count);

            for chain in &expected {
                let v = ti_direct(chain, &f);
                report.check(Some(n), format!("({chain}) attains closed form"), &claim.closed_value, &v, v.tie(&claim.closed_value));
            }
        }

        if n <= opts.oracle_max {
            let truth = exhaustive(&f, n)?;
            report.check(Some(n), "exhaustive maximum", &claim.closed_value, &truth.max_value, truth.max_value.tie(&claim.closed_value));
            let expected = claimed_maximizers(n)?;
            report.check(Some(n), "exhaustive maximal set", chain_list(&expected), chain_list(&truth.argmax), truth.argmax == expected);
        }
    }
    Ok(report)
}

pub fn verify_azi_min(n_max: usize) -> Result<VerificationReport> {
    verify_azi_min_with(&Engine::new(&azi()), &AziCheckOptions::new(n_max))
}

/// Checks the minimization claims for `3 <= n <= n_max` and the classifier verdict.
pub fn verify_azi_min_with(engine: &Engine, opts: &AziCheckOptions) -> Result<VerificationReport> {
    if opts.n_max < MIN_SQUARES {
        return Err(Error::TooFewSquares {
            what: "AZI minimum verification",
            min: MIN_SQUARES,
            n: opts.n_max,
        });
    }
    if engine.mode() != Mode::Rational {
        return Err(Error::RequiresRational("AZI minimum verification"));
    }
    let f = azi();
    let negated = engine.negate();
    let table = negated.run(opts.n_max)?;
    let mut report = VerificationReport::new();

    for n in MIN_SQUARES..=opts.n_max {
        let expected = vec![claimed_minimizer(n)?];
        // Two suffice to tell a unique minimizer from several.
        let found: Vec<LinkVector> = table.optimal_chains_at(n, None).take(2).collect();
        report.check(Some(n), "unique minimizer", chain_list(&expected), chain_list(&found), found == expected);
        if n <= opts.oracle_max {
            let truth = exhaustive(&f, n)?;
            report.check(Some(n), "exhaustive minimal set", chain_list(&expected), chain_list(&truth.argmin), truth.argmin == expected);
        }
    }

    let verdict = classify_table(negated.gtable())?;
    let six = BigUint::from(6u8);
    let n_star = verdict.n_star.as_ref().map_or("none".to_string(), |x| x.to_string());
    report.check(
        None,
        "classifier on the negated index",
        "zigzag-then-linear, n* = 6",
        format!("{:?}, n* = {n_star}", verdict.case),
        verdict.case == ClassifierCase::ZigzagThenLinear && verdict.n_star.as_ref() == Some(&six),
    );
    if opts.n_max >= 6 {
        let li = ti_direct(&linear_chain(6)?, &f);
        let z = ti_direct(&zigzag_chain(6)?, &f);
        report.info(Some(6), "zigzag also minimal at n*", format!("{} (Li6 = {li}, Z6 = {z})", li.tie(&z)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::DEFAULT_EPS;

    #[test]
    fn closed_form_anchors() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(azi_max_closed_form(5).unwrap(), q(329717, 2000));
        assert_eq!(azi_max_closed_form(6).unwrap(), q(10790359, 54000));
        let seven = azi_max_closed_form(7).unwrap();
        assert_eq!(seven, q(4456 * 7, 125) - q(26763, 2000));
        assert!((crate::value::rational_to_f64(&seven) - 236.1545).abs() < 1e-4);
        assert!(azi_max_closed_form(4).is_err());
    }

    #[test]
    fn reports() {
        let r = azi_extremal_report(9).unwrap();
        assert_eq!((r.family, r.labeled_count, r.iso_count), (Family::Az1(4), 1, 1));
        let r = azi_extremal_report(12).unwrap();
        assert_eq!((r.family, r.labeled_count, r.iso_count), (Family::Az2(6), 4, 2));
        let r = azi_extremal_report(4).unwrap();
        assert_eq!((r.family, r.labeled_count, r.iso_count), (Family::PairN4, 2, 1));
        assert!(r.closed_value.tie(&Value::ratio(513013, 4000)));
        let r = azi_extremal_report(3).unwrap();
        assert_eq!(r.family, Family::Linear);
        assert!(azi_extremal_report(2).is_err());
        assert_eq!(serde_json::to_value(azi_extremal_report(8).unwrap()).unwrap()["family"], "AZ2(4)");
    }

    #[test]
    fn iso_counts_match_formula() {
        for n in (6..=60).step_by(2) {
            let fam = az2_family(n / 2).unwrap();
            assert_eq!(fam.len(), (n - 6) / 2 + 1);
            let iso = dedup_reversal(fam.into_iter()).count();
            assert_eq!(iso, (n as f64 / 4.0 - 1.0).ceil() as usize);
        }
    }

    #[test]
    fn maximum_claims_hold_to_40() {
        let r = verify_azi_theorem_with(
            &Engine::new(&azi()),
            &AziCheckOptions { n_max: 40, structure_max: 40, oracle_max: 12 },
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert!(verify_azi_theorem(4).is_err());
    }

    #[test]
    fn minimum_holds_to_40() {
        let r = verify_azi_min_with(
            &Engine::new(&azi()),
            &AziCheckOptions { n_max: 40, structure_max: 40, oracle_max: 12 },
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
    }

    #[test]
    fn refuses_float_mode() {
        let engine = Engine::new(&azi().to_float(DEFAULT_EPS));
        assert!(matches!(
            verify_azi_theorem_with(&engine, &AziCheckOptions::new(10)),
            Err(Error::RequiresRational(_))
        ));
        assert!(verify_azi_min_with(&engine, &AziCheckOptions::new(10)).is_err());
    }

    #[test]
    fn recognizes_azi() {
        assert!(is_azi(&azi()));
        assert!(!is_azi(&azi().to_float(DEFAULT_EPS)));
        assert!(!is_azi(&preset("zagreb2").unwrap()));
    }
}
