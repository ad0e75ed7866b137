//! Degree-based topological indices on polyomino chains.
//!
//! An index is `TI_f(G) = sum over edges uv of f(d_u, d_v)` for a symmetric `f`.
//! Polyomino chains only have vertices of degree 2, 3 or 4, so `f` is fully
//! described by its six values on unordered pairs over `{2, 3, 4}`.
//!
//! Two evaluators are provided: [`ti_direct`] sums over the realized graph,
//! [`ti_recursive`] adds per-square increments from a [`GTable`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{edge_degree_multiset, EdgeDegreeMultiset, Link, LinkVector};
use crate::error::{Error, Result};
use crate::value::{parse_rational, rational_string, rational_to_f64, Mode, Value, DEFAULT_EPS};

/// The six degree pairs, in table order.
pub const DEGREE_PAIRS: [(u32, u32); 6] = [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)];

fn pair_slot(a: u32, b: u32) -> Result<usize> {
    let key = if a <= b { (a, b) } else { (b, a) };
    DEGREE_PAIRS
        .iter()
        .position(|&p| p == key)
        .ok_or(Error::DegreeOutOfDomain(a, b))
}

#[derive(Debug, Clone, PartialEq)]
enum PairTable {
    Rational([BigRational; 6]),
    Float { values: [f64; 6], eps: f64 },
}

/// A symmetric edge function restricted to degrees `{2, 3, 4}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexFunction {
    name: String,
    table: PairTable,
}

impl IndexFunction {
    pub fn rational(name: impl Into<String>, values: [BigRational; 6]) -> Self {
        IndexFunction {
            name: name.into(),
            table: PairTable::Rational(values),
        }
    }

    pub fn float(name: impl Into<String>, values: [f64; 6], eps: f64) -> Self {
        IndexFunction {
            name: name.into(),
            table: PairTable::Float { values, eps },
        }
    }

    /// Builds a table by evaluating `f` on each degree pair.
    pub fn from_fn_rational(name: impl Into<String>, f: impl Fn(i64, i64) -> BigRational) -> Self {
        Self::rational(name, DEGREE_PAIRS.map(|(a, b)| f(a as i64, b as i64)))
    }

    pub fn from_fn_float(name: impl Into<String>, eps: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::float(name, DEGREE_PAIRS.map(|(a, b)| f(a as f64, b as f64)), eps)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> Mode {
        match &self.table {
            PairTable::Rational(_) => Mode::Rational,
            PairTable::Float { eps, .. } => Mode::Float { eps: *eps },
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode().is_exact()
    }

    /// `f(a, b)`; degrees outside `{2, 3, 4}` are rejected.
    pub fn get(&self, a: u32, b: u32) -> Result<Value> {
        let slot = pair_slot(a, b)?;
        Ok(self.slot_value(slot))
    }

    fn slot_value(&self, slot: usize) -> Value {
        match &self.table {
            PairTable::Rational(v) => Value::Rational(v[slot].clone()),
            PairTable::Float { values, eps } => Value::Float {
                value: values[slot],
                eps: *eps,
            },
        }
    }

    pub fn values(&self) -> [Value; 6] {
        std::array::from_fn(|i| self.slot_value(i))
    }

    pub fn negate(&self) -> IndexFunction {
        let table = match &self.table {
            PairTable::Rational(v) => PairTable::Rational(v.clone().map(|r| -r)),
            PairTable::Float { values, eps } => PairTable::Float {
                values: values.map(|x| -x),
                eps: *eps,
            },
        };
        IndexFunction {
            name: format!("{}-neg", self.name),
            table,
        }
    }

    /// Converts to float mode with the given tolerance.
    pub fn to_float(&self, eps: f64) -> IndexFunction {
        let values = match &self.table {
            PairTable::Rational(v) => v.each_ref().map(rational_to_f64),
            PairTable::Float { values, .. } => *values,
        };
        IndexFunction::float(self.name.clone(), values, eps)
    }

    /// Replaces the float tolerance; rational tables are returned unchanged.
    pub fn with_eps(&self, eps: f64) -> IndexFunction {
        match &self.table {
            PairTable::Rational(_) => self.clone(),
            PairTable::Float { values, .. } => IndexFunction::float(self.name.clone(), *values, eps),
        }
    }

    pub fn to_document(&self) -> IndexDocument {
        let (mode, eps) = match self.mode() {
            Mode::Rational => ("rational", None),
            Mode::Float { eps } => ("float", Some(eps)),
        };
        let values = DEGREE_PAIRS
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let text = match &self.table {
                    PairTable::Rational(v) => rational_string(&v[i]),
                    PairTable::Float { values, .. } => format!("{:?}", values[i]),
                };
                (format!("{a},{b}"), text)
            })
            .collect();
        IndexDocument {
            name: self.name.clone(),
            mode: mode.to_string(),
            eps,
            values,
        }
    }
}

impl fmt::Display for IndexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Preset indices by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// Augmented Zagreb: `(xy / (x + y - 2))^3`.
    Azi,
    /// First Zagreb: `x + y`.
    Zagreb1,
    /// Second Zagreb: `xy`.
    Zagreb2,
    /// General Randić: `(xy)^gamma`.
    Randic(f64),
    /// Atom-bond connectivity: `sqrt((x + y - 2) / (xy))`.
    Abc,
    /// Geometric-arithmetic: `2 sqrt(xy) / (x + y)`.
    Ga,
    /// Harmonic: `2 / (x + y)`.
    Harmonic,
    /// Sum-connectivity: `(x + y)^(-1/2)`.
    SumConnectivity,
}

impl Preset {
    pub const NAMES: [&'static str; 8] = [
        "azi",
        "zagreb1",
        "zagreb2",
        "randic",
        "abc",
        "ga",
        "harmonic",
        "sum_connectivity",
    ];

    /// Accepts the names in [`Preset::NAMES`]; `randic` takes its exponent as
    /// `randic(-0.5)` or via `gamma`.
    pub fn parse(name: &str, gamma: Option<f64>) -> Result<Preset> {
        let lower = name.trim().to_ascii_lowercase();
        if let Some(arg) = lower
            .strip_prefix("randic(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            let g: f64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::UnknownIndex(name.to_string()))?;
            return Ok(Preset::Randic(g));
        }
        Ok(match lower.as_str() {
            "azi" => Preset::Azi,
            "zagreb1" | "m1" => Preset::Zagreb1,
            "zagreb2" | "m2" => Preset::Zagreb2,
            "randic" => Preset::Randic(gamma.unwrap_or(-0.5)),
            "abc" => Preset::Abc,
            "ga" => Preset::Ga,
            "harmonic" => Preset::Harmonic,
            "sum_connectivity" | "sum-connectivity" => Preset::SumConnectivity,
            _ => return Err(Error::UnknownIndex(name.to_string())),
        })
    }

    pub fn build(self) -> IndexFunction {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        match self {
            Preset::Azi => IndexFunction::from_fn_rational("azi", |x, y| {
                let r = q(x * y, x + y - 2);
                &r * &r * &r
            }),
            Preset::Zagreb1 => IndexFunction::from_fn_rational("zagreb1", |x, y| q(x + y, 1)),
            Preset::Zagreb2 => IndexFunction::from_fn_rational("zagreb2", |x, y| q(x * y, 1)),
            Preset::Harmonic => IndexFunction::from_fn_rational("harmonic", |x, y| q(2, x + y)),
            Preset::Randic(gamma) => {
                let name = format!("randic({gamma})");
                if gamma.fract() == 0.0 && gamma.abs() <= 64.0 {
                    let k = gamma as i32;
                    IndexFunction::from_fn_rational(name, |x, y| {
                        let base = BigRational::from_integer(BigInt::from(x * y));
                        num_traits::pow::Pow::pow(base, k)
                    })
                } else {
                    IndexFunction::from_fn_float(name, DEFAULT_EPS, |x, y| (x * y).powf(gamma))
                }
            }
            Preset::Abc => IndexFunction::from_fn_float("abc", DEFAULT_EPS, |x, y| {
                ((x + y - 2.0) / (x * y)).sqrt()
            }),
            Preset::Ga => IndexFunction::from_fn_float("ga", DEFAULT_EPS, |x, y| {
                2.0 * (x * y).sqrt() / (x + y)
            }),
            Preset::SumConnectivity => {
                IndexFunction::from_fn_float("sum_connectivity", DEFAULT_EPS, |x, y| {
                    (x + y).powf(-0.5)
                })
            }
        }
    }
}

/// Looks up a preset index by name (see [`Preset::parse`]).
pub fn preset(name: &str) -> Result<IndexFunction> {
    Preset::parse(name, None).map(Preset::build)
}

/// Serialized custom index: `values` maps `"a,b"` (with `a <= b`) to `"p/q"`
/// strings in rational mode or decimal literals in float mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexDocument {
    pub name: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub values: BTreeMap<String, String>,
}

/// Parses and validates a JSON index document.
pub fn load_custom_index(document: &str) -> Result<IndexFunction> {
    let raw: serde_json::Value =
        serde_json::from_str(document).map_err(|e| Error::Document(e.to_string()))?;
    let obj = raw
        .as_object()
        .ok_or_else(|| Error::Document("expected a JSON object".into()))?;

    let name = match obj.get("name") {
        Some(serde_json::Value::String(s)) if !s.trim().is_empty() => s.clone(),
        Some(_) => return Err(Error::Document("field 'name' must be a non-empty string".into())),
        None => return Err(Error::Document("field 'name' absent".into())),
    };
    let mode = match obj.get("mode").and_then(|m| m.as_str()) {
        Some("rational") => Mode::Rational,
        Some("float") => {
            let eps = match obj.get("eps") {
                None | Some(serde_json::Value::Null) => DEFAULT_EPS,
                Some(v) => v
                    .as_f64()
                    .ok_or_else(|| Error::Document("field 'eps' must be a number".into()))?,
            };
            if !eps.is_finite() || eps < 0.0 {
                return Err(Error::Document(format!("eps must be a non-negative number, got {eps}")));
            }
            Mode::Float { eps }
        }
        Some(other) => {
            return Err(Error::Document(format!(
                "mode must be \"rational\" or \"float\", got \"{other}\""
            )))
        }
        None => return Err(Error::Document("field 'mode' absent".into())),
    };
    let values = obj
        .get("values")
        .and_then(|v| v.as_object())
        .ok_or_else(|| Error::Document("field 'values' must be an object".into()))?;

    let mut texts: [Option<String>; 6] = Default::default();
    for (key, v) in values {
        let slot = parse_pair_key(key)?;
        let text = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) if !mode.is_exact() => n.to_string(),
            _ => {
                return Err(Error::Document(format!(
                    "value for pair ({key}) must be a string"
                )))
            }
        };
        if texts[slot].replace(text).is_some() {
            return Err(Error::Document(format!("pair ({key}) given twice")));
        }
    }
    let texts: Vec<String> = texts
        .into_iter()
        .zip(DEGREE_PAIRS)
        .map(|(t, (a, b))| t.ok_or_else(|| Error::Document(format!("pair ({a},{b}) absent"))))
        .collect::<Result<_>>()?;

    match mode {
        Mode::Rational => {
            let parsed: Vec<BigRational> = texts
                .iter()
                .map(|t| parse_rational(t))
                .collect::<Result<_>>()?;
            Ok(IndexFunction::rational(
                name,
                parsed.try_into().expect("six values"),
            ))
        }
        Mode::Float { eps } => {
            let parsed: Vec<f64> = texts
                .iter()
                .map(|t| parse_float(t))
                .collect::<Result<_>>()?;
            Ok(IndexFunction::float(
                name,
                parsed.try_into().expect("six values"),
                eps,
            ))
        }
    }
}

fn parse_pair_key(key: &str) -> Result<usize> {
    let bad = || Error::Document(format!("invalid pair key '{key}' (expected \"a,b\" with 2 <= a <= b <= 4)"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    pair_slot(a, b).map_err(|_| bad())
}

fn parse_float(text: &str) -> Result<f64> {
    let t = text.trim();
    if t.contains('/') {
        return parse_rational(t).map(|r| rational_to_f64(&r));
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Document(format!("malformed decimal '{text}'"))),
    }
}

/// Per-square increments of the chain recurrence, plus the domino value.
#[derive(Debug, Clone, Serialize)]
pub struct GTable {
    pub g11: Value,
    pub g12: Value,
    pub g21: Value,
    pub g22: Value,
    pub g2: Value,
    pub base_pc2: Value,
}

impl GTable {
    /// Increment for appending a square with link `next` after link `prev`.
    pub fn step(&self, prev: Link, next: Link) -> &Value {
        match (prev, next) {
            (Link::Straight, Link::Straight) => &self.g11,
            (Link::Straight, Link::Turn) => &self.g12,
            (Link::Turn, Link::Straight) => &self.g21,
            (Link::Turn, Link::Turn) => &self.g22,
        }
    }

    /// Increment for the third square, attached to the domino.
    pub fn first(&self, link: Link) -> &Value {
        match link {
            Link::Straight => &self.g11,
            Link::Turn => &self.g2,
        }
    }

    pub fn negate(&self) -> GTable {
        GTable {
            g11: self.g11.neg(),
            g12: self.g12.neg(),
            g21: self.g21.neg(),
            g22: self.g22.neg(),
            g2: self.g2.neg(),
            base_pc2: self.base_pc2.neg(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.g11.mode()
    }

    /// `g2 + g21 - (g11 + g12)`; zero for every table derived from an index.
    pub fn identity_defect(&self) -> Result<Value> {
        self.g2
            .checked_add(&self.g21)?
            .checked_sub(&self.g11.checked_add(&self.g12)?)
    }
}

/// Derives the increment table from `f`.
pub fn g_table(f: &IndexFunction) -> GTable {
    match &f.table {
        PairTable::Rational(v) => {
            let t = g_combinations(v, |c, x| BigRational::from_i64(c).unwrap() * x);
            GTable::from_array(t.map(Value::Rational))
        }
        PairTable::Float { values, eps } => {
            let t = g_combinations(values, |c, x| c as f64 * x);
            GTable::from_array(t.map(|value| Value::Float { value, eps: *eps }))
        }
    }
}

impl GTable {
    fn from_array([g11, g12, g21, g22, g2, base_pc2]: [Value; 6]) -> GTable {
        GTable {
            g11,
            g12,
            g21,
            g22,
            g2,
            base_pc2,
        }
    }
}

/// Integer combinations of `f(2,2), f(2,3), f(2,4), f(3,3), f(3,4), f(4,4)`
/// giving `[g11, g12, g21, g22, g2, base]`.
const G_COEFFS: [[i64; 6]; 6] = [
    // g11 = 3 f(3,3)
    [0, 0, 0, 3, 0, 0],
    // g12 = 3 f(3,4) + f(2,4) + f(2,3) - 2 f(3,3)
    [0, 1, 1, -2, 3, 0],
    // g21 = f(3,4) - f(2,4) + f(2,3) + 2 f(3,3)
    [0, 1, -1, 2, 1, 0],
    // g22 = f(4,4) + 2 f(2,4)
    [0, 0, 2, 0, 0, 1],
    // g2 = 2 f(3,4) + 2 f(2,4) - f(3,3)
    [0, 0, 2, -1, 2, 0],
    // domino: 2 f(2,2) + 4 f(2,3) + f(3,3)
    [2, 4, 0, 1, 0, 0],
];

fn g_combinations<T>(values: &[T; 6], scale: impl Fn(i64, &T) -> T) -> [T; 6]
where
    T: Clone + Zero + std::ops::Add<Output = T>,
{
    G_COEFFS.map(|row| {
        row.iter()
            .zip(values)
            .filter(|(&c, _)| c != 0)
            .fold(T::zero(), |acc, (&c, x)| acc + scale(c, x))
    })
}

/// `TI_f` summed over the edges of the realized chain.
pub fn ti_direct(chain: &LinkVector, f: &IndexFunction) -> Value {
    ti_of_multiset(&edge_degree_multiset(chain), f)
}

/// `sum f(a, b) * m(a, b)` over a degree-pair multiset.
pub fn ti_of_multiset(multiset: &EdgeDegreeMultiset, f: &IndexFunction) -> Value {
    match &f.table {
        PairTable::Rational(v) => {
            let mut sum = BigRational::zero();
            for ((a, b), m) in multiset.iter() {
                let slot = pair_slot(a, b).expect("chain degrees lie in {2,3,4}");
                sum += &v[slot] * BigRational::from_integer(m.into());
            }
            Value::Rational(sum)
        }
        PairTable::Float { values, eps } => {
            let sum = multiset
                .iter()
                .map(|((a, b), m)| {
                    let slot = pair_slot(a, b).expect("chain degrees lie in {2,3,4}");
                    values[slot] * m as f64
                })
                .sum();
            Value::Float { value: sum, eps: *eps }
        }
    }
}

/// `TI_f` accumulated square by square from the domino value.
pub fn ti_recursive(chain: &LinkVector, f: &IndexFunction) -> Value {
    ti_with_table(chain, &g_table(f))
}

/// [`ti_recursive`] against a precomputed (or deliberately altered) table.
pub fn ti_with_table(chain: &LinkVector, table: &GTable) -> Value {
    let links = chain.links();
    let mut total = table.base_pc2.clone();
    let Some(&first) = links.first() else {
        return total;
    };
    let add = |acc: Value, v: &Value| acc.checked_add(v).expect("single-mode table");
    total = add(total, table.first(first));
    for w in links.windows(2) {
        total = add(total, table.step(w[0], w[1]));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::LinkVector;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Value {
        Value::ratio(n, d)
    }

    fn lv(s: &str) -> LinkVector {
        s.parse().unwrap()
    }

    fn assert_value(actual: &Value, expected: &Value) {
        assert!(actual.tie(expected), "{actual} != {expected}");
    }

    #[test]
    fn azi_table_entries() {
        let azi = preset("azi").unwrap();
        for (a, b) in [(2, 2), (2, 3), (2, 4)] {
            assert_value(&azi.get(a, b).unwrap(), &q(8, 1));
        }
        assert_value(&azi.get(4, 3).unwrap(), &q(1728, 125));
        assert_value(&azi.get(3, 3).unwrap(), &q(729, 64));
        assert_value(&azi.get(4, 4).unwrap(), &q(512, 27));
        assert_eq!(azi.get(1, 2).unwrap_err(), Error::DegreeOutOfDomain(1, 2));
        assert_eq!(azi.get(3, 5).unwrap_err(), Error::DegreeOutOfDomain(3, 5));
    }

    #[test]
    fn azi_g_table() {
        let g = g_table(&preset("azi").unwrap());
        assert_value(&g.g11, &q(2187, 64));
        assert_value(&g.g22, &q(944, 27));
        assert_value(&g.base_pc2, &q(3801, 64));
    }

    #[test]
    fn zagreb2_g_table() {
        let g = g_table(&preset("zagreb2").unwrap());
        assert_value(&g.g11, &q(27, 1));
        assert_value(&g.g12, &q(32, 1));
        assert_value(&g.g21, &q(28, 1));
        assert_value(&g.g22, &q(32, 1));
        assert_value(&g.g2, &q(31, 1));
    }

    #[test]
    fn evaluator_anchors() {
        let azi = preset("azi").unwrap();
        assert_value(&ti_direct(&lv(""), &azi), &q(3801, 64));
        assert_value(&ti_direct(&lv("1"), &azi), &q(1497, 16));
        assert_value(&ti_recursive(&lv("2"), &azi), &q(11456, 125));
        let six = ti_recursive(&lv("1,2,2,1"), &azi);
        assert_value(&six, &q(10790359, 54000));
        assert_value(&ti_direct(&lv("1,2,2,1"), &azi), &six);

        let m2 = preset("zagreb2").unwrap();
        for n in 2..20 {
            let z = crate::chain::zigzag_chain(n).unwrap();
            assert_value(&ti_direct(&z, &m2), &ti_recursive(&z, &m2));
        }
    }

    #[test]
    fn evaluators_agree_exhaustively_up_to_12_squares() {
        let presets: Vec<IndexFunction> = ["azi", "zagreb1", "zagreb2", "harmonic", "abc", "ga", "randic", "sum_connectivity"]
            .iter()
            .map(|p| preset(p).unwrap())
            .collect();
        for f in &presets {
            for n in 2..=12usize {
                for bits in 0..1u64 << (n - 2) {
                    let c = LinkVector::from_bits(bits, n - 2);
                    let d = ti_direct(&c, f);
                    let r = ti_recursive(&c, f);
                    if f.is_exact() {
                        assert_eq!(d.as_rational(), r.as_rational(), "{f} {c}");
                    } else {
                        assert!(d.tie(&r), "{f} {c}: {d} vs {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn negation() {
        let azi = preset("azi").unwrap();
        let neg = azi.negate();
        assert_value(&neg.get(3, 3).unwrap(), &q(-729, 64));
        let g = g_table(&azi);
        let gn = g_table(&neg);
        for (a, b) in [(&g.g11, &gn.g11), (&g.g12, &gn.g12), (&g.g21, &gn.g21), (&g.g22, &gn.g22), (&g.g2, &gn.g2), (&g.base_pc2, &gn.base_pc2)] {
            assert_value(&a.neg(), b);
        }
        let c = lv("1,2,1,1,2");
        assert_value(&ti_direct(&c, &neg), &ti_direct(&c, &azi).neg());
        assert_value(&ti_recursive(&c, &neg), &ti_recursive(&c, &azi).neg());
    }

    #[test]
    fn preset_names() {
        for name in Preset::NAMES {
            preset(name).unwrap();
        }
        assert!(preset("randic").unwrap().mode() != Mode::Rational);
        assert!(Preset::parse("randic", Some(-1.0)).unwrap().build().is_exact());
        assert_eq!(Preset::parse("randic(2)", None).unwrap(), Preset::Randic(2.0));
        assert!(matches!(preset("wiener"), Err(Error::UnknownIndex(_))));
        let h = preset("harmonic").unwrap();
        let g = g_table(&h);
        assert_value(&g.g11, &q(1, 1));
        assert_value(&g.g2, &q(19, 21));
    }

    const AZI_DOC: &str = r#"{"name":"azi","mode":"rational","values":{
        "2,2":"8","2,3":"8","2,4":"8","3,3":"729/64","3,4":"1728/125","4,4":"512/27"}}"#;

    #[test]
    fn custom_document_round_trip() {
        let f = load_custom_index(AZI_DOC).unwrap();
        assert_eq!(f, preset("azi").unwrap());
        let doc = serde_json::to_string(&f.to_document()).unwrap();
        assert_eq!(load_custom_index(&doc).unwrap(), f);

        let abc = preset("abc").unwrap();
        let doc = serde_json::to_string(&abc.to_document()).unwrap();
        assert_eq!(load_custom_index(&doc).unwrap(), abc);
    }

    #[test]
    fn custom_document_errors() {
        let missing = AZI_DOC.replace(r#""3,4":"1728/125","#, "");
        assert_eq!(
            load_custom_index(&missing).unwrap_err(),
            Error::Document("pair (3,4) absent".into())
        );
        let zero = AZI_DOC.replace(r#""2,2":"8""#, r#""2,2":"1/0""#);
        assert!(load_custom_index(&zero).unwrap_err().to_string().contains("zero denominator"));
        let bad = AZI_DOC.replace(r#""2,2":"8""#, r#""2,2":"8/x""#);
        assert!(load_custom_index(&bad).unwrap_err().to_string().contains("malformed rational"));
        let neg_eps = r#"{"name":"x","mode":"float","eps":-1,"values":{}}"#;
        assert!(load_custom_index(neg_eps).unwrap_err().to_string().contains("non-negative"));
        let swapped = AZI_DOC.replace(r#""2,3""#, r#""3,2""#);
        assert!(load_custom_index(&swapped).unwrap_err().to_string().contains("invalid pair key"));
        let out_of_domain = AZI_DOC.replace(r#""2,3""#, r#""2,5""#);
        assert!(load_custom_index(&out_of_domain).is_err());
        assert!(load_custom_index("[1]").is_err());
        assert!(load_custom_index(r#"{"mode":"rational","values":{}}"#).is_err());

        let float_doc = r#"{"name":"f","mode":"float","values":{
            "2,2":"1.5","2,3":2,"2,4":"1/4","3,3":"0","3,4":"-1e-3","4,4":"3"}}"#;
        let f = load_custom_index(float_doc).unwrap();
        assert_eq!(f.mode(), Mode::Float { eps: DEFAULT_EPS });
        assert_eq!(f.get(2, 4).unwrap().to_f64(), 0.25);
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn identity_holds_for_every_table(values in prop::array::uniform6(arb_rational())) {
            let f = IndexFunction::rational("random", values);
            let defect = g_table(&f).identity_defect().unwrap();
            prop_assert!(defect.as_rational().unwrap().is_zero());
        }
    }

    proptest! {
        #[test]
        fn direct_evaluation_is_mirror_invariant(
            values in prop::array::uniform6(arb_rational()),
            bits in prop::collection::vec(prop::bool::ANY, 0..30),
        ) {
            let f = IndexFunction::rational("random", values);
            let c = LinkVector::new(bits.into_iter().map(|b| if b { Link::Turn } else { Link::Straight }).collect());
            let forward = ti_direct(&c, &f);
            let mirrored = ti_direct(&c.reversed(), &f);
            let recursive = ti_recursive(&c, &f);
            prop_assert_eq!(forward.as_rational(), mirrored.as_rational());
            prop_assert_eq!(forward.as_rational(), recursive.as_rational());
        }
    }
}
