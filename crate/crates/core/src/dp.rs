//! Extremal chains by dynamic programming over the last link.
//!
//! `M(k, i)` is the best index value over chains with `k` squares whose last
//! link is `i`. Because the increment of a square depends only on the last two
//! links, `M(k, i) = best_j { M(k-1, j) + g(j, i) }`. Every step records which
//! `j` attain the optimum and a tie count `t(k, i)`; the number of optimal
//! chains ending in `i` is `t(n, i) + 1`, and walking the recorded predecessors
//! backwards yields each of them.
//!
//! Minimization runs the same program on the negated index.
//!
//! Rational tables are rescaled to one common denominator up front, so the
//! inner loop only adds integers (`i128` whenever the final magnitude provably
//! fits, `BigInt` otherwise). Float tables compare with a relative tolerance.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::chain::{canonical_reversal, Link, LinkVector, FIRST_LINK_POSITION};
use crate::error::{Error, Result};
use crate::index::{g_table, GTable, IndexFunction};
use crate::value::{float_cmp, Mode, Value};

/// First square count for which the program is defined.
pub const MIN_SQUARES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Max,
    Min,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Max => "max",
            Objective::Min => "min",
        })
    }
}

/// A subset of `{Straight, Turn}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LinkSet(u8);

impl LinkSet {
    pub const EMPTY: LinkSet = LinkSet(0);
    pub const BOTH: LinkSet = LinkSet(0b11);

    pub fn single(link: Link) -> LinkSet {
        LinkSet(1 << link.slot())
    }

    pub fn contains(self, link: Link) -> bool {
        self.0 & (1 << link.slot()) != 0
    }

    pub fn insert(&mut self, link: Link) {
        self.0 |= 1 << link.slot();
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in link order (straight first).
    pub fn iter(self) -> impl Iterator<Item = Link> {
        Link::ALL.into_iter().filter(move |&l| self.contains(l))
    }

    /// Preferred member: straight if present.
    pub fn first(self) -> Option<Link> {
        self.iter().next()
    }
}

impl Serialize for LinkSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(Link::code))
    }
}

/// Serializes big counts as JSON numbers when they fit in `u64`, else as strings.
pub(crate) mod big_count {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }
    }

    pub mod pair {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigUint; 2], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(2))?;
            for x in v {
                match x.to_u64() {
                    Some(x) => seq.serialize_element(&x)?,
                    None => seq.serialize_element(&x.to_string())?,
                }
            }
            seq.end()
        }
    }
}

trait Scalar: Clone {
    fn plus(&self, rhs: &Self) -> Self;
    /// `Equal` means a tie.
    fn tie_cmp(&self, rhs: &Self) -> Ordering;
}

impl Scalar for i128 {
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn tie_cmp(&self, rhs: &Self) -> Ordering {
        self.cmp(rhs)
    }
}

impl Scalar for BigInt {
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn tie_cmp(&self, rhs: &Self) -> Ordering {
        self.cmp(rhs)
    }
}

#[derive(Debug, Clone, Copy)]
struct Approx {
    value: f64,
    eps: f64,
}

impl Scalar for Approx {
    fn plus(&self, rhs: &Self) -> Self {
        Approx {
            value: self.value + rhs.value,
            eps: self.eps,
        }
    }
    fn tie_cmp(&self, rhs: &Self) -> Ordering {
        float_cmp(self.value, rhs.value, self.eps)
    }
}

/// Tie counts `t(k, i)`.
trait TieCount: Clone + Default {
    /// `1 + a + b`, or `None` on overflow.
    fn merged(a: &Self, b: &Self) -> Option<Self>;
}

impl TieCount for u64 {
    fn merged(a: &Self, b: &Self) -> Option<Self> {
        a.checked_add(*b)?.checked_add(1)
    }
}

impl TieCount for BigUint {
    fn merged(a: &Self, b: &Self) -> Option<Self> {
        Some(BigUint::one() + a + b)
    }
}

/// Machine-word counts while they fit, which covers every index without
/// exponentially many optima.
#[derive(Debug, Clone)]
enum Ties {
    Small(Vec<[u64; 2]>),
    Big(Vec<[BigUint; 2]>),
}

impl Ties {
    fn get(&self, r: usize, s: usize) -> BigUint {
        match self {
            Ties::Small(t) => BigUint::from(t[r][s]),
            Ties::Big(t) => t[r][s].clone(),
        }
    }
}

/// Values, predecessor sets and tie counts for every row.
type Filled<S, C> = (Vec<[S; 2]>, Vec<[LinkSet; 2]>, Vec<[C; 2]>);

/// Increments in a single scalar type: `[g11, g12, g21, g22, g2]` and the domino value.
#[derive(Debug, Clone)]
struct Kernel<S> {
    steps: [S; 5],
    base: S,
}

impl<S: Scalar> Kernel<S> {
    fn step(&self, prev: Link, next: Link) -> &S {
        &self.steps[2 * prev.slot() + next.slot()]
    }

    fn first(&self, link: Link) -> &S {
        match link {
            Link::Straight => &self.steps[0],
            Link::Turn => &self.steps[4],
        }
    }

    fn map<T>(&self, f: impl Fn(&S) -> T) -> Kernel<T> {
        Kernel {
            steps: self.steps.each_ref().map(&f),
            base: f(&self.base),
        }
    }

    fn start(&self) -> [S; 2] {
        Link::ALL.map(|l| self.base.plus(self.first(l)))
    }

    /// One step of the recurrence from row `k - 1` to row `k`; `None` if a count overflows.
    fn advance<C: TieCount>(&self, prev: &[S; 2], prev_ties: &[C; 2]) -> Option<([S; 2], [LinkSet; 2], [C; 2])> {
        let mut preds = [LinkSet::EMPTY; 2];
        let mut ties: [C; 2] = Default::default();
        let mut values = [self.base.clone(), self.base.clone()];
        for next in Link::ALL {
            let via_straight = prev[0].plus(self.step(Link::Straight, next));
            let via_turn = prev[1].plus(self.step(Link::Turn, next));
            let slot = next.slot();
            values[slot] = match via_straight.tie_cmp(&via_turn) {
                Ordering::Greater => {
                    preds[slot] = LinkSet::single(Link::Straight);
                    ties[slot] = prev_ties[0].clone();
                    via_straight
                }
                Ordering::Less => {
                    preds[slot] = LinkSet::single(Link::Turn);
                    ties[slot] = prev_ties[1].clone();
                    via_turn
                }
                Ordering::Equal => {
                    preds[slot] = LinkSet::BOTH;
                    ties[slot] = C::merged(&prev_ties[0], &prev_ties[1])?;
                    via_straight
                }
            };
        }
        Some((values, preds, ties))
    }

    fn fill_with<C: TieCount>(&self, n: usize) -> Option<Filled<S, C>> {
        let rows = n - MIN_SQUARES + 1;
        let mut values = Vec::with_capacity(rows);
        let mut preds = Vec::with_capacity(rows);
        let mut ties = Vec::with_capacity(rows);
        values.push(self.start());
        preds.push([LinkSet::EMPTY; 2]);
        ties.push(Default::default());
        for _ in MIN_SQUARES + 1..=n {
            let (v, p, t) = self.advance(values.last().unwrap(), ties.last().unwrap())?;
            values.push(v);
            preds.push(p);
            ties.push(t);
        }
        Some((values, preds, ties))
    }

    fn fill(&self, n: usize) -> (Vec<[S; 2]>, Vec<[LinkSet; 2]>, Ties) {
        match self.fill_with::<u64>(n) {
            Some((v, p, t)) => (v, p, Ties::Small(t)),
            None => {
                let (v, p, t) = self.fill_with::<BigUint>(n).expect("unbounded counts");
                (v, p, Ties::Big(t))
            }
        }
    }

    fn stream_with<C: TieCount>(&self, n: usize) -> Option<([S; 2], [C; 2])> {
        let mut values = self.start();
        let mut ties: [C; 2] = Default::default();
        for _ in MIN_SQUARES + 1..=n {
            let (v, _, t) = self.advance(&values, &ties)?;
            values = v;
            ties = t;
        }
        Some((values, ties))
    }

    fn stream(&self, n: usize) -> ([S; 2], [BigUint; 2]) {
        match self.stream_with::<u64>(n) {
            Some((v, t)) => (v, t.map(BigUint::from)),
            None => self.stream_with::<BigUint>(n).expect("unbounded counts"),
        }
    }
}

#[derive(Debug, Clone)]
enum Kernels {
    /// Numerators over a shared denominator.
    Exact { denom: BigInt, kernel: Kernel<BigInt> },
    Float { kernel: Kernel<Approx> },
}

impl Kernels {
    fn from_table(table: &GTable) -> Result<Kernels> {
        let entries = [&table.g11, &table.g12, &table.g21, &table.g22, &table.g2, &table.base_pc2];
        match table.mode() {
            Mode::Rational => {
                let rationals: Vec<&BigRational> = entries
                    .iter()
                    .map(|v| v.as_rational().ok_or(Error::ModeMismatch))
                    .collect::<Result<_>>()?;
                let denom = rationals
                    .iter()
                    .fold(BigInt::one(), |acc, r| num_integer::Integer::lcm(&acc, r.denom()));
                let scaled: Vec<BigInt> = rationals
                    .iter()
                    .map(|r| r.numer() * (&denom / r.denom()))
                    .collect();
                Ok(Kernels::Exact {
                    denom,
                    kernel: Kernel {
                        steps: std::array::from_fn(|i| scaled[i].clone()),
                        base: scaled[5].clone(),
                    },
                })
            }
            Mode::Float { eps } => {
                let floats: Vec<f64> = entries
                    .iter()
                    .map(|v| match v {
                        Value::Float { value, .. } => Ok(*value),
                        Value::Rational(_) => Err(Error::ModeMismatch),
                    })
                    .collect::<Result<_>>()?;
                let approx = |value: f64| Approx { value, eps };
                Ok(Kernels::Float {
                    kernel: Kernel {
                        steps: std::array::from_fn(|i| approx(floats[i])),
                        base: approx(floats[5]),
                    },
                })
            }
        }
    }
}

/// Narrows an exact kernel to `i128` when no value reachable within `n` squares can overflow.
fn narrow(kernel: &Kernel<BigInt>, n: usize) -> Option<Kernel<i128>> {
    let largest = kernel
        .steps
        .iter()
        .map(|g| g.abs())
        .max()
        .unwrap_or_default();
    let bound = kernel.base.abs() + largest * BigInt::from(n);
    if bound.bits() >= 120 {
        return None;
    }
    Some(kernel.map(|x| x.to_i128().expect("bounded by 2^120")))
}

/// Dynamic program for one index (or an explicit increment table).
#[derive(Debug, Clone)]
pub struct Engine {
    name: String,
    table: GTable,
    kernels: Kernels,
}

impl Engine {
    pub fn new(f: &IndexFunction) -> Engine {
        Engine::from_gtable(f.name(), g_table(f)).expect("tables derived from an index are single-mode")
    }

    /// Runs the program on an arbitrary increment table. Fails if the table mixes modes.
    pub fn from_gtable(name: impl Into<String>, table: GTable) -> Result<Engine> {
        let kernels = Kernels::from_table(&table)?;
        Ok(Engine {
            name: name.into(),
            table,
            kernels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gtable(&self) -> &GTable {
        &self.table
    }

    pub fn mode(&self) -> Mode {
        self.table.mode()
    }

    pub fn negate(&self) -> Engine {
        Engine::from_gtable(format!("{}-neg", self.name), self.table.negate())
            .expect("negation preserves the mode")
    }

    /// Fills `M(k, i)`, predecessor sets and tie counts for `3 <= k <= n`.
    pub fn run(&self, n: usize) -> Result<DpTable> {
        require(n)?;
        let cells = match &self.kernels {
            Kernels::Exact { denom, kernel } => match narrow(kernel, n) {
                Some(small) => {
                    let (rows, preds, ties) = small.fill(n);
                    (Cells::Small { denom: denom.clone(), rows }, preds, ties)
                }
                None => {
                    let (rows, preds, ties) = kernel.fill(n);
                    (Cells::Big { denom: denom.clone(), rows }, preds, ties)
                }
            },
            Kernels::Float { kernel } => {
                let (rows, preds, ties) = kernel.fill(n);
                let eps = kernel.base.eps;
                let rows = rows.into_iter().map(|r| r.map(|a| a.value)).collect();
                (Cells::Float { eps, rows }, preds, ties)
            }
        };
        let (cells, preds, ties) = cells;
        Ok(DpTable {
            n,
            cells,
            preds,
            ties,
        })
    }

    /// Best value, per-end values and optimal-chain count in constant memory.
    pub fn stream(&self, n: usize, objective: Objective) -> Result<StreamedExtremum> {
        require(n)?;
        if objective == Objective::Min {
            let mut s = self.negate().stream(n, Objective::Max)?;
            s.objective = Objective::Min;
            s.value = s.value.neg();
            s.end_values = s.end_values.map(|v| v.neg());
            return Ok(s);
        }
        let (end_values, ties) = match &self.kernels {
            Kernels::Exact { denom, kernel } => {
                let (v, t) = match narrow(kernel, n) {
                    Some(small) => {
                        let (v, t) = small.stream(n);
                        (v.map(BigInt::from), t)
                    }
                    None => kernel.stream(n),
                };
                (v.map(|x| Value::Rational(BigRational::new(x, denom.clone()))), t)
            }
            Kernels::Float { kernel } => {
                let (v, t) = kernel.stream(n);
                (v.map(|a| Value::Float { value: a.value, eps: a.eps }), t)
            }
        };
        let winners = winners_of(&end_values[0], &end_values[1]);
        let labeled_count = winners.iter().map(|l| &ties[l.slot()] + 1u8).sum();
        let value = end_values[winners.first().expect("nonempty").slot()].clone();
        Ok(StreamedExtremum {
            n,
            objective,
            value,
            end_values,
            winning_ends: winners,
            labeled_count,
        })
    }

    pub fn maximize(&self, n: usize, end: Option<Link>) -> Result<ExtremalResult> {
        let table = self.run(n)?;
        Ok(table.extremal(&self.name, Objective::Max, end))
    }

    pub fn minimize(&self, n: usize, end: Option<Link>) -> Result<ExtremalResult> {
        let table = self.negate().run(n)?;
        Ok(table.extremal(&self.name, Objective::Min, end))
    }
}

fn require(n: usize) -> Result<()> {
    if n < MIN_SQUARES {
        Err(Error::TooFewSquares {
            what: "the extremal program",
            min: MIN_SQUARES,
            n,
        })
    } else {
        Ok(())
    }
}

fn winners_of(straight: &Value, turn: &Value) -> LinkSet {
    match straight.compare(turn).expect("single-mode table") {
        Ordering::Greater => LinkSet::single(Link::Straight),
        Ordering::Less => LinkSet::single(Link::Turn),
        Ordering::Equal => LinkSet::BOTH,
    }
}

#[derive(Debug, Clone)]
enum Cells {
    Small { denom: BigInt, rows: Vec<[i128; 2]> },
    Big { denom: BigInt, rows: Vec<[BigInt; 2]> },
    Float { eps: f64, rows: Vec<[f64; 2]> },
}

/// Snapshot of one row of the program.
#[derive(Debug, Clone, Serialize)]
pub struct DpState {
    pub n: usize,
    /// `M(n, 1)`, `M(n, 2)`.
    pub best: [Value; 2],
    pub predecessors: [LinkSet; 2],
    #[serde(with = "big_count::pair")]
    pub ties: [BigUint; 2],
}

/// The filled program for square counts `3..=n`.
#[derive(Debug, Clone)]
pub struct DpTable {
    n: usize,
    cells: Cells,
    preds: Vec<[LinkSet; 2]>,
    ties: Ties,
}

impl DpTable {
    pub fn n(&self) -> usize {
        self.n
    }

    fn row(&self, k: usize) -> usize {
        assert!(
            (MIN_SQUARES..=self.n).contains(&k),
            "square count {k} outside 3..={}",
            self.n
        );
        k - MIN_SQUARES
    }

    pub fn mode(&self) -> Mode {
        match &self.cells {
            Cells::Float { eps, .. } => Mode::Float { eps: *eps },
            _ => Mode::Rational,
        }
    }

    /// `M(k, end)`.
    pub fn value(&self, k: usize, end: Link) -> Value {
        let r = self.row(k);
        let s = end.slot();
        match &self.cells {
            Cells::Small { denom, rows } => {
                Value::Rational(BigRational::new(rows[r][s].into(), denom.clone()))
            }
            Cells::Big { denom, rows } => {
                Value::Rational(BigRational::new(rows[r][s].clone(), denom.clone()))
            }
            Cells::Float { eps, rows } => Value::Float {
                value: rows[r][s],
                eps: *eps,
            },
        }
    }

    pub fn predecessors(&self, k: usize, end: Link) -> LinkSet {
        self.preds[self.row(k)][end.slot()]
    }

    /// `t(k, end)`; the number of optimal chains ending in `end` is one more.
    pub fn ties(&self, k: usize, end: Link) -> BigUint {
        self.ties.get(self.row(k), end.slot())
    }

    pub fn count(&self, k: usize, end: Link) -> BigUint {
        self.ties(k, end) + 1u8
    }

    pub fn state(&self, k: usize) -> DpState {
        let r = self.row(k);
        DpState {
            n: k,
            best: Link::ALL.map(|l| self.value(k, l)),
            predecessors: self.preds[r],
            ties: [0, 1].map(|s| self.ties.get(r, s)),
        }
    }

    /// End links attaining `max(M(k, 1), M(k, 2))`.
    pub fn winning_ends(&self, k: usize) -> LinkSet {
        let r = self.row(k);
        let ord = match &self.cells {
            Cells::Small { rows, .. } => rows[r][0].cmp(&rows[r][1]),
            Cells::Big { rows, .. } => rows[r][0].cmp(&rows[r][1]),
            Cells::Float { eps, rows } => float_cmp(rows[r][0], rows[r][1], *eps),
        };
        match ord {
            Ordering::Greater => LinkSet::single(Link::Straight),
            Ordering::Less => LinkSet::single(Link::Turn),
            Ordering::Equal => LinkSet::BOTH,
        }
    }

    /// Checks the tie-count recursion and predecessor-set shape at every row.
    pub fn check_invariants(&self) -> bool {
        let t = |r: usize, s: usize| self.ties.get(r, s);
        let first_ok = t(0, 0).is_zero() && t(0, 1).is_zero() && self.preds[0] == [LinkSet::EMPTY; 2];
        first_ok
            && (1..self.preds.len()).all(|r| {
                Link::ALL.into_iter().all(|l| {
                    let s = l.slot();
                    let p = self.preds[r][s];
                    match p.len() {
                        1 => t(r, s) == t(r - 1, p.first().unwrap().slot()),
                        2 => t(r, s) == BigUint::one() + t(r - 1, 0) + t(r - 1, 1),
                        _ => false,
                    }
                })
            })
    }

    /// Backtracks one optimal chain ending in `end`, preferring straight links on ties.
    pub fn witness(&self, end: Link) -> LinkVector {
        self.witness_at(self.n, end)
    }

    /// [`DpTable::witness`] for `squares <= n`.
    pub fn witness_at(&self, squares: usize, end: Link) -> LinkVector {
        self.row(squares);
        let mut links = vec![Link::Straight; squares - 2];
        let mut current = end;
        for k in (MIN_SQUARES..=squares).rev() {
            links[k - FIRST_LINK_POSITION] = current;
            if k > MIN_SQUARES {
                current = self
                    .predecessors(k, current)
                    .first()
                    .expect("rows past the first have predecessors");
            }
        }
        LinkVector::new(links)
    }

    /// Every optimal chain for the full length, in lexicographic order.
    /// `end = None` takes every winning end link.
    pub fn optimal_chains(&self, end: Option<Link>) -> OptimalChains<'_> {
        OptimalChains::new(self, self.n, end)
    }

    /// Optimal chains with `squares <= n` squares; rows are shared by every prefix length.
    pub fn optimal_chains_at(&self, squares: usize, end: Option<Link>) -> OptimalChains<'_> {
        self.row(squares);
        OptimalChains::new(self, squares, end)
    }

    /// Summary of the full-length optimum. Min results expect a table of the
    /// negated index and report values with the sign restored.
    pub fn extremal(&self, index: &str, objective: Objective, end: Option<Link>) -> ExtremalResult {
        let n = self.n;
        let ends = match end {
            Some(l) => LinkSet::single(l),
            None => self.winning_ends(n),
        };
        let chosen = ends.first().expect("nonempty");
        let sign = |v: Value| match objective {
            Objective::Max => v,
            Objective::Min => v.neg(),
        };
        let end_values = Link::ALL.map(|l| sign(self.value(n, l)));
        ExtremalResult {
            index: index.to_string(),
            n,
            objective,
            end,
            value: end_values[chosen.slot()].clone(),
            end_values,
            winning_ends: ends,
            witness: self.witness(chosen),
            labeled_count: ends.iter().map(|l| self.count(n, l)).sum(),
            iso_count: None,
            tolerance_dependent: !self.mode().is_exact(),
        }
    }
}

/// Result of the streaming (constant-memory) mode.
#[derive(Debug, Clone, Serialize)]
pub struct StreamedExtremum {
    pub n: usize,
    pub objective: Objective,
    pub value: Value,
    pub end_values: [Value; 2],
    pub winning_ends: LinkSet,
    #[serde(with = "big_count")]
    pub labeled_count: BigUint,
}

/// Optimum over all chains with `n` squares (or with a fixed last link).
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalResult {
    pub index: String,
    pub n: usize,
    pub objective: Objective,
    /// Fixed last link, if requested.
    pub end: Option<Link>,
    pub value: Value,
    /// Optimum per last link: `[end = 1, end = 2]`.
    pub end_values: [Value; 2],
    pub winning_ends: LinkSet,
    pub witness: LinkVector,
    /// Number of optimal link vectors (mirror images counted separately).
    #[serde(with = "big_count")]
    pub labeled_count: BigUint,
    /// Optimal chains up to reversal; filled in by enumeration.
    #[serde(with = "big_count::option", skip_serializing_if = "Option::is_none")]
    pub iso_count: Option<BigUint>,
    /// Float mode: ties and counts depend on the tolerance.
    pub tolerance_dependent: bool,
}

/// Depth-first walk over recorded predecessors, emitted front to back.
///
/// A node `(k, i)` is live when it lies on some optimal path to a target end.
/// Extending a live prefix by a live successor never dead-ends, so each chain
/// costs `O(n)` to produce.
pub struct OptimalChains<'a> {
    table: &'a DpTable,
    squares: usize,
    live: Vec<LinkSet>,
    path: Vec<Link>,
    started: bool,
    done: bool,
}

impl<'a> OptimalChains<'a> {
    fn new(table: &'a DpTable, n: usize, end: Option<Link>) -> Self {
        let mut live = vec![LinkSet::EMPTY; n - MIN_SQUARES + 1];
        live[n - MIN_SQUARES] = match end {
            Some(l) => LinkSet::single(l),
            None => table.winning_ends(n),
        };
        for k in (MIN_SQUARES + 1..=n).rev() {
            for l in live[k - MIN_SQUARES].iter() {
                for p in table.predecessors(k, l).iter() {
                    live[k - 1 - MIN_SQUARES].insert(p);
                }
            }
        }
        OptimalChains {
            table,
            squares: n,
            live,
            path: Vec::with_capacity(n - 2),
            started: false,
            done: false,
        }
    }

    /// Whether link `l` may sit at position `k` after the current prefix.
    fn allowed(&self, k: usize, l: Link) -> bool {
        self.live[k - MIN_SQUARES].contains(l)
            && (k == MIN_SQUARES
                || self
                    .table
                    .predecessors(k, l)
                    .contains(self.path[k - 1 - FIRST_LINK_POSITION]))
    }

    fn extend_greedily(&mut self) {
        for k in MIN_SQUARES + self.path.len()..=self.squares {
            let next = Link::ALL
                .into_iter()
                .find(|&l| self.allowed(k, l))
                .expect("live prefixes always extend");
            self.path.push(next);
        }
    }
}

impl Iterator for OptimalChains<'_> {
    type Item = LinkVector;

    fn next(&mut self) -> Option<LinkVector> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.extend_greedily();
            return Some(LinkVector::new(self.path.clone()));
        }
        // Rightmost position holding a straight link whose turn alternative is allowed.
        loop {
            let Some(last) = self.path.pop() else {
                self.done = true;
                return None;
            };
            let k = self.path.len() + FIRST_LINK_POSITION;
            if last == Link::Straight && self.allowed(k, Link::Turn) {
                self.path.push(Link::Turn);
                self.extend_greedily();
                return Some(LinkVector::new(self.path.clone()));
            }
        }
    }
}

/// Drops mirror duplicates, emitting each chain's canonical form once.
pub struct DedupReversal<I> {
    inner: I,
    seen: HashSet<LinkVector>,
}

impl<I: Iterator<Item = LinkVector>> Iterator for DedupReversal<I> {
    type Item = LinkVector;

    fn next(&mut self) -> Option<LinkVector> {
        for chain in self.inner.by_ref() {
            let canon = canonical_reversal(&chain);
            if self.seen.insert(canon.clone()) {
                return Some(canon);
            }
        }
        None
    }
}

pub fn dedup_reversal<I: Iterator<Item = LinkVector>>(inner: I) -> DedupReversal<I> {
    DedupReversal {
        inner,
        seen: HashSet::new(),
    }
}

/// Fills the program for `f` up to `n` squares.
pub fn run_dp(f: &IndexFunction, n: usize) -> Result<DpTable> {
    Engine::new(f).run(n)
}

pub fn maximize(f: &IndexFunction, n: usize, end: Option<Link>) -> Result<ExtremalResult> {
    Engine::new(f).maximize(n, end)
}

pub fn minimize(f: &IndexFunction, n: usize) -> Result<ExtremalResult> {
    Engine::new(f).minimize(n, None)
}

/// All maximal chains, optionally restricted to one end link, truncated to
/// `limit`, and reduced to one representative per mirror pair.
pub fn enumerate_maximal(
    f: &IndexFunction,
    n: usize,
    end: Option<Link>,
    limit: Option<usize>,
    dedup: bool,
) -> Result<Vec<LinkVector>> {
    let table = run_dp(f, n)?;
    let chains = table.optimal_chains(end);
    let limit = limit.unwrap_or(usize::MAX);
    Ok(if dedup {
        dedup_reversal(chains).take(limit).collect()
    } else {
        chains.take(limit).collect()
    })
}

/// Number of maximal chains ending in `end`.
pub fn count_maximal(f: &IndexFunction, n: usize, end: Link) -> Result<BigUint> {
    Ok(run_dp(f, n)?.count(n, end))
}

/// Which of the sufficient conditions for linear/zigzag optimality applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierCase {
    /// `Li_n` is the unique maximizer for every `n >= 3`.
    LinearAlways,
    /// `Li_n` is the unique maximizer for `n >= 4`; `n = 3` is a tie.
    LinearFromN4WithTieAt3,
    /// `Z_n` is the unique maximizer below `n*`, `Li_n` from `n*` on.
    ZigzagThenLinear,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifierVerdict {
    pub premise_holds: bool,
    pub case: ClassifierCase,
    #[serde(with = "big_count::option")]
    pub n_star: Option<BigUint>,
    /// Whether `Z_n` also attains the maximum at `n = n*`.
    pub zigzag_ties_at_threshold: Option<bool>,
}

pub fn classify(f: &IndexFunction) -> Result<ClassifierVerdict> {
    classify_table(&g_table(f))
}

/// Premise: `g11 > max(g12, g22, (g12 + g21) / 2)`. Then `g11` against `g2`
/// selects the case; in the zigzag case `n* = ceil((g2 - g11) / (g11 - g22) + 3)`.
pub fn classify_table(g: &GTable) -> Result<ClassifierVerdict> {
    let gt = |a: &Value, b: &Value| -> Result<bool> { Ok(a.compare(b)? == Ordering::Greater) };
    let twice_g11 = g.g11.scale(2);
    let premise = gt(&g.g11, &g.g12)?
        && gt(&g.g11, &g.g22)?
        && gt(&twice_g11, &g.g12.checked_add(&g.g21)?)?;
    if !premise {
        return Ok(ClassifierVerdict {
            premise_holds: false,
            case: ClassifierCase::NotApplicable,
            n_star: None,
            zigzag_ties_at_threshold: None,
        });
    }
    let case = match g.g11.compare(&g.g2)? {
        Ordering::Greater => ClassifierCase::LinearAlways,
        Ordering::Equal => ClassifierCase::LinearFromN4WithTieAt3,
        Ordering::Less => ClassifierCase::ZigzagThenLinear,
    };
    if case != ClassifierCase::ZigzagThenLinear {
        return Ok(ClassifierVerdict {
            premise_holds: true,
            case,
            n_star: None,
            zigzag_ties_at_threshold: None,
        });
    }
    if !gt(&g.g11, &g.g22)? {
        return Err(Error::Inconsistent("zigzag case with g11 <= g22".into()));
    }
    let n_star = threshold(g)?;
    if n_star < BigUint::from(4u8) {
        return Err(Error::Inconsistent(format!("threshold n* = {n_star} below 4")));
    }

    // Li_n = base + g11 (n - 2), Z_n = base + g2 + g22 (n - 3); compared at n = n*.
    let ties = match g.mode() {
        Mode::Rational => {
            let q = |v: &Value| v.as_rational().cloned().ok_or(Error::ModeMismatch);
            let n = BigRational::from_integer(BigInt::from(n_star.clone()));
            let linear = q(&g.g11)? * (&n - BigRational::from_integer(2.into()));
            let zigzag = q(&g.g2)? + q(&g.g22)? * (&n - BigRational::from_integer(3.into()));
            linear == zigzag
        }
        Mode::Float { eps } => {
            let n = n_star.to_f64().unwrap_or(f64::INFINITY);
            let linear = g.g11.to_f64() * (n - 2.0);
            let zigzag = g.g2.to_f64() + g.g22.to_f64() * (n - 3.0);
            float_cmp(linear, zigzag, eps) == Ordering::Equal
        }
    };
    Ok(ClassifierVerdict {
        premise_holds: true,
        case,
        n_star: Some(n_star),
        zigzag_ties_at_threshold: Some(ties),
    })
}

fn threshold(g: &GTable) -> Result<BigUint> {
    let ceiling = match g.mode() {
        Mode::Rational => {
            let q = |v: &Value| v.as_rational().cloned().ok_or(Error::ModeMismatch);
            let ratio = (q(&g.g2)? - q(&g.g11)?) / (q(&g.g11)? - q(&g.g22)?);
            (ratio + BigRational::from_integer(3.into())).ceil().to_integer()
        }
        Mode::Float { .. } => {
            let ratio = (g.g2.to_f64() - g.g11.to_f64()) / (g.g11.to_f64() - g.g22.to_f64());
            let c = (ratio + 3.0).ceil();
            BigRational::from_float(c)
                .map(|r| r.to_integer())
                .ok_or_else(|| Error::Inconsistent(format!("threshold {c} is not finite")))?
        }
    };
    ceiling
        .to_biguint()
        .ok_or_else(|| Error::Inconsistent(format!("negative threshold {ceiling}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{az1, linear_chain, zigzag_chain};
    use crate::index::{preset, ti_direct};

    fn lv(s: &str) -> LinkVector {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> Value {
        Value::ratio(n, d)
    }

    fn azi() -> IndexFunction {
        preset("azi").unwrap()
    }

    #[test]
    fn azi_small_rows() {
        let t = run_dp(&azi(), 7).unwrap();
        assert!(t.value(4, Link::Straight).tie(&q(513013, 4000)));
        assert!(t.value(4, Link::Turn).tie(&q(513013, 4000)));
        assert!(t.value(5, Link::Straight).tie(&q(329717, 2000)));
        assert_eq!(t.value(5, Link::Straight).compare(&t.value(5, Link::Turn)).unwrap(), Ordering::Greater);
        assert_eq!(t.ties(7, Link::Turn), BigUint::from(1u8));
        assert_eq!(t.ties(7, Link::Straight), BigUint::zero());
        assert_eq!(t.predecessors(7, Link::Turn), LinkSet::BOTH);
        assert!(t.check_invariants());
    }

    #[test]
    fn too_few_squares() {
        assert!(matches!(run_dp(&azi(), 2), Err(Error::TooFewSquares { .. })));
        assert!(maximize(&azi(), 0, None).is_err());
        assert!(count_maximal(&azi(), 2, Link::Straight).is_err());
        assert!(enumerate_maximal(&azi(), 1, None, None, false).is_err());
    }

    #[test]
    fn maximize_anchors() {
        let r = maximize(&azi(), 6, None).unwrap();
        assert!(r.value.tie(&q(10790359, 54000)));
        assert_eq!(r.witness, lv("1,2,2,1"));
        assert_eq!(r.labeled_count, BigUint::from(1u8));
        assert!(ti_direct(&r.witness, &azi()).tie(&r.value));

        let r = maximize(&azi(), 7, None).unwrap();
        assert_eq!(r.witness, az1(3).unwrap());
        assert_eq!(r.labeled_count, BigUint::from(1u8));

        assert_eq!(maximize(&azi(), 8, None).unwrap().labeled_count, BigUint::from(2u8));

        let r = maximize(&azi(), 4, None).unwrap();
        assert_eq!(r.winning_ends, LinkSet::BOTH);
        assert_eq!(r.labeled_count, BigUint::from(2u8));
        assert_eq!(r.witness, lv("2,1"));
    }

    #[test]
    fn fixed_end() {
        let r = maximize(&azi(), 6, Some(Link::Turn)).unwrap();
        assert_eq!(r.witness.last(), Some(Link::Turn));
        assert!(r.value.tie(&r.end_values[1]));
        assert!(ti_direct(&r.witness, &azi()).tie(&r.value));
    }

    #[test]
    fn minimize_anchors() {
        let r = minimize(&azi(), 8).unwrap();
        assert_eq!(r.witness, linear_chain(8).unwrap());
        assert_eq!(r.objective, Objective::Min);
        assert_eq!(minimize(&azi(), 4).unwrap().witness, zigzag_chain(4).unwrap());
        let neg = maximize(&azi().negate(), 8, None).unwrap();
        assert!(r.value.tie(&neg.value.neg()));
    }

    #[test]
    fn counts() {
        assert_eq!(count_maximal(&azi(), 10, Link::Straight).unwrap(), BigUint::from(3u8));
        assert_eq!(count_maximal(&azi(), 7, Link::Straight).unwrap(), BigUint::one());
        for name in ["azi", "zagreb1", "ga"] {
            for end in Link::ALL {
                assert_eq!(count_maximal(&preset(name).unwrap(), 3, end).unwrap(), BigUint::one());
            }
        }
    }

    #[test]
    fn enumeration_anchors() {
        assert_eq!(
            enumerate_maximal(&azi(), 8, None, None, false).unwrap(),
            vec![lv("1,2,1,2,2,1"), lv("1,2,2,1,2,1")]
        );
        assert_eq!(enumerate_maximal(&azi(), 8, None, None, true).unwrap().len(), 1);
        assert_eq!(enumerate_maximal(&azi(), 9, None, None, false).unwrap(), vec![az1(4).unwrap()]);
        assert_eq!(enumerate_maximal(&azi(), 12, None, Some(2), false).unwrap().len(), 2);
        assert_eq!(
            enumerate_maximal(&azi(), 4, None, None, false).unwrap(),
            vec![lv("1,2"), lv("2,1")]
        );
    }

    #[test]
    fn constant_index_makes_every_chain_optimal() {
        // f = 0 gives identical values, so all 2^(n-2) link vectors tie.
        let zero = IndexFunction::from_fn_rational("zero", |_, _| BigRational::zero());
        let t = run_dp(&zero, 12).unwrap();
        let total: BigUint = Link::ALL.iter().map(|&l| t.count(12, l)).sum();
        assert_eq!(total, BigUint::from(1u32 << 10));
        let chains: Vec<_> = t.optimal_chains(None).collect();
        assert_eq!(chains.len(), 1 << 10);
        assert!(chains.windows(2).all(|w| w[0] < w[1]));
        assert!(t.check_invariants());

        // Counts past u64.
        let t = run_dp(&zero, 100).unwrap();
        let total: BigUint = Link::ALL.iter().map(|&l| t.count(100, l)).sum();
        assert_eq!(total, BigUint::from(1u8) << 98);
        assert!(t.check_invariants());
        let s = Engine::new(&zero).stream(100, Objective::Max).unwrap();
        assert_eq!(s.labeled_count, total);
        assert_eq!(t.optimal_chains(None).take(3).count(), 3);
    }

    #[test]
    fn streaming_matches_table() {
        for name in ["azi", "zagreb1", "harmonic", "abc"] {
            let f = preset(name).unwrap();
            let engine = Engine::new(&f);
            for n in [3, 4, 9, 40] {
                let full = engine.maximize(n, None).unwrap();
                let s = engine.stream(n, Objective::Max).unwrap();
                assert!(full.value.tie(&s.value));
                assert_eq!(full.labeled_count, s.labeled_count);
                let min_full = engine.minimize(n, None).unwrap();
                let min_s = engine.stream(n, Objective::Min).unwrap();
                assert!(min_full.value.tie(&min_s.value));
            }
        }
    }

    #[test]
    fn wide_kernel_matches_narrow() {
        // Huge numerators force the BigInt path.
        let big = BigRational::from_integer(BigInt::from(10u8).pow(40));
        let f = IndexFunction::from_fn_rational("huge", |x, y| {
            &big * BigRational::new((x * y).into(), (x + y).into())
        });
        let engine = Engine::new(&f);
        let t = engine.run(30).unwrap();
        assert!(matches!(t.cells, Cells::Big { .. }));
        let r = engine.maximize(30, None).unwrap();
        assert!(ti_direct(&r.witness, &f).tie(&r.value));
    }

    #[test]
    fn mixed_table_is_rejected() {
        let mut g = g_table(&azi());
        g.g22 = Value::Float { value: 1.0, eps: 1e-9 };
        assert_eq!(Engine::from_gtable("bad", g).unwrap_err(), Error::ModeMismatch);
    }

    #[test]
    fn classifier_examples() {
        let v = classify(&azi().negate()).unwrap();
        assert_eq!(v.case, ClassifierCase::ZigzagThenLinear);
        assert_eq!(v.n_star, Some(BigUint::from(6u8)));
        assert!(v.premise_holds);

        let v = classify(&preset("harmonic").unwrap()).unwrap();
        assert_eq!(v.case, ClassifierCase::LinearAlways);

        let v = classify(&azi()).unwrap();
        assert_eq!(v.case, ClassifierCase::NotApplicable);
        assert!(!v.premise_holds);
    }

    #[test]
    fn classifier_tie_case() {
        // g11 = 3 f(3,3) equals g2 = 2 f(3,4) + 2 f(2,4) - f(3,3) when f(3,4) = f(3,3), f(2,4) = f(3,3).
        let f = IndexFunction::rational(
            "tie3",
            [1, 0, 6, 6, 6, 0].map(|x: i64| BigRational::from_integer(x.into())),
        );
        let g = g_table(&f);
        assert!(g.g11.tie(&g.g2));
        let v = classify(&f).unwrap();
        assert_eq!(v.case, ClassifierCase::LinearFromN4WithTieAt3);
        let t = run_dp(&f, 3).unwrap();
        assert_eq!(t.winning_ends(3), LinkSet::BOTH);
        for n in 4..12 {
            let r = maximize(&f, n, None).unwrap();
            assert_eq!(r.witness, linear_chain(n).unwrap());
            assert_eq!(r.labeled_count, BigUint::one());
        }
    }

    #[test]
    fn serializes_result() {
        let r = maximize(&azi(), 6, None).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["value"]["exact"], "10790359/54000");
        assert_eq!(json["witness"], serde_json::json!([1, 2, 2, 1]));
        assert_eq!(json["labeled_count"], 1);
        assert_eq!(json["winning_ends"], serde_json::json!([1]));
        assert!(json.get("iso_count").is_none());
    }
}
