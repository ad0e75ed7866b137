//! Polyomino chains grown to the right or downward, encoded by link vectors.
//!
//! A chain with `n >= 2` squares is `PC(L3, ..., Ln)`: the first two squares
//! form a horizontal domino and every further square `k` is attached to square
//! `k - 1` with a [`Link`]. A straight link keeps the current growth direction,
//! a turn toggles it between right and down.
//!
//! Positions are absolute: the link attaching square `p` lives at position `p`
//! (`3..=n`) and is stored at offset `p - 3`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Offset between an absolute link position and its storage index.
pub const FIRST_LINK_POSITION: usize = 3;

/// How a square attaches to its predecessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Link {
    /// Type 1: the chain keeps its direction.
    Straight,
    /// Type 2: the chain changes direction.
    Turn,
}

impl Link {
    pub const ALL: [Link; 2] = [Link::Straight, Link::Turn];

    pub fn code(self) -> u8 {
        match self {
            Link::Straight => 1,
            Link::Turn => 2,
        }
    }

    pub fn from_code(code: u8) -> Result<Link> {
        match code {
            1 => Ok(Link::Straight),
            2 => Ok(Link::Turn),
            other => Err(Error::InvalidLink(other.to_string())),
        }
    }

    /// Zero-based slot, used to index per-link arrays.
    pub fn slot(self) -> usize {
        self.code() as usize - 1
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl Serialize for Link {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.code())
    }
}

impl<'de> Deserialize<'de> for Link {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let code = u8::deserialize(d)?;
        Link::from_code(code).map_err(serde::de::Error::custom)
    }
}

/// The identity of a chain: links `L3..Ln`. The empty vector is the domino `PC2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkVector {
    links: Vec<Link>,
}

impl LinkVector {
    pub fn new(links: Vec<Link>) -> Self {
        LinkVector { links }
    }

    pub fn from_codes(codes: &[u8]) -> Result<Self> {
        codes
            .iter()
            .map(|&c| Link::from_code(c))
            .collect::<Result<Vec<_>>>()
            .map(LinkVector::new)
    }

    /// Decodes the low `len` bits of `bits`, most significant first; a set bit is a turn.
    /// Numeric order of `bits` coincides with lexicographic order of the result.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        let links = (0..len)
            .rev()
            .map(|shift| {
                if bits >> shift & 1 == 1 {
                    Link::Turn
                } else {
                    Link::Straight
                }
            })
            .collect();
        LinkVector { links }
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn into_links(self) -> Vec<Link> {
        self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn square_count(&self) -> usize {
        self.links.len() + 2
    }

    /// Link at absolute position `p` (`3 <= p <= n`).
    pub fn at(&self, position: usize) -> Option<Link> {
        position
            .checked_sub(FIRST_LINK_POSITION)
            .and_then(|i| self.links.get(i).copied())
    }

    pub fn last(&self) -> Option<Link> {
        self.links.last().copied()
    }

    /// The chain made of the first `squares` squares.
    pub fn prefix(&self, squares: usize) -> LinkVector {
        let keep = squares.saturating_sub(2).min(self.links.len());
        LinkVector::new(self.links[..keep].to_vec())
    }

    pub fn reversed(&self) -> LinkVector {
        LinkVector::new(self.links.iter().rev().copied().collect())
    }

    pub fn turn_count(&self) -> usize {
        self.links.iter().filter(|&&l| l == Link::Turn).count()
    }

    pub fn codes(&self) -> Vec<u8> {
        self.links.iter().map(|l| l.code()).collect()
    }
}

impl fmt::Display for LinkVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, link) in self.links.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{link}")?;
        }
        Ok(())
    }
}

/// Parses the comma-separated form `"1,2,2,1"`; the empty string is `PC2`.
impl FromStr for LinkVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(LinkVector::default());
        }
        s.split(',')
            .map(|tok| match tok.trim() {
                "1" => Ok(Link::Straight),
                "2" => Ok(Link::Turn),
                bad => Err(Error::InvalidLink(bad.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(LinkVector::new)
    }
}

impl From<Vec<Link>> for LinkVector {
    fn from(links: Vec<Link>) -> Self {
        LinkVector::new(links)
    }
}

/// Lattice cells of a realized chain, one per square (lower-left corners).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CellPath {
    cells: Vec<(i64, i64)>,
}

impl CellPath {
    pub fn cells(&self) -> &[(i64, i64)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Lays the chain out on the square lattice. The first step goes right.
pub fn realize(chain: &LinkVector) -> CellPath {
    const RIGHT: (i64, i64) = (1, 0);
    const DOWN: (i64, i64) = (0, -1);

    let mut cells = Vec::with_capacity(chain.square_count());
    cells.push((0, 0));
    cells.push((1, 0));
    let mut dir = RIGHT;
    for &link in chain.links() {
        if link == Link::Turn {
            dir = if dir == RIGHT { DOWN } else { RIGHT };
        }
        let (x, y) = *cells.last().expect("at least two cells");
        cells.push((x + dir.0, y + dir.1));
    }
    CellPath { cells }
}

/// Multiplicities of unordered endpoint-degree pairs `(a, b)`, `a <= b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeDegreeMultiset {
    counts: BTreeMap<(u32, u32), u64>,
}

impl EdgeDegreeMultiset {
    pub fn get(&self, a: u32, b: u32) -> u64 {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = ((u32, u32), u64)>) -> Self {
        let mut counts = BTreeMap::new();
        for ((a, b), m) in pairs {
            let key = if a <= b { (a, b) } else { (b, a) };
            *counts.entry(key).or_insert(0) += m;
        }
        counts.retain(|_, m| *m > 0);
        EdgeDegreeMultiset { counts }
    }
}

/// Builds the polyomino graph (square corners, unit sides) and tallies degree pairs.
pub fn edge_degree_multiset(chain: &LinkVector) -> EdgeDegreeMultiset {
    let path = realize(chain);

    // Points pack into one word; a unit side is its lower/left endpoint plus
    // an orientation bit.
    let point = |x: i64, y: i64| -> u64 { (((x + (1 << 30)) as u64) << 32) | (y + (1 << 30)) as u64 };
    let mut sides: Vec<u64> = Vec::with_capacity(4 * path.len());
    for &(x, y) in path.cells() {
        sides.push(point(x, y) << 1 | 1);
        sides.push(point(x, y + 1) << 1 | 1);
        sides.push(point(x, y) << 1);
        sides.push(point(x + 1, y) << 1);
    }
    sides.sort_unstable();
    sides.dedup();

    let ends = |side: u64| -> (u64, u64) {
        let p = side >> 1;
        if side & 1 == 1 {
            (p, p + (1 << 32))
        } else {
            (p, p + 1)
        }
    };

    let mut endpoints: Vec<u64> = Vec::with_capacity(2 * sides.len());
    for &side in &sides {
        let (a, b) = ends(side);
        endpoints.push(a);
        endpoints.push(b);
    }
    endpoints.sort_unstable();
    let degree = |p: u64| -> u32 {
        let lo = endpoints.partition_point(|&q| q < p);
        let hi = endpoints.partition_point(|&q| q <= p);
        (hi - lo) as u32
    };

    let mut counts = BTreeMap::new();
    for &side in &sides {
        let (a, b) = ends(side);
        let (a, b) = (degree(a), degree(b));
        let key = if a <= b { (a, b) } else { (b, a) };
        *counts.entry(key).or_insert(0) += 1;
    }
    EdgeDegreeMultiset { counts }
}

/// Segment lengths `l1..lm` of a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SegmentDecomposition {
    lengths: Vec<usize>,
}

impl SegmentDecomposition {
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn count(&self) -> usize {
        self.lengths.len()
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Indices of internal segments (neither first nor last).
    pub fn internal(&self) -> &[usize] {
        if self.lengths.len() <= 2 {
            &[]
        } else {
            &self.lengths[1..self.lengths.len() - 1]
        }
    }
}

/// Splits the chain at its kinks. A turn at position `p` makes square `p - 1` a kink,
/// which belongs to both adjacent segments.
pub fn segments(chain: &LinkVector) -> SegmentDecomposition {
    let n = chain.square_count();
    let turns: Vec<usize> = chain
        .links()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == Link::Turn)
        .map(|(i, _)| i + FIRST_LINK_POSITION)
        .collect();

    let Some((&first, &last)) = turns.first().zip(turns.last()) else {
        return SegmentDecomposition { lengths: vec![n] };
    };

    let mut lengths = Vec::with_capacity(turns.len() + 1);
    lengths.push(first - 1);
    lengths.extend(turns.windows(2).map(|w| w[1] - w[0] + 1));
    lengths.push(n - last + 2);
    SegmentDecomposition { lengths }
}

fn require_squares(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::TooFewSquares { what, min, n })
    } else {
        Ok(())
    }
}

/// `Li_n`: every link straight.
pub fn linear_chain(n: usize) -> Result<LinkVector> {
    require_squares("linear chain", n, 2)?;
    Ok(LinkVector::new(vec![Link::Straight; n - 2]))
}

/// `Z_n`: every link a turn.
pub fn zigzag_chain(n: usize) -> Result<LinkVector> {
    require_squares("zigzag chain", n, 2)?;
    Ok(LinkVector::new(vec![Link::Turn; n - 2]))
}

/// Type-1 augmented zigzag with `m` segments, all of length 3 (`n = 2m + 1`).
pub fn az1(m: usize) -> Result<LinkVector> {
    if m < 2 {
        return Err(Error::TooFewSquares {
            what: "AZ1 (segment count)",
            min: 2,
            n: m,
        });
    }
    let mut links = Vec::with_capacity(2 * m - 1);
    links.push(Link::Straight);
    for _ in 1..m {
        links.extend([Link::Turn, Link::Straight]);
    }
    Ok(LinkVector::new(links))
}

/// Every labeled type-2 augmented zigzag with `m` segments (`n = 2m`): all
/// segments of length 3 except a single internal one of length 2.
///
/// Member `i` (`1..=m-2`) is `(1,2)^i (2,1)^(m-1-i)`.
pub fn az2_family(m: usize) -> Result<Vec<LinkVector>> {
    if m < 3 {
        return Err(Error::TooFewSquares {
            what: "AZ2 family (segment count)",
            min: 3,
            n: m,
        });
    }
    let pairs = m - 1;
    Ok((1..=m - 2)
        .map(|i| {
            let mut links = Vec::with_capacity(2 * pairs);
            for _ in 0..i {
                links.extend([Link::Straight, Link::Turn]);
            }
            for _ in i..pairs {
                links.extend([Link::Turn, Link::Straight]);
            }
            LinkVector::new(links)
        })
        .collect())
}

/// Lexicographic minimum of a chain and its mirror image.
pub fn canonical_reversal(chain: &LinkVector) -> LinkVector {
    let reversed = chain.reversed();
    if reversed < *chain {
        reversed
    } else {
        chain.clone()
    }
}
