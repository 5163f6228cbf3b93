//! Partitions, content coloring, staircase-extended diagrams and border strips.
//!
//! Rows are numbered from 1 top-down and the first column of a partition is
//! column 1. The staircase added by [`make_extended`] sits in columns `≤ 0`,
//! so every row of an extended diagram starts on the content `−N` diagonal.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// Drops trailing zeros; panics on anything that is not a partition.
    pub(crate) fn from_lengths(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition::new(parts).expect("row lengths form a partition")
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part in row `row` (1-based); zero past the last part.
    pub fn part(&self, row: usize) -> u32 {
        if row == 0 {
            return 0;
        }
        self.parts.get(row - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (1..=other.len()).all(|r| self.part(r) >= other.part(r))
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (1..=p as i64).map(move |c| Cell::new(r as i64 + 1, c)))
    }

    /// All partitions of `size`, in decreasing lexicographic order.
    pub fn all_of_size(size: u32) -> Vec<Partition> {
        fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(size, size, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma separated parts; `""`, `"0"` and `"∅"` denote the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: i64,
    pub col: i64,
}

impl Cell {
    pub fn new(row: i64, col: i64) -> Self {
        Cell { row, col }
    }

    pub fn content(&self) -> i64 {
        self.col - self.row
    }
}

/// Content of `cell` reduced into `[0, n)`.
pub fn color(cell: Cell, n: u32) -> u32 {
    assert!(n >= 1, "modulus must be positive");
    cell.content().rem_euclid(n as i64) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSpan {
    pub start: i64,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeKind {
    Young(Partition),
    Extended {
        lambda: Partition,
        bound: usize,
    },
    ExtendedRow {
        lambda: Partition,
        bound: usize,
        extra: usize,
        row: usize,
    },
}

/// A diagram given row by row as contiguous column spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    kind: ShapeKind,
    rows: Vec<RowSpan>,
}

impl Shape {
    pub fn young(lambda: &Partition) -> Shape {
        Shape {
            kind: ShapeKind::Young(lambda.clone()),
            rows: lambda
                .parts()
                .iter()
                .map(|&p| RowSpan {
                    start: 1,
                    len: p as usize,
                })
                .collect(),
        }
    }

    pub fn kind(&self) -> &ShapeKind {
        &self.kind
    }

    pub fn rows(&self) -> &[RowSpan] {
        &self.rows
    }

    pub fn row_lengths(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.len).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.rows.iter().map(|r| r.len).sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, span)| {
            (0..span.len as i64).map(move |t| Cell::new(r as i64 + 1, span.start + t))
        })
    }

    pub fn contains(&self, cell: Cell) -> bool {
        if cell.row < 1 || cell.row as usize > self.rows.len() {
            return false;
        }
        let span = self.rows[cell.row as usize - 1];
        cell.col >= span.start && cell.col < span.start + span.len as i64
    }
}

fn extended_spans(lambda: &Partition, bound: usize) -> Result<Vec<RowSpan>> {
    if bound == 0 || bound < lambda.len() {
        return Err(Error::Precondition(format!(
            "staircase bound N = {bound} must be positive and at least the length {} of {lambda}",
            lambda.len()
        )));
    }
    Ok((1..=bound)
        .map(|r| RowSpan {
            start: r as i64 - bound as i64,
            len: bound - r + 1 + lambda.part(r) as usize,
        })
        .collect())
}

/// `λ̂`: row `r` spans columns `r − N ..= λ_r`.
pub fn make_extended(lambda: &Partition, bound: usize) -> Result<Shape> {
    Ok(Shape {
        kind: ShapeKind::Extended {
            lambda: lambda.clone(),
            bound,
        },
        rows: extended_spans(lambda, bound)?,
    })
}

/// `λ̂` with `extra` cells appended to the right end of row `row`.
pub fn make_extended_row(
    lambda: &Partition,
    bound: usize,
    extra: usize,
    row: usize,
) -> Result<Shape> {
    let mut rows = extended_spans(lambda, bound)?;
    if row == 0 || row > bound {
        return Err(Error::Precondition(format!(
            "row {row} outside 1..={bound}"
        )));
    }
    rows[row - 1].len += extra;
    Ok(Shape {
        kind: ShapeKind::ExtendedRow {
            lambda: lambda.clone(),
            bound,
            extra,
            row,
        },
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BorderStripAddition {
    pub sigma: Partition,
    pub height: u32,
}

/// Every way of adding a border strip of `m` cells to `lambda`.
///
/// Works on the strictly decreasing sequence `λ_r − r`: a strip whose lowest
/// row is `r` raises that entry by `m`, which is legal iff the new value is
/// not already taken; the height counts the entries jumped over. Ordered
/// by decreasing `σ`.
pub fn enumerate_border_strips(lambda: &Partition, m: u32) -> Vec<BorderStripAddition> {
    if m == 0 {
        return Vec::new();
    }
    let rows = lambda.len() + m as usize;
    let beta: Vec<i64> = (1..=rows)
        .map(|r| lambda.part(r) as i64 - r as i64)
        .collect();
    let mut out = Vec::new();
    for low in 0..rows {
        let raised = beta[low] + m as i64;
        if beta.contains(&raised) {
            continue;
        }
        let mut new_beta = beta.clone();
        new_beta[low] = raised;
        let height = beta[..low].iter().filter(|&&b| b < raised).count() as u32;
        new_beta.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = new_beta
            .iter()
            .enumerate()
            .map(|(idx, &b)| (b + idx as i64 + 1) as u32)
            .collect();
        out.push(BorderStripAddition {
            sigma: Partition::from_lengths(parts),
            height,
        });
    }
    out.sort_by(|a, b| b.sigma.cmp(&a.sigma));
    out
}

/// Direct check that `σ \ λ` is an edge-connected set of `m` cells with no
/// 2×2 square.
pub fn is_border_strip(sigma: &Partition, lambda: &Partition, m: u32) -> bool {
    if !sigma.contains(lambda) || sigma.size() != lambda.size() + m {
        return false;
    }
    let skew: BTreeSet<Cell> = sigma
        .cells()
        .filter(|c| c.col > lambda.part(c.row as usize) as i64)
        .collect();
    if skew.is_empty() {
        return false;
    }
    let square = skew.iter().any(|c| {
        skew.contains(&Cell::new(c.row + 1, c.col))
            && skew.contains(&Cell::new(c.row, c.col + 1))
            && skew.contains(&Cell::new(c.row + 1, c.col + 1))
    });
    if square {
        return false;
    }
    let start = *skew.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for d in [(0, 1), (0, -1), (1, 0), (-1, 0)] {
            let nb = Cell::new(c.row + d.0, c.col + d.1);
            if skew.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen.len() == skew.len()
}

/// Number of rows the strip `σ \ λ` occupies, minus one.
pub fn strip_height(sigma: &Partition, lambda: &Partition) -> u32 {
    let rows = (1..=sigma.len())
        .filter(|&r| sigma.part(r) > lambda.part(r))
        .count() as u32;
    rows.saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_partitions() {
        assert_eq!(p("4,3,3,1").parts(), &[4, 3, 3, 1]);
        assert!(p("").is_empty());
        assert!(p("0").is_empty());
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,x".parse::<Partition>().is_err());
        assert_eq!(p("4, 3,1").to_string(), "4,3,1");
    }

    #[test]
    fn coloring() {
        assert_eq!(color(Cell::new(1, 1), 3), 0);
        assert_eq!(color(Cell::new(3, 1), 3), 1);
        for n in 1..6 {
            assert_eq!(color(Cell::new(1, 0), n), n - 1);
        }
        // the (4,3,3,1), n = 3 coloring row by row
        let lam = p("4,3,3,1");
        let colors: Vec<u32> = lam.cells().map(|c| color(c, 3)).collect();
        assert_eq!(colors, vec![0, 1, 2, 0, 2, 0, 1, 1, 2, 0, 0]);
    }

    #[test]
    fn colors_constant_on_diagonals() {
        for n in 1..6 {
            for r in -4..5 {
                for c in -6..6 {
                    assert_eq!(color(Cell::new(r, c), n), color(Cell::new(r + 1, c + 1), n));
                }
            }
        }
    }

    #[test]
    fn extended_shapes() {
        let s = make_extended(&p("2,1"), 5).unwrap();
        assert_eq!(s.row_lengths(), vec![7, 5, 3, 2, 1]);
        assert!(s.rows().iter().all(|r| r.start + r.len as i64 > 0));

        let s = make_extended(&Partition::empty(), 1).unwrap();
        assert_eq!(s.cells().collect::<Vec<_>>(), vec![Cell::new(1, 0)]);

        let s = make_extended(&p("1"), 2).unwrap();
        assert_eq!(
            s.cells().collect::<Vec<_>>(),
            vec![
                Cell::new(1, -1),
                Cell::new(1, 0),
                Cell::new(1, 1),
                Cell::new(2, 0)
            ]
        );

        assert!(make_extended(&p("1,1"), 1).is_err());
        assert!(make_extended(&Partition::empty(), 0).is_err());
    }

    #[test]
    fn extended_restricts_to_young_and_staircase() {
        for lam in ["", "1", "2,1", "3,3,1", "4,2,2,1"] {
            let lam = p(lam);
            for bound in lam.len().max(1)..7 {
                let s = make_extended(&lam, bound).unwrap();
                let positive: BTreeSet<Cell> = s.cells().filter(|c| c.col >= 1).collect();
                let young: BTreeSet<Cell> = lam.cells().collect();
                assert_eq!(positive, young);
                let staircase = s.cells().filter(|c| c.col <= 0).count();
                assert_eq!(staircase, bound * (bound + 1) / 2);
                assert!(s.cells().all(|c| c.content() >= -(bound as i64)));
            }
        }
    }

    #[test]
    fn extended_row_shapes() {
        let s = make_extended_row(&p("2,1"), 5, 3, 4).unwrap();
        assert_eq!(s.rows()[3].len, 5);
        assert_eq!(s.rows()[3].start + 4, 3);

        let s = make_extended_row(&Partition::empty(), 1, 1, 1).unwrap();
        assert_eq!(
            s.cells().collect::<Vec<_>>(),
            vec![Cell::new(1, 0), Cell::new(1, 1)]
        );

        let a = make_extended_row(&p("2,1"), 5, 0, 2).unwrap();
        let b = make_extended(&p("2,1"), 5).unwrap();
        assert_eq!(a.rows(), b.rows());

        assert!(make_extended_row(&p("2,1"), 5, 3, 6).is_err());
        assert!(make_extended_row(&p("2,1"), 5, 3, 0).is_err());
    }

    #[test]
    fn border_strip_checks() {
        assert!(!is_border_strip(&p("2,1"), &p("1"), 2));
        assert!(is_border_strip(&p("3"), &p("1"), 2));
        assert!(!is_border_strip(&p("2,2"), &Partition::empty(), 4));
        assert!(!is_border_strip(&p("3"), &p("2,1"), 0));
        assert!(!is_border_strip(&p("3,1"), &p("2"), 1));
    }

    #[test]
    fn border_strip_examples() {
        let got = enumerate_border_strips(&Partition::empty(), 3);
        let want = vec![
            BorderStripAddition {
                sigma: p("3"),
                height: 0,
            },
            BorderStripAddition {
                sigma: p("2,1"),
                height: 1,
            },
            BorderStripAddition {
                sigma: p("1,1,1"),
                height: 2,
            },
        ];
        assert_eq!(got, want);

        let got = enumerate_border_strips(&p("1"), 2);
        let want = vec![
            BorderStripAddition {
                sigma: p("3"),
                height: 0,
            },
            BorderStripAddition {
                sigma: p("1,1,1"),
                height: 1,
            },
        ];
        assert_eq!(got, want);

        // m = 1: addable corners
        let got = enumerate_border_strips(&p("3,1,1"), 1);
        let sigmas: Vec<String> = got.iter().map(|b| b.sigma.to_string()).collect();
        assert_eq!(sigmas, vec!["4,1,1", "3,2,1", "3,1,1,1"]);
        assert!(got.iter().all(|b| b.height == 0));
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        for total in 1..=12u32 {
            for size in 0..total {
                for lam in Partition::all_of_size(size) {
                    let m = total - size;
                    let mut oracle: Vec<BorderStripAddition> = Partition::all_of_size(total)
                        .into_iter()
                        .filter(|s| is_border_strip(s, &lam, m))
                        .map(|s| BorderStripAddition {
                            height: strip_height(&s, &lam),
                            sigma: s,
                        })
                        .collect();
                    oracle.sort_by(|a, b| b.sigma.cmp(&a.sigma));
                    let got = enumerate_border_strips(&lam, m);
                    assert_eq!(got, oracle, "λ = {lam}, m = {m}");

                    let mut signatures = BTreeSet::new();
                    for b in &got {
                        assert!(b.height < m);
                        let first = (1..=b.sigma.len())
                            .find(|&r| b.sigma.part(r) > lam.part(r))
                            .unwrap();
                        assert!(signatures.insert((first, b.height)));
                    }
                }
            }
        }
    }

    #[test]
    fn partitions_of_size() {
        let counts: Vec<usize> = (0..10).map(|s| Partition::all_of_size(s).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }
}
