//! Semistandard tableaux and the generating functions built from them.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Variable};
use crate::shapes::{color, make_extended, Cell, Partition, Shape};

/// A filling of a shape, stored row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    shape: Shape,
    rows: Vec<Vec<u32>>,
    bound: usize,
}

impl Tableau {
    pub fn new(shape: Shape, rows: Vec<Vec<u32>>, bound: usize) -> Result<Self> {
        if shape.row_lengths() != rows.iter().map(Vec::len).collect::<Vec<_>>() {
            return Err(Error::Precondition(
                "filling does not match the shape".into(),
            ));
        }
        if rows.iter().flatten().any(|&e| e == 0 || e as usize > bound) {
            return Err(Error::Precondition(format!(
                "entries must lie in 1..={bound}"
            )));
        }
        Ok(Tableau { shape, rows, bound })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn entries(&self) -> impl Iterator<Item = (Cell, u32)> + '_ {
        self.shape.cells().zip(self.rows.iter().flatten().copied())
    }

    pub fn is_semistandard(&self) -> bool {
        let spans = self.shape.rows();
        self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]))
            && self.entries().all(|(cell, e)| {
                let below = Cell::new(cell.row + 1, cell.col);
                if !self.shape.contains(below) {
                    return true;
                }
                let span = spans[cell.row as usize];
                self.rows[cell.row as usize][(below.col - span.start) as usize] > e
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftParams {
    n: u32,
    l: u32,
}

impl ShiftParams {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n == 0 || l >= n {
            return Err(Error::Precondition(format!(
                "need n ≥ 1 and 0 ≤ l < n, got n = {n}, l = {l}"
            )));
        }
        Ok(ShiftParams { n, l })
    }

    pub fn unshifted(n: u32) -> Self {
        ShiftParams::new(n, 0).expect("n ≥ 1")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `x_{c(□) mod n, w + l·c(□)/n}` for a cell holding `entry`. The shift
    /// uses the signed content `col − row`, so moving a box along a diagonal
    /// keeps its variable and moving it `n` columns changes the weight by `l`.
    pub fn variable(&self, cell: Cell, entry: u32) -> Variable {
        Variable::new(
            color(cell, self.n),
            self.n as i64 * entry as i64 + self.l as i64 * cell.content(),
        )
    }
}

/// Streams the semistandard tableaux of shape `lambda` with entries in
/// `1..=bound`, in row-major lexicographic order.
pub struct SsytIter {
    shape: Shape,
    bound: u32,
    // per row-major cell: index of the cell above, or usize::MAX in row 1
    above: Vec<usize>,
    row_start: Vec<bool>,
    entries: Vec<u32>,
    state: IterState,
}

#[derive(PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl SsytIter {
    fn new(lambda: &Partition, bound: usize) -> Self {
        let shape = Shape::young(lambda);
        let mut above = Vec::new();
        let mut row_start = Vec::new();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for &p in lambda.parts() {
            offsets.push(acc);
            acc += p as usize;
        }
        for (r, &p) in lambda.parts().iter().enumerate() {
            for c in 0..p as usize {
                above.push(if r == 0 {
                    usize::MAX
                } else {
                    offsets[r - 1] + c
                });
                row_start.push(c == 0);
            }
        }
        SsytIter {
            shape,
            bound: bound as u32,
            entries: vec![0; above.len()],
            above,
            row_start,
            state: IterState::Fresh,
        }
    }

    fn lower(&self, idx: usize) -> u32 {
        let left = if self.row_start[idx] {
            1
        } else {
            self.entries[idx - 1]
        };
        let up = if self.above[idx] == usize::MAX {
            1
        } else {
            self.entries[self.above[idx]] + 1
        };
        left.max(up)
    }

    /// Minimal completion of cells `from..`; false if some cell cannot be filled.
    fn fill(&mut self, from: usize) -> bool {
        for idx in from..self.entries.len() {
            let lo = self.lower(idx);
            if lo > self.bound {
                return false;
            }
            self.entries[idx] = lo;
        }
        true
    }

    fn advance(&mut self) -> bool {
        let mut pos = self.entries.len();
        while pos > 0 {
            pos -= 1;
            if self.entries[pos] < self.bound {
                self.entries[pos] += 1;
                if self.fill(pos + 1) {
                    return true;
                }
                // raising this cell only raises the lower bounds after it
            }
        }
        false
    }

    fn current(&self) -> Tableau {
        let mut rows = Vec::with_capacity(self.shape.rows().len());
        let mut it = self.entries.iter().copied();
        for span in self.shape.rows() {
            rows.push(it.by_ref().take(span.len).collect());
        }
        Tableau {
            shape: self.shape.clone(),
            rows,
            bound: self.bound as usize,
        }
    }
}

impl Iterator for SsytIter {
    type Item = Tableau;

    fn next(&mut self) -> Option<Tableau> {
        let ok = match self.state {
            IterState::Done => false,
            IterState::Fresh => self.fill(0),
            IterState::Running => self.advance(),
        };
        if ok {
            self.state = IterState::Running;
            Some(self.current())
        } else {
            self.state = IterState::Done;
            None
        }
    }
}

pub fn enumerate_ssyt(lambda: &Partition, bound: usize) -> SsytIter {
    SsytIter::new(lambda, bound)
}

pub fn weight_monomial(t: &Tableau, n: u32) -> Monomial {
    shifted_weight_monomial(t, ShiftParams::unshifted(n))
}

pub fn shifted_weight_monomial(t: &Tableau, p: ShiftParams) -> Monomial {
    Monomial::from_factors(t.entries().map(|(cell, e)| (p.variable(cell, e), 1)))
}

/// `s_{λ,N}[n]`.
pub fn loop_schur(lambda: &Partition, n: u32, bound: usize) -> Polynomial {
    shifted_loop_schur(lambda, ShiftParams::unshifted(n), bound)
}

/// `s^l_{λ,N}[n]`.
pub fn shifted_loop_schur(lambda: &Partition, p: ShiftParams, bound: usize) -> Polynomial {
    let mut out = Polynomial::zero(p.n());
    for t in enumerate_ssyt(lambda, bound) {
        out.add_term(shifted_weight_monomial(&t, p), BigInt::one());
    }
    out
}

/// `p_{k,N}[n] = Σ_{j ≤ N} (x_{0,j} ⋯ x_{n−1,j})^k`.
pub fn loop_power_sum(k: u32, n: u32, bound: usize) -> Result<Polynomial> {
    if k == 0 || n == 0 {
        return Err(Error::Precondition(
            "power sums need k ≥ 1 and n ≥ 1".into(),
        ));
    }
    let mut out = Polynomial::zero(n);
    for j in 1..=bound as i64 {
        let m = Monomial::from_factors((0..n).map(|i| (Variable::new(i, n as i64 * j), k)));
        out.add_term(m, BigInt::one());
    }
    Ok(out)
}

/// Weight monomial of the staircase `∅̂` with row `j` filled by `j`:
/// `x^δ` for `l = 0`, `x^{δ,l}` otherwise.
pub fn x_delta(bound: usize, p: ShiftParams) -> Result<Monomial> {
    let shape = make_extended(&Partition::empty(), bound)?;
    let factors: Vec<(Variable, u32)> = shape
        .cells()
        .map(|cell| (p.variable(cell, cell.row as u32), 1))
        .collect();
    Ok(Monomial::from_factors(factors))
}
