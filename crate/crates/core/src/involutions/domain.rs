use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::{next_permutation, SignedTableau};
use crate::error::{Error, Result};
use crate::shapes::Partition;

pub const DEFAULT_CAP: u64 = 10_000_000;

/// Largest `N` for which exact cardinalities and samplers enumerate all of
/// `S_N`.
const MAX_EXACT_BOUND: usize = 9;

/// One of the sets `T_{λ,n,N}`, `S_{λ,n,k,N}` or the restriction `S′` whose
/// extended row is capped at `N − kl`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    lambda: Partition,
    bound: usize,
    extra: usize,
    row_cap: Option<u32>,
}

impl Domain {
    pub fn t(lambda: &Partition, bound: usize) -> Result<Domain> {
        Self::build(lambda, bound, 0, None)
    }

    pub fn s(lambda: &Partition, n: u32, k: u32, bound: usize) -> Result<Domain> {
        if n == 0 || k == 0 {
            return Err(Error::Precondition("S needs n ≥ 1 and k ≥ 1".into()));
        }
        Self::build(lambda, bound, (k * n) as usize, None)
    }

    /// Members of `S` whose extended row holds only entries `≤ N − kl`.
    pub fn s_prime(lambda: &Partition, n: u32, k: u32, l: u32, bound: usize) -> Result<Domain> {
        if l == 0 || l >= n {
            return Err(Error::Precondition(format!(
                "S′ needs 1 ≤ l < n, got l = {l}, n = {n}"
            )));
        }
        let mut d = Self::s(lambda, n, k, bound)?;
        let cap = bound as i64 - (k * l) as i64;
        d.row_cap = Some(cap.max(0) as u32);
        Ok(d)
    }

    /// The `T` set whose diagram has the given row lengths.
    pub fn t_with_lengths(bound: usize, lengths: &[usize]) -> Result<Domain> {
        if lengths.len() != bound {
            return Err(Error::NotMember(format!(
                "{} rows for N = {bound}",
                lengths.len()
            )));
        }
        let mut parts = Vec::with_capacity(bound);
        for (r, &len) in lengths.iter().enumerate() {
            let stair = bound - r;
            if len < stair {
                return Err(Error::NotMember(format!(
                    "row {} is shorter than the staircase",
                    r + 1
                )));
            }
            parts.push((len - stair) as u32);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotMember(format!(
                "row lengths {lengths:?} are not of the form λ̂"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self::t(&Partition::new(parts)?, bound)
    }

    fn build(
        lambda: &Partition,
        bound: usize,
        extra: usize,
        row_cap: Option<u32>,
    ) -> Result<Domain> {
        if bound == 0 || bound < lambda.len() {
            return Err(Error::Precondition(format!(
                "N = {bound} must be positive and at least ℓ({lambda}) = {}",
                lambda.len()
            )));
        }
        Ok(Domain {
            lambda: lambda.clone(),
            bound,
            extra,
            row_cap,
        })
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// `kn`, or 0 for `T`.
    pub fn extra(&self) -> usize {
        self.extra
    }

    pub fn row_cap(&self) -> Option<u32> {
        self.row_cap
    }

    pub fn is_t(&self) -> bool {
        self.extra == 0
    }

    pub fn row_lengths(&self, marked: Option<usize>) -> Vec<usize> {
        (0..self.bound)
            .map(|r| {
                let base = self.bound - r + self.lambda.part(r + 1) as usize;
                if marked == Some(r) {
                    base + self.extra
                } else {
                    base
                }
            })
            .collect()
    }

    fn markings(&self) -> Vec<Option<usize>> {
        if self.is_t() {
            vec![None]
        } else {
            (0..self.bound).map(Some).collect()
        }
    }

    /// Entry range `lo..=hi` of row `r` under labels `tau`.
    fn row_range(&self, r: usize, tau: &[u32], marked: Option<usize>) -> (u32, u32) {
        let hi = match (marked == Some(r), self.row_cap) {
            (true, Some(cap)) => cap.min(self.bound as u32),
            _ => self.bound as u32,
        };
        (tau[r], hi)
    }

    /// Verifies the membership conditions, naming the first one that fails.
    pub fn check(&self, x: &SignedTableau) -> Result<()> {
        let fail = |msg: String| Err(Error::NotMember(msg));
        if x.bound() != self.bound {
            return fail(format!(
                "N = {} but the domain has N = {}",
                x.bound(),
                self.bound
            ));
        }
        if self.is_t() != x.marked().is_none() {
            return fail("marked row does not match the domain".into());
        }
        if let Some(m) = x.marked() {
            if m >= self.bound {
                return fail(format!("marked row {} out of range", m + 1));
            }
        }
        let mut seen = vec![false; self.bound];
        if x.tau().len() != self.bound {
            return fail("τ has the wrong length".into());
        }
        for &t in x.tau() {
            if t == 0 || t as usize > self.bound || seen[t as usize - 1] {
                return fail(format!("τ = {:?} is not a permutation", x.tau()));
            }
            seen[t as usize - 1] = true;
        }
        if x.row_lengths() != self.row_lengths(x.marked()) {
            return fail(format!(
                "row lengths {:?}, expected {:?}",
                x.row_lengths(),
                self.row_lengths(x.marked())
            ));
        }
        for (r, row) in x.rows().iter().enumerate() {
            let (lo, hi) = self.row_range(r, x.tau(), x.marked());
            if row.iter().any(|&e| e == 0 || e > self.bound as u32) {
                return fail(format!(
                    "row {} has an entry outside 1..={}",
                    r + 1,
                    self.bound
                ));
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return fail(format!("row {} is not weakly increasing", r + 1));
            }
            if row[0] < lo {
                return fail(format!("row {} starts below τ{} = {lo}", r + 1, r + 1));
            }
            if row.iter().any(|&e| e > hi) {
                return fail(format!("row {} exceeds the cap {hi}", r + 1));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &SignedTableau) -> bool {
        self.check(x).is_ok()
    }

    fn count_for(&self, tau: &[u32], marked: Option<usize>) -> u128 {
        let lengths = self.row_lengths(marked);
        let mut total: u128 = 1;
        for (r, &len) in lengths.iter().enumerate() {
            let (lo, hi) = self.row_range(r, tau, marked);
            total = total.saturating_mul(multichoose(lo, hi, len));
        }
        total
    }

    /// Exact `|domain|` for `N ≤ 9`, otherwise a rough estimate.
    pub fn cardinality(&self) -> BigUint {
        if self.bound <= MAX_EXACT_BOUND {
            let mut total = BigUint::zero();
            for marked in self.markings() {
                let mut tau: Vec<u32> = (1..=self.bound as u32).collect();
                loop {
                    total += BigUint::from(self.count_for(&tau, marked));
                    if !next_permutation(&mut tau) {
                        break;
                    }
                }
            }
            return total;
        }
        let lengths = self.row_lengths(Some(0));
        let mut bound = BigUint::from(self.markings().len());
        for r in 1..=self.bound {
            bound *= BigUint::from(r);
        }
        for &len in &lengths {
            bound *= BigUint::from(multichoose(1, self.bound as u32, len));
        }
        bound
    }

    /// Exhaustive stream, refused when the cardinality exceeds `cap`.
    pub fn enumerate(&self, cap: u64) -> Result<DomainIter> {
        let size = self.cardinality();
        if size > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                estimate: size.to_string(),
                cap,
            });
        }
        Ok(DomainIter::new(self.clone()))
    }

    pub fn sampler(&self) -> Result<Sampler> {
        Sampler::new(self.clone())
    }
}

/// Number of weakly increasing sequences of length `len` over `lo..=hi`.
fn multichoose(lo: u32, hi: u32, len: usize) -> u128 {
    if len == 0 {
        return 1;
    }
    if hi < lo {
        return 0;
    }
    binomial((hi - lo) as u64 + len as u64, len as u64)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn first_row(lo: u32, len: usize) -> Vec<u32> {
    vec![lo; len]
}

fn next_row(row: &mut [u32], hi: u32) -> bool {
    let Some(p) = (0..row.len()).rev().find(|&p| row[p] < hi) else {
        return false;
    };
    let v = row[p] + 1;
    for e in &mut row[p..] {
        *e = v;
    }
    true
}

/// Lexicographic stream over marking, then `τ`, then the row fillings.
pub struct DomainIter {
    domain: Domain,
    markings: Vec<Option<usize>>,
    mark_idx: usize,
    tau: Vec<u32>,
    rows: Vec<Vec<u32>>,
    started: bool,
    done: bool,
}

impl DomainIter {
    fn new(domain: Domain) -> Self {
        let markings = domain.markings();
        let tau = (1..=domain.bound as u32).collect();
        DomainIter {
            domain,
            markings,
            mark_idx: 0,
            tau,
            rows: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn marked(&self) -> Option<usize> {
        self.markings[self.mark_idx]
    }

    /// Moves to the next `(marking, τ)` with at least one filling.
    fn seek_frame(&mut self, mut advance: bool) -> bool {
        loop {
            if advance && !next_permutation(&mut self.tau) {
                self.mark_idx += 1;
                if self.mark_idx == self.markings.len() {
                    return false;
                }
                self.tau = (1..=self.domain.bound as u32).collect();
            }
            advance = true;
            if self.domain.count_for(&self.tau, self.marked()) > 0 {
                let marked = self.marked();
                let lengths = self.domain.row_lengths(marked);
                self.rows = lengths
                    .iter()
                    .enumerate()
                    .map(|(r, &len)| first_row(self.domain.row_range(r, &self.tau, marked).0, len))
                    .collect();
                return true;
            }
        }
    }

    fn advance_rows(&mut self) -> bool {
        let marked = self.marked();
        for r in (0..self.rows.len()).rev() {
            let (lo, hi) = self.domain.row_range(r, &self.tau, marked);
            if next_row(&mut self.rows[r], hi) {
                return true;
            }
            let len = self.rows[r].len();
            self.rows[r] = first_row(lo, len);
        }
        false
    }
}

impl Iterator for DomainIter {
    type Item = SignedTableau;

    fn next(&mut self) -> Option<SignedTableau> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.seek_frame(false)
        } else {
            self.advance_rows() || self.seek_frame(true)
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(SignedTableau::new(
            self.domain.bound,
            self.rows.clone(),
            self.tau.clone(),
            self.marked(),
        ))
    }
}

/// Uniform sampler: a `(marking, τ)` frame is drawn with probability
/// proportional to its number of fillings, then each row is drawn uniformly
/// by unranking.
pub struct Sampler {
    domain: Domain,
    frames: Vec<(Option<usize>, Vec<u32>)>,
    cumulative: Vec<u128>,
}

impl Sampler {
    fn new(domain: Domain) -> Result<Sampler> {
        if domain.bound > MAX_EXACT_BOUND {
            return Err(Error::Precondition(format!(
                "uniform sampling is limited to N ≤ {MAX_EXACT_BOUND}"
            )));
        }
        let mut frames = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc: u128 = 0;
        for marked in domain.markings() {
            let mut tau: Vec<u32> = (1..=domain.bound as u32).collect();
            loop {
                let c = domain.count_for(&tau, marked);
                if c > 0 {
                    acc = acc
                        .checked_add(c)
                        .ok_or_else(|| Error::Precondition("domain too large to sample".into()))?;
                    frames.push((marked, tau.clone()));
                    cumulative.push(acc);
                }
                if !next_permutation(&mut tau) {
                    break;
                }
            }
        }
        if frames.is_empty() {
            return Err(Error::Precondition("domain is empty".into()));
        }
        Ok(Sampler {
            domain,
            frames,
            cumulative,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn total(&self) -> u128 {
        *self.cumulative.last().unwrap()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> SignedTableau {
        let pick = rng.gen_range(0..self.total());
        let idx = self.cumulative.partition_point(|&c| c <= pick);
        let (marked, tau) = &self.frames[idx];
        let lengths = self.domain.row_lengths(*marked);
        let rows = lengths
            .iter()
            .enumerate()
            .map(|(r, &len)| {
                let (lo, hi) = self.domain.row_range(r, tau, *marked);
                let rank = rng.gen_range(0..multichoose(lo, hi, len));
                unrank_row(lo, hi, len, rank)
            })
            .collect();
        SignedTableau::new(self.domain.bound, rows, tau.clone(), *marked)
    }
}

/// The `rank`-th (lexicographic) weakly increasing sequence over `lo..=hi`.
fn unrank_row(lo: u32, hi: u32, len: usize, mut rank: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    let mut v = lo;
    for pos in 0..len {
        let rest = len - pos - 1;
        loop {
            let c = multichoose(v, hi, rest);
            if rank < c {
                break;
            }
            rank -= c;
            v += 1;
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involutions::permutation_sign;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn smallest_t() {
        let d = Domain::t(&Partition::empty(), 1).unwrap();
        let all: Vec<SignedTableau> = d.enumerate(DEFAULT_CAP).unwrap().collect();
        assert_eq!(
            all,
            vec![SignedTableau::new(1, vec![vec![1]], vec![1], None)]
        );
    }

    #[test]
    fn displayed_pairs_are_members() {
        let d = Domain::t(&p("2,1"), 5).unwrap();
        let left = SignedTableau::new(
            5,
            vec![
                vec![2, 2, 3, 4, 4, 4, 5],
                vec![5, 5, 5, 5, 5],
                vec![4, 4, 5],
                vec![2, 2],
                vec![3],
            ],
            vec![2, 5, 4, 1, 3],
            None,
        );
        d.check(&left).unwrap();
        let s = Domain::s(&p("2,1"), 3, 1, 5).unwrap();
        let with_extra = SignedTableau::new(
            5,
            vec![
                vec![2, 2, 3, 4, 4, 4, 5],
                vec![5, 5, 5, 5, 5],
                vec![4, 4, 5],
                vec![2, 2, 3, 4, 5],
                vec![3],
            ],
            vec![2, 5, 4, 1, 3],
            Some(3),
        );
        s.check(&with_extra).unwrap();
        assert!(!d.contains(&with_extra));

        let mut bad = left.clone();
        bad.rows[4] = vec![2];
        assert!(matches!(d.check(&bad), Err(Error::NotMember(_))));
    }

    // per-row binomial products summed over τ and i, written out by hand
    #[test]
    fn s_count_matches_binomial_oracle() {
        // λ = ∅, n = 1, k = 1, N = 2: base row lengths (2, 1); the marked row gains 1
        let c = |n: u64, k: u64| binomial(n, k);
        let mut want: u128 = 0;
        for tau in [[1u64, 2], [2, 1]] {
            for marked in 0..2 {
                let mut prod = 1;
                for r in 0..2 {
                    let len = [2u64, 1][r] + u64::from(marked == r);
                    prod *= c(2 - tau[r] + len, len);
                }
                want += prod;
            }
        }
        let d = Domain::s(&Partition::empty(), 1, 1, 2).unwrap();
        let got = d.enumerate(DEFAULT_CAP).unwrap().count() as u128;
        assert_eq!(got, want);
        assert_eq!(d.cardinality(), BigUint::from(want));
    }

    #[test]
    fn enumeration_is_complete_and_valid() {
        for (lam, bound) in [("", 2), ("1", 2), ("", 3), ("1", 3), ("2", 3)] {
            let lam = p(lam);
            for d in [
                Domain::t(&lam, bound).unwrap(),
                Domain::s(&lam, 2, 1, bound).unwrap(),
                Domain::s_prime(&lam, 2, 1, 1, bound).unwrap(),
            ] {
                let all: Vec<SignedTableau> = d.enumerate(DEFAULT_CAP).unwrap().collect();
                assert_eq!(BigUint::from(all.len()), d.cardinality());
                assert!(all.iter().all(|x| d.contains(x)));
                let mut dedup = all.clone();
                dedup.sort_by(|a, b| (a.marked, &a.tau, &a.rows).cmp(&(b.marked, &b.tau, &b.rows)));
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
            }
        }
    }

    #[test]
    fn cap_guard_reports_estimate() {
        let d = Domain::s(&p("2,1"), 3, 1, 5).unwrap();
        match d.enumerate(1000) {
            Err(Error::CapExceeded { estimate, cap }) => {
                assert_eq!(cap, 1000);
                assert_eq!(estimate, d.cardinality().to_string());
            }
            _ => panic!("expected the cap to refuse"),
        }
    }

    #[test]
    fn unranking_is_a_bijection() {
        for (lo, hi, len) in [(1, 4, 3), (2, 2, 4), (1, 5, 1), (3, 6, 2)] {
            let mut row = first_row(lo, len);
            let mut rank = 0u128;
            loop {
                assert_eq!(unrank_row(lo, hi, len, rank), row);
                rank += 1;
                if !next_row(&mut row, hi) {
                    break;
                }
            }
            assert_eq!(rank, multichoose(lo, hi, len));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let d = Domain::s(&p("2,1"), 3, 1, 5).unwrap();
        let s = d.sampler().unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| s.sample(&mut rng)).collect::<Vec<_>>()
        };
        let a = draw(11);
        assert_eq!(a, draw(11));
        assert_ne!(a, draw(12));
        assert!(a.iter().all(|x| d.contains(x)));
        assert_eq!(BigUint::from(s.total()), d.cardinality());
    }

    #[test]
    fn sampler_matches_exhaustive_frequencies() {
        // chi-square over every element of a tiny S, against the uniform law
        let d = Domain::s(&Partition::empty(), 1, 1, 2).unwrap();
        let all: Vec<SignedTableau> = d.enumerate(DEFAULT_CAP).unwrap().collect();
        let s = d.sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 20_000;
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..draws {
            *counts
                .entry(format!("{:?}", s.sample(&mut rng)))
                .or_default() += 1;
        }
        assert_eq!(counts.len(), all.len());
        let expected = draws as f64 / all.len() as f64;
        let chi2: f64 = all
            .iter()
            .map(|x| {
                let o = *counts.get(&format!("{x:?}")).unwrap_or(&0) as f64;
                (o - expected).powi(2) / expected
            })
            .sum();
        let df = (all.len() - 1) as f64;
        assert!(
            chi2 <= df + 3.0 * (2.0 * df).sqrt(),
            "chi2 = {chi2}, df = {df}"
        );

        // and the sign balance of S is reproduced
        let mean_sign: f64 = {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            (0..draws)
                .map(|_| s.sample(&mut rng).sign() as f64)
                .sum::<f64>()
                / draws as f64
        };
        let exact: f64 = all
            .iter()
            .map(|x| permutation_sign(x.tau()) as f64)
            .sum::<f64>()
            / all.len() as f64;
        let sd = (1.0 / draws as f64).sqrt();
        assert!((mean_sign - exact).abs() <= 3.0 * sd);
    }

    #[test]
    fn lengths_round_trip_through_t_with_lengths() {
        let d = Domain::t(&p("3,1"), 4).unwrap();
        let back = Domain::t_with_lengths(4, &d.row_lengths(None)).unwrap();
        assert_eq!(back, d);
        assert!(Domain::t_with_lengths(3, &[3, 3, 1]).is_err());
    }
}
