use super::{Domain, SignedTableau};
use crate::error::{Error, Result};
use crate::shapes::{is_border_strip, strip_height, Partition};

/// Parameters `(λ, n, k, N)` of the master generating function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub lambda: Partition,
    pub n: u32,
    pub k: u32,
    pub bound: usize,
}

impl Instance {
    pub fn new(lambda: Partition, n: u32, k: u32, bound: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Precondition("need n ≥ 1 and k ≥ 1".into()));
        }
        if bound == 0 || bound < lambda.len() {
            return Err(Error::Precondition(format!(
                "N = {bound} must be positive and at least ℓ({lambda}) = {}",
                lambda.len()
            )));
        }
        Ok(Instance {
            lambda,
            n,
            k,
            bound,
        })
    }

    pub fn kn(&self) -> usize {
        (self.k * self.n) as usize
    }

    pub fn t_domain(&self) -> Domain {
        Domain::t(&self.lambda, self.bound).expect("validated instance")
    }

    pub fn s_domain(&self) -> Domain {
        Domain::s(&self.lambda, self.n, self.k, self.bound).expect("validated instance")
    }

    pub fn s_prime_domain(&self, l: u32) -> Result<Domain> {
        Domain::s_prime(&self.lambda, self.n, self.k, l, self.bound)
    }
}

fn check_t(x: &SignedTableau) -> Result<()> {
    if x.marked().is_some() {
        return Err(Error::NotMember(
            "I1 acts on diagrams without an extended row".into(),
        ));
    }
    Domain::t_with_lengths(x.bound(), &x.row_lengths())?.check(x)
}

/// The rightmost, then highest, vertical pair whose upper entry is at least
/// the lower one, as (upper row, position of the upper box in its row).
fn i1_pair(x: &SignedTableau) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for r in 0..x.rows().len().saturating_sub(1) {
        let (upper, lower) = (&x.rows()[r], &x.rows()[r + 1]);
        // upper position t is in column r + 1 − N + t; the box below is at t − 1
        for t in 1..upper.len() {
            if t > lower.len() {
                break;
            }
            if upper[t] >= lower[t - 1] {
                let col = r as i64 + t as i64;
                let better = match best {
                    None => true,
                    Some((c, br, _)) => col > c || (col == c && r < br),
                };
                if better {
                    best = Some((col, r, t));
                }
            }
        }
    }
    best.map(|(_, r, t)| (r, t))
}

/// Swaps every box left of the chosen upper box with the box diagonally
/// below-right of it, and swaps the two row labels.
pub fn i1(x: &SignedTableau) -> Result<SignedTableau> {
    check_t(x)?;
    Ok(apply_i1(x))
}

fn apply_i1(x: &SignedTableau) -> SignedTableau {
    let Some((r, t)) = i1_pair(x) else {
        return x.clone();
    };
    let mut out = x.clone();
    let (top, bottom) = out.rows.split_at_mut(r + 1);
    top[r][..t].swap_with_slice(&mut bottom[0][..t]);
    out.tau.swap(r, r + 1);
    out
}

fn marked_row(x: &SignedTableau) -> usize {
    x.marked().expect("members of S carry a marked row")
}

/// Moves the first `kn` boxes of the marked row `i` to the front of the row
/// `j` labelled by the `kn`-th entry, swapping `τ_i` and `τ_j`. Fixed iff
/// that entry equals `τ_i`.
pub fn i2(x: &SignedTableau, inst: &Instance) -> Result<SignedTableau> {
    inst.s_domain().check(x)?;
    let kn = inst.kn();
    let i = marked_row(x);
    let pivot = x.rows[i][kn - 1];
    if pivot == x.tau[i] {
        return Ok(x.clone());
    }
    let j = x
        .tau
        .iter()
        .position(|&t| t == pivot)
        .expect("τ is a permutation");
    let mut out = x.clone();
    let removed: Vec<u32> = out.rows[i].drain(..kn).collect();
    out.rows[j].splice(0..0, removed);
    out.tau.swap(i, j);
    out.marked = Some(j);
    Ok(out)
}

/// A fixed point of I2 split into an element of `T` and the row it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct I2Fixed {
    pub t: SignedTableau,
    /// 1-based row `i` that carried the extra boxes.
    pub row: usize,
    /// `τ_i`, the common value of the removed boxes.
    pub value: u32,
}

pub fn decompose_i2_fixed(x: &SignedTableau, inst: &Instance) -> Result<I2Fixed> {
    inst.s_domain().check(x)?;
    let kn = inst.kn();
    let i = marked_row(x);
    let value = x.tau[i];
    if x.rows[i][..kn].iter().any(|&e| e != value) {
        return Err(Error::NotFixed(format!(
            "the first {kn} entries of row {} are not all τ{} = {value}",
            i + 1,
            i + 1
        )));
    }
    let mut t = x.clone();
    t.rows[i].drain(..kn);
    t.marked = None;
    Ok(I2Fixed {
        t,
        row: i + 1,
        value,
    })
}

pub fn recompose_i2_fixed(f: &I2Fixed, inst: &Instance) -> Result<SignedTableau> {
    inst.t_domain().check(&f.t)?;
    if f.row == 0 || f.row > inst.bound {
        return Err(Error::Precondition(format!("row {} out of range", f.row)));
    }
    let i = f.row - 1;
    if f.t.tau[i] != f.value {
        return Err(Error::Precondition(format!("τ{} ≠ {}", f.row, f.value)));
    }
    let mut x = f.t.clone();
    x.rows[i].splice(0..0, std::iter::repeat_n(f.value, inst.kn()));
    x.marked = Some(i);
    Ok(x)
}

/// Row of the same length as the marked row, if any.
fn equal_length_partner(x: &SignedTableau) -> Result<Option<usize>> {
    let i = marked_row(x);
    let len = x.rows[i].len();
    let partners: Vec<usize> = (0..x.rows.len())
        .filter(|&j| j != i && x.rows[j].len() == len)
        .collect();
    match partners.len() {
        0 => Ok(None),
        1 => Ok(Some(partners[0])),
        _ => Err(Error::NotMember(format!(
            "{} rows share the length of row {}",
            partners.len() + 1,
            i + 1
        ))),
    }
}

/// Moves row `from` to index `to`, carrying its label; rows in between shift
/// by one. Each moved row slides along its diagonals.
fn move_row(x: &mut SignedTableau, from: usize, to: usize) {
    let row = x.rows.remove(from);
    x.rows.insert(to, row);
    let label = x.tau.remove(from);
    x.tau.insert(to, label);
}

/// Slides the marked row up to the slot `p` that makes the row lengths
/// strictly decreasing. Returns the slid pair (an element of `T_σ`) and `p`.
fn slide_up(x: &SignedTableau) -> (SignedTableau, usize) {
    let i = marked_row(x);
    let len = x.rows[i].len();
    let p = (0..i).find(|&r| x.rows[r].len() < len).unwrap_or(i);
    let mut y = x.clone();
    move_row(&mut y, i, p);
    y.marked = None;
    (y, p)
}

/// Swaps the marked row with the row of equal length if there is one;
/// otherwise slides it to a border-strip shape, applies I1 and slides back.
pub fn i3(x: &SignedTableau, inst: &Instance) -> Result<SignedTableau> {
    inst.s_domain().check(x)?;
    let i = marked_row(x);
    if let Some(j) = equal_length_partner(x)? {
        let mut out = x.clone();
        out.rows.swap(i, j);
        out.tau.swap(i, j);
        return Ok(out);
    }
    let (slid, p) = slide_up(x);
    let mut back = i1(&slid)?;
    move_row(&mut back, p, i);
    back.marked = Some(i);
    Ok(back)
}

/// An I3 fixed point seen as an I1 fixed point on `σ̂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderStripFixed {
    pub sigma: Partition,
    pub height: u32,
    pub y: SignedTableau,
}

pub fn slide_to_border_strip(x: &SignedTableau, inst: &Instance) -> Result<BorderStripFixed> {
    if i3(x, inst)? != *x {
        return Err(Error::NotFixed("pair is moved by I3".into()));
    }
    let i = marked_row(x);
    let (y, p) = slide_up(x);
    let sigma = Domain::t_with_lengths(inst.bound, &y.row_lengths())?
        .lambda()
        .clone();
    Ok(BorderStripFixed {
        sigma,
        height: (i - p) as u32,
        y,
    })
}

pub fn unslide_from_border_strip(f: &BorderStripFixed, inst: &Instance) -> Result<SignedTableau> {
    Domain::t(&f.sigma, inst.bound)?.check(&f.y)?;
    if !is_border_strip(&f.sigma, &inst.lambda, inst.kn() as u32)
        || strip_height(&f.sigma, &inst.lambda) != f.height
    {
        return Err(Error::Precondition(format!(
            "{} is not {} plus a height-{} strip of size {}",
            f.sigma,
            inst.lambda,
            f.height,
            inst.kn()
        )));
    }
    let top = (1..=f.sigma.len())
        .find(|&r| f.sigma.part(r) > inst.lambda.part(r))
        .expect("nonempty strip")
        - 1;
    let bottom = top + f.height as usize;
    let mut x = f.y.clone();
    move_row(&mut x, top, bottom);
    x.marked = Some(bottom);
    Ok(x)
}

/// Shifted-weight involution on `S′`: the first `kn` boxes of the marked row
/// move to the row labelled `m + kl` (`m` the last moved entry); the rest of
/// the marked row gains `kl`, the receiving row loses `kl`.
pub fn i4(x: &SignedTableau, inst: &Instance, l: u32) -> Result<SignedTableau> {
    inst.s_prime_domain(l)?.check(x)?;
    let kn = inst.kn();
    let kl = inst.k * l;
    let i = marked_row(x);
    let mut out = x.clone();
    let removed: Vec<u32> = out.rows[i].drain(..kn).collect();
    let m = *removed.last().unwrap();
    let target = m + kl;
    if target as usize > inst.bound {
        return Err(Error::NotMember(format!("m + kl = {target} exceeds N")));
    }
    for e in &mut out.rows[i] {
        *e += kl;
    }
    let j = x
        .tau
        .iter()
        .position(|&t| t == target)
        .expect("τ is a permutation");
    assert_ne!(i, j, "τ_i ≤ m < m + kl");
    for e in &mut out.rows[j] {
        *e -= kl;
    }
    out.rows[j].splice(0..0, removed);
    out.tau.swap(i, j);
    out.marked = Some(j);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::ShiftParams;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn st(rows: &[&[u32]], tau: &[u32], marked: Option<usize>) -> SignedTableau {
        SignedTableau::new(
            rows.len(),
            rows.iter().map(|r| r.to_vec()).collect(),
            tau.to_vec(),
            marked,
        )
    }

    fn example_inst() -> Instance {
        Instance::new(p("2,1"), 3, 1, 5).unwrap()
    }

    #[test]
    fn i1_example_pair() {
        let left = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[5, 5, 5, 5, 5],
                &[4, 4, 5],
                &[2, 2],
                &[3],
            ],
            &[2, 5, 4, 1, 3],
            None,
        );
        let right = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[4, 4, 5, 5, 5],
                &[5, 5, 5],
                &[2, 2],
                &[3],
            ],
            &[2, 4, 5, 1, 3],
            None,
        );
        assert_eq!(i1(&left).unwrap(), right);
        assert_eq!(i1(&right).unwrap(), left);
        assert_eq!(left.sign(), -right.sign());
        let n = ShiftParams::unshifted(3);
        assert_eq!(left.weight(n), right.weight(n));
    }

    #[test]
    fn i1_fixes_column_strict_identity_pairs() {
        // staircase row j filled with j, an SSYT of (2,1) on the right
        let x = st(
            &[
                &[1, 1, 1, 1, 1, 1, 2],
                &[2, 2, 2, 2, 3],
                &[3, 3, 3],
                &[4, 4],
                &[5],
            ],
            &[1, 2, 3, 4, 5],
            None,
        );
        assert!(x.is_column_strict());
        assert_eq!(i1(&x).unwrap(), x);
    }

    #[test]
    fn i1_single_row_is_fixed() {
        let x = SignedTableau::new(1, vec![vec![1, 1, 1]], vec![1], None);
        assert_eq!(i1(&x).unwrap(), x);
    }

    #[test]
    fn i1_rejects_non_members() {
        let bad = st(&[&[2, 1, 1], &[2]], &[1, 2], None);
        assert!(matches!(i1(&bad), Err(Error::NotMember(_))));
        let marked = st(&[&[1, 1, 1], &[2]], &[1, 2], Some(0));
        assert!(i1(&marked).is_err());
    }

    #[test]
    fn i2_example_pair() {
        let inst = example_inst();
        let left = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[5, 5, 5, 5, 5],
                &[4, 4, 5],
                &[2, 2, 3, 4, 5],
                &[3],
            ],
            &[2, 5, 4, 1, 3],
            Some(3),
        );
        let right = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[5, 5, 5, 5, 5],
                &[4, 4, 5],
                &[4, 5],
                &[2, 2, 3, 3],
            ],
            &[2, 5, 4, 3, 1],
            Some(4),
        );
        assert_eq!(i2(&left, &inst).unwrap(), right);
        assert_eq!(i2(&right, &inst).unwrap(), left);
    }

    #[test]
    fn i2_fixed_points_decompose() {
        let inst = example_inst();
        let x = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[5, 5, 5, 5, 5],
                &[4, 4, 5],
                &[1, 1, 1, 2, 2],
                &[3],
            ],
            &[2, 5, 4, 1, 3],
            Some(3),
        );
        assert_eq!(i2(&x, &inst).unwrap(), x);
        let f = decompose_i2_fixed(&x, &inst).unwrap();
        assert_eq!(f.row, 4);
        assert_eq!(f.value, 1);
        assert_eq!(f.t.rows()[3], vec![2, 2]);
        assert_eq!(f.t.sign(), x.sign());
        assert_eq!(recompose_i2_fixed(&f, &inst).unwrap(), x);

        let moved = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[5, 5, 5, 5, 5],
                &[4, 4, 5],
                &[2, 2, 3, 4, 5],
                &[3],
            ],
            &[2, 5, 4, 1, 3],
            Some(3),
        );
        assert!(matches!(
            decompose_i2_fixed(&moved, &inst),
            Err(Error::NotFixed(_))
        ));
    }

    #[test]
    fn i3_equal_length_example() {
        let inst = example_inst();
        let a = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[5, 5, 5, 5, 5],
                &[4, 4, 5],
                &[2, 2, 3, 4, 5],
                &[3],
            ],
            &[2, 5, 4, 1, 3],
            Some(3),
        );
        let b = st(
            &[
                &[2, 2, 3, 4, 4, 4, 5],
                &[2, 2, 3, 4, 5],
                &[4, 4, 5],
                &[5, 5, 5, 5, 5],
                &[3],
            ],
            &[2, 1, 4, 5, 3],
            Some(3),
        );
        assert_eq!(i3(&a, &inst).unwrap(), b);
        assert_eq!(i3(&b, &inst).unwrap(), a);
    }

    #[test]
    fn i3_sliding_example() {
        let inst = example_inst();
        let first = st(
            &[
                &[2, 2, 3, 4, 4, 4, 4],
                &[2, 2, 3, 4, 4],
                &[4, 4, 5, 5, 5, 5],
                &[5, 5],
                &[3],
            ],
            &[2, 1, 4, 5, 3],
            Some(2),
        );
        let (slid, p) = slide_up(&first);
        assert_eq!(p, 1);
        let second = st(
            &[
                &[2, 2, 3, 4, 4, 4, 4],
                &[4, 4, 5, 5, 5, 5],
                &[2, 2, 3, 4, 4],
                &[5, 5],
                &[3],
            ],
            &[2, 4, 1, 5, 3],
            None,
        );
        assert_eq!(slid, second);
        let third = st(
            &[
                &[2, 2, 3, 4, 4, 4, 4],
                &[2, 2, 3, 4, 4, 5],
                &[4, 4, 5, 5, 5],
                &[5, 5],
                &[3],
            ],
            &[2, 1, 4, 5, 3],
            None,
        );
        assert_eq!(i1(&second).unwrap(), third);
        // entries as in the fourth picture; labels travel with their rows
        let fourth = st(
            &[
                &[2, 2, 3, 4, 4, 4, 4],
                &[4, 4, 5, 5, 5],
                &[2, 2, 3, 4, 4, 5],
                &[5, 5],
                &[3],
            ],
            &[2, 4, 1, 5, 3],
            Some(2),
        );
        assert_eq!(i3(&first, &inst).unwrap(), fourth);
        assert_eq!(i3(&fourth, &inst).unwrap(), first);
        assert_eq!(first.sign(), -fourth.sign());
    }

    #[test]
    fn i3_fixed_point_slides_to_border_strip() {
        // λ = ∅, n = 1, k = 1, N = 2; marked row 1 gains one box, no slide
        let inst = Instance::new(Partition::empty(), 1, 1, 2).unwrap();
        let x = st(&[&[1, 1, 1], &[2]], &[1, 2], Some(0));
        assert_eq!(i3(&x, &inst).unwrap(), x);
        let f = slide_to_border_strip(&x, &inst).unwrap();
        assert_eq!(f.sigma, p("1"));
        assert_eq!(f.height, 0);
        assert_eq!(f.y.rows(), x.rows());
        assert_eq!(unslide_from_border_strip(&f, &inst).unwrap(), x);
    }

    #[test]
    fn i4_pairs_and_preserves_shifted_weight() {
        let inst = Instance::new(Partition::empty(), 2, 1, 3).unwrap();
        let sp = ShiftParams::new(2, 1).unwrap();
        // marked row 1 (length 3 + 2), entries ≤ N − kl = 2
        let x = st(&[&[1, 1, 2, 2, 2], &[3, 3], &[3]], &[1, 2, 3], Some(0));
        let y = i4(&x, &inst, 1).unwrap();
        assert_eq!(y.marked(), Some(1));
        assert_eq!(y.tau(), &[2, 1, 3]);
        assert_eq!(y.rows()[0], vec![3, 3, 3]);
        assert_eq!(y.rows()[1], vec![1, 1, 2, 2]);
        assert_eq!(i4(&y, &inst, 1).unwrap(), x);
        assert_eq!(x.weight(sp), y.weight(sp));
        assert_eq!(x.sign(), -y.sign());

        let outside = st(&[&[1, 1, 2, 2, 3], &[3, 3], &[3]], &[1, 2, 3], Some(0));
        assert!(matches!(i4(&outside, &inst, 1), Err(Error::NotMember(_))));
        assert!(i4(&x, &inst, 0).is_err());
    }
}
