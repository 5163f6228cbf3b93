use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VerificationReport;
use crate::error::{Error, Result};
use crate::involutions::{
    decompose_i2_fixed, i1, i2, i3, i4, master_gf, recompose_i2_fixed, slide_to_border_strip,
    unslide_from_border_strip, BorderStripFixed, Domain, I2Fixed, Instance, SignedTableau,
};
use crate::poly::{Monomial, Polynomial, Variable};
use crate::shapes::{enumerate_border_strips, is_border_strip, strip_height, Partition};
use crate::tableaux::{enumerate_ssyt, ShiftParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    I1,
    I2,
    I3,
    I4,
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I1" | "1" => Ok(Which::I1),
            "I2" | "2" => Ok(Which::I2),
            "I3" | "3" => Ok(Which::I3),
            "I4" | "4" => Ok(Which::I4),
            _ => Err(Error::Config(format!(
                "unknown involution {s:?}; expected I1..I4"
            ))),
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Which::I1 => "I1",
            Which::I2 => "I2",
            Which::I3 => "I3",
            Which::I4 => "I4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionMode {
    Exhaustive { cap: u64 },
    Sampled { samples: usize, seed: u64 },
}

enum Outcome {
    Fixed,
    Moved,
}

/// Per-run aggregates for the exhaustive-only characterizations.
#[derive(Default)]
struct Tally {
    checked: u64,
    fixed: u64,
    moved: u64,
    i2_images: HashSet<(Vec<Vec<u32>>, Vec<u32>, usize)>,
    i3_sigmas: BTreeMap<Partition, u64>,
}

struct Ctx<'a> {
    which: Which,
    inst: &'a Instance,
    domain: Domain,
    t_domain: Domain,
    shift: Option<ShiftParams>,
    unshifted: ShiftParams,
}

impl Ctx<'_> {
    fn apply(&self, x: &SignedTableau) -> Result<SignedTableau> {
        match self.which {
            Which::I1 => i1(x),
            Which::I2 => i2(x, self.inst),
            Which::I3 => i3(x, self.inst),
            Which::I4 => i4(x, self.inst, self.shift.expect("checked").l()),
        }
    }

    /// Weights the map must preserve: unshifted for I1–I3, shifted for I1,
    /// I3 (diagonal moves) and I4.
    fn weights(&self, x: &SignedTableau) -> Vec<Monomial> {
        let mut out = Vec::new();
        if self.which != Which::I4 {
            out.push(x.weight(self.unshifted));
        }
        if let Some(p) = self.shift {
            if self.which != Which::I2 {
                out.push(x.weight(p));
            }
        }
        out
    }

    fn check_one(
        &self,
        x: &SignedTableau,
        tally: &mut Tally,
    ) -> std::result::Result<Outcome, String> {
        let y = self.apply(x).map_err(|e| format!("map failed: {e}"))?;
        self.domain
            .check(&y)
            .map_err(|e| format!("image leaves the domain: {e}"))?;
        let back = self
            .apply(&y)
            .map_err(|e| format!("map failed on the image: {e}"))?;
        if back != *x {
            return Err("applying the map twice does not return the input".into());
        }
        if y == *x {
            self.check_fixed(x, tally)?;
            return Ok(Outcome::Fixed);
        }
        self.check_not_fixed(x)?;
        if y.sign() != -x.sign() {
            return Err("moved point keeps its sign".into());
        }
        if self.weights(x) != self.weights(&y) {
            return Err("weight is not preserved".into());
        }
        Ok(Outcome::Moved)
    }

    fn check_not_fixed(&self, x: &SignedTableau) -> std::result::Result<(), String> {
        match self.which {
            Which::I1 if x.is_column_strict() => Err("column-strict pair is moved".into()),
            Which::I2 if i2_prefix_fixed(x, self.inst.kn()) => {
                Err("first kn entries equal τ_i but the pair is moved".into())
            }
            _ => Ok(()),
        }
    }

    fn check_fixed(&self, x: &SignedTableau, tally: &mut Tally) -> std::result::Result<(), String> {
        let n = self.inst.bound;
        match self.which {
            Which::I1 => {
                if !x.is_column_strict() {
                    return Err("fixed point is not column-strict".into());
                }
                if x.tau()
                    .iter()
                    .enumerate()
                    .any(|(r, &t)| t as usize != r + 1)
                {
                    return Err("fixed point has τ ≠ id".into());
                }
                for (r, row) in x.rows().iter().enumerate() {
                    let stair = n - r;
                    if row[..stair].iter().any(|&e| e as usize != r + 1) {
                        return Err(format!(
                            "staircase part of row {} is not constant {}",
                            r + 1,
                            r + 1
                        ));
                    }
                }
            }
            Which::I2 => {
                if !i2_prefix_fixed(x, self.inst.kn()) {
                    return Err("fixed point whose first kn entries are not all τ_i".into());
                }
                let d = decompose_i2_fixed(x, self.inst).map_err(|e| format!("decompose: {e}"))?;
                self.t_domain
                    .check(&d.t)
                    .map_err(|e| format!("decomposed pair not in T: {e}"))?;
                // the removed boxes all hold τ_i
                let row_factor = Monomial::from_factors((0..self.inst.n).map(|c| {
                    (
                        Variable::new(c, (self.inst.n * d.value) as i64),
                        self.inst.k,
                    )
                }));
                if x.weight(self.unshifted) != row_factor.mul(&d.t.weight(self.unshifted)) {
                    return Err("weight law fails for the decomposition".into());
                }
                if d.t.sign() != x.sign() {
                    return Err("decomposition changes the sign".into());
                }
                let back =
                    recompose_i2_fixed(&d, self.inst).map_err(|e| format!("recompose: {e}"))?;
                if back != *x {
                    return Err("recomposition does not invert decomposition".into());
                }
                tally
                    .i2_images
                    .insert((d.t.rows().to_vec(), d.t.tau().to_vec(), d.row));
            }
            Which::I3 => {
                let f = slide_to_border_strip(x, self.inst).map_err(|e| format!("slide: {e}"))?;
                let kn = self.inst.kn() as u32;
                if !is_border_strip(&f.sigma, &self.inst.lambda, kn)
                    || strip_height(&f.sigma, &self.inst.lambda) != f.height
                {
                    return Err(format!(
                        "slid shape {} is not a strip of height {}",
                        f.sigma, f.height
                    ));
                }
                Domain::t(&f.sigma, n)
                    .and_then(|d| d.check(&f.y))
                    .map_err(|e| format!("slid pair not in T_σ: {e}"))?;
                if i1(&f.y).map_err(|e| e.to_string())? != f.y {
                    return Err("slid pair is not fixed by I1".into());
                }
                let factor = if f.height % 2 == 0 { 1 } else { -1 };
                if x.sign() != factor * f.y.sign() {
                    return Err("sign relation sgn(x) = (−1)^ht sgn(y) fails".into());
                }
                if self.weights(x) != self.weights(&f.y) {
                    return Err("slide changes the weight".into());
                }
                let back = unslide_from_border_strip(&f, self.inst)
                    .map_err(|e| format!("unslide: {e}"))?;
                if back != *x {
                    return Err("unslide does not invert slide".into());
                }
                *tally.i3_sigmas.entry(f.sigma).or_default() += 1;
            }
            Which::I4 => return Err("I4 has no fixed points".into()),
        }
        Ok(())
    }
}

fn i2_prefix_fixed(x: &SignedTableau, kn: usize) -> bool {
    let i = x.marked().expect("member of S");
    x.rows()[i][..kn].iter().all(|&e| e == x.tau()[i])
}

/// Checks one involution pointwise on its whole domain or on seeded uniform
/// samples. `l` selects the shift (required for I4, optional otherwise).
pub fn check_involution(
    which: Which,
    inst: &Instance,
    l: u32,
    mode: InvolutionMode,
) -> Result<VerificationReport> {
    if which == Which::I4 && l == 0 {
        return Err(Error::Precondition("I4 needs a shift 1 ≤ l < n".into()));
    }
    let shift = if l == 0 {
        None
    } else {
        Some(ShiftParams::new(inst.n, l)?)
    };
    let domain = match which {
        Which::I1 => inst.t_domain(),
        Which::I2 | Which::I3 => inst.s_domain(),
        Which::I4 => inst.s_prime_domain(l)?,
    };
    let ctx = Ctx {
        which,
        inst,
        domain: domain.clone(),
        t_domain: inst.t_domain(),
        shift,
        unshifted: ShiftParams::unshifted(inst.n),
    };
    let mut report = VerificationReport::new(&format!("involution-{which}"))
        .param("lambda", &inst.lambda)
        .param("n", inst.n)
        .param("N", inst.bound);
    if which != Which::I1 {
        report = report.param("k", inst.k);
    }
    if l != 0 {
        report = report.param("l", l);
    }
    let mut tally = Tally::default();
    let run = |x: &SignedTableau, report: &mut VerificationReport, tally: &mut Tally| {
        tally.checked += 1;
        match ctx.check_one(x, tally) {
            Ok(Outcome::Fixed) => tally.fixed += 1,
            Ok(Outcome::Moved) => tally.moved += 1,
            Err(msg) => report.fail_at(x, msg),
        }
    };
    match mode {
        InvolutionMode::Exhaustive { cap } => {
            report = report.param("mode", "exhaustive");
            for x in domain.enumerate(cap)? {
                run(&x, &mut report, &mut tally);
            }
            exhaustive_checks(&ctx, &tally, cap, &mut report)?;
        }
        InvolutionMode::Sampled { samples, seed } => {
            report = report
                .param("mode", "sampled")
                .param("samples", samples)
                .param("seed", seed);
            let sampler = domain.sampler()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let x = sampler.sample(&mut rng);
                run(&x, &mut report, &mut tally);
            }
            // uniform samples rarely land on fixed points, so build some
            let built = constructed_fixed_points(&ctx, samples, &mut rng, &mut report)?;
            report.detail("constructed_fixed", built);
        }
    }
    report.detail("checked", tally.checked);
    report.detail("fixed", tally.fixed);
    report.detail("moved", tally.moved);
    Ok(report)
}

fn exhaustive_checks(
    ctx: &Ctx<'_>,
    tally: &Tally,
    cap: u64,
    report: &mut VerificationReport,
) -> Result<()> {
    let inst = ctx.inst;
    match ctx.which {
        Which::I2 => {
            // fixed points ↔ T × {1..N}
            let expected = ctx.t_domain.cardinality() * inst.bound;
            report.detail("t_times_n", &expected);
            if expected != tally.fixed.into() || tally.i2_images.len() as u64 != tally.fixed {
                report.fail_with(format!(
                    "{} fixed points with {} distinct images, expected |T|·N = {expected}",
                    tally.fixed,
                    tally.i2_images.len()
                ));
            }
        }
        Which::I3 => {
            for strip in enumerate_border_strips(&inst.lambda, inst.kn() as u32) {
                let expected = if strip.sigma.len() <= inst.bound {
                    enumerate_ssyt(&strip.sigma, inst.bound).count() as u64
                } else {
                    0
                };
                let got = tally.i3_sigmas.get(&strip.sigma).copied().unwrap_or(0);
                if got != expected {
                    report.fail_with(format!(
                        "σ = {}: {got} fixed points, expected {expected} semistandard fillings",
                        strip.sigma
                    ));
                }
            }
            let hit: Vec<String> = tally.i3_sigmas.keys().map(|s| format!("({s})")).collect();
            report.detail("sigmas", hit.join(" "));
            let strips: HashSet<Partition> =
                enumerate_border_strips(&inst.lambda, inst.kn() as u32)
                    .into_iter()
                    .map(|s| s.sigma)
                    .collect();
            if let Some(s) = tally.i3_sigmas.keys().find(|s| !strips.contains(*s)) {
                report.fail_with(format!("slid shape {s} is not a border strip addition"));
            }
        }
        Which::I4 => {
            // signed shifted weights of S ∖ S′ sum to F^l
            let p = ctx.shift.expect("checked");
            let f = master_gf(inst, p.l(), cap)?.value;
            let mut rest = Polynomial::zero(inst.n);
            for x in inst.s_domain().enumerate(cap)? {
                if !ctx.domain.contains(&x) {
                    rest.add_term(x.weight(p), BigInt::from(x.sign()));
                }
            }
            let diff = f.sub(&rest)?;
            report.detail("outside_s_prime_terms", rest.len());
            if !diff.is_zero() {
                report.fail(super::Witness::Difference {
                    polynomial: diff.to_doc(),
                });
            }
        }
        Which::I1 => {}
    }
    Ok(())
}

/// Staircase completion of an SSYT of `shape`: row `j` gets `N − j + 1`
/// copies of `j` in front, `τ = id`.
fn staircase_pair(bound: usize, ssyt_rows: &[Vec<u32>]) -> SignedTableau {
    let rows = (0..bound)
        .map(|r| {
            let mut row = vec![r as u32 + 1; bound - r];
            if let Some(rest) = ssyt_rows.get(r) {
                row.extend_from_slice(rest);
            }
            row
        })
        .collect();
    SignedTableau::new(bound, rows, (1..=bound as u32).collect(), None)
}

/// Builds fixed points from their characterization and checks that the map
/// fixes them. I1: staircase completions of SSYT of λ. I2: `τ_i` prepended
/// to row `i` of sampled `T` elements. I3: unslid completions of SSYT of
/// every strip shape σ. Returns how many were built.
fn constructed_fixed_points(
    ctx: &Ctx<'_>,
    samples: usize,
    rng: &mut ChaCha8Rng,
    report: &mut VerificationReport,
) -> Result<u64> {
    let inst = ctx.inst;
    let bound = inst.bound;
    let mut built = 0;
    let mut expect_fixed = |x: &SignedTableau, report: &mut VerificationReport| {
        built += 1;
        if let Err(e) = ctx.domain.check(x) {
            report.fail_at(x, format!("constructed fixed point is not a member: {e}"));
        } else if ctx.apply(x).ok().as_ref() != Some(x) {
            report.fail_at(x, "constructed fixed point is moved");
        }
    };
    match ctx.which {
        Which::I1 => {
            for t in enumerate_ssyt(&inst.lambda, bound) {
                expect_fixed(&staircase_pair(bound, t.rows()), report);
            }
        }
        Which::I2 => {
            let sampler = ctx.t_domain.sampler()?;
            for _ in 0..samples {
                let t = sampler.sample(rng);
                let row = rng.gen_range(1..=bound);
                let value = t.tau()[row - 1];
                let f = I2Fixed { t, row, value };
                let x = recompose_i2_fixed(&f, inst)?;
                expect_fixed(&x, report);
                if decompose_i2_fixed(&x, inst).ok().as_ref() != Some(&f) {
                    report.fail_at(&x, "decomposition does not invert recomposition");
                }
            }
        }
        Which::I3 => {
            for strip in enumerate_border_strips(&inst.lambda, inst.kn() as u32) {
                if strip.sigma.len() > bound {
                    continue;
                }
                for t in enumerate_ssyt(&strip.sigma, bound) {
                    let f = BorderStripFixed {
                        sigma: strip.sigma.clone(),
                        height: strip.height,
                        y: staircase_pair(bound, t.rows()),
                    };
                    let x = unslide_from_border_strip(&f, inst)?;
                    expect_fixed(&x, report);
                    if slide_to_border_strip(&x, inst).ok().as_ref() != Some(&f) {
                        report.fail_at(&x, "slide does not invert unslide");
                    }
                }
            }
        }
        Which::I4 => {}
    }
    Ok(built)
}
