use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use super::involution::{check_involution, InvolutionMode, Which};
use super::{
    verify_classical_mn_with, verify_lemma_with, verify_theorem1_with, verify_theorem2,
    verify_theorem2_line, Mutation, VerificationReport,
};
use crate::error::{Error, Result};
use crate::involutions::{Instance, DEFAULT_CAP};
use crate::shapes::Partition;

const DEFAULT_GRID: &str = include_str!("../../grids/default.toml");

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum Label {
    Int(u32),
    Str(String),
}

impl Label {
    fn text(&self) -> String {
        match self {
            Label::Int(i) => i.to_string(),
            Label::Str(s) => s.clone(),
        }
    }
}

/// One `[[check]]` table. List-valued fields expand to their cartesian
/// product.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub kind: String,
    #[serde(default)]
    lambda: Option<OneOrMany<String>>,
    #[serde(default)]
    n: Option<OneOrMany<u32>>,
    #[serde(default)]
    k: Option<OneOrMany<u32>>,
    #[serde(default)]
    l: Option<OneOrMany<u32>>,
    #[serde(default, rename = "N")]
    bound: Option<OneOrMany<usize>>,
    /// `N = kn + ℓ(λ) + offset`.
    #[serde(default, rename = "N_offset")]
    bound_offset: Option<OneOrMany<usize>>,
    #[serde(default, rename = "N_max")]
    bound_max: Option<usize>,
    #[serde(default)]
    max_kn: Option<u32>,
    #[serde(default)]
    which: Option<OneOrMany<Label>>,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    mutation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

fn default_samples() -> usize {
    1000
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GridOptions {
    /// Record wall time per report. Off by default so that output is
    /// byte-identical across runs.
    pub timings: bool,
}

pub fn parse_grid(text: &str) -> Result<GridConfig> {
    let config: GridConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    expand(&config)?;
    Ok(config)
}

pub fn default_grid() -> GridConfig {
    parse_grid(DEFAULT_GRID).expect("shipped grid parses")
}

/// The shipped grid as text.
pub fn default_grid_text() -> &'static str {
    DEFAULT_GRID
}

#[derive(Debug, Clone)]
enum Job {
    Theorem1 {
        lambda: Partition,
        n: u32,
        k: u32,
        bound: usize,
        mutation: Option<Mutation>,
    },
    Theorem2 {
        lambda: Partition,
        n: u32,
        k: u32,
        bound: usize,
        l: u32,
    },
    Theorem2Line {
        lambda: Partition,
        n: u32,
        k: u32,
        l: u32,
        bounds: Vec<usize>,
    },
    Lemma {
        which: u32,
        lambda: Partition,
        n: u32,
        k: u32,
        bound: usize,
        l: u32,
        cap: u64,
        mutation: Option<Mutation>,
    },
    Involution {
        which: Which,
        lambda: Partition,
        n: u32,
        k: u32,
        bound: usize,
        l: u32,
        mode: InvolutionMode,
    },
    Specialize {
        lambda: Partition,
        n: u32,
        bound: usize,
    },
    ClassicalMn {
        lambda: Partition,
        n: u32,
        k: u32,
        bound: usize,
        mutation: Option<Mutation>,
    },
}

impl Job {
    fn run(&self) -> Result<VerificationReport> {
        match self {
            Job::Theorem1 {
                lambda,
                n,
                k,
                bound,
                mutation,
            } => verify_theorem1_with(lambda, *n, *k, *bound, *mutation),
            Job::Theorem2 {
                lambda,
                n,
                k,
                bound,
                l,
            } => verify_theorem2(lambda, *n, *k, *bound, *l),
            Job::Theorem2Line {
                lambda,
                n,
                k,
                l,
                bounds,
            } => verify_theorem2_line(lambda, *n, *k, *l, bounds),
            Job::Lemma {
                which,
                lambda,
                n,
                k,
                bound,
                l,
                cap,
                mutation,
            } => verify_lemma_with(*which, lambda, *n, *k, *bound, *l, *cap, *mutation),
            Job::Involution {
                which,
                lambda,
                n,
                k,
                bound,
                l,
                mode,
            } => {
                let inst = Instance::new(lambda.clone(), *n, *k, *bound)?;
                check_involution(*which, &inst, *l, *mode)
            }
            Job::Specialize { lambda, n, bound } => {
                super::verify_specialization(lambda, *n, *bound)
            }
            Job::ClassicalMn {
                lambda,
                n,
                k,
                bound,
                mutation,
            } => verify_classical_mn_with(lambda, *n, *k, *bound, *mutation),
        }
    }

    /// Report used when the job itself errors out.
    fn error_report(&self, err: &Error) -> VerificationReport {
        let mut r = VerificationReport::new("error").param("job", format!("{self:?}"));
        r.fail_with(err.to_string());
        r
    }
}

fn list<T: Clone>(field: &Option<OneOrMany<T>>, default: Vec<T>) -> Vec<T> {
    field.as_ref().map(OneOrMany::to_vec).unwrap_or(default)
}

fn expand_check(spec: &CheckSpec, config: &GridConfig) -> Result<Vec<Job>> {
    let cfg = |msg: String| Error::Config(format!("check kind {:?}: {msg}", spec.kind));
    let lambdas: Vec<Partition> = list(&spec.lambda, vec![String::new()])
        .iter()
        .map(|s| s.parse::<Partition>())
        .collect::<Result<_>>()?;
    let ns = list(&spec.n, vec![1]);
    let ks = list(&spec.k, vec![1]);
    if ns.contains(&0) || ks.contains(&0) {
        return Err(cfg("n and k must be positive".into()));
    }
    let mutation = match spec.mutation.as_deref() {
        None => None,
        Some("flip_sign") => Some(Mutation::FlipSign),
        Some(other) => return Err(cfg(format!("unknown mutation {other:?}"))),
    };
    if mutation.is_some() && !matches!(spec.kind.as_str(), "theorem1" | "lemma" | "classical-mn") {
        return Err(cfg(
            "mutations apply to theorem1, lemma and classical-mn".into()
        ));
    }
    if spec.bound.is_some() == spec.bound_offset.is_some() {
        return Err(cfg("give exactly one of N and N_offset".into()));
    }
    let mode = match spec.mode.as_deref() {
        None | Some("exhaustive") => InvolutionMode::Exhaustive { cap: config.cap },
        Some("sampled") => InvolutionMode::Sampled {
            samples: spec.samples.unwrap_or(config.samples),
            seed: spec.seed.unwrap_or(config.seed),
        },
        Some(other) => return Err(cfg(format!("unknown mode {other:?}"))),
    };
    let bounds_for = |lambda: &Partition, kn: u32| -> Vec<usize> {
        let raw = match &spec.bound {
            Some(b) => b.to_vec(),
            None => list(&spec.bound_offset, vec![])
                .into_iter()
                .map(|o| kn as usize + lambda.len() + o)
                .collect(),
        };
        raw.into_iter()
            .filter(|&b| spec.bound_max.is_none_or(|m| b <= m))
            .collect()
    };
    // shifts: explicit, or every 1 ≤ l < n where a shift is required
    let shifts_for = |n: u32, required: bool| -> Vec<u32> {
        match &spec.l {
            Some(l) => l.to_vec(),
            None if required => (1..n).collect(),
            None => vec![0],
        }
    };

    let mut jobs = Vec::new();
    for lambda in &lambdas {
        for &n in &ns {
            for &k in &ks {
                if spec.max_kn.is_some_and(|m| k * n > m) {
                    continue;
                }
                let bounds = bounds_for(lambda, k * n);
                match spec.kind.as_str() {
                    "theorem1" => jobs.extend(bounds.iter().map(|&bound| Job::Theorem1 {
                        lambda: lambda.clone(),
                        n,
                        k,
                        bound,
                        mutation,
                    })),
                    "theorem2" => {
                        for l in shifts_for(n, true) {
                            jobs.extend(bounds.iter().map(|&bound| Job::Theorem2 {
                                lambda: lambda.clone(),
                                n,
                                k,
                                bound,
                                l,
                            }));
                        }
                    }
                    "theorem2-line" => {
                        for l in shifts_for(n, true) {
                            jobs.push(Job::Theorem2Line {
                                lambda: lambda.clone(),
                                n,
                                k,
                                l,
                                bounds: bounds.clone(),
                            });
                        }
                    }
                    "lemma" => {
                        let whichs = list(
                            &spec.which,
                            vec![Label::Int(1), Label::Int(2), Label::Int(3)],
                        );
                        for w in whichs {
                            let which: u32 = w
                                .text()
                                .parse()
                                .ok()
                                .filter(|w| (1..=3).contains(w))
                                .ok_or_else(|| {
                                    cfg(format!("lemma must be 1, 2 or 3, got {}", w.text()))
                                })?;
                            for l in shifts_for(n, false) {
                                for &bound in &bounds {
                                    jobs.push(Job::Lemma {
                                        which,
                                        lambda: lambda.clone(),
                                        n,
                                        k,
                                        bound,
                                        l,
                                        cap: config.cap,
                                        mutation,
                                    });
                                }
                            }
                        }
                    }
                    "involution" => {
                        let whichs = list(&spec.which, vec![Label::Str("I1".into())]);
                        for w in whichs {
                            let which: Which = w.text().parse()?;
                            let shifts = if which == Which::I4 {
                                shifts_for(n, true)
                            } else {
                                shifts_for(n, false)
                            };
                            for l in shifts {
                                for &bound in &bounds {
                                    jobs.push(Job::Involution {
                                        which,
                                        lambda: lambda.clone(),
                                        n,
                                        k,
                                        bound,
                                        l,
                                        mode,
                                    });
                                }
                            }
                        }
                    }
                    "specialize" => {
                        if k != 1 {
                            continue;
                        }
                        jobs.extend(bounds.iter().map(|&bound| Job::Specialize {
                            lambda: lambda.clone(),
                            n,
                            bound,
                        }))
                    }
                    "classical-mn" => jobs.extend(bounds.iter().map(|&bound| Job::ClassicalMn {
                        lambda: lambda.clone(),
                        n,
                        k,
                        bound,
                        mutation,
                    })),
                    other => return Err(cfg(format!("unknown kind {other:?}"))),
                }
            }
        }
    }
    Ok(jobs)
}

fn expand(config: &GridConfig) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for spec in &config.checks {
        jobs.extend(expand_check(spec, config)?);
    }
    Ok(jobs)
}

/// Runs every check of the grid. Jobs run in parallel; reports come back in
/// config order.
pub fn run_grid(config: &GridConfig, options: GridOptions) -> Result<Vec<VerificationReport>> {
    let jobs = expand(config)?;
    Ok(jobs
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let mut report = job.run().unwrap_or_else(|e| job.error_report(&e));
            if options.timings {
                report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            report
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_empty() {
        let c = parse_grid("").unwrap();
        assert!(run_grid(&c, GridOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn lists_expand_to_products() {
        let c = parse_grid(
            r#"
            [[check]]
            kind = "theorem1"
            lambda = ["", "1"]
            n = [1, 2]
            k = [1, 2]
            max_kn = 2
            N_offset = [0, 1]
            "#,
        )
        .unwrap();
        // (n, k) ∈ {(1,1), (1,2), (2,1)}, two λ, two N
        assert_eq!(expand(&c).unwrap().len(), 12);
    }

    #[test]
    fn malformed_configs_are_rejected() {
        for bad in [
            "seed = \"x\"",
            "[[check]]\nkind = \"nope\"\nN = 2",
            "[[check]]\nkind = \"theorem1\"",
            "[[check]]\nkind = \"theorem1\"\nN = 2\nN_offset = 0",
            "[[check]]\nkind = \"theorem2\"\nN = 4\nmutation = \"flip_sign\"",
            "[[check]]\nkind = \"theorem1\"\nN = 2\nlambda = \"1,2\"",
            "[[check]]\nkind = \"theorem1\"\nN = 2\ncolour = 1",
        ] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn shipped_grid_parses() {
        let c = default_grid();
        assert!(!c.checks.is_empty());
    }
}
