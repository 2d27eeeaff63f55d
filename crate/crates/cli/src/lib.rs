//! Batch verification suites and their JSON reports.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use halfspin::bits;
use halfspin::cartan::{
    diagram_pi_residual, diagram_tau_residual, diagram_tau_scalar, injectivity_witness, nu2, Injectivity,
};
use halfspin::clifford::{normal_form, so_to_clifford};
use halfspin::grassmann::{
    annihilator, is_pure, omega_of, pluecker, random_maximal_isotropic, sample_cone_point, sample_off_cone,
};
use halfspin::ideal::{
    assemble, certify_membership, degree_lowering_trace, discover_cone_forms, orbit_pullback_family,
    produce_solving_element, random_limit_polynomial, span_rank, Var,
};
use halfspin::rational::{frac, int, pow2};
use halfspin::spin::gl_twist_residual;
use halfspin::transfer::{
    beta, beta_gram, pi_general, pi_last, psidual_residual, psidual_scalar, tau_last, DENSE_LIMIT,
};
use halfspin::{random_group_element, CliffordElement, Parity, SoElement, SpinVector, Symbol, Vector};

pub const SUITES: [&str; 7] = ["clifford", "spinrep", "transfer", "cone", "cartan", "membership", "lowering"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfig {
    pub suite: String,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    pub sample_count: usize,
    pub output_path: Option<String>,
    pub fail_fast: bool,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            n_min: 1,
            n_max: 4,
            seed: 0,
            sample_count: 20,
            output_path: None,
            fail_fast: false,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    UnknownSuite(String),
    Range { n_min: usize, n_max: usize },
    NoSamples,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnknownSuite(s) => write!(f, "unknown suite {s:?}; expected one of {} or all", SUITES.join(", ")),
            ConfigError::Range { n_min, n_max } => write!(f, "need 1 <= n-min <= n-max, got {n_min}..{n_max}"),
            ConfigError::NoSamples => write!(f, "samples must be at least 1"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.suite != "all" && !SUITES.contains(&self.suite.as_str()) {
            return Err(ConfigError::UnknownSuite(self.suite.clone()));
        }
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(ConfigError::Range { n_min: self.n_min, n_max: self.n_max });
        }
        if self.sample_count < 1 {
            return Err(ConfigError::NoSamples);
        }
        Ok(())
    }

    fn suites(&self) -> Vec<&'static str> {
        if self.suite == "all" {
            SUITES.to_vec()
        } else {
            SUITES.iter().copied().filter(|s| *s == self.suite).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub suite: String,
    pub n: usize,
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    pub witness: Option<String>,
    pub runtime_millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool_version: String,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Report {
    pub fn new(config: SuiteConfig, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| (&a.suite, a.n, &a.name).cmp(&(&b.suite, b.n, &b.name)));
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Self {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config,
            summary,
            checks,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes the report as pretty JSON.
pub fn emit_report(report: &Report, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, report.to_json())
}

struct Outcome {
    status: Status,
    detail: String,
    witness: Option<String>,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Pass, detail: detail.into(), witness: None }
}

fn fail(detail: impl Into<String>, witness: impl Into<String>) -> Outcome {
    Outcome { status: Status::Fail, detail: detail.into(), witness: Some(witness.into()) }
}

fn skip(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Skipped, detail: detail.into(), witness: None }
}

/// Runs a fallible check body; library errors become failures.
fn guarded(f: impl FnOnce() -> halfspin::Result<Outcome>) -> Outcome {
    f().unwrap_or_else(|e| fail("error during check", e.to_string()))
}

type CheckFn = fn(usize, &mut Ctx) -> Outcome;

struct Ctx {
    rng: ChaCha8Rng,
    samples: usize,
}

impl Ctx {
    fn seed(&mut self) -> u64 {
        self.rng.gen()
    }

    fn dense(&mut self, n: usize, parity: Parity) -> SpinVector {
        loop {
            let mut x = SpinVector::zero(n);
            for m in bits::subsets_with_parity(n, parity.is_odd()) {
                x.add_term(m, int(self.rng.gen_range(-3..=3)));
            }
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn vector(&mut self, n: usize) -> Vector {
        let coords: Vec<_> = (0..2 * n).map(|_| int(self.rng.gen_range(-3..=3))).collect();
        Vector::from_coords(n, &coords).expect("2n coordinates")
    }

    fn clifford(&mut self, n: usize) -> CliffordElement {
        let mut x = CliffordElement::zero(n);
        for _ in 0..4 {
            let e = self.rng.gen_range(0..1u32 << n);
            let f = self.rng.gen_range(0..1u32 << n);
            x.add_term(halfspin::Monomial::new(e, f), int(self.rng.gen_range(-3..=3)));
        }
        x
    }
}

const NO_ROOTS: &str = "no root vectors to sample group elements at n = 1";

fn parity_of(i: usize) -> Parity {
    if i % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn checks_for(suite: &str) -> Vec<(&'static str, &'static str, CheckFn)> {
    match suite {
        "clifford" => vec![
            ("relations", "clifford-relations", clifford_relations),
            ("associativity", "clifford-associativity", clifford_associativity),
            ("star-involution", "clifford-star", clifford_star),
            ("two-form-bracket", "so-embedding", clifford_two_forms),
        ],
        "spinrep" => vec![
            ("lie-homomorphism", "spin-lie-map", spin_lie_map),
            ("highest-weights", "highest-weights", spin_weights),
            ("gl-twist", "gl-twist", spin_twist),
            ("group-action", "group-parity", spin_group),
        ],
        "transfer" => vec![
            ("pi-tau-section", "pi-tau-section", transfer_section),
            ("pi-general-last", "pi-general", transfer_general),
            ("pairing", "pairing-symmetry", transfer_pairing),
            ("psi-duality", "psi-duality", transfer_psidual),
            ("psi-duality-observed-scalar", "psi-duality", transfer_psidual_scalar),
        ],
        "cone" => vec![
            ("annihilator-round-trip", "annihilator-round-trip", cone_round_trip),
            ("cone-samples", "cone-samples", cone_samples),
            ("off-cone-samples", "cone-samples", cone_off_samples),
            ("level-stability", "cone-stability", cone_stability),
        ],
        "cartan" => vec![
            ("pluecker-scalar", "cartan-scalar", cartan_scalar),
            ("contraction-diagram", "cartan-diagrams", cartan_pi_diagram),
            ("multiplication-diagram", "cartan-diagrams", cartan_tau_diagram),
            ("injectivity", "cartan-injectivity", cartan_injectivity),
        ],
        "membership" => vec![
            ("double-oracle", "cone-equations", membership_oracle),
            ("degree-two-span", "cone-equations", membership_span),
        ],
        "lowering" => vec![
            ("traces", "degree-lowering", lowering_traces),
            ("solving-elements", "degree-lowering", lowering_solutions),
        ],
        _ => Vec::new(),
    }
}

/// Runs every requested suite for every level in range.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let mut checks = Vec::new();
    let mut stop = false;
    for suite in config.suites() {
        for n in config.n_min..=config.n_max {
            for (name, anchor, f) in checks_for(suite) {
                let start = Instant::now();
                let out = if stop {
                    skip("skipped after an earlier failure")
                } else if n > DENSE_LIMIT {
                    skip(format!("n = {n} exceeds the dense limit {DENSE_LIMIT}"))
                } else {
                    let cell = (suite.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)) << 8) ^ n as u64;
                    let mut ctx = Ctx {
                        rng: ChaCha8Rng::seed_from_u64(config.seed ^ cell.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                        samples: config.sample_count,
                    };
                    f(n, &mut ctx)
                };
                if out.status == Status::Fail && config.fail_fast {
                    stop = true;
                }
                checks.push(Check {
                    suite: suite.into(),
                    n,
                    name: name.into(),
                    anchor: anchor.into(),
                    status: out.status,
                    detail: out.detail,
                    witness: out.witness,
                    runtime_millis: config.timings.then(|| start.elapsed().as_millis() as u64),
                });
            }
        }
    }
    Ok(Report::new(config.clone(), checks))
}

fn clifford_relations(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        for i in 1..=n {
            for a in [Symbol::E(i), Symbol::F(i)] {
                for j in 1..=n {
                    for b in [Symbol::E(j), Symbol::F(j)] {
                        let sum = normal_form(n, &[a, b])?.add(&normal_form(n, &[b, a])?)?;
                        if sum != CliffordElement::scalar(n, int(2 * a.pairing(b))) {
                            return Ok(fail("vw + wv != 2(v|w)", format!("{a}, {b}")));
                        }
                    }
                }
            }
        }
        for _ in 0..ctx.samples {
            let v = ctx.vector(n);
            let a = CliffordElement::from_vector(&v);
            if a.mul(&a)? != CliffordElement::scalar(n, v.q()) {
                return Ok(fail("v·v != q(v)", v.to_string()));
            }
        }
        Ok(pass(format!("anticommutators on all generator pairs; v·v = q(v) on {} samples", ctx.samples)))
    })
}

fn clifford_associativity(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        for _ in 0..ctx.samples {
            let (a, b, c) = (ctx.clifford(n), ctx.clifford(n), ctx.clifford(n));
            if a.mul(&b)?.mul(&c)? != a.mul(&b.mul(&c)?)? {
                return Ok(fail("(ab)c != a(bc)", format!("a = {a}; b = {b}; c = {c}")));
            }
        }
        Ok(pass(format!("{} random triples", ctx.samples)))
    })
}

fn clifford_star(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        for _ in 0..ctx.samples {
            let (a, b) = (ctx.clifford(n), ctx.clifford(n));
            if a.star().star() != a || a.mul(&b)?.star() != b.star().mul(&a.star())? {
                return Ok(fail("star is not an anti-involution", format!("a = {a}; b = {b}")));
            }
        }
        Ok(pass(format!("{} random pairs", ctx.samples)))
    })
}

fn clifford_two_forms(n: usize, _ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return guarded(|| {
            let x = so_to_clifford(&SoElement::e_wedge_f(1, 1, 1));
            let ok = x == CliffordElement::parse(1, "1/2*e1f1 + -1/2*1")?;
            Ok(if ok { pass("e_1∧f_1 ↦ ½e_1f_1 − ½") } else { fail("wrong image", x.to_string()) })
        });
    }
    guarded(|| {
        let basis = SoElement::basis(n);
        for x in &basis {
            for y in &basis {
                let lhs = so_to_clifford(&x.bracket(y));
                let rhs = so_to_clifford(x).commutator(&so_to_clifford(y))?;
                if lhs != rhs {
                    return Ok(fail("bracket not preserved", format!("X = {x}; Y = {y}")));
                }
            }
        }
        Ok(pass(format!("all {} basis pairs", basis.len() * basis.len())))
    })
}

fn spin_lie_map(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        let basis = SoElement::basis(n);
        let pairs = ctx.samples.min(basis.len() * basis.len());
        for _ in 0..pairs {
            let x = &basis[ctx.rng.gen_range(0..basis.len())];
            let y = &basis[ctx.rng.gen_range(0..basis.len())];
            let parity = parity_of(ctx.rng.gen_range(0..2));
            let v = ctx.dense(n, parity);
            let lhs = v.rho(&x.bracket(y))?;
            let rhs = v.rho(y)?.rho(x)?.sub(&v.rho(x)?.rho(y)?);
            if lhs != rhs {
                return Ok(fail("ρ([X,Y]) != [ρX,ρY]", format!("X = {x}; Y = {y}; v = {v}")));
            }
        }
        Ok(pass(format!("{pairs} random basis pairs on dense vectors")))
    })
}

fn spin_weights(n: usize, _ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        let w0 = SpinVector::omega0(n);
        for i in 1..=n {
            if w0.rho(&SoElement::e_wedge_f(n, i, i))? != w0.scale(&frac(1, 2)) {
                return Ok(fail("(e_i∧f_i)ω_0 != ½ω_0", format!("i = {i}")));
            }
        }
        if n >= 2 {
            let w1 = SpinVector::omega1(n);
            if w1.rho(&SoElement::h(n, n - 1))? != w1 || !w1.rho(&SoElement::h(n, n))?.is_zero() {
                return Ok(fail("h_(n−1)ω_1 != ω_1 or h_nω_1 != 0", w1.to_string()));
            }
        }
        Ok(pass("ω_0 and ω_1 have the expected weights"))
    })
}

fn spin_twist(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        for _ in 0..ctx.samples {
            let a = SoElement::random(n, &mut ctx.rng, true);
            if !gl_twist_residual(&a)?.is_zero() {
                return Ok(fail("ρ(A) − ρ̃(A) + ½tr(A) != 0", a.to_string()));
            }
        }
        Ok(pass(format!("{} random gl elements", ctx.samples)))
    })
}

fn spin_group(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip(NO_ROOTS);
    }
    guarded(|| {
        for i in 0..ctx.samples {
            let g = random_group_element(n, ctx.seed(), 8)?;
            let parity = parity_of(i);
            let x = ctx.dense(n, parity);
            let y = g.apply(&x);
            if y.pure_parity()? != parity || g.inverse().apply(&y) != x {
                return Ok(fail("group element breaks parity or inverse", g.to_string()));
            }
            if !is_pure(&g.apply(&SpinVector::highest(n, parity))).is_pure() {
                return Ok(fail("g·ω left the cone", g.to_string()));
            }
        }
        Ok(pass(format!("parity, inverse and cone orbit on {} words", ctx.samples)))
    })
}

fn transfer_section(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip("needs n ≥ 2");
    }
    guarded(|| {
        for m in 0..1u32 << (n - 1) {
            let b = SpinVector::basis(n - 1, m);
            if pi_last(&tau_last(&b))? != b {
                return Ok(fail("π∘τ != id", b.to_string()));
            }
        }
        for i in 0..ctx.samples {
            let x = ctx.dense(n - 1, parity_of(i));
            if pi_last(&tau_last(&x))? != x {
                return Ok(fail("π∘τ != id", x.to_string()));
            }
        }
        Ok(pass(format!("basis and {} dense vectors", ctx.samples)))
    })
}

fn transfer_general(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        let e = Vector::basis_e(n, n);
        for i in 0..ctx.samples {
            let x = ctx.dense(n, parity_of(i));
            if pi_general(&x, &e)?.0 != pi_last(&x)? {
                return Ok(fail("π_(e_n) differs from the last-index map", x.to_string()));
            }
        }
        Ok(pass(format!("{} dense vectors", ctx.samples)))
    })
}

fn transfer_pairing(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        let g = beta_gram(n)?;
        let symmetric = n % 4 == 0 || n % 4 == 1;
        if g.det().is_zero() || (symmetric && !g.is_symmetric()) || (!symmetric && !g.is_skew()) {
            return Ok(fail("β degenerate or of the wrong symmetry", format!("n = {n}")));
        }
        for _ in 0..if n < 2 { 0 } else { ctx.samples.min(10) } {
            let h = random_group_element(n, ctx.seed(), 6)?;
            let (x, y) = (ctx.dense(n, Parity::Even), ctx.dense(n, parity_of(n)));
            if beta(&h.apply(&x), &h.apply(&y))? != beta(&x, &y)? {
                return Ok(fail("β not invariant", h.to_string()));
            }
        }
        Ok(pass(if symmetric { "nondegenerate, symmetric, invariant" } else { "nondegenerate, skew, invariant" }))
    })
}

fn transfer_psidual(n: usize, _ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip("needs n ≥ 2");
    }
    if n > 5 {
        return skip("exhaustive pairs limited to n ≤ 5");
    }
    guarded(|| {
        for a in 0..1u32 << (n - 1) {
            for m in 0..1u32 << n {
                let (a, x) = (SpinVector::basis(n - 1, a), SpinVector::basis(n, m));
                let r = psidual_residual(&a, &x)?;
                if !r.is_zero() {
                    return Ok(fail(
                        format!("residual {r} with the stated scalar (−1)^(n−1)/2"),
                        format!("a = {a}; x = {x}"),
                    ));
                }
            }
        }
        Ok(pass("residual zero on all basis pairs"))
    })
}

fn transfer_psidual_scalar(n: usize, _ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip("needs n ≥ 2");
    }
    if n > 5 {
        return skip("exhaustive pairs limited to n ≤ 5");
    }
    guarded(|| {
        Ok(match psidual_scalar(n)? {
            Some(s) => pass(format!("β(π(x), a) = {s}·β(x, ψ(a)) on all basis pairs")),
            None => fail("no uniform scalar", format!("n = {n}")),
        })
    })
}

fn cone_round_trip(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip(NO_ROOTS);
    }
    guarded(|| {
        for _ in 0..ctx.samples {
            let h = random_maximal_isotropic(n, ctx.seed())?;
            if annihilator(&omega_of(&h)?)? != h {
                return Ok(fail("annihilator(ω_H) != H", h.to_string()));
            }
        }
        Ok(pass(format!("{} random H", ctx.samples)))
    })
}

fn cone_samples(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip(NO_ROOTS);
    }
    guarded(|| {
        for i in 0..ctx.samples {
            let x = sample_cone_point(n, ctx.seed(), parity_of(i))?;
            if !is_pure(&x).is_pure() {
                return Ok(fail("orbit sample not pure", x.to_string()));
            }
        }
        Ok(pass(format!("{} orbit samples pure", ctx.samples)))
    })
}

fn cone_off_samples(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 4 {
        return skip("every half-spin vector is pure for n ≤ 3");
    }
    guarded(|| {
        let x = SpinVector::one(n).add(&SpinVector::highest(n, Parity::Even));
        if is_pure(&x).is_pure() {
            return Ok(fail("1 + e_[n] reported pure", x.to_string()));
        }
        for _ in 0..ctx.samples.min(5) {
            let x = sample_off_cone(n, ctx.seed(), Parity::Even);
            if annihilator(&x).map(|h| h.dim() == n).unwrap_or(false) {
                return Ok(fail("rejection sample has a maximal annihilator", x.to_string()));
            }
        }
        Ok(pass("non-pure vectors have annihilator of dimension < n"))
    })
}

fn cone_stability(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip("needs n ≥ 2");
    }
    guarded(|| {
        for i in 0..ctx.samples {
            let x = sample_cone_point(n, ctx.seed(), parity_of(i))?;
            let p = pi_last(&x)?;
            if !(p.is_zero() || is_pure(&p).is_pure()) || !is_pure(&tau_last(&x)).is_pure() {
                return Ok(fail("π or τ left the cone", x.to_string()));
            }
        }
        Ok(pass(format!("π and τ keep {} cone samples on the cone", ctx.samples)))
    })
}

fn cartan_scalar(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip(NO_ROOTS);
    }
    guarded(|| {
        for _ in 0..ctx.samples.min(10) {
            let h = random_maximal_isotropic(n, ctx.seed())?;
            let k = h.intersect_f().len();
            if nu2(&omega_of(&h)?) != pluecker(&h)?.scale(&pow2(n - k)) {
                return Ok(fail("ν̂₂(ω_H) != 2^(n−k)·pl(H)", h.to_string()));
            }
        }
        Ok(pass("ν̂₂(ω_H) = 2^(n−k)·pl(H)"))
    })
}

fn cartan_pi_diagram(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        for i in 0..ctx.samples {
            let x = ctx.dense(n, parity_of(i));
            if !diagram_pi_residual(&x)?.is_zero() {
                return Ok(fail("contraction diagram residual nonzero", x.to_string()));
            }
        }
        Ok(pass(format!("{} dense vectors", ctx.samples)))
    })
}

fn cartan_tau_diagram(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip("needs n ≥ 2");
    }
    guarded(|| {
        for i in 0..ctx.samples {
            let y = ctx.dense(n - 1, parity_of(i));
            if !diagram_tau_residual(&y)?.is_zero() {
                let s = diagram_tau_scalar(&y)?.map_or("none".into(), |s| s.to_string());
                return Ok(fail(format!("residual nonzero; observed sign {s}"), y.to_string()));
            }
        }
        Ok(pass(format!("{} dense vectors at level {}", ctx.samples, n - 1)))
    })
}

fn cartan_injectivity(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 2 {
        return skip(NO_ROOTS);
    }
    guarded(|| {
        let mut separated = 0;
        for i in 0..ctx.samples {
            let parity = parity_of(i);
            let x = sample_cone_point(n, ctx.seed(), parity)?;
            let y = sample_cone_point(n, ctx.seed(), parity)?;
            match injectivity_witness(&x, &y)? {
                Injectivity::Counterexample => return Ok(fail("proportional images", format!("x = {x}; y = {y}"))),
                Injectivity::Separated => separated += 1,
                Injectivity::SameLine => {}
            }
        }
        Ok(pass(format!("{separated} of {} pairs separated, no counterexample", ctx.samples)))
    })
}

fn membership_oracle(n: usize, ctx: &mut Ctx) -> Outcome {
    if n < 4 {
        return skip("the cone equations start at n = 4");
    }
    guarded(|| {
        let family = orbit_pullback_family(n, ctx.seed(), 64)?;
        let on = ctx.samples.div_ceil(2);
        let mut disagreements = 0;
        let mut witness = None;
        for i in 0..ctx.samples {
            let x = if i < on {
                sample_cone_point(n, ctx.seed(), Parity::Even)?
            } else {
                sample_off_cone(n, ctx.seed(), Parity::Even)
            };
            if certify_membership(&x, &family)?.passes() != is_pure(&x).is_pure() {
                disagreements += 1;
                witness.get_or_insert_with(|| x.to_string());
            }
        }
        Ok(match witness {
            None => pass(format!("0/{} disagreements between equations and annihilator rank", ctx.samples)),
            Some(w) => fail(format!("{disagreements}/{} disagreements", ctx.samples), w),
        })
    })
}

fn membership_span(n: usize, ctx: &mut Ctx) -> Outcome {
    if !(4..=5).contains(&n) {
        return skip("span comparison runs at n = 4, 5");
    }
    guarded(|| {
        let family = orbit_pullback_family(n, ctx.seed(), 64)?;
        let polys = family.polynomials();
        let forms = discover_cone_forms(n, Parity::Even, 2, [ctx.seed(), ctx.seed()])?;
        let rank = span_rank(&polys);
        let mut joint = polys;
        joint.extend(forms.iter().cloned());
        let union = span_rank(&joint);
        if rank == forms.len() && union == rank {
            Ok(pass(format!("pulled-back span {rank} equals the vanishing quadrics")))
        } else {
            Ok(fail(
                format!("pulled-back span {rank}, vanishing quadrics {}, joint {union}", forms.len()),
                format!("family seed {}", family.seed),
            ))
        }
    })
}

fn lowering_traces(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        for i in 0..ctx.samples {
            let p = random_limit_polynomial(ctx.seed(), 1 + i % 3, n, 4)?;
            let t = degree_lowering_trace(&p, n + 4)?;
            if let Err(e) = t.verify() {
                return Ok(fail(format!("trace does not verify: {e}"), p.to_string()));
            }
        }
        Ok(pass(format!("{} random polynomials, window {}", ctx.samples, n + 4)))
    })
}

fn lowering_solutions(n: usize, ctx: &mut Ctx) -> Outcome {
    guarded(|| {
        let count = ctx.samples.min(5);
        for i in 0..count {
            let p = random_limit_polynomial(ctx.seed(), 2 + i % 2, n, 3)?;
            let window = n + 4;
            let t = degree_lowering_trace(&p, window)?;
            let target = Var::top(t.n);
            let audit = produce_solving_element(&t, target, window)
                .and_then(|el| el.audit(&t))
                .and_then(|_| assemble(&t, target, window))
                .and_then(|(sol, els)| sol.audit(&t, &els));
            if let Err(e) = audit {
                return Ok(fail(format!("audit failed: {e}"), p.to_string()));
            }
        }
        Ok(pass(format!("{count} solving elements and certificates audited")))
    })
}
