//! The seeded property suite behind `jlcalc verify` and the acceptance test.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::diagrams::{check_eta, eta_q_kernel, ker_iota_generators};
use crate::error::{Error, Result};
use crate::freegroup::{lcs_class, leading_lie_class, Word};
use crate::freelie::sequences::{check_p_sequence, check_s_sequence};
use crate::freelie::{dk_basis, witt};
use crate::johnson::samples::{random_boundary_jkl, random_commutator_in, random_jk, random_levine_pair};
use crate::johnson::{iota_star_dk, tau_k, tau_k_levine};
use crate::tsa::samples::{random_ilc_morphism, random_small_morphism};
use crate::tsa::{classify_cobordism, compose, leading_additivity, strut_exp, LinkingMatrix, TsMorphism, Verdict};

/// A registered check: name, what it establishes, and its time budget.
pub struct CheckDef {
    pub name: &'static str,
    pub anchor: &'static str,
    pub budget: Duration,
    run: fn(u64) -> Result<Outcome>,
}

struct Outcome {
    passed: bool,
    detail: String,
    counterexample: Option<Value>,
}

impl Outcome {
    fn pass(detail: String) -> Self {
        Outcome { passed: true, detail, counterexample: None }
    }

    fn fail(detail: String, counterexample: Value) -> Self {
        Outcome { passed: false, detail, counterexample: Some(counterexample) }
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub static CHECKS: [CheckDef; 12] = [
    CheckDef { name: "dk-ranks", anchor: "rank D_1(Z^2g) = C(2g,3) via the bracket-map kernel", budget: secs(10), run: dk_ranks },
    CheckDef { name: "eta-isomorphism", anchor: "eta: T_k(H) ⊗ Q ≅ D_k(H) ⊗ Q", budget: secs(60), run: eta_isomorphism },
    CheckDef { name: "quasi-lie-sequences", anchor: "exact sequences through D^q and the maps s, p", budget: secs(60), run: quasi_lie_sequences },
    CheckDef { name: "torsion-annihilation", anchor: "(k+2)·ker(eta^q_k) = 0", budget: secs(60), run: torsion_annihilation },
    CheckDef { name: "commuting-square", anchor: "iota_* ∘ tau_k = tau^L_k on J_k", budget: secs(60), run: commuting_square },
    CheckDef { name: "levine-homomorphism", anchor: "tau^L_k(h∘h') = tau^L_k(h) + tau^L_k(h')", budget: secs(60), run: levine_homomorphism },
    CheckDef { name: "dk-membership", anchor: "boundary-fixing maps have tau^L_k in D_k(H')", budget: secs(60), run: dk_membership },
    CheckDef { name: "kernel-generators", anchor: "generators of ker(iota_*: D_k(H) → D_k(H'))", budget: secs(120), run: kernel_generators },
    CheckDef { name: "category-laws", anchor: "identity, associativity and top-substantiality in the diagram category", budget: secs(60), run: category_laws },
    CheckDef { name: "linking-classification", anchor: "linking-matrix blocks classify LC, ILC and IC", budget: secs(10), run: linking_classification },
    CheckDef { name: "leading-additivity", anchor: "upper-tree leading terms add under ILC composition", budget: secs(60), run: leading_term_additivity },
    CheckDef { name: "magnus-soundness", anchor: "Magnus expansion detects the lower central series", budget: secs(60), run: magnus_soundness },
];

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub anchor: &'static str,
    pub passed: bool,
    pub within_budget: bool,
    pub elapsed: Duration,
    pub detail: String,
    pub counterexample: Option<Value>,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.passed && self.within_budget
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "anchor": self.anchor,
            "status": if self.ok() { "pass" } else { "fail" },
            "within_budget": self.within_budget,
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "detail": self.detail,
            "counterexample": self.counterexample,
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "passed": self.all_passed(),
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.ok() { "PASS" } else { "FAIL" };
            let late = if c.within_budget { "" } else { " (over budget)" };
            out.push_str(&format!("{status} {:width$}  {:>8.2}s  {}{late}\n", c.name, c.elapsed.as_secs_f64(), c.detail));
        }
        out
    }
}

pub fn run_check(check: &CheckDef, seed: u64) -> CheckResult {
    let start = Instant::now();
    let outcome = (check.run)(seed).unwrap_or_else(|e| Outcome::fail(format!("error: {e}"), Value::Null));
    let elapsed = start.elapsed();
    CheckResult {
        name: check.name,
        anchor: check.anchor,
        passed: outcome.passed,
        within_budget: elapsed <= check.budget,
        elapsed,
        detail: outcome.detail,
        counterexample: outcome.counterexample,
    }
}

/// Runs `all` or a comma-separated list of check names, in registry order.
pub fn run_suite(suite: &str, seed: u64) -> Result<VerifyReport> {
    let wanted: Vec<&str> = suite.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for w in &wanted {
        if *w != "all" && !CHECKS.iter().any(|c| c.name == *w) {
            return Err(Error::Parse(format!("unknown check `{w}`")));
        }
    }
    let checks = CHECKS
        .iter()
        .filter(|c| wanted.iter().any(|w| *w == "all" || *w == c.name))
        .map(|c| run_check(c, seed))
        .collect();
    Ok(VerifyReport { seed, checks })
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn dk_ranks(_: u64) -> Result<Outcome> {
    let mut ranks = Vec::new();
    for g in 1..=3 {
        let n = 2 * g;
        let rank = dk_basis(n, 1).rank();
        let expected = binomial(n, 3);
        let dims = n * witt(n, 2) - witt(n, 3);
        if rank != expected || rank != dims {
            return Ok(Outcome::fail(
                format!("g = {g}: rank {rank}, C(2g,3) = {expected}, 2g·dim L_2 − dim L_3 = {dims}"),
                json!({"genus": g, "rank": rank}),
            ));
        }
        ranks.push(rank);
    }
    Ok(Outcome::pass(format!("ranks {ranks:?} for g = 1, 2, 3")))
}

fn eta_isomorphism(_: u64) -> Result<Outcome> {
    for (g, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let r = check_eta(2 * g, k)?;
        if !r.holds() {
            return Ok(Outcome::fail(format!("fails at g = {g}, k = {k}: {r:?}"), json!({"genus": g, "degree": k})));
        }
    }
    Ok(Outcome::pass("dimensions agree and eta round-trips on bases".into()))
}

fn quasi_lie_sequences(_: u64) -> Result<Outcome> {
    for n in [2, 4] {
        for j in [1, 2] {
            let r = check_s_sequence(n, j)?;
            if !r.exact() {
                return Ok(Outcome::fail(format!("s-sequence not exact at rank {n}, j = {j}: {r:?}"), json!({"rank": n, "j": j})));
            }
        }
        let r = check_p_sequence(n, 1)?;
        if !r.exact() {
            return Ok(Outcome::fail(
                format!("p-sequence not exact at rank {n}, j = 1: kernel trivial {}, cokernel {:?}", r.kernel_trivial, r.cokernel),
                json!({"rank": n, "j": 1}),
            ));
        }
    }
    Ok(Outcome::pass("exact for ranks 2, 4".into()))
}

fn torsion_annihilation(_: u64) -> Result<Outcome> {
    let mut seen = Vec::new();
    for g in [1, 2] {
        for k in [1, 2] {
            let (free, torsion) = eta_q_kernel(2 * g, k)?;
            let bound = BigInt::from(k + 2);
            if free != 0 || torsion.iter().any(|t| !bound.is_multiple_of(t)) {
                return Ok(Outcome::fail(
                    format!("g = {g}, k = {k}: kernel has free rank {free} and torsion {torsion:?}"),
                    json!({"genus": g, "degree": k}),
                ));
            }
            seen.push(format!("{:?}", torsion.iter().map(ToString::to_string).collect::<Vec<_>>()));
        }
    }
    Ok(Outcome::pass(format!("kernel torsion {}", seen.join(", "))))
}

fn commuting_square(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 5);
    for i in 0..50 {
        let k = 1 + i % 2;
        let h = random_jk(&mut rng, 2, k);
        let lhs = iota_star_dk(&tau_k(&h, k)?.value)?;
        let rhs = tau_k_levine(&h, k)?.value;
        if lhs != rhs {
            return Ok(Outcome::fail(format!("sample {i}, k = {k}"), json!({"degree": k, "map": h.to_json()})));
        }
    }
    Ok(Outcome::pass("50 samples, g = 2, k ≤ 2".into()))
}

fn levine_homomorphism(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 6);
    let mut nonzero = 0;
    for i in 0..50 {
        let k = 1 + i % 2;
        let g = 2 + (i / 2) % 2;
        let (h, ht) = random_levine_pair(&mut rng, g, k);
        let a = tau_k_levine(&h, k)?.value;
        let b = tau_k_levine(&ht, k)?.value;
        let ab = tau_k_levine(&h.compose(&ht)?, k)?.value;
        if ab != a.add(&b) {
            return Ok(Outcome::fail(
                format!("sample {i}, g = {g}, k = {k}"),
                json!({"genus": g, "degree": k, "h": h.to_json(), "h_tilde": ht.to_json()}),
            ));
        }
        nonzero += usize::from(!a.is_zero() && !b.is_zero());
    }
    Ok(Outcome::pass(format!("50 pairs, {nonzero} with both values nonzero")))
}

fn dk_membership(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 7);
    let mut nonzero = 0;
    for i in 0..50 {
        let (g, k) = [(2, 1), (3, 1), (2, 2), (3, 2)][i % 4];
        let h = random_boundary_jkl(&mut rng, g, k);
        let t = tau_k_levine(&h.map, k)?;
        if !t.certified() {
            return Ok(Outcome::fail(format!("sample {i}, g = {g}, k = {k}"), json!({"genus": g, "degree": k, "map": h.map.to_json()})));
        }
        nonzero += usize::from(!t.value.is_zero());
    }
    Ok(Outcome::pass(format!("50 boundary-fixing maps, {nonzero} with nonzero value")))
}

fn kernel_generators(_: u64) -> Result<Outcome> {
    let mut ranks = Vec::new();
    for (g, k) in [(1, 1), (2, 1), (2, 2)] {
        let r = ker_iota_generators(g, k);
        if !r.spans() {
            return Ok(Outcome::fail(
                format!("g = {g}, k = {k}: span rank {}, kernel rank {}, in kernel {}", r.span_rank, r.kernel_rank, r.all_in_kernel),
                json!({"genus": g, "degree": k}),
            ));
        }
        ranks.push(r.kernel_rank);
    }
    Ok(Outcome::pass(format!("kernel ranks {ranks:?}")))
}

const CAP: usize = 4;

fn ideg_additive(d: &TsMorphism, e: &TsMorphism, de: &TsMorphism) -> bool {
    let possible = |m: &TsMorphism| -> Vec<usize> { m.y.terms().iter().map(|(t, _)| t.ideg()).collect() };
    let (a, b) = (possible(d), possible(e));
    de.y.terms().iter().all(|(t, _)| a.iter().any(|x| b.iter().any(|y| x + y == t.ideg())))
}

fn category_laws(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 9);
    for g in [1, 2] {
        let l = LinkingMatrix::identity_cylinder(g);
        let half: Vec<Vec<BigRational>> =
            l.entries.iter().map(|r| r.iter().map(|x| BigRational::new(x.clone(), BigInt::from(2))).collect()).collect();
        if strut_exp(g, g, &half, CAP)? != TsMorphism::identity(g, CAP) {
            return Ok(Outcome::fail(format!("strut_exp(Lk(Id)/2) differs from Id at g = {g}"), json!({"genus": g})));
        }
    }
    for i in 0..30 {
        let g = rng.gen_range(1..=2);
        let (a, b, c) = (random_small_morphism(&mut rng, g, CAP), random_small_morphism(&mut rng, g, CAP), random_small_morphism(&mut rng, g, CAP));
        let id = TsMorphism::identity(g, CAP);
        let witness = || json!({"a": a.to_json(), "b": b.to_json(), "c": c.to_json()});
        if compose(&id, &a, CAP)? != a || compose(&a, &id, CAP)? != a {
            return Ok(Outcome::fail(format!("identity law fails on sample {i}"), witness()));
        }
        let ab = compose(&a, &b, CAP)?;
        let bc = compose(&b, &c, CAP)?;
        if compose(&ab, &c, CAP)? != compose(&a, &bc, CAP)? {
            return Ok(Outcome::fail(format!("associativity fails on sample {i}"), witness()));
        }
        if !ab.is_top_substantial() || !bc.is_top_substantial() {
            return Ok(Outcome::fail(format!("composite of sample {i} is not top-substantial"), witness()));
        }
        if !ideg_additive(&a, &b, &ab) {
            return Ok(Outcome::fail(format!("i-degree not additive on sample {i}"), witness()));
        }
    }
    Ok(Outcome::pass(format!("30 triples, g ≤ 2, cap {CAP}")))
}

fn linking_classification(_: u64) -> Result<Outcome> {
    let z = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> { rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect() };
    let cases = [
        (LinkingMatrix::identity_cylinder(2), Verdict::Ic),
        (LinkingMatrix::from_blocks(&z(&[&[1, 0], &[0, 1]]), &z(&[&[1, 0], &[0, 0]]))?, Verdict::Ilc),
        (LinkingMatrix::from_blocks(&z(&[&[1, 0], &[0, 1]]), &z(&[&[0, 1], &[1, -2]]))?, Verdict::Ilc),
        (LinkingMatrix::from_blocks(&z(&[&[1, 1], &[0, 1]]), &z(&[&[0, 0], &[0, 0]]))?, Verdict::Lc),
        (LinkingMatrix::from_blocks(&z(&[&[2, 0], &[0, 1]]), &z(&[&[1, 0], &[0, 3]]))?, Verdict::Lc),
        (LinkingMatrix::new(1, z(&[&[1, 1], &[1, 0]]))?, Verdict::NotLagrangian),
    ];
    for (l, want) in &cases {
        let got = classify_cobordism(l)?.verdict;
        if got != *want {
            return Ok(Outcome::fail(format!("expected {want}, got {got}"), l.to_json()));
        }
    }
    Ok(Outcome::pass(format!("{} block patterns", cases.len())))
}

fn leading_term_additivity(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 11);
    for i in 0..30 {
        let k = 1 + i % 2;
        let g = 2 + (i / 2) % 2;
        let d = random_ilc_morphism(&mut rng, g, k);
        let e = random_ilc_morphism(&mut rng, g, k);
        if !leading_additivity(&d, &e, k)?.holds() {
            return Ok(Outcome::fail(format!("sample {i}, g = {g}, k = {k}"), json!({"degree": k, "left": d.to_json(), "right": e.to_json()})));
        }
    }
    Ok(Outcome::pass("30 pairs, g ∈ {2, 3}, k ∈ {1, 2}".into()))
}

fn commutator_sample(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Word {
    let gens: Vec<usize> = (0..n).collect();
    loop {
        let w = random_commutator_in(rng, &gens, k);
        if w.len() <= 16 {
            return w;
        }
    }
}

fn magnus_soundness(seed: u64) -> Result<Outcome> {
    let mut rng = rng_for(seed, 12);
    let n = 3;
    for i in 0..100 {
        let k = 1 + i % 4;
        let w = commutator_sample(&mut rng, n, k);
        if !lcs_class(n, &w, k).at_least(k) {
            return Ok(Outcome::fail(format!("weight-{k} commutator below Γ_{k}"), json!({"weight": k, "word": w.letters()})));
        }
    }
    for i in 0..50 {
        let k = 1 + i % 4;
        let x = commutator_sample(&mut rng, n, k);
        let y = commutator_sample(&mut rng, n, k);
        let sum = leading_lie_class(n, &x, k)?.add(&leading_lie_class(n, &y, k)?);
        if leading_lie_class(n, &x.mul(&y), k)? != sum {
            return Ok(Outcome::fail(format!("leading class not additive at weight {k}"), json!({"x": x.letters(), "y": y.letters()})));
        }
    }
    Ok(Outcome::pass("100 commutators of weight ≤ 4, 50 products".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<_> = CHECKS.iter().map(|c| c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }

    #[test]
    fn unknown_check_is_rejected() {
        assert!(run_suite("no-such-check", 1).is_err());
    }
}
