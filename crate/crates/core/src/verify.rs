//! Seeded and exhaustive checking of the theory's laws on many `(P, U)`
//! instances, with a deterministic report.
//!
//! Instances come in three groups, processed in this order:
//!
//! * fixtures: the worked examples of [`crate::fixtures`], each paired with
//!   a partner specification on the same poset;
//! * exhaustive: every poset with at most `exhaustive_n` elements (one per
//!   isomorphism class) and every join-specification of it, when the poset
//!   has at most [`EXHAUSTIVE_FREE`] joinable non-singleton subsets; the
//!   partner `V` of the `i`-th specification is the `(5i + 3) mod m`-th;
//! * random: `samples` instances drawn from one generator seeded with
//!   `seed`. Each draws its size `min_n + below(n - min_n + 1)`, a poset
//!   (see [`crate::random`]), then `U` and `V`, each with
//!   `1 + below(spec_members)` extra members.
//!
//! Laws scoped to a poset run once per exhaustive poset and once per random
//! instance. A failing instance is shrunk greedily: members of `U`, then of
//! `V`, then elements of `P` are dropped while the failure persists.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;

use crate::bits::{self, bit, ones, Mask};
use crate::closure::ClosureRepr;
use crate::enumerate::all_posets;
use crate::error::{Error, Result};
use crate::frames::{
    carrow_check, cunique_jset, descent_check, failure_witness, frame_generating, is_frame_generating,
    strong_descent_check, universal_extension, verify_eta, Method,
};
use crate::ideals::IdealLattice;
use crate::joinspec::JoinSpec;
use crate::lattice::{
    birkhoff_check, distributivity_mk, is_distributive, join_irreducibles, FiniteLattice,
};
use crate::morphisms::{
    adjoint_check, continuity_check, global_adjunction_check, lattice_as_poset, lift, unit_naturality_check,
    LatticeMap, PosetMap,
};
use crate::oracle::Oracle;
use crate::poset::Poset;
use crate::random::{random_joinspec, random_poset, Ratio, Rng};
use crate::speclattices::{
    all_joinspecs, is_maximal, jf_join, jf_meet, jf_top, jfplus_join, jfplus_meet, problematic, reflection_check,
    roundtrip_check, uminus, uminus_sequential, completion_of, completion_roundtrip_check,
};

/// Largest poset size accepted for random instances.
pub const MAX_VERIFY_N: usize = 8;
/// Exhaustive mode enumerates all specifications only below this many
/// joinable non-singleton subsets.
pub const EXHAUSTIVE_FREE: usize = 12;
/// Brute-force "largest subfamily" checks run when a family has at most
/// this many non-singleton members.
const BRUTE_EXTRAS: usize = 6;
/// Global adjunction checks run when the frame has at most this many elements.
const GLOBAL_MAX_FRAME: usize = 8;
const MK_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest random poset size.
    pub n: usize,
    /// Smallest random poset size.
    pub min_n: usize,
    pub samples: usize,
    pub seed: u64,
    pub edge_prob: Ratio,
    /// Law names to run; empty runs every law.
    pub laws: Vec<String>,
    /// Largest poset size enumerated exhaustively; 0 disables exhaustive mode.
    pub exhaustive_n: usize,
    /// Upper bound on extra members drawn per random specification.
    pub spec_members: usize,
    /// Also run the laws on the worked-example fixtures.
    pub fixtures: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n: 5,
            min_n: 5,
            samples: 200,
            seed: 42,
            edge_prob: Ratio::new(1, 2).expect("valid ratio"),
            laws: Vec::new(),
            exhaustive_n: 4,
            spec_members: 4,
            fixtures: true,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n > MAX_VERIFY_N {
            return Err(Error::CapExceeded { what: "verify poset size", cap: MAX_VERIFY_N });
        }
        if self.exhaustive_n > crate::enumerate::MAX_ENUMERATION {
            return Err(Error::CapExceeded { what: "exhaustive poset size", cap: crate::enumerate::MAX_ENUMERATION });
        }
        if self.samples == 0 && self.exhaustive_n == 0 && !self.fixtures {
            return Err(Error::Precondition("nothing to check: samples and exhaustive size are both zero".into()));
        }
        if self.samples > 0 && (self.min_n == 0 || self.min_n > self.n) {
            return Err(Error::Precondition(format!("invalid size range {}..{}", self.min_n, self.n)));
        }
        if self.spec_members == 0 {
            return Err(Error::Precondition("spec_members must be positive".into()));
        }
        for name in &self.laws {
            if !LAWS.iter().any(|l| l.name == name) {
                return Err(Error::Precondition(format!("unknown law `{name}`")));
            }
        }
        Ok(())
    }

    fn selected(&self, law: &Law) -> bool {
        self.laws.is_empty() || self.laws.iter().any(|n| n == law.name)
    }
}

/// Which group of laws a law belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// Frame-generation cross-validation and the `Γ`/`Υ` lemmas.
    Generation,
    /// Galois connections, `JF`/`JF⁺`, completions and maps.
    Galois,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Generation => "generation",
            Suite::Galois => "galois",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope {
    Spec,
    Poset,
}

/// A pair of join-specifications over one poset.
#[derive(Debug, Clone)]
pub struct Instance {
    pub u: JoinSpec,
    pub v: JoinSpec,
}

impl Instance {
    fn poset(&self) -> &Arc<Poset> {
        self.u.poset_arc()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

type Check = fn(&Instance) -> Result<Outcome>;

pub struct Law {
    pub name: &'static str,
    pub suite: Suite,
    scope: Scope,
    check: Check,
}

macro_rules! law {
    ($name:literal, $suite:ident, $scope:ident, $f:path) => {
        Law { name: $name, suite: Suite::$suite, scope: Scope::$scope, check: $f }
    };
}

/// Every law, in report order.
pub static LAWS: &[Law] = &[
    law!("tgen", Generation, Spec, law_tgen),
    law!("tgen23", Generation, Spec, law_tgen23),
    law!("upsilon-oracle", Generation, Spec, law_upsilon_oracle),
    law!("gamma", Generation, Spec, law_gamma),
    law!("lfix", Generation, Spec, law_lfix),
    law!("lcap", Generation, Spec, law_lcap),
    law!("lequal", Generation, Spec, law_lequal),
    law!("l33", Generation, Spec, law_l33),
    law!("ldown", Generation, Spec, law_ldown),
    law!("descent", Generation, Poset, law_descent),
    law!("md", Generation, Spec, law_md),
    law!("adj", Galois, Spec, law_adj),
    law!("capmax", Galois, Spec, law_capmax),
    law!("lims", Galois, Spec, law_lims),
    law!("comps", Galois, Spec, law_comps),
    law!("uminus", Galois, Spec, law_uminus),
    law!("jftop", Galois, Poset, law_jftop),
    law!("cref", Galois, Spec, law_cref),
    law!("carrow", Galois, Spec, law_carrow),
    law!("pres", Galois, Spec, law_pres),
    law!("ext", Galois, Spec, law_ext),
    law!("univ", Galois, Spec, law_univ),
    law!("arrow", Galois, Spec, law_arrow),
    law!("same", Galois, Spec, law_same),
    law!("contained", Galois, Spec, law_contained),
    law!("unique", Galois, Spec, law_unique),
    law!("mk", Galois, Spec, law_mk),
    law!("lift", Galois, Poset, law_lift),
    law!("global", Galois, Poset, law_global),
    law!("roundtrip", Galois, Spec, law_roundtrip),
];

pub fn law_names() -> Vec<&'static str> {
    LAWS.iter().map(|l| l.name).collect()
}

/// The first failure of a law, after shrinking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub instance: usize,
    pub message: String,
    pub poset: String,
    pub u: String,
    pub v: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawTally {
    pub name: &'static str,
    pub suite: Suite,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub fixture_instances: usize,
    pub exhaustive_posets: usize,
    pub exhaustive_instances: usize,
    pub random_instances: usize,
    pub laws: Vec<LawTally>,
    /// Recorded facts that are not asserted: `(holds, total)`.
    pub observations: BTreeMap<&'static str, (usize, usize)>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.laws.iter().all(|l| l.fail == 0)
    }

    pub fn law(&self, name: &str) -> Option<&LawTally> {
        self.laws.iter().find(|l| l.name == name)
    }

    /// Laws of `suite` pass with at least one passing instance each.
    pub fn suite_passes(&self, suite: Suite) -> bool {
        self.laws.iter().filter(|l| l.suite == suite).all(|l| l.fail == 0 && l.pass > 0)
    }

    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "verify seed={} n={}..{} samples={} edge_prob={} exhaustive_n={} spec_members={}",
            c.seed, c.min_n, c.n, c.samples, c.edge_prob, c.exhaustive_n, c.spec_members
        );
        let _ = writeln!(
            out,
            "instances: fixtures {}, exhaustive {} over {} posets, random {}",
            self.fixture_instances,
            self.exhaustive_instances, self.exhaustive_posets, self.random_instances
        );
        let _ = writeln!(out, "{:<16}{:<12}{:>8}{:>8}{:>8}", "law", "suite", "pass", "fail", "skip");
        for l in &self.laws {
            let _ = writeln!(out, "{:<16}{:<12}{:>8}{:>8}{:>8}", l.name, l.suite.to_string(), l.pass, l.fail, l.skip);
        }
        for (name, (holds, total)) in &self.observations {
            let _ = writeln!(out, "observed: {name}: {holds} of {total}");
        }
        for l in &self.laws {
            if let Some(f) = &l.failure {
                let _ = writeln!(out, "FAIL {} (instance {}): {}", l.name, f.instance, f.message);
                for line in f.poset.lines() {
                    let _ = writeln!(out, "  {line}");
                }
                let _ = writeln!(out, "  U = {}", f.u);
                let _ = writeln!(out, "  V = {}", f.v);
            }
        }
        let failed = self.laws.iter().filter(|l| l.fail > 0).count();
        if failed == 0 {
            let _ = writeln!(out, "result: all {} laws hold", self.laws.len());
        } else {
            let _ = writeln!(out, "result: {failed} of {} laws fail", self.laws.len());
        }
        out
    }
}

fn run_check(law: &Law, inst: &Instance) -> Outcome {
    match panic::catch_unwind(AssertUnwindSafe(|| (law.check)(inst))) {
        Ok(Ok(o)) => o,
        Ok(Err(Error::CapExceeded { .. })) => Outcome::Skip,
        Ok(Err(e)) => Outcome::Fail(format!("error: {e}")),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown".into());
            Outcome::Fail(format!("panic: {msg}"))
        }
    }
}

fn fails(law: &Law, inst: &Instance) -> Option<String> {
    match run_check(law, inst) {
        Outcome::Fail(m) => Some(m),
        _ => None,
    }
}

/// `U` restricted to `P` minus element `x`: members avoiding `x` whose join
/// still exists.
fn drop_element(u: &JoinSpec, q: &Arc<Poset>, x: usize) -> Result<JoinSpec> {
    let squeeze = |m: Mask| (m & (bit(x) - 1)) | ((m >> (x + 1)) << x);
    let masks = u
        .member_bits()
        .iter()
        .filter(|&&m| m & bit(x) == 0 && m.count_ones() != 1)
        .map(|&m| squeeze(m))
        .filter(|&m| q.join_bits(m).is_some())
        .collect();
    JoinSpec::from_masks(q.clone(), masks)
}

fn shrink(law: &Law, mut inst: Instance, mut message: String) -> (Instance, String) {
    loop {
        let mut changed = false;
        for which in 0..2 {
            let spec = if which == 0 { &inst.u } else { &inst.v };
            for m in spec.extra_bits().collect::<Vec<_>>() {
                let smaller = if which == 0 { &inst.u } else { &inst.v }.without(&[m]);
                let cand = if which == 0 {
                    Instance { u: smaller, v: inst.v.clone() }
                } else {
                    Instance { u: inst.u.clone(), v: smaller }
                };
                if let Some(msg) = fails(law, &cand) {
                    inst = cand;
                    message = msg;
                    changed = true;
                }
            }
        }
        let p = inst.poset().clone();
        for x in (0..p.len()).rev() {
            if p.len() == 1 {
                break;
            }
            let keep = p.elem(p.full_bits() & !bit(x));
            let Ok(q) = p.induced(&keep) else { continue };
            let q = Arc::new(q);
            let (Ok(u), Ok(v)) = (drop_element(&inst.u, &q, x), drop_element(&inst.v, &q, x)) else {
                continue;
            };
            let cand = Instance { u, v };
            if let Some(msg) = fails(law, &cand) {
                inst = cand;
                message = msg;
                changed = true;
                break;
            }
        }
        if !changed {
            return (inst, message);
        }
    }
}

struct Runner<'a> {
    config: &'a VerifyConfig,
    tallies: Vec<LawTally>,
    observations: BTreeMap<&'static str, (usize, usize)>,
    next_index: usize,
}

impl Runner<'_> {
    fn run(&mut self, inst: &Instance, poset_first: bool) {
        let index = self.next_index;
        self.next_index += 1;
        for (law, tally) in LAWS.iter().zip(self.tallies.iter_mut()) {
            if !self.config.selected(law) || (law.scope == Scope::Poset && !poset_first) {
                continue;
            }
            match run_check(law, inst) {
                Outcome::Pass => tally.pass += 1,
                Outcome::Skip => tally.skip += 1,
                Outcome::Fail(msg) => {
                    tally.fail += 1;
                    if tally.failure.is_none() {
                        let (small, message) = shrink(law, inst.clone(), msg);
                        tally.failure = Some(Failure {
                            instance: index,
                            message,
                            poset: small.poset().to_string(),
                            u: small.u.to_string(),
                            v: small.v.to_string(),
                        });
                    }
                }
            }
        }
        if self.config.laws.is_empty() {
            let _ = panic::catch_unwind(AssertUnwindSafe(|| observe(inst, poset_first, &mut self.observations)));
        }
    }
}

/// Worked examples grouped by poset.
fn fixture_instances() -> Result<Vec<Vec<Instance>>> {
    use crate::fixtures as fx;
    let pair = |u: &JoinSpec, v: &JoinSpec| Instance { u: u.clone(), v: v.clone() };
    let nu = Arc::new(fx::no_union());
    let (n1, n2) = (fx::no_union_u1(&nu), fx::no_union_u2(&nu));
    let st = Arc::new(fx::strict());
    let (s1, s2) = (fx::strict_u1(&st), fx::strict_u2(&st));
    let mut groups = vec![
        vec![pair(&n1, &n2), pair(&n2, &n1), pair(&n1.union(&n2)?, &n1)],
        vec![pair(&s1, &s2), pair(&s2, &s1), pair(&s1.intersection(&s2)?, &s1)],
    ];
    for p in [fx::not_mod(), fx::em_nec_p(), fx::em_nec_q(), fx::not_inj_p(), fx::not_inj_q()] {
        let p = Arc::new(p);
        let b = JoinSpec::bp(p.clone());
        groups.push(vec![pair(&JoinSpec::u_max(p)?, &b)]);
    }
    Ok(groups)
}

fn note(obs: &mut BTreeMap<&'static str, (usize, usize)>, key: &'static str, holds: bool) {
    let e = obs.entry(key).or_insert((0, 0));
    e.0 += holds as usize;
    e.1 += 1;
}

/// Facts the theory leaves open: recorded, never asserted.
fn observe(inst: &Instance, poset_first: bool, obs: &mut BTreeMap<&'static str, (usize, usize)>) {
    let p = inst.poset();
    if poset_first && p.len() >= 3 {
        if let Ok(u3) = JoinSpec::u_alpha(p.clone(), 3) {
            note(obs, "strong descent agrees with frame-generation on U_3", strong_descent_check(&u3) == frame_generating(&u3));
        }
    }
    if poset_first {
        for (meets, embeds) in literal_lifts(p).unwrap_or_default() {
            note(obs, "lift of an injective map between frames preserves binary meets", meets);
            note(obs, "lift of an embedding between frames is an order embedding", embeds);
        }
    }
    let u = &inst.u;
    let r = uminus(u);
    for m in u.member_bits().iter().copied().filter(|&m| !r.contains_bits(m)) {
        if let Ok(back) = r.with_extra(&[m]) {
            note(obs, "pruned member problematic again when re-added", problematic(&back).contains(&m));
        }
    }
    if !frame_generating(u) {
        if let Ok(ds) = p.downsets_bits() {
            let violated = ds.iter().any(|&a| {
                ds.iter().any(|&b| u.gamma_bits(a & b) != u.gamma_bits(a) & u.gamma_bits(b))
            });
            note(obs, "non-frame-generating U with a violating downset pair", violated);
        }
    }
}

/// Runs every selected law on every instance.
pub fn verify_theorems(config: &VerifyConfig) -> Result<VerifyReport> {
    config.validate()?;
    let mut runner = Runner {
        config,
        tallies: LAWS
            .iter()
            .map(|l| LawTally { name: l.name, suite: l.suite, pass: 0, fail: 0, skip: 0, failure: None })
            .collect(),
        observations: BTreeMap::new(),
        next_index: 0,
    };
    if config.fixtures {
        for group in fixture_instances()? {
            for (i, inst) in group.iter().enumerate() {
                runner.run(inst, i == 0);
            }
        }
    }
    let fixture_instances = runner.next_index;
    let mut exhaustive_posets = 0;
    for n in 1..=config.exhaustive_n {
        for p in all_posets(n)? {
            let p = Arc::new(p);
            let specs = match all_joinspecs(p.clone(), EXHAUSTIVE_FREE) {
                Ok(s) => s,
                Err(Error::CapExceeded { .. }) => continue,
                Err(e) => return Err(e),
            };
            exhaustive_posets += 1;
            let m = specs.len();
            for (i, u) in specs.iter().enumerate() {
                let inst = Instance { u: u.clone(), v: specs[(5 * i + 3) % m].clone() };
                runner.run(&inst, i == 0);
            }
        }
    }
    let exhaustive_instances = runner.next_index - fixture_instances;
    let mut rng = Rng::new(config.seed);
    for _ in 0..config.samples {
        let n = config.min_n + rng.below((config.n - config.min_n + 1) as u64) as usize;
        let p = Arc::new(random_poset(&mut rng, n, config.edge_prob)?);
        let ku = 1 + rng.below(config.spec_members as u64) as usize;
        let u = random_joinspec(&mut rng, p.clone(), ku)?;
        let kv = 1 + rng.below(config.spec_members as u64) as usize;
        let v = random_joinspec(&mut rng, p, kv)?;
        runner.run(&Instance { u, v }, true);
    }
    let random_instances = runner.next_index - fixture_instances - exhaustive_instances;
    let tallies = runner
        .tallies
        .into_iter()
        .zip(LAWS)
        .filter(|(_, law)| config.selected(law))
        .map(|(t, _)| t)
        .collect();
    Ok(VerifyReport {
        config: config.clone(),
        fixture_instances,
        exhaustive_posets,
        exhaustive_instances,
        random_instances,
        laws: tallies,
        observations: runner.observations,
    })
}

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($msg)+)));
        }
    };
}

fn all_masks(p: &Poset) -> impl Iterator<Item = Mask> {
    0..=p.full_bits()
}

fn brute_down(p: &Poset, s: Mask) -> bool {
    ones(s).all(|y| (0..p.len()).all(|x| !p.leq(x, y) || s & bit(x) != 0))
}

/// The brute-force oracle, skipped above the random-instance size cap.
fn oracle(u: &JoinSpec) -> Result<Oracle<'_>> {
    if u.poset().len() > MAX_VERIFY_N {
        return Err(Error::CapExceeded { what: "oracle poset size", cap: MAX_VERIFY_N });
    }
    Oracle::new(u)
}

fn law_tgen(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let report = match is_frame_generating(u, &Method::ALL) {
        Ok(r) => r,
        Err(Error::Invariant(m)) => return Ok(Outcome::Fail(m)),
        Err(e) => return Err(e),
    };
    let oracle = oracle(u)?;
    check!(
        oracle.ideals_distributive() == report.verdict,
        "methods say {} but the brute-force ideal lattice disagrees",
        report.verdict
    );
    check!(descent_check(u).verdict == report.verdict, "descent report disagrees with the verdict");
    if let Some(w) = report.witness {
        let s = w.set.bits();
        let j = p.join_bits(s);
        check!(u.contains_bits(s), "witness set {} is not a member", p.format_bits(s));
        check!(
            j.is_some_and(|j| p.leq(w.point, j)) && oracle.upsilon(s) & bit(w.point) == 0,
            "witness ({}, {}) does not re-check",
            p.format_bits(s),
            p.label(w.point)
        );
    }
    Ok(Outcome::Pass)
}

fn principal_meet_on(u: &JoinSpec, s: Mask) -> bool {
    let p = u.poset();
    let Some(j) = p.join_bits(s) else { return true };
    let g = u.gamma_bits(s);
    let sd = p.down_bits(s);
    ones(p.down_of(j)).all(|x| p.down_of(x) & g == u.gamma_bits(p.down_of(x) & sd))
}

fn law_tgen23(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let fg = frame_generating(u);
    let plus = u.uplus()?;
    let holds = plus.member_bits().iter().all(|&s| principal_meet_on(u, s));
    check!(holds == fg, "principal-meet condition over U+ gives {holds}, frame-generation {fg}");
    Ok(Outcome::Pass)
}

fn law_upsilon_oracle(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let o = oracle(u)?;
    for s in all_masks(p) {
        let f = |m| p.format_bits(m);
        check!(u.gamma_bits(s) == o.gamma(s), "Γ({}) = {} but brute force gives {}", f(s), f(u.gamma_bits(s)), f(o.gamma(s)));
        check!(
            u.upsilon_bits(s) == o.upsilon(s),
            "Υ({}) = {} but brute force gives {}",
            f(s),
            f(u.upsilon_bits(s)),
            f(o.upsilon(s))
        );
        check!(u.in_uplus_bits(s) == o.in_uplus(s), "U+ membership of {} disagrees with brute force", f(s));
        check!(u.is_ideal_bits(s) == o.is_ideal(s), "ideal test on {} disagrees with brute force", f(s));
    }
    Ok(Outcome::Pass)
}

fn law_gamma(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    for s in all_masks(p) {
        let g = u.gamma_bits(s);
        let f = p.format_bits(s);
        check!(bits::is_subset(s, g), "Γ({f}) is not extensive");
        check!(u.gamma_bits(g) == g, "Γ({f}) is not idempotent");
        check!(brute_down(p, g), "Γ({f}) = {} is not down-closed", p.format_bits(g));
        check!(u.is_ideal_bits(g), "Γ({f}) is not an ideal");
        for x in 0..p.len() {
            check!(bits::is_subset(g, u.gamma_bits(s | bit(x))), "Γ is not monotone at {f} + {}", p.label(x));
        }
    }
    for x in 0..p.len() {
        check!(u.gamma_bits(bit(x)) == p.down_of(x), "Γ({{{}}}) is not its principal downset", p.label(x));
    }
    let lat = IdealLattice::new(u)?;
    let o = oracle(u)?;
    let mut listed: Vec<Mask> = (0..lat.len()).map(|i| lat.ideal_bits(i)).collect();
    listed.sort_unstable();
    check!(listed == o.ideals(), "ideal lattice has {} members, brute force {}", listed.len(), o.ideals().len());
    Ok(Outcome::Pass)
}

fn law_lfix(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let o = oracle(u)?;
    for s in all_masks(p) {
        let g = u.gamma_bits(s);
        for x in ones(g) {
            if ones(s).all(|y| p.leq(y, x)) {
                check!(
                    p.join_bits(s) == Some(x),
                    "{} is an upper bound of {} inside Γ but not its join",
                    p.label(x),
                    p.format_bits(s)
                );
            }
        }
        if let Some(j) = p.join_bits(s) {
            if g & bit(j) != 0 {
                check!(o.in_uplus(s), "{} has its join in Γ but is not in U+", p.format_bits(s));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn law_lcap(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let o = oracle(u)?;
    for s in all_masks(p) {
        let (fast, brute) = (u.upsilon_bits(s), o.upsilon(s));
        let sd = p.down_bits(s);
        for x in 0..p.len() {
            let local = p.down_of(x) & sd;
            check!(
                (fast & bit(x) != 0) == (u.upsilon_bits(local) & bit(x) != 0)
                    && (brute & bit(x) != 0) == (o.upsilon(local) & bit(x) != 0),
                "membership of {} in Υ({}) changes when S is cut to its down-set",
                p.label(x),
                p.format_bits(s)
            );
        }
    }
    Ok(Outcome::Pass)
}

fn law_lequal(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let o = oracle(u)?;
    for s in all_masks(p) {
        let once = o.upsilon(s);
        check!(o.upsilon_iterated(s) == once, "iterating the Υ step from {} adds elements", p.format_bits(s));
        check!(u.upsilon_bits(s) == once, "Υ({}) differs from the single-step iterate", p.format_bits(s));
    }
    Ok(Outcome::Pass)
}

fn law_l33(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let o = oracle(u)?;
    for s in all_masks(p) {
        check!(
            bits::is_subset(u.upsilon_bits(s), u.gamma_bits(s)) && bits::is_subset(o.upsilon(s), o.gamma(s)),
            "Υ({}) is not inside Γ",
            p.format_bits(s)
        );
        check!(bits::is_subset(p.down_bits(s), u.upsilon_bits(s)), "Υ({}) misses part of S↓", p.format_bits(s));
    }
    Ok(Outcome::Pass)
}

fn law_ldown(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let o = oracle(u)?;
    for &s in u.member_bits() {
        let ups = u.upsilon_bits(s);
        check!(
            (ups == o.gamma(s)) == brute_down(p, ups),
            "Υ({}) = {}: smallest-ideal and down-closure tests disagree",
            p.format_bits(s),
            p.format_bits(ups)
        );
    }
    Ok(Outcome::Pass)
}

fn law_descent(inst: &Instance) -> Result<Outcome> {
    let w = JoinSpec::u_infty(inst.poset().clone())?;
    let (strong, fg) = (strong_descent_check(&w), frame_generating(&w));
    check!(strong == fg, "all joins: strong descent {strong}, frame-generating {fg}");
    Ok(Outcome::Pass)
}

fn law_md(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let alpha = u.radius().max(2);
    let ua = JoinSpec::u_alpha(u.poset_arc().clone(), alpha)?;
    if !ua.member_bits().iter().all(|&s| u.in_uplus_bits(s)) {
        return Ok(Outcome::Skip);
    }
    let hypothesis = u.members_with_joins().all(|(t, j)| {
        (0..p.len()).all(|x| match p.meet_bits(bit(x) | bit(j)) {
            None => true,
            Some(m) => {
                let parts: Option<Mask> =
                    ones(t).map(|y| p.meet_bits(bit(x) | bit(y)).map(bit)).try_fold(0, |acc, b| Some(acc | b?));
                parts.and_then(|pm| p.join_bits(pm)) == Some(m)
            }
        })
    });
    if !hypothesis {
        return Ok(Outcome::Skip);
    }
    check!(frame_generating(u), "meet-distribution hypothesis holds but U is not frame-generating");
    Ok(Outcome::Pass)
}

fn law_adj(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let plus = u.uplus()?;
    check!(u.is_subset(&plus), "U is not inside U+");
    for s in all_masks(p) {
        check!(plus.gamma_bits(s) == u.gamma_bits(s), "Γ of U+ differs from Γ of U at {}", p.format_bits(s));
    }
    check!(plus.uplus()? == plus, "U+ is not idempotent");
    check!(is_maximal(&plus)?, "U+ is not maximal");
    check!(ClosureRepr::Spec(u.clone()).u_gamma()? == plus, "U of Γ_U differs from U+");
    Ok(Outcome::Pass)
}

fn law_capmax(inst: &Instance) -> Result<Outcome> {
    let (a, b) = (inst.u.uplus()?, inst.v.uplus()?);
    check!(is_maximal(&a)? && is_maximal(&b)?, "U+ not maximal");
    check!(is_maximal(&a.intersection(&b)?)?, "intersection of maximal specifications is not maximal");
    Ok(Outcome::Pass)
}

fn law_lims(inst: &Instance) -> Result<Outcome> {
    let (fu, fv) = (uminus(&inst.u), uminus(&inst.v));
    check!(frame_generating(&fu.union(&fv)?), "union of frame-generating specifications is not frame-generating");
    let (a, b) = (fu.uplus()?, fv.uplus()?);
    check!(frame_generating(&a) && frame_generating(&b), "U+ of a frame-generating U is not frame-generating");
    let m = a.intersection(&b)?;
    check!(frame_generating(&m) && is_maximal(&m)?, "intersection in JF+ is not maximal frame-generating");
    Ok(Outcome::Pass)
}

/// Every frame-generating `B_P ∪ X` with `X` among the extras of `u` lies in `r`.
fn largest_within(u: &JoinSpec, r: &JoinSpec) -> Result<Option<bool>> {
    let extras: Vec<Mask> = u.extra_bits().collect();
    if extras.len() > BRUTE_EXTRAS {
        return Ok(None);
    }
    for pick in 0u64..1 << extras.len() {
        let chosen = ones(pick).map(|i| extras[i]).collect();
        let cand = JoinSpec::from_masks(u.poset_arc().clone(), chosen)?;
        if frame_generating(&cand) && !cand.is_subset(r) {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

fn law_comps(inst: &Instance) -> Result<Outcome> {
    let (fu, fv) = (uminus(&inst.u), uminus(&inst.v));
    let pair = [fu.clone(), fv.clone()];
    let join = jf_join(&pair)?;
    let meet = jf_meet(&pair)?;
    check!(join == fu.union(&fv)? && fu.is_subset(&join) && fv.is_subset(&join), "JF join is not the union");
    let inter = fu.intersection(&fv)?;
    check!(frame_generating(&meet) && meet.is_subset(&inter), "JF meet is not a frame-generating lower bound");
    check!(largest_within(&inter, &meet)? != Some(false), "JF meet misses a frame-generating common lower bound");
    check!(jf_join(&[fv.clone(), fu.clone()])? == join, "JF join is not commutative");
    check!(jf_meet(&[fv.clone(), fu.clone()])? == meet, "JF meet is not commutative");
    check!(jf_join(&[fu.clone(), fu.clone()])? == fu && jf_meet(&[fu.clone(), fu.clone()])? == fu, "JF not idempotent");
    check!(jf_join(&[fu.clone(), meet])? == fu, "JF absorption fails for join over meet");
    check!(jf_meet(&[fu.clone(), join])? == fu, "JF absorption fails for meet over join");
    let (a, b) = (fu.uplus()?, fv.uplus()?);
    let pj = jfplus_join(&[a.clone(), b.clone()])?;
    check!(a.is_subset(&pj) && b.is_subset(&pj) && is_maximal(&pj)?, "JF+ join is not a maximal upper bound");
    check!(jfplus_join(&[b.clone(), a.clone()])? == pj, "JF+ join is not commutative");
    check!(jfplus_meet(&[a.clone(), b.clone()])? == a.intersection(&b)?, "JF+ meet is not the intersection");
    Ok(Outcome::Pass)
}

fn law_uminus(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let r = uminus(u);
    check!(frame_generating(&r), "U- is not frame-generating");
    check!(r.is_subset(u), "U- is not inside U");
    check!(JoinSpec::bp(u.poset_arc().clone()).is_subset(&r), "U- lost a singleton");
    check!(uminus(&r) == r, "U- is not idempotent");
    check!(uminus_sequential(u) == r, "one-at-a-time pruning reaches {}", uminus_sequential(u));
    check!(largest_within(u, &r)? != Some(false), "a frame-generating subfamily of U is not inside U-");
    Ok(Outcome::Pass)
}

fn law_jftop(inst: &Instance) -> Result<Outcome> {
    let p = inst.poset().clone();
    let all = match all_joinspecs(p.clone(), EXHAUSTIVE_FREE) {
        Ok(a) => a,
        Err(Error::CapExceeded { .. }) => return Ok(Outcome::Skip),
        Err(e) => return Err(e),
    };
    let top = jf_top(p.clone())?;
    let mut union = JoinSpec::bp(p);
    for u in all.iter().filter(|u| frame_generating(u)) {
        union = union.union(u)?;
    }
    check!(union == top, "union of all frame-generating specifications is {union}, top is {top}");
    check!(is_maximal(&top)?, "top is not maximal");
    Ok(Outcome::Pass)
}

fn law_cref(inst: &Instance) -> Result<Outcome> {
    let fu = uminus(&inst.u);
    let b = uminus(&inst.v).uplus()?;
    let pairs = [(fu.clone(), b.clone()), (fu.clone(), fu.uplus()?), (b.clone(), b)];
    check!(reflection_check(&pairs)?, "U1+ ⊆ U2 and U1 ⊆ U2 disagree");
    Ok(Outcome::Pass)
}

fn law_carrow(inst: &Instance) -> Result<Outcome> {
    let w = uminus(&inst.u);
    let p = w.poset();
    let ds = p.downsets_bits()?;
    for (i, &a) in ds.iter().enumerate() {
        for &b in &ds[i..] {
            let fam = [p.elem(a), p.elem(b)];
            check!(carrow_check(&w, &fam)?, "Γ does not commute with {} ∩ {}", p.format_bits(a), p.format_bits(b));
        }
    }
    for tri in ds.windows(3) {
        let fam: Vec<_> = tri.iter().map(|&m| p.elem(m)).collect();
        check!(carrow_check(&w, &fam)?, "Γ does not commute with a triple intersection");
    }
    Ok(Outcome::Pass)
}

fn law_pres(inst: &Instance) -> Result<Outcome> {
    check!(verify_eta(&inst.u)?, "η fails embedding, meet, join or density checks");
    Ok(Outcome::Pass)
}

fn law_ext(inst: &Instance) -> Result<Outcome> {
    let p = inst.poset();
    for spec in [inst.u.clone(), inst.u.union(&inst.v)?] {
        let lat = IdealLattice::new(&spec)?;
        let eta = lat.eta_all();
        for s in all_masks(p) {
            if let Some(m) = p.meet_bits(s) {
                check!(
                    lat.meet_all(ones(s).map(|x| eta[x])) == eta[m],
                    "η does not preserve the meet of {}",
                    p.format_bits(s)
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn law_univ(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let w = u.union(&inst.v)?;
    let (lu, lw) = (IdealLattice::new(u)?, IdealLattice::new(&w)?);
    let table = lw.to_table()?;
    let cod = Arc::new(lattice_as_poset(&lw)?);
    let e = PosetMap::new(u.poset_arc().clone(), cod, lw.eta_all())?;
    let h = universal_extension(&lu, &table, &e)?;
    check!(h.preserves_joins(), "extension does not preserve joins");
    check!((0..u.poset().len()).all(|x| h.apply(lu.eta(x)) == lw.eta(x)), "extension does not fix P");
    check!(
        (0..lu.len()).all(|i| h.apply(i) == lw.close_index(lu.ideal_bits(i))),
        "extension differs from the closure map"
    );
    let own = lu.to_table()?;
    let cod_u = Arc::new(lattice_as_poset(&lu)?);
    let e_u = PosetMap::new(u.poset_arc().clone(), cod_u, lu.eta_all())?;
    check!(universal_extension(&lu, &own, &e_u)?.is_identity(), "extension of η is not the identity");
    Ok(Outcome::Pass)
}

fn law_arrow(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let fg = frame_generating(u);
    let lu = IdealLattice::new(u)?;
    let b = JoinSpec::bp(u.poset_arc().clone());
    let mut samples = vec![b.clone(), u.intersection(&inst.v)?];
    samples.extend(u.extra_bits().take(3).map(|m| u.without(&[m])));
    for (k, s) in samples.iter().enumerate() {
        let ls = IdealLattice::new(s)?;
        let phi = crate::speclattices::parrow_map(&ls, &lu)?;
        let meets = phi.preserves_binary_meets();
        if fg {
            check!(meets, "U is frame-generating but φ from sample {k} breaks binary meets");
        } else if k == 0 {
            check!(!meets, "U is not frame-generating yet φ from the downset lattice preserves meets");
        }
        if k == 0 {
            let incl = LatticeMap::from_fn(&lu, &ls, |i| ls.index_of_bits(lu.ideal_bits(i)).unwrap_or(usize::MAX));
            check!(adjoint_check(&phi, &incl), "closure map is not left adjoint to the inclusion");
        }
    }
    Ok(Outcome::Pass)
}

fn spec_pairs(inst: &Instance) -> Result<Vec<(JoinSpec, JoinSpec)>> {
    let (u, v) = (&inst.u, &inst.v);
    Ok(vec![
        (u.clone(), v.clone()),
        (v.clone(), u.clone()),
        (u.clone(), u.union(v)?),
        (u.intersection(v)?, u.clone()),
    ])
}

fn law_same(inst: &Instance) -> Result<Outcome> {
    for (a, b) in spec_pairs(inst)? {
        let (ca, cb) = (ClosureRepr::Spec(a.clone()), ClosureRepr::Spec(b.clone()));
        check!(ca.leq(&cb)? == ca.leq_pointwise(&cb)?, "closed-set and pointwise order disagree for {a} and {b}");
    }
    Ok(Outcome::Pass)
}

fn law_contained(inst: &Instance) -> Result<Outcome> {
    for (a, b) in spec_pairs(inst)? {
        let (la, lb) = (IdealLattice::new(&a)?, IdealLattice::new(&b)?);
        let h = LatticeMap::from_fn(&la, &lb, |i| lb.close_index(la.ideal_bits(i)));
        let exists = h.preserves_joins() && h.fixes_points();
        let contained = a.uplus()?.is_subset(&b.uplus()?);
        check!(exists == contained, "map over P exists: {exists}, U+ containment: {contained} for {a} and {b}");
    }
    Ok(Outcome::Pass)
}

fn law_unique(inst: &Instance) -> Result<Outcome> {
    let u = &inst.u;
    let p = u.poset();
    let lat = IdealLattice::new(u)?;
    let table = lat.to_table()?;
    if !is_distributive(&table) {
        return Ok(Outcome::Skip);
    }
    check!(birkhoff_check(&table)?, "Birkhoff representation fails");
    if p.bottom().is_none() {
        let ji = join_irreducibles(&table);
        let from_lattice: Mask = (0..p.len()).filter(|&x| ji.contains(&lat.eta(x))).fold(0, |m, x| m | bit(x));
        let direct = cunique_jset(u)?.bits();
        check!(
            direct == from_lattice,
            "non-join points {} but join-irreducibles {}",
            p.format_bits(direct),
            p.format_bits(from_lattice)
        );
    }
    Ok(Outcome::Pass)
}

fn law_mk(inst: &Instance) -> Result<Outcome> {
    let table = IdealLattice::new(&inst.u)?.to_table()?;
    let mk = distributivity_mk(&table, 3, 3, MK_CAP)?;
    let fg = frame_generating(&inst.u);
    check!(mk == is_distributive(&table) && mk == fg, "(3,3)-distributivity {mk}, frame-generating {fg}");
    Ok(Outcome::Pass)
}

fn inclusion(sub: &Arc<Poset>, whole: &Arc<Poset>, kept: &[usize]) -> Result<PosetMap> {
    PosetMap::new(sub.clone(), whole.clone(), kept.to_vec())
}

fn law_lift(inst: &Instance) -> Result<Outcome> {
    let p = inst.poset().clone();
    let n = p.len();
    if n < 3 {
        return Ok(Outcome::Skip);
    }
    let mut applied = false;
    let lq = IdealLattice::new(&JoinSpec::u_max(p.clone())?)?;
    for x in [0, n - 1] {
        let kept: Vec<usize> = (0..n).filter(|&i| i != x).collect();
        let d = Arc::new(p.induced(&p.elem(p.full_bits() & !bit(x)))?);
        let f = inclusion(&d, &p, &kept)?;
        let ud = JoinSpec::u_max(d.clone())?;
        if !f.is_u_morphism(&ud)? {
            continue;
        }
        applied = true;
        let ld = IdealLattice::new(&ud)?;
        let lifted = lift(&f, &ld, &lq)?;
        if continuity_check(&f, &ld, &lq)? {
            check!(lifted.preserves_joins(), "lift of a continuous map does not preserve joins");
        }
        if frame_generating(&ud) && frame_generating(lq.spec().expect("spec-backed"))
            && p.is_down_bits(f.image_bits(d.full_bits())) {
                check!(lifted.is_embedding(), "lift of an embedding onto a downset is not an order embedding");
                check!(lifted.preserves_binary_meets(), "lift of an embedding onto a downset breaks binary meets");
            }
        check!(unit_naturality_check(&f)?, "lift does not send p↓ to f(p)↓");
        // Functoriality along D2 ⊂ D ⊂ P, dropping the first element of D.
        let kept2: Vec<usize> = (1..d.len()).collect();
        let d2 = Arc::new(d.induced(&d.elem(d.full_bits() & !1))?);
        let g = inclusion(&d2, &d, &kept2)?;
        let u2 = JoinSpec::u_max(d2.clone())?;
        if g.is_u_morphism(&u2)? {
            let gf = g.then(&f)?;
            if gf.is_u_morphism(&u2)? {
                let l2 = IdealLattice::new(&u2)?;
                let (lg, lgf) = (lift(&g, &l2, &ld)?, lift(&gf, &l2, &lq)?);
                check!(
                    (0..l2.len()).all(|i| lgf.apply(i) == lifted.apply(lg.apply(i))),
                    "lift of a composite differs from the composite of lifts"
                );
            }
        }
    }
    Ok(if applied { Outcome::Pass } else { Outcome::Skip })
}

/// Meet preservation and order embedding of `f⁺` for inclusions `P - x → P`
/// that are morphisms between frame-generating posets, whatever their image.
fn literal_lifts(p: &Arc<Poset>) -> Result<Vec<(bool, bool)>> {
    let n = p.len();
    let mut out = Vec::new();
    if n < 3 {
        return Ok(out);
    }
    let uq = JoinSpec::u_max(p.clone())?;
    if !frame_generating(&uq) {
        return Ok(out);
    }
    let lq = IdealLattice::new(&uq)?;
    for x in [0, n - 1] {
        let kept: Vec<usize> = (0..n).filter(|&i| i != x).collect();
        let d = Arc::new(p.induced(&p.elem(p.full_bits() & !bit(x)))?);
        let f = inclusion(&d, p, &kept)?;
        let ud = JoinSpec::u_max(d.clone())?;
        if f.is_u_morphism(&ud)? && frame_generating(&ud) {
            let ld = IdealLattice::new(&ud)?;
            let lifted = lift(&f, &ld, &lq)?;
            out.push((lifted.preserves_binary_meets(), lifted.is_embedding()));
        }
    }
    Ok(out)
}

fn law_global(inst: &Instance) -> Result<Outcome> {
    let p = inst.poset().clone();
    let um = JoinSpec::u_max(p.clone())?;
    if !frame_generating(&um) || IdealLattice::new(&um)?.len() > GLOBAL_MAX_FRAME {
        return Ok(Outcome::Skip);
    }
    check!(global_adjunction_check(p)?, "triangle identities fail");
    Ok(Outcome::Pass)
}

fn law_roundtrip(inst: &Instance) -> Result<Outcome> {
    let repr = ClosureRepr::Spec(inst.u.clone());
    check!(roundtrip_check(&repr)?, "closure → completion → closure changes the closed sets");
    let lat = IdealLattice::new(&inst.u)?;
    check!(completion_roundtrip_check(&completion_of(&lat)?)?, "completion → closure → completion is not isomorphic");
    let w = failure_witness(&inst.u);
    check!(w.is_none() == frame_generating(&inst.u), "witness presence disagrees with the verdict");
    Ok(Outcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_exhaustive_run() {
        let cfg = VerifyConfig { exhaustive_n: 2, samples: 0, ..Default::default() };
        let r = verify_theorems(&cfg).unwrap();
        assert_eq!(r.exhaustive_posets, 3);
        assert!(r.all_pass(), "{}", r.render());
    }

    #[test]
    fn config_validation() {
        assert!(VerifyConfig { n: 9, ..Default::default() }.validate().is_err());
        assert!(VerifyConfig { laws: vec!["nope".into()], ..Default::default() }.validate().is_err());
        assert!(VerifyConfig { min_n: 6, n: 5, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn small_random_run_is_deterministic() {
        let cfg = VerifyConfig { exhaustive_n: 0, samples: 5, n: 4, min_n: 3, ..Default::default() };
        let a = verify_theorems(&cfg).unwrap().render();
        let b = verify_theorems(&cfg).unwrap().render();
        assert_eq!(a, b);
        assert!(a.contains("result: all"), "{a}");
    }
}
