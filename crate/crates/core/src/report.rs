//! Batch verification driver: runs the check suite for one curve and
//! renders a deterministic JSON or Markdown document.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::adjoint::{adjoint_system, decompose_adjoint, divisor_check};
use crate::aut::{self, PlaneAut};
use crate::classic::{
    conic_order_sequence, dichotomy_precision, frobenius_checks, literal_z_representation, osculation_order,
    z_representation,
};
use crate::curve::{AffinePoint, CurveParams, ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::ff::Subfield;
use crate::model::{self, BranchSource, SpacePoint};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Minimum number of random `F_{q^4}` points used when `tau` injectivity
/// has to be sampled.
pub const TAU_SAMPLE_FLOOR: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckGroup {
    Points,
    Genus,
    Branch,
    Osculation,
    Frobenius,
    Zrep,
    Adjoint,
    Model,
    Group,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 9] = [
        CheckGroup::Points,
        CheckGroup::Genus,
        CheckGroup::Branch,
        CheckGroup::Osculation,
        CheckGroup::Frobenius,
        CheckGroup::Zrep,
        CheckGroup::Adjoint,
        CheckGroup::Model,
        CheckGroup::Group,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckGroup::Points => "points",
            CheckGroup::Genus => "genus",
            CheckGroup::Branch => "branch",
            CheckGroup::Osculation => "osculation",
            CheckGroup::Frobenius => "frobenius",
            CheckGroup::Zrep => "zrep",
            CheckGroup::Adjoint => "adjoint",
            CheckGroup::Model => "model",
            CheckGroup::Group => "group",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check group {s:?}")))
    }

    /// Parses a comma list; `all` or an empty list selects everything.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        let mut out = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Self::ALL);
            } else {
                out.insert(Self::parse(part)?);
            }
        }
        if out.is_empty() {
            out.extend(Self::ALL);
        }
        Ok(out.into_iter().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Markdown,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u32,
    pub e: u32,
    /// Coefficients of `c` in powers of the field generator.
    pub c: Vec<i64>,
    pub seed: u64,
    /// Number of random `F_{q^4}` points per sampled check.
    pub samples: usize,
    /// Order-sequence precision; `3q` when unset.
    pub precision: Option<usize>,
    pub checks: Vec<CheckGroup>,
}

impl RunConfig {
    pub fn new(p: u32, e: u32) -> Self {
        RunConfig {
            p,
            e,
            c: vec![1],
            seed: 42,
            samples: 500,
            precision: None,
            checks: CheckGroup::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub expected: Value,
    pub observed: Value,
    pub paper_anchor: &'static str,
    /// `exhaustive`, `sampled`, or `skipped`.
    pub mode: &'static str,
}

fn asserted(id: &str, ok: bool, expected: Value, observed: Value, anchor: &'static str, mode: &'static str) -> CheckResult {
    CheckResult {
        id: id.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        expected,
        observed,
        paper_anchor: anchor,
        mode,
    }
}

fn reported(id: &str, expected: Value, observed: Value, anchor: &'static str, mode: &'static str) -> CheckResult {
    CheckResult {
        id: id.into(),
        status: Status::Reported,
        expected,
        observed,
        paper_anchor: anchor,
        mode,
    }
}

fn failed(id: &str, expected: Value, err: &Error, anchor: &'static str) -> CheckResult {
    asserted(id, false, expected, json!({ "error": err.to_string() }), anchor, "exhaustive")
}

/// A finished run: the deterministic body plus wall-clock timings.
#[derive(Clone, Debug)]
pub struct Report {
    pub params: Value,
    pub results: Vec<CheckResult>,
    pub seed: u64,
    /// Seconds per check group.
    pub timing: BTreeMap<String, f64>,
}

impl Report {
    pub fn summary(&self) -> BTreeMap<&'static str, usize> {
        let count = |s: Status| self.results.iter().filter(|r| r.status == s).count();
        BTreeMap::from([
            ("fail", count(Status::Fail)),
            ("pass", count(Status::Pass)),
            ("reported", count(Status::Reported)),
        ])
    }

    /// Everything except timings and the hash.
    pub fn body(&self) -> Value {
        json!({
            "params": self.params,
            "results": self.results,
            "seed": self.seed,
            "summary": self.summary(),
            "version": VERSION,
        })
    }

    /// SHA-256 of the compact body serialization.
    pub fn determinism_hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.body()).expect("serializable");
        hex::encode(Sha256::digest(bytes))
    }

    /// The body with `determinism_hash` and `timing` added; keys sorted.
    pub fn to_json(&self) -> String {
        let mut doc = self.body();
        let obj = doc.as_object_mut().expect("object");
        obj.insert("determinism_hash".into(), Value::String(self.determinism_hash()));
        obj.insert("timing".into(), json!(self.timing));
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        s.push_str(&format!(
            "# asm-verify report\n\np = {}, e = {}, q = {}, c = {}, seed = {}, version {}\n\n",
            p["p"], p["e"], p["q"], p["c"], self.seed, VERSION
        ));
        let sum = self.summary();
        s.push_str(&format!(
            "pass {} / fail {} / reported {}\n\n",
            sum["pass"], sum["fail"], sum["reported"]
        ));
        s.push_str("| id | status | mode | expected | observed | anchor |\n|---|---|---|---|---|---|\n");
        let cell = |v: &Value| v.to_string().replace('|', "\\|");
        for r in &self.results {
            let status = serde_json::to_value(r.status).expect("serializable");
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                r.id,
                status.as_str().unwrap_or_default(),
                r.mode,
                cell(&r.expected),
                cell(&r.observed),
                r.paper_anchor.replace('|', "\\|"),
            ));
        }
        s.push_str(&format!("\ndeterminism hash `{}`\n", self.determinism_hash()));
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.results.iter().any(|r| r.status == Status::Fail))
    }
}

/// Runs the selected check groups. Errors mean the configuration itself is
/// invalid.
pub fn run_report(config: &RunConfig) -> Result<Report> {
    if config.c.is_empty() {
        return Err(Error::InvalidParameter("empty coefficient list for c".into()));
    }
    let params = CurveParams::from_c_coeffs(config.p, config.e, &config.c)?;
    let q = params.q() as usize;
    if let Some(n) = config.precision {
        if n < 3 * q {
            return Err(Error::InvalidParameter(format!("precision must be at least 3q = {}", 3 * q)));
        }
    }
    let ctx = Ctx {
        params: &params,
        precision: config.precision.unwrap_or(3 * q),
        samples: config.samples,
    };
    let mut results = Vec::new();
    let mut timing = BTreeMap::new();
    for group in CheckGroup::ALL.into_iter().filter(|g| config.checks.contains(g)) {
        // one stream per group so selection does not shift other groups
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(group as u64));
        let start = Instant::now();
        let out = match group {
            CheckGroup::Points => ctx.points(),
            CheckGroup::Genus => ctx.genus(),
            CheckGroup::Branch => ctx.branch(&mut rng),
            CheckGroup::Osculation => ctx.osculation(&mut rng),
            CheckGroup::Frobenius => ctx.frobenius(&mut rng),
            CheckGroup::Zrep => ctx.zrep(),
            CheckGroup::Adjoint => ctx.adjoint(),
            CheckGroup::Model => ctx.model(&mut rng),
            CheckGroup::Group => ctx.group(&mut rng),
        };
        timing.insert(group.name().to_string(), start.elapsed().as_secs_f64());
        results.extend(out);
    }
    results.sort_by(|a, b| a.id.cmp(&b.id));
    let f = params.field();
    Ok(Report {
        params: json!({
            "p": config.p,
            "e": config.e,
            "q": params.q(),
            "c": f.format(params.c()),
            "c_coeffs": config.c,
        }),
        results,
        seed: config.seed,
        timing,
    })
}

struct Ctx<'a> {
    params: &'a CurveParams,
    precision: usize,
    samples: usize,
}

const A_COUNTS: &str = "counts (q-1)q^2+2q";
const A_GENUS: &str = "has genus g=(q-1)^2";
const A_SINGULAR: &str = "exactly two singular points, namely X_∞ and Y_∞, both have multiplicity q";
const A_ORDINARY: &str = "They are ordinary singularities";
const A_LOW: &str = "(-1)^i (v^q+v)/(u^q+u)^i";
const A_HIGH: &str = "(-1)^q (v^q+v)/(u^q+u)^q-(v_1^q+v_1)";
const A_ORDER_Q: &str = "v^q+v+v_q(u^q+u)+v_1^q(u^q+u)+v_{q-1}=0";
const A_ORDER_Q1: &str = "v_1+v_1^q+v_q+v_{q+1}(u^q+u)=0";
const A_DICHOTOMY: &str = "if and only if c^{-1}Tr(u)^2 ∈ F_q";
const A_SPECIAL: &str = "=q+1 if and only if";
const A_CONIC_ORDERS: &str = "is non-classical and has order sequence (0,1,2,q)";
const A_FROB_CURVE: &str = "its image P'(u^{q^2},v^{q^2}) by the Frobenius map over F_{q^2} is also a point of C_q";
const A_FROB_CONIC: &str = "Frobenius non-classical over F_{q^2}";
const A_Z: &str = "Let z_0=1+XY, z_1=Y, z_2=X, z_3=0, z_4=1, z_5=0";
const A_ADJ_SPLIT: &str =
    "Every degree q adjoint of C_q splits into the line at infinity counted (q-2) times and a conic through X_∞ and Y_∞";
const A_ELL: &str = "ℓ(G)=dim(Λ)+1";
const A_DEG: &str = "deg|G| = 2q^2-2q(q-1) = 2q";
const A_B_ZERO: &str = "F·C_q = qG = D+G, and hence B is the zero divisor";
const A_OMEGA: &str =
    "the points of Ω_1' lie on the line ℓ_1 of equation X_2=X_4=0 while those of Ω_2' on the line ℓ_2";
const A_MEET: &str = "Z_∞(0,0,1,0) is their common point";
const A_NONSING: &str = "the curve Y is nonsingular, and branches may be identified by their centers";
const A_ORD_INF: &str = "order sequence (0,1,q,q+1)";
const A_ORD_RAT: &str = "where the order sequence is (0,1,2,q+1)";
const A_ORD_GEN: &str = "the order sequence of Y is (0,1,2,q)";
const A_ORDER: &str = "order 2q^2(q-1)";
const A_STRUCTURE: &str = "order 2q^2(q-1) and it is the semidirect product Δ⋊D_{q-1} where Δ is an elementary abelian (normal) subgroup of order q^2";
const A_DIHEDRAL: &str = "a dihedral group D_{q-1} of order 2(q-1)";
const A_INVARIANT: &str = "The following linear maps are automorphisms of C_q";
const A_ORBITS: &str = "splits into two orbits under the action of Δ⋊D_{q-1}, namely Ω_1∪Ω_2 and Σ";
const A_SHARP: &str = "acts … as a sharply transitive permutation group";
const A_XI: &str = "fixes each point P(a,a) of C_q with Tr(a)^2=c";
const A_MATRIX: &str = "m_{13}=m_{23}=m_{03}=0 as h fixes Z_∞";
const A_STAB: &str = "subgroup of index ≤ 2 that leaves both";
const A_INVARIANT_SET: &str = "G leaves Ω_1'∪Ω_2' invariant";
const A_FORM_ODD: &str = "whence γ=1/4(α)^{-1}";
const A_FORM_EVEN: &str = "whence δ=β^{-1}c";
const A_MAXIMAL: &str = "Each linear map which is an automorphism of C_q fixing K elementwise belongs to Δ⋊D_{q-1}";

fn sequences(counts: &BTreeMap<Vec<usize>, usize>) -> Value {
    json!(counts
        .iter()
        .map(|(k, v)| json!({ "sequence": k, "count": v }))
        .collect::<Vec<_>>())
}

impl Ctx<'_> {
    fn q(&self) -> u64 {
        self.params.q()
    }

    fn odd(&self) -> bool {
        self.params.p() != 2
    }

    fn c_in_fq(&self) -> bool {
        self.params.c_in(Subfield::Fq)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<AffinePoint> {
        self.params.sample_points(Subfield::Fq4, self.samples, rng)
    }

    fn points(&self) -> Vec<CheckResult> {
        let q = self.q();
        let affine = (q - 1) * q * q;
        let places = affine + 2 * q;
        let count = match self.params.enumerate_points(Subfield::Fq2) {
            Ok(p) => p.len() as u64,
            Err(e) => return vec![failed("points.affine_fq2", json!(affine), &e, A_COUNTS)],
        };
        let infinite = self.params.infinite_places().len() as u64;
        if !self.c_in_fq() {
            // c outside F_q: the closed form does not apply
            return vec![
                reported("points.affine_fq2", json!(null), json!(count), A_COUNTS, "exhaustive"),
                reported("points.places_fq2", json!(null), json!(count + infinite), A_COUNTS, "exhaustive"),
            ];
        }
        vec![
            asserted("points.affine_fq2", count == affine, json!(affine), json!(count), A_COUNTS, "exhaustive"),
            asserted(
                "points.places_fq2",
                count + infinite == places,
                json!(places),
                json!(count + infinite),
                A_COUNTS,
                "exhaustive",
            ),
        ]
    }

    fn genus(&self) -> Vec<CheckResult> {
        let q = self.q();
        let g = (q - 1) * (q - 1);
        let r = match self.params.singularity_and_genus() {
            Ok(r) => r,
            Err(e) => return vec![failed("genus.genus", json!(g), &e, A_GENUS)],
        };
        let sing: Vec<Value> = r
            .singular_points
            .iter()
            .map(|s| json!({ "multiplicity": s.multiplicity, "tangents": s.tangent_count }))
            .collect();
        let sing_ok = r.singular_points.len() == 2
            && r
                .singular_points
                .iter()
                .all(|s| s.multiplicity as u64 == q && s.tangent_count as u64 == q);
        let ordinary = r.singular_points.iter().all(|s| s.tangents_match_trace_zero_set);
        let want = json!({ "multiplicity": q, "tangents": q });
        vec![
            asserted("genus.genus", r.genus == g, json!(g), json!(r.genus), A_GENUS, "exhaustive"),
            asserted(
                "genus.singular_points",
                sing_ok,
                json!([want, want]),
                json!(sing),
                A_SINGULAR,
                "exhaustive",
            ),
            asserted(
                "genus.ordinary_tangents",
                ordinary,
                json!("tangents Tr(d) = 0"),
                json!(ordinary),
                A_ORDINARY,
                "exhaustive",
            ),
            asserted(
                "genus.affine_nonsingular",
                r.affine_singular_points == 0,
                json!({ "singular": 0 }),
                json!({ "singular": r.affine_singular_points, "checked": r.affine_points_checked }),
                A_SINGULAR,
                "exhaustive",
            ),
        ]
    }

    fn branch(&self, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
        let pts = self.sample(rng);
        let (mut low_bad, mut r6_bad, mut r7_bad) = (0, 0, 0);
        let mut table = [[0usize; 2]; 2];
        for pt in &pts {
            let b = match self.params.affine_branch(pt, self.precision) {
                Ok(b) => b,
                Err(e) => return vec![failed("branch.low_index", json!("agreement"), &e, A_LOW)],
            };
            low_bad += usize::from(b.low_index.iter().any(|c| !c.agrees));
            r6_bad += usize::from(!b.order_q_residual.is_zero());
            r7_bad += usize::from(!b.order_q_plus_1_residual.is_zero());
            table[0][usize::from(b.index_q.agrees)] += 1;
            table[1][usize::from(b.index_q_plus_1.agrees)] += 1;
        }
        let n = pts.len();
        vec![
            asserted(
                "branch.low_index",
                low_bad == 0,
                json!({ "disagreeing_points": 0 }),
                json!({ "disagreeing_points": low_bad, "points": n }),
                A_LOW,
                "sampled",
            ),
            asserted(
                "branch.order_q_residual",
                r6_bad == 0,
                json!({ "nonzero": 0 }),
                json!({ "nonzero": r6_bad, "points": n }),
                A_ORDER_Q,
                "sampled",
            ),
            asserted(
                "branch.order_q_plus_1_residual",
                r7_bad == 0,
                json!({ "nonzero": 0 }),
                json!({ "nonzero": r7_bad, "points": n }),
                A_ORDER_Q1,
                "sampled",
            ),
            reported(
                "branch.high_index_agreement",
                json!(null),
                json!({
                    "p": self.params.p(),
                    "index_q": { "agree": table[0][1], "disagree": table[0][0] },
                    "index_q_plus_1": { "agree": table[1][1], "disagree": table[1][0] },
                }),
                A_HIGH,
                "sampled",
            ),
        ]
    }

    fn osculation(&self, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
        let q = self.q();
        let n = dichotomy_precision(q);
        let mut pts = self.sample(rng);
        let extra = (self.samples / 5).max(1);
        pts.extend(self.params.sample_special_points(extra, rng));
        let mut violations = 0;
        let (mut special, mut generic) = (0, 0);
        let mut special_mult: BTreeMap<usize, usize> = BTreeMap::new();
        for pt in &pts {
            let rec = match osculation_order(self.params, pt, n) {
                Ok(r) => r,
                Err(e) => return vec![failed("osculation.dichotomy", json!("dichotomy"), &e, A_DICHOTOMY)],
            };
            violations += usize::from(!rec.dichotomy_holds(q));
            if rec.special {
                special += 1;
                *special_mult.entry(rec.multiplicity).or_default() += 1;
            } else {
                generic += 1;
            }
        }
        let mut out = vec![asserted(
            "osculation.dichotomy",
            violations == 0,
            json!({ "violations": 0 }),
            json!({ "violations": violations, "special": special, "generic": generic }),
            A_DICHOTOMY,
            "sampled",
        )];
        let observed = json!(special_mult
            .iter()
            .map(|(m, c)| json!({ "multiplicity": m, "count": c }))
            .collect::<Vec<_>>());
        out.push(if self.odd() {
            let ok = !special_mult.is_empty() && special_mult.keys().all(|&m| m as u64 == q + 1);
            asserted("osculation.special_multiplicity", ok, json!(q + 1), observed, A_SPECIAL, "sampled")
        } else {
            reported("osculation.special_multiplicity", json!(null), observed, A_SPECIAL, "sampled")
        });

        let mut seqs: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut member_ok = true;
        let required = [0, 1, 2, q as usize];
        for pt in pts.iter().filter(|p| !self.params.is_special(p)).take(100) {
            match conic_order_sequence(self.params, pt, self.precision) {
                Ok(s) => {
                    member_ok &= required.iter().all(|r| s.contains(r));
                    *seqs.entry(s).or_default() += 1;
                }
                Err(e) => return vec![failed("osculation.conic_orders", json!(required), &e, A_CONIC_ORDERS)],
            }
        }
        out.push(asserted(
            "osculation.conic_orders",
            member_ok && !seqs.is_empty(),
            json!({ "contains": required }),
            sequences(&seqs),
            A_CONIC_ORDERS,
            "sampled",
        ));
        out
    }

    fn frobenius(&self, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
        if !self.c_in_fq() {
            let why = json!("c not in F_q");
            return vec![
                reported("frobenius.curve_image", json!(null), why.clone(), A_FROB_CURVE, "skipped"),
                reported("frobenius.conic_image", json!(null), why, A_FROB_CONIC, "skipped"),
            ];
        }
        let pts = self.sample(rng);
        let (mut off_curve, mut off_conic) = (0, 0);
        for pt in &pts {
            match frobenius_checks(self.params, pt) {
                Ok(c) => {
                    off_curve += usize::from(!c.on_curve_image);
                    off_conic += usize::from(!c.on_conic_image);
                }
                Err(e) => return vec![failed("frobenius.curve_image", json!(0), &e, A_FROB_CURVE)],
            }
        }
        let obs = |k: usize| json!({ "failures": k, "points": pts.len() });
        vec![
            asserted("frobenius.curve_image", off_curve == 0, json!({ "failures": 0 }), obs(off_curve), A_FROB_CURVE, "sampled"),
            asserted("frobenius.conic_image", off_conic == 0, json!({ "failures": 0 }), obs(off_conic), A_FROB_CONIC, "sampled"),
        ]
    }

    fn zrep(&self) -> Vec<CheckResult> {
        let f = self.params.field();
        let repaired = match z_representation(self.params) {
            Ok(_) => asserted("zrep.repaired", true, json!("0"), json!("0"), A_Z, "exhaustive"),
            Err(e) => failed("zrep.repaired", json!("0"), &e, A_Z),
        };
        let res = literal_z_representation(self.params).residual(self.params);
        let one_plus_c = f.add(f.one(), self.params.c());
        vec![
            repaired,
            reported(
                "zrep.literal_residual",
                json!(format!("1+c = {}", f.format(one_plus_c))),
                json!(res.format(f)),
                A_Z,
                "exhaustive",
            ),
        ]
    }

    fn adjoint(&self) -> Vec<CheckResult> {
        let q = self.q();
        let f = self.params.field();
        let adj = match adjoint_system(self.params) {
            Ok(a) => a,
            Err(e) => return vec![failed("adjoint.dimension", json!(4), &e, A_ELL)],
        };
        let factor_ok = adj
            .basis
            .iter()
            .all(|b| decompose_adjoint(b, q as u32, f).is_ok_and(|(k, _)| k as u64 == q - 2));
        let mut out = vec![
            asserted(
                "adjoint.dimension",
                adj.vector_dimension == 4 && adj.ell_g == 4,
                json!({ "vector_dimension": 4, "ell_g": 4 }),
                json!({ "vector_dimension": adj.vector_dimension, "ell_g": adj.ell_g }),
                A_ELL,
                "exhaustive",
            ),
            asserted(
                "adjoint.basis",
                adj.matches_expected_monomials,
                json!("X3^q, X1 X3^(q-1), X2 X3^(q-1), X1 X2 X3^(q-2)"),
                json!(adj.basis.iter().map(|b| b.poly().format(f)).collect::<Vec<_>>()),
                A_ADJ_SPLIT,
                "exhaustive",
            ),
            asserted(
                "adjoint.factorization",
                factor_ok,
                json!("X3^(q-2) times a conic through X∞ and Y∞"),
                json!(factor_ok),
                A_ADJ_SPLIT,
                "exhaustive",
            ),
        ];
        out.push(match divisor_check(self.params, self.precision) {
            Ok(d) => asserted(
                "adjoint.divisor",
                d.deg_g == 2 * q && d.series_degree == 2 * q && d.b_is_zero && d.d_multiplicity == q - 1,
                json!({ "deg_g": 2 * q, "series_degree": 2 * q, "b_is_zero": true, "d_multiplicity": q - 1 }),
                json!({ "deg_g": d.deg_g, "series_degree": d.series_degree, "b_is_zero": d.b_is_zero, "d_multiplicity": d.d_multiplicity }),
                A_B_ZERO,
                "exhaustive",
            ),
            Err(e) => failed("adjoint.divisor", json!(2 * q), &e, A_B_ZERO),
        });
        out.push(asserted(
            "adjoint.series_degree",
            adj.series_degree == 2 * q,
            json!(2 * q),
            json!(adj.series_degree),
            A_DEG,
            "exhaustive",
        ));
        out
    }

    fn model(&self, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
        let p = self.params;
        let f = p.field();
        let q = self.q() as usize;
        let mut out = Vec::new();
        match model::omega_prime_report(p) {
            Ok(r) => {
                out.push(asserted(
                    "model.omega_prime",
                    r.union_size == 2 * q && r.omega1p_collinear && r.omega2p_collinear && r.all_simple,
                    json!({ "union": 2 * q, "collinear": true, "simple": true }),
                    json!({ "union": r.union_size, "collinear": r.omega1p_collinear && r.omega2p_collinear, "simple": r.all_simple }),
                    A_OMEGA,
                    "exhaustive",
                ));
                out.push(asserted(
                    "model.omega_prime_meet",
                    r.meet == SpacePoint::z_infinity() && !r.meet_on_model,
                    json!({ "meet": "(0, 0, 1, 0)", "on_model": false }),
                    json!({ "meet": r.meet.format(f), "on_model": r.meet_on_model }),
                    A_MEET,
                    "exhaustive",
                ));
            }
            Err(e) => out.push(failed("model.omega_prime", json!(2 * q), &e, A_OMEGA)),
        }
        for (id, level) in [("model.tau_injective_fq2", Subfield::Fq2), ("model.tau_injective_fq4", Subfield::Fq4)] {
            let n = self.samples.max(TAU_SAMPLE_FLOOR);
            out.push(match model::nonsingularity_check(p, level, ENUMERATION_BUDGET, n, rng) {
                Ok(r) => asserted(
                    id,
                    r.injective,
                    json!({ "injective": true }),
                    json!({ "points": r.points, "distinct_images": r.distinct_images, "injective": r.injective }),
                    A_NONSING,
                    if r.sampled { "sampled" } else { "exhaustive" },
                ),
                Err(e) => failed(id, json!({ "injective": true }), &e, A_NONSING),
            });
        }

        let orders = |srcs: &mut dyn Iterator<Item = BranchSource>| -> Result<BTreeMap<Vec<usize>, usize>> {
            let mut m = BTreeMap::new();
            for s in srcs {
                *m.entry(model::order_sequence_at(p, s, self.precision)?).or_default() += 1;
            }
            Ok(m)
        };
        let only = |m: &BTreeMap<Vec<usize>, usize>, want: &[usize]| m.len() == 1 && m.keys().all(|k| k == want);

        let inf_want = vec![0, 1, q, q + 1];
        out.push(match orders(&mut p.infinite_places().into_iter().map(BranchSource::Infinite)) {
            Ok(m) => asserted("model.orders_infinity", only(&m, &inf_want), json!(inf_want), sequences(&m), A_ORD_INF, "exhaustive"),
            Err(e) => failed("model.orders_infinity", json!(inf_want), &e, A_ORD_INF),
        });

        let special_want = vec![0, 1, 2, q + 1];
        if self.c_in_fq() {
            let rational = p.enumerate_points(Subfield::Fq2).unwrap_or_default();
            let (pts, mode) = if rational.len() <= self.samples {
                (rational, "exhaustive")
            } else {
                let mut idx: Vec<usize> = rand::seq::index::sample(rng, rational.len(), self.samples).into_vec();
                idx.sort_unstable();
                (idx.into_iter().map(|i| rational[i]).collect(), "sampled")
            };
            out.push(match orders(&mut pts.into_iter().map(BranchSource::Affine)) {
                Ok(m) if self.odd() => {
                    asserted("model.orders_rational", only(&m, &special_want), json!(special_want), sequences(&m), A_ORD_RAT, mode)
                }
                Ok(m) => reported("model.orders_rational", json!(null), sequences(&m), A_ORD_RAT, mode),
                Err(e) => failed("model.orders_rational", json!(special_want), &e, A_ORD_RAT),
            });
        }

        let sample = self.sample(rng);
        let (special, generic): (Vec<AffinePoint>, Vec<AffinePoint>) = sample.into_iter().partition(|pt| p.is_special(pt));
        let gen_want = vec![0, 1, 2, q];
        out.push(match orders(&mut generic.into_iter().map(BranchSource::Affine)) {
            Ok(m) if q >= 3 => asserted("model.orders_generic", only(&m, &gen_want), json!(gen_want), sequences(&m), A_ORD_GEN, "sampled"),
            Ok(m) => reported("model.orders_generic", json!(null), sequences(&m), A_ORD_GEN, "sampled"),
            Err(e) => failed("model.orders_generic", json!(gen_want), &e, A_ORD_GEN),
        });
        let mut special = special;
        special.extend(p.sample_special_points((self.samples / 5).max(1), rng));
        out.push(match orders(&mut special.into_iter().map(BranchSource::Affine)) {
            Ok(m) if self.odd() => {
                asserted("model.orders_special", only(&m, &special_want), json!(special_want), sequences(&m), A_ORD_RAT, "sampled")
            }
            Ok(m) => reported("model.orders_special", json!(null), sequences(&m), A_ORD_RAT, "sampled"),
            Err(e) => failed("model.orders_special", json!(special_want), &e, A_ORD_RAT),
        });
        out
    }

    fn group(&self, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
        let p = self.params;
        let q = self.q();
        let expected_order = 2 * q * q * (q - 1);
        let mut out = Vec::new();
        let elements = match aut::group_elements(p) {
            Ok(g) => g,
            Err(e) => return vec![failed("group.order", json!(expected_order), &e, A_ORDER)],
        };
        out.push(asserted(
            "group.order",
            elements.len() as u64 == expected_order,
            json!(expected_order),
            json!(elements.len()),
            A_ORDER,
            "exhaustive",
        ));
        match aut::closure_and_structure(p) {
            Ok(r) => {
                out.push(asserted(
                    "group.structure",
                    r.ok(q),
                    json!({
                        "delta_order": q * q, "delta1_order": q, "delta2_order": q, "c_order": q - 1,
                        "delta_normal": true, "delta_elementary_abelian": true, "semidirect": true,
                    }),
                    json!({
                        "delta_order": r.delta_order, "delta1_order": r.delta1_order, "delta2_order": r.delta2_order,
                        "c_order": r.c_order, "delta_normal": r.delta_normal,
                        "delta_elementary_abelian": r.delta_elementary_abelian, "semidirect": r.semidirect_verified,
                        "maximality": r.maximality,
                    }),
                    A_STRUCTURE,
                    "exhaustive",
                ));
                out.push(asserted(
                    "group.dihedral",
                    r.dihedral_order as u64 == 2 * (q - 1) && r.dihedral_relations && r.c_cyclic,
                    json!({ "order": 2 * (q - 1), "relations": true }),
                    json!({ "order": r.dihedral_order, "relations": r.dihedral_relations, "c_cyclic": r.c_cyclic }),
                    A_DIHEDRAL,
                    "exhaustive",
                ));
            }
            Err(e) => out.push(failed("group.structure", json!(expected_order), &e, A_STRUCTURE)),
        }
        let not_invariant = elements.iter().filter(|g| !aut::symbolic_invariance(p, g)).count();
        out.push(asserted(
            "group.invariance",
            not_invariant == 0,
            json!({ "not_invariant": 0 }),
            json!({ "not_invariant": not_invariant, "elements": elements.len() }),
            A_INVARIANT,
            "exhaustive",
        ));

        if self.c_in_fq() {
            out.extend(self.group_orbits(&elements, rng));
        }
        out.extend(self.group_matrices(&elements, rng));

        if q <= aut::PGL_SEARCH_MAX_Q && self.c_in_fq() {
            out.push(match aut::pgl_search(p, &elements) {
                Ok(r) => asserted(
                    "group.projectivity_search",
                    r.all_in_group,
                    json!({ "found": elements.len(), "all_in_group": true }),
                    json!({ "found": r.automorphisms_found, "candidates": r.candidates, "all_in_group": r.all_in_group, "scope": r.scope }),
                    A_MAXIMAL,
                    "exhaustive",
                ),
                Err(e) => failed("group.projectivity_search", json!(elements.len()), &e, A_MAXIMAL),
            });
        } else {
            out.push(reported(
                "group.projectivity_search",
                json!(null),
                json!(format!("not run: search limited to q <= {} with c in F_q", aut::PGL_SEARCH_MAX_Q)),
                A_MAXIMAL,
                "skipped",
            ));
        }
        out
    }

    fn group_orbits(&self, elements: &[PlaneAut], rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
        let p = self.params;
        let f = p.field();
        let q = self.q();
        let sigma = match p.enumerate_points(Subfield::Fq2) {
            Ok(s) => s,
            Err(e) => return vec![failed("group.orbits", json!(null), &e, A_ORBITS)],
        };
        // every base yields |Σ| ordered pairs
        let (bases, mode) = if q <= 3 {
            (sigma.clone(), "exhaustive")
        } else {
            let k = 1000usize.div_ceil(sigma.len()).max(4).min(sigma.len());
            let idx = rand::seq::index::sample(rng, sigma.len(), k).into_vec();
            (idx.into_iter().map(|i| sigma[i]).collect(), "sampled")
        };
        let r = match aut::orbit_analysis(p, elements, &bases) {
            Ok(r) => r,
            Err(e) => return vec![failed("group.orbits", json!(null), &e, A_ORBITS)],
        };
        let mut want = vec![2 * q as usize, ((q - 1) * q * q) as usize];
        want.sort_unstable();
        let mut out = vec![
            asserted("group.orbits", r.orbit_sizes == want, json!(want), json!(r.orbit_sizes), A_ORBITS, "exhaustive"),
            asserted(
                "group.sharp_transitivity",
                r.sigma_sharply_transitive,
                json!({ "sharply_transitive": true }),
                json!({ "sharply_transitive": r.sigma_sharply_transitive, "pairs_checked": r.pairs_checked }),
                A_SHARP,
                mode,
            ),
            asserted(
                "group.xi_fixed_points",
                r.xi_fixed_points_match,
                json!("{(a,a) : Tr(a)^2 = c}"),
                json!({ "count": r.xi_fixed_points.len(), "match": r.xi_fixed_points_match }),
                A_XI,
                "exhaustive",
            ),
        ];
        out.push(asserted("group.faithful", r.faithful, json!(true), json!(r.faithful), A_ORBITS, "exhaustive"));
        let quad = f.quad_ext_descriptor();
        let bad = sigma
            .iter()
            .filter(|pt| !aut::rational_point_form(p, pt, &quad).is_ok_and(|r| r.constraint_holds))
            .count();
        let anchor = if self.odd() { A_FORM_ODD } else { A_FORM_EVEN };
        out.push(asserted(
            "group.rational_point_form",
            bad == 0 && quad.verify(f),
            json!({ "violations": 0, "descriptor_valid": true }),
            json!({ "violations": bad, "descriptor_valid": quad.verify(f) }),
            anchor,
            "exhaustive",
        ));
        out
    }

    fn group_matrices(&self, elements: &[PlaneAut], rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
        let p = self.params;
        let f = p.field();
        let mut pts = if self.c_in_fq() {
            p.enumerate_points(Subfield::Fq2).unwrap_or_default()
        } else {
            Vec::new()
        };
        let fq2_points = pts.len();
        pts.extend(p.sample_points(Subfield::Fq4, self.samples, rng));
        let mut bad = 0;
        let mut checked = 0;
        for g in elements {
            let m = model::induced_space_matrix(g, f);
            match model::validate_induced_matrix(p, g, &m, &pts) {
                Ok(v) => {
                    checked += v.points_checked;
                    bad += usize::from(!v.ok());
                }
                Err(e) => return vec![failed("group.induced_matrices", json!(0), &e, A_MATRIX)],
            }
        }
        // pointset invariance and Ω′ stabilization
        let places = p.infinite_places();
        let omega: Vec<SpacePoint> = places.iter().map(|pl| model::tau_place(pl, f)).collect();
        let half = omega.len() / 2;
        let (o1, o2): (HashSet<SpacePoint>, HashSet<SpacePoint>) =
            (omega[..half].iter().copied().collect(), omega[half..].iter().copied().collect());
        let mut model_set: HashSet<SpacePoint> = omega.iter().copied().collect();
        for pt in &pts[..fq2_points] {
            model_set.insert(model::tau_point(p, pt).expect("on curve"));
        }
        let (mut leaves, mut stab_ok) = (0, true);
        for g in elements {
            let m = model::induced_space_matrix(g, f);
            leaves += model_set.iter().filter(|x| !model_set.contains(&m.apply(x, f))).count();
            let i1: HashSet<SpacePoint> = o1.iter().map(|x| m.apply(x, f)).collect();
            let i2: HashSet<SpacePoint> = o2.iter().map(|x| m.apply(x, f)).collect();
            stab_ok &= if g.swap { i1 == o2 && i2 == o1 } else { i1 == o1 && i2 == o2 };
        }
        vec![
            asserted(
                "group.induced_matrices",
                bad == 0,
                json!({ "bad_elements": 0 }),
                json!({ "bad_elements": bad, "elements": elements.len(), "point_checks": checked }),
                A_MATRIX,
                "sampled",
            ),
            asserted(
                "group.model_pointset",
                leaves == 0,
                json!({ "escaping_images": 0 }),
                json!({ "escaping_images": leaves, "model_points": model_set.len() }),
                A_INVARIANT_SET,
                "exhaustive",
            ),
            asserted(
                "group.omega_prime_stabilization",
                stab_ok,
                json!("non-swap elements fix Ω₁′ and Ω₂′, swap elements exchange them"),
                json!(stab_ok),
                A_STAB,
                "exhaustive",
            ),
        ]
    }
}

/// Every anchor string a [`CheckResult`] may carry.
pub fn anchors() -> &'static [&'static str] {
    &[
        A_COUNTS, A_GENUS, A_SINGULAR, A_ORDINARY, A_LOW, A_HIGH, A_ORDER_Q, A_ORDER_Q1, A_DICHOTOMY, A_SPECIAL,
        A_CONIC_ORDERS, A_FROB_CURVE, A_FROB_CONIC, A_Z, A_ADJ_SPLIT, A_ELL, A_DEG, A_B_ZERO, A_OMEGA, A_MEET,
        A_NONSING, A_ORD_INF, A_ORD_RAT, A_ORD_GEN, A_ORDER, A_STRUCTURE, A_DIHEDRAL, A_INVARIANT, A_ORBITS, A_SHARP,
        A_XI, A_MATRIX, A_STAB, A_INVARIANT_SET, A_FORM_ODD, A_FORM_EVEN, A_MAXIMAL,
    ]
}
