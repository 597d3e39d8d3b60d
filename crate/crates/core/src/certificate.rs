//! Self-contained JSON certificates and their replay.
//!
//! A certificate records the realization, the command with its inputs, the
//! verdict, witness data and the outcome of every exact check. The checksum is
//! the SHA-256 of the canonical JSON of all other fields. Replay verifies the
//! checksum, recomputes the certificate from the embedded inputs and compares
//! the result field by field.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::braidhom::{inverse_certificates, quadruple_coefficients, rouquier_formula, solve_gamma, verify_gamma_inverse, BraidRelationSetup, HomotopyCertificate};
use crate::coxeter::{CoxeterSystem, CoxWord, RealizationConfig};
use crate::dg::{rouquier, DgCoords, HomComplex};
use crate::error::{Error, Result};
use crate::ring::{render_scalar, Scalar};
use crate::soergel::{bits_string, Calculus};

/// Inputs of a certificate-producing command.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    /// Braid word, whitespace-separated tokens with `-` for inverses.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub braid: Option<String>,
    /// Generator pair `s,t`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair: Option<String>,
    /// Single generator.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
    /// Source reduced word.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<String>,
    /// Target reduced word.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<String>,
    /// Source braid word of a Hom complex.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<String>,
    /// Target braid word of a Hom complex.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<String>,
    /// Upper end of the polynomial-degree window.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<i32>,
}

/// A replayable certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Command name.
    pub command: String,
    /// The realization.
    pub system: RealizationConfig,
    /// Fingerprint of the realization.
    pub system_fingerprint: String,
    /// Fingerprint of the light-leaf plans used.
    pub plan_fingerprint: String,
    /// Command inputs.
    pub inputs: Inputs,
    /// Verdict.
    pub verdict: String,
    /// Exact witness data.
    pub witness: Value,
    /// Named exact checks and their outcomes.
    pub checks: BTreeMap<String, bool>,
    /// SHA-256 of the canonical JSON of the other fields.
    pub checksum: String,
}

#[derive(Serialize)]
struct Unsigned<'a> {
    command: &'a str,
    system: &'a RealizationConfig,
    system_fingerprint: &'a str,
    plan_fingerprint: &'a str,
    inputs: &'a Inputs,
    verdict: &'a str,
    witness: &'a Value,
    checks: &'a BTreeMap<String, bool>,
}

impl Certificate {
    fn digest(&self) -> String {
        let unsigned = Unsigned {
            command: &self.command,
            system: &self.system,
            system_fingerprint: &self.system_fingerprint,
            plan_fingerprint: &self.plan_fingerprint,
            inputs: &self.inputs,
            verdict: &self.verdict,
            witness: &self.witness,
            checks: &self.checks,
        };
        let canonical = serde_json::to_value(&unsigned).expect("serializable").to_string();
        format!("{:x}", Sha256::digest(canonical.as_bytes()))
    }

    /// Whether every recorded check passed.
    pub fn passed(&self) -> bool {
        self.checks.values().all(|b| *b)
    }

    /// Pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Parses JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Outcome of replaying a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    /// The stored checksum matches the content.
    pub checksum_ok: bool,
    /// The realization fingerprint matches the embedded realization.
    pub system_ok: bool,
    /// Regeneration reproduced the certificate exactly.
    pub identical: bool,
    /// All checks of the regenerated certificate passed.
    pub checks_passed: bool,
}

impl ReplayReport {
    /// Whether the replay succeeded.
    pub fn ok(&self) -> bool {
        self.checksum_ok && self.system_ok && self.identical && self.checks_passed
    }
}

/// Recomputes a certificate from its embedded inputs and compares.
pub fn replay(cert: &Certificate) -> Result<ReplayReport> {
    let checksum_ok = cert.digest() == cert.checksum;
    let sys = CoxeterSystem::from_config(&cert.system)?;
    let system_ok = sys.fingerprint() == cert.system_fingerprint;
    let again = generate(&cert.system, &cert.command, &cert.inputs)?;
    Ok(ReplayReport { checksum_ok, system_ok, identical: &again == cert, checks_passed: again.passed() })
}

/// Fingerprint of the default light-leaf plans for all subexpressions of the given words.
pub fn plan_fingerprint(calc: &Calculus, words: &[CoxWord]) -> Result<String> {
    let mut hasher = Sha256::new();
    let mut sorted: Vec<&CoxWord> = words.iter().collect();
    sorted.sort();
    sorted.dedup();
    for w in sorted {
        for mask in 0u32..(1u32 << w.len()) {
            hasher.update(calc.default_plan(w, mask)?.fingerprint().as_bytes());
            hasher.update(b"\n");
        }
    }
    Ok(format!("{:x}", hasher.finalize()))
}

fn scalar_str(c: &Scalar) -> String {
    render_scalar(c)
}

/// Coordinates as a list of `{i, i′, e, e′, coefficient}` records.
fn coords_json(calc: &Calculus, hom: &HomComplex, coords: &DgCoords) -> Value {
    let la = hom.source().braid().map_or(0, |b| b.len());
    let lb = hom.target().braid().map_or(0, |b| b.len());
    let names = calc.sys().names();
    let entries: Vec<Value> = quadruple_coefficients(hom, coords)
        .into_iter()
        .map(|((i, i2, e, e2), c)| {
            json!({
                "i": bits_string(i, la),
                "i2": bits_string(i2, lb),
                "e": bits_string(e, la),
                "e2": bits_string(e2, lb),
                "coefficient": c.render(names),
            })
        })
        .collect();
    Value::Array(entries)
}

fn homotopy_json(calc: &Calculus, cert: &HomotopyCertificate) -> Value {
    json!({
        "phi": coords_json(calc, &cert.hom, &cert.phi),
        "h": coords_json(calc, &cert.hom, &cert.h),
    })
}

fn complex_words(c: &crate::dg::ComplexObj) -> Vec<CoxWord> {
    c.summands().iter().map(|s| s.word.clone()).collect()
}

fn pair(sys: &CoxeterSystem, text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((sys.generator(a)?, sys.generator(b)?)),
        _ => Err(Error::Parse(format!("expected a pair `s,t`, got `{text}`"))),
    }
}

fn need<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Parse(format!("missing input `{name}`")))
}

/// Runs a command and packages the result as a certificate.
///
/// Commands: `relations`, `complex`, `d2check`, `euler`, `gamma`, `inverse`,
/// `rouquier-formula`, `hom`.
pub fn generate(cfg: &RealizationConfig, command: &str, inputs: &Inputs) -> Result<Certificate> {
    let sys = CoxeterSystem::from_config(cfg)?;
    let calc = Calculus::new(sys);
    let sys = calc.sys();
    let mut checks = BTreeMap::new();
    let mut plan_words: Vec<CoxWord> = Vec::new();
    let (verdict, witness) = match command {
        "relations" => {
            let rep = calc.validate_relations();
            for c in &rep.checks {
                let key = format!("{} [{}]", c.relation, c.colors);
                let prev = checks.get(&key).copied().unwrap_or(true);
                checks.insert(key, prev && c.passed);
            }
            let verdict = if rep.all_passed() { "all relations hold" } else { "relation failure" };
            (verdict.to_string(), serde_json::to_value(&rep).expect("serializable"))
        }
        "complex" | "d2check" | "euler" => {
            let braid = sys.parse_braid(need(&inputs.braid, "braid")?)?;
            let c = rouquier(&calc, &braid)?;
            let d2 = c.d_squared_is_zero(&calc)?;
            checks.insert("d^2 = 0".into(), d2);
            let ch = c.euler_char();
            match command {
                "complex" => {
                    let summands: Vec<Value> = c
                        .summands()
                        .iter()
                        .map(|s| {
                            json!({
                                "subexpression": bits_string(s.origin.unwrap_or(0), braid.len()),
                                "word": sys.render_word(&s.word),
                                "cohomological_degree": s.cohdeg,
                                "shift": s.shift,
                            })
                        })
                        .collect();
                    let mut diff = Vec::new();
                    for ((a, b), f) in c.differential() {
                        let entries: Vec<Value> = f.render(sys).into_iter().map(|(r, col, v)| json!({"row": r, "column": col, "value": v})).collect();
                        diff.push(json!({
                            "source": bits_string(c.summands()[*a].origin.unwrap_or(0), braid.len()),
                            "target": bits_string(c.summands()[*b].origin.unwrap_or(0), braid.len()),
                            "entries": entries,
                        }));
                    }
                    (format!("{} summands", c.len()), json!({"summands": summands, "differential": diff}))
                }
                "d2check" => ((if d2 { "d^2 = 0" } else { "d^2 != 0" }).to_string(), json!({"summands": c.len()})),
                _ => (ch.render(sys), json!({"euler_characteristic": ch.render(sys)})),
            }
        }
        "gamma" => {
            let (s, t) = pair(sys, need(&inputs.pair, "pair")?)?;
            let setup = BraidRelationSetup::new(&calc, s, t)?;
            plan_words.extend(complex_words(&setup.source));
            plan_words.extend(complex_words(&setup.target));
            let sol = solve_gamma(&calc, &setup.forward, setup.m)?;
            let free = sol.directions.len();
            let m = setup.m;
            let mut table = Vec::new();
            for l in std::iter::once(sol.beta).chain(sol.labels.iter().copied()) {
                let (c0, slopes) = sol.coefficient(l);
                if c0.is_zero() && slopes.iter().all(Zero::is_zero) {
                    continue;
                }
                let (i, i2, e, e2) = setup.forward.quadruple(l).ok_or(Error::ComplexMismatch)?;
                table.push(json!({
                    "i": bits_string(i, m),
                    "i2": bits_string(i2, m),
                    "e": bits_string(e, m),
                    "e2": bits_string(e2, m),
                    "constant": scalar_str(&c0),
                    "parameters": slopes.iter().map(scalar_str).collect::<Vec<_>>(),
                }));
            }
            let samples: Vec<Vec<Scalar>> = if free == 0 { vec![vec![]] } else { vec![vec![Scalar::zero(); free], vec![Scalar::from_integer(1.into()); free]] };
            let mut inverses = Vec::new();
            for p in &samples {
                let cert = verify_gamma_inverse(&calc, &setup, p, p)?;
                let tag = p.iter().map(scalar_str).collect::<Vec<_>>().join(",");
                checks.insert(format!("d(gamma) = 0 at a = [{tag}]"), cert.closed);
                checks.insert(format!("gamma_ts gamma_st - id = d(h) at a = [{tag}]"), cert.source_side.verified && cert.source_side.recheck(&calc)?);
                checks.insert(format!("gamma_st gamma_ts - id = d(h) at a = [{tag}]"), cert.target_side.verified && cert.target_side.recheck(&calc)?);
                inverses.push(json!({
                    "parameters": tag,
                    "source_side": homotopy_json(&calc, &cert.source_side),
                    "target_side": homotopy_json(&calc, &cert.target_side),
                }));
            }
            (format!("solution space of dimension {free}"), json!({"m": m, "free_parameters": free, "coefficients": table, "inverse_homotopies": inverses}))
        }
        "inverse" => {
            let s = sys.generator(need(&inputs.generator, "generator")?)?;
            plan_words.extend([vec![], vec![s], vec![s, s]]);
            let inv = inverse_certificates(&calc, s)?;
            checks.insert("eta- eps+ = id".into(), inv.eta_minus_eps_plus_is_id);
            checks.insert("eta+ eps- = id".into(), inv.eta_plus_eps_minus_is_id);
            checks.insert("eps+, eta- closed".into(), inv.plus_pair_closed);
            checks.insert("eps-, eta+ closed".into(), inv.minus_pair_closed);
            checks.insert("id - eps+ eta- = d(h)".into(), inv.plus.verified && inv.plus.recheck(&calc)?);
            checks.insert("id - eps- eta+ = d(h')".into(), inv.minus.verified && inv.minus.recheck(&calc)?);
            (
                "F_s F_s^-1 and F_s^-1 F_s are homotopy equivalent to the unit".into(),
                json!({"plus": homotopy_json(&calc, &inv.plus), "minus": homotopy_json(&calc, &inv.minus), "minus_signs": [inv.minus_signs.0, inv.minus_signs.1]}),
            )
        }
        "rouquier-formula" => {
            let w = sys.parse_word(need(&inputs.w, "w")?)?;
            let v = sys.parse_word(need(&inputs.v, "v")?)?;
            let window = inputs.window.unwrap_or(2 * (w.len() + v.len()) as i32 + 6);
            let r = rouquier_formula(&calc, &w, &v, window)?;
            plan_words.extend(complex_words(r.hom.source()));
            plan_words.extend(complex_words(r.hom.target()));
            checks.insert("all labels off the survivor carry a black U0".into(), true);
            checks.insert("class order acyclic".into(), true);
            checks.insert("subquotients are hypercubes".into(), r.filtration.hypercubes_exact);
            checks.insert("complement is a subcomplex".into(), r.filtration.closed_under_d);
            checks.insert("d h + h d = id on the complement".into(), r.filtration.verified);
            checks.insert("survivor is closed".into(), r.survivor_closed);
            checks.insert("windowed cohomology agrees".into(), r.cohomology_agrees);
            let survivor = r.survivor.and_then(|l| r.hom.quadruple(l)).map(|(i, i2, e, e2)| {
                json!({"i": bits_string(i, w.len()), "i2": bits_string(i2, v.len()), "e": bits_string(e, w.len()), "e2": bits_string(e2, v.len()), "coefficient": "1"})
            });
            let classes: Vec<Value> = r
                .filtration
                .total
                .iter()
                .map(|c| {
                    let k = &r.filtration.classes[*c];
                    let (i, i2, e, e2) = k.representative;
                    json!({
                        "representative": [bits_string(i, w.len()), bits_string(i2, v.len()), bits_string(e, w.len()), bits_string(e2, v.len())],
                        "source_positions": bits_string(k.source_positions, w.len()),
                        "target_positions": bits_string(k.target_positions, v.len()),
                        "size": k.members.len(),
                    })
                })
                .collect();
            let cohomology: Vec<Value> = r.cohomology.iter().filter(|e| e.chain_dim > 0).map(|e| json!([e.cohdeg, e.poly_degree, e.chain_dim, e.dim])).collect();
            (
                r.verdict.as_str().to_string(),
                json!({
                    "omega": sys.render_braid(&r.omega),
                    "nu": sys.render_braid(&r.nu),
                    "labels": r.hom.len(),
                    "survivor": survivor,
                    "classes": classes,
                    "window": [r.window.0, r.window.1],
                    "cohomology": cohomology,
                }),
            )
        }
        "hom" => {
            let a = Arc::new(rouquier(&calc, &sys.parse_braid(need(&inputs.source, "source")?)?)?);
            let b = Arc::new(rouquier(&calc, &sys.parse_braid(need(&inputs.target, "target")?)?)?);
            plan_words.extend(complex_words(&a));
            plan_words.extend(complex_words(&b));
            let total = (a.braid().map_or(0, |x| x.len()) + b.braid().map_or(0, |x| x.len())) as i32;
            let window = inputs.window.unwrap_or(2 * total + 6);
            let hom = HomComplex::new(&calc, a, b)?;
            let min_pd = hom.labels().iter().map(|l| l.poly_degree).min().unwrap_or(0).min(0);
            let cds = hom.labels().iter().map(|l| l.cohdeg);
            let (pmin, pmax) = (cds.clone().min().unwrap_or(0), cds.max().unwrap_or(0));
            let table = hom.cohomology_window(&calc, pmin..=pmax, min_pd..=window)?;
            let rows: Vec<Value> = table.iter().filter(|e| e.chain_dim > 0).map(|e| json!([e.cohdeg, e.poly_degree, e.chain_dim, e.dim])).collect();
            let nonzero: usize = table.iter().map(|e| e.dim).sum();
            checks.insert("dimensions computed exactly".into(), true);
            (format!("total cohomology dimension {nonzero} in window [{min_pd}, {window}]"), json!({"labels": hom.len(), "window": [min_pd, window], "columns": ["cohdeg", "poly_degree", "chain_dim", "dim"], "cohomology": rows}))
        }
        other => return Err(Error::Parse(format!("unknown command `{other}`"))),
    };
    let mut cert = Certificate {
        command: command.to_string(),
        system: cfg.clone(),
        system_fingerprint: sys.fingerprint().to_string(),
        plan_fingerprint: plan_fingerprint(&calc, &plan_words)?,
        inputs: inputs.clone(),
        verdict,
        witness,
        checks,
        checksum: String::new(),
    };
    cert.checksum = cert.digest();
    Ok(cert)
}
