//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 invalid object or failed check, 2 undetermined,
//! 3 malformed input, 64 usage error, 66 unreadable input or unwritable output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::diagram::{
    cokernel_object, ext1_basis, fibre_product_category, hom_basis, hom_dim, kernel_object, les_check, DiagramMorphism,
    DiagramObject, DiagramShape, FibreProductObject, Selection,
};
use crate::exact_linalg::RationalMatrix;
use crate::filtered_phi::{
    check_admissible_with, hodge_number, newton_number, AdmissibilityOptions, AdmissibilityStatus, FilteredPhiModule,
    DEFAULT_SAMPLES,
};
use crate::laumon::{
    assemble, build_gamma, disassemble, fibre_presentation, hom_motives, presentation_hom_dim, AlphaRowData,
    LinearizedLaumonMotive, TimesMotiveData,
};
use crate::mfog_a::{
    cokernel_a, embed_level1, find_isomorphism, hom_a, kernel_a, sharp_s, structural_failures, t_a, validate_a_with,
    MFOgAMorphism, MFOgAObject, Partial,
};
use crate::ogus::{
    self, canonical_map, is_level_le_1, strictness_audit, validate_with, OgusMorphism, OgusObject, ValidationReport,
    ValidationStatus,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_MALFORMED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NO_INPUT: i32 = 66;

/// Library operation to the subcommand that exposes it.
pub const COVERAGE: &[(&str, &str)] = &[
    ("diagram::hom_basis", "hom"),
    ("diagram::kernel_object", "kernel"),
    ("diagram::cokernel_object", "cokernel"),
    ("diagram::ext1_basis", "ext1"),
    ("diagram::fibre_product_category", "fibre-product"),
    ("diagram::les_check", "les-check"),
    ("filtered_phi::check_admissible", "check-admissible"),
    ("filtered_phi::hodge_number", "check-admissible"),
    ("filtered_phi::newton_number", "check-admissible"),
    ("ogus::validate", "validate"),
    ("ogus::is_level_le_1", "validate"),
    ("ogus::strictness_audit", "validate"),
    ("ogus::canonical_map", "validate"),
    ("ogus::hom", "hom"),
    ("ogus::kernel", "kernel"),
    ("ogus::cokernel", "cokernel"),
    ("laumon::build_gamma", "devissage"),
    ("laumon::assemble", "devissage"),
    ("laumon::disassemble", "devissage"),
    ("laumon::fibre_presentation", "devissage"),
    ("laumon::hom_motives", "hom-motives"),
    ("mfog_a::validate_a", "validate-a"),
    ("mfog_a::embed_level1", "ta"),
    ("mfog_a::t_a", "ta"),
    ("mfog_a::hom_a", "hom-a"),
    ("mfog_a::find_isomorphism", "hom-a"),
    ("mfog_a::sharp_s", "sharp"),
    ("mfog_a::kernel_a", "kernel"),
    ("mfog_a::cokernel_a", "cokernel"),
];

#[derive(Parser)]
#[command(
    name = "ogus",
    version,
    about = "Exact checks for filtered phi-modules, Ogus structures and 1-motive devissage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the report as canonical JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized procedures; overrides OGUS_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the report data to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an Ogus object, filtered φ-module, diagram object, motive or morphism.
    Validate { file: PathBuf },
    /// Validate an object with A/B data.
    ValidateA { file: PathBuf },
    /// Decide admissibility at one place.
    CheckAdmissible {
        file: PathBuf,
        #[arg(long)]
        place: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Hom between two diagram objects or two Ogus objects.
    Hom { a: PathBuf, b: PathBuf },
    /// Hom between two objects with A/B data.
    HomA {
        a: PathBuf,
        b: PathBuf,
        /// Search the Hom space for an isomorphism.
        #[arg(long)]
        iso: bool,
    },
    /// Hom between two linearized motives.
    HomMotives { a: PathBuf, b: PathBuf },
    /// Kernel of a morphism.
    Kernel { file: PathBuf },
    /// Cokernel of a morphism.
    Cokernel { file: PathBuf },
    /// Ext¹ between two diagram objects.
    Ext1 { a: PathBuf, b: PathBuf },
    /// Fibre product of two diagram shapes over Mod_K.
    FibreProduct { file: PathBuf },
    /// Split a motive into its times part and its α-row.
    Devissage {
        file: PathBuf,
        #[arg(long)]
        roundtrip: bool,
    },
    /// Realize a motive, or embed a level ≤ 1 Ogus object.
    Ta { file: PathBuf },
    /// Sharp de Rham space of an object with A/B data.
    Sharp { file: PathBuf },
    /// Long exact Hom/Ext sequence of a fibre product.
    LesCheck { file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::ValidateA { .. } => "validate-a",
            Command::CheckAdmissible { .. } => "check-admissible",
            Command::Hom { .. } => "hom",
            Command::HomA { .. } => "hom-a",
            Command::HomMotives { .. } => "hom-motives",
            Command::Kernel { .. } => "kernel",
            Command::Cokernel { .. } => "cokernel",
            Command::Ext1 { .. } => "ext1",
            Command::FibreProduct { .. } => "fibre-product",
            Command::Devissage { .. } => "devissage",
            Command::Ta { .. } => "ta",
            Command::Sharp { .. } => "sharp",
            Command::LesCheck { .. } => "les-check",
        }
    }
}

/// Names of all subcommands.
pub fn subcommands() -> Vec<String> {
    Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: String,
    pub detail: String,
}

impl Verdict {
    fn new(check: impl Into<String>, status: &str, detail: impl Into<String>) -> Self {
        Verdict { check: check.into(), status: status.into(), detail: detail.into() }
    }

    fn pass_fail(check: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Verdict::new(check, if ok { "pass" } else { "fail" }, detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub verdicts: Vec<Verdict>,
    pub summary: Vec<String>,
    pub data: Value,
    pub artifacts: Vec<String>,
}

impl CommandReport {
    /// Pretty JSON with sorted keys.
    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("serializable");
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        for i in &self.inputs {
            s += &format!("input: {} sha256={}\n", i.path, i.sha256);
        }
        if let Some(seed) = self.seed {
            s += &format!("seed: {seed}\n");
        }
        for v in &self.verdicts {
            s += &format!("verdict {}: {} ({})\n", v.check, v.status, v.detail);
        }
        for line in &self.summary {
            s += line;
            s.push('\n');
        }
        s += "data: ";
        s += &serde_json::to_string_pretty(&self.data).expect("serializable");
        s.push('\n');
        for a in &self.artifacts {
            s += &format!("artifact: {a}\n");
        }
        s
    }
}

#[derive(Debug)]
struct Fail {
    code: i32,
    message: String,
}

impl Fail {
    fn malformed(message: impl Into<String>) -> Self {
        Fail { code: EXIT_MALFORMED, message: message.into() }
    }
}

impl From<crate::Error> for Fail {
    fn from(e: crate::Error) -> Self {
        Fail::malformed(e.to_string())
    }
}

type Outcome = std::result::Result<(CommandReport, i32), Fail>;

struct Session {
    inputs: Vec<InputDigest>,
    seed_override: Option<u64>,
    seed_used: Option<u64>,
}

impl Session {
    fn load(&mut self, path: &Path) -> std::result::Result<Value, Fail> {
        let bytes = fs::read(path)
            .map_err(|e| Fail { code: EXIT_NO_INPUT, message: format!("cannot read {}: {e}", path.display()) })?;
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) });
        serde_json::from_slice(&bytes).map_err(|e| Fail::malformed(format!("{}: {e}", path.display())))
    }

    /// `--seed`, else `OGUS_SEED`, else the first 8 bytes of the digest of all
    /// input digests.
    fn seed(&mut self) -> u64 {
        let seed = self.seed_override.unwrap_or_else(|| {
            let mut h = Sha256::new();
            for i in &self.inputs {
                h.update(i.sha256.as_bytes());
            }
            let d = h.finalize();
            u64::from_be_bytes(d[..8].try_into().expect("8 bytes"))
        });
        self.seed_used = Some(seed);
        seed
    }

    fn report(&self, command: &str, verdicts: Vec<Verdict>, summary: Vec<String>, data: Value) -> CommandReport {
        CommandReport {
            command: command.into(),
            inputs: self.inputs.clone(),
            seed: self.seed_used,
            verdicts,
            summary,
            data,
            artifacts: Vec::new(),
        }
    }
}

fn decode<T: DeserializeOwned>(v: &Value, what: &str) -> std::result::Result<T, Fail> {
    serde_json::from_value(v.clone()).map_err(|e| Fail::malformed(format!("not a valid {what}: {e}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    DiagramObject,
    DiagramMorphism,
    Ogus,
    OgusMorphism,
    ObjectA,
    MorphismA,
    Motive,
    PhiModule,
    Unknown,
}

fn kind(v: &Value) -> Kind {
    let has = |k: &str| v.get(k).is_some();
    if has("components") {
        Kind::DiagramMorphism
    } else if has("eta") {
        Kind::MorphismA
    } else if has("matrix") {
        Kind::OgusMorphism
    } else if has("shape") {
        Kind::DiagramObject
    } else if has("a0") {
        Kind::ObjectA
    } else if has("etale") {
        Kind::Motive
    } else if has("t_dr") {
        Kind::Ogus
    } else if has("dim") {
        Kind::PhiModule
    } else {
        Kind::Unknown
    }
}

fn status_code(s: ValidationStatus) -> i32 {
    match s {
        ValidationStatus::Valid => EXIT_OK,
        ValidationStatus::Invalid => EXIT_INVALID,
        ValidationStatus::Undetermined => EXIT_UNDETERMINED,
    }
}

fn admissibility_code(s: AdmissibilityStatus) -> i32 {
    match s {
        AdmissibilityStatus::Admissible => EXIT_OK,
        AdmissibilityStatus::NotAdmissible => EXIT_INVALID,
        AdmissibilityStatus::Undetermined => EXIT_UNDETERMINED,
    }
}

fn worst(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().fold(EXIT_OK, |acc, c| match (acc, c) {
        (EXIT_INVALID, _) | (_, EXIT_INVALID) => EXIT_INVALID,
        (EXIT_UNDETERMINED, _) | (_, EXIT_UNDETERMINED) => EXIT_UNDETERMINED,
        _ => EXIT_OK,
    })
}

fn ogus_verdicts(r: &ValidationReport) -> Vec<Verdict> {
    let mut out = Vec::new();
    for f in &r.failures {
        let mut check = f.clause.clone();
        if let Some(p) = &f.place {
            check += &format!("[{p}]");
        }
        if let Some(i) = f.index {
            check += &format!("[{i}]");
        }
        out.push(Verdict::new(check, "fail", f.detail.clone()));
    }
    for pv in &r.admissibility {
        let v = &pv.verdict;
        let status = match v.status {
            AdmissibilityStatus::Admissible => "pass",
            AdmissibilityStatus::NotAdmissible => continue,
            AdmissibilityStatus::Undetermined => "undetermined",
        };
        out.push(Verdict::new(
            format!("admissible[{}]", pv.place),
            status,
            format!("t_H = {}, t_N = {}, {:?}", v.t_h_total, v.t_n_total, v.method),
        ));
    }
    for w in &r.warnings {
        out.push(Verdict::new("warning", "info", w.clone()));
    }
    out
}

fn validate(s: &mut Session, file: &Path) -> Outcome {
    let v = s.load(file)?;
    match kind(&v) {
        Kind::Ogus => {
            let o: OgusObject = decode(&v, "Ogus object")?;
            let seed = s.seed();
            let report = validate_with(&o, Some(seed));
            let level = is_level_le_1(&o);
            let mut verdicts = ogus_verdicts(&report);
            verdicts.push(Verdict::new("level_le_1", "info", level.to_string()));
            let data = json!({ "report": report, "level_le_1": level });
            Ok((s.report("validate", verdicts, vec![], data), status_code(report.status())))
        }
        Kind::PhiModule => {
            let d: FilteredPhiModule = decode(&v, "filtered φ-module")?;
            let seed = s.seed();
            let mut verdicts = Vec::new();
            let mut places = Vec::new();
            let mut codes = Vec::new();
            for f in d.frobenii().iter().filter(|f| !f.exempt) {
                let opts = AdmissibilityOptions { seed, samples: DEFAULT_SAMPLES };
                let verdict = check_admissible_with(&d, f.label(), opts)?;
                codes.push(admissibility_code(verdict.status));
                verdicts.push(Verdict::new(
                    format!("admissible[{}]", f.label()),
                    match verdict.status {
                        AdmissibilityStatus::Admissible => "pass",
                        AdmissibilityStatus::NotAdmissible => "fail",
                        AdmissibilityStatus::Undetermined => "undetermined",
                    },
                    format!("t_H = {}, t_N = {}", verdict.t_h_total, verdict.t_n_total),
                ));
                places.push(json!({ "place": f.label(), "verdict": verdict }));
            }
            Ok((s.report("validate", verdicts, vec![], json!({ "places": places })), worst(codes)))
        }
        Kind::DiagramObject => {
            let o: DiagramObject = decode(&v, "diagram object")?;
            let data = json!({ "total_dim": o.total_dim(), "spaces": o.spaces() });
            let verdicts = vec![Verdict::new("invariants", "pass", "dimensions, maps, slots and relations")];
            Ok((s.report("validate", verdicts, vec![], data), EXIT_OK))
        }
        Kind::DiagramMorphism => {
            let m: DiagramMorphism = decode(&v, "diagram morphism")?;
            let data = json!({ "is_mono": m.is_mono(), "is_epi": m.is_epi(), "is_iso": m.is_iso() });
            let verdicts = vec![Verdict::new("commutes", "pass", "every edge square and slot")];
            Ok((s.report("validate", verdicts, vec![], data), EXIT_OK))
        }
        Kind::Motive => {
            let m: LinearizedLaumonMotive = decode(&v, "linearized motive")?;
            let seed = s.seed();
            let report = validate_with(m.etale(), Some(seed));
            let mut verdicts =
                vec![Verdict::new("row_invariants", "pass", "exact row, q∘j = 0, π∘γ = du∘q, γ∘j = incl")];
            verdicts.extend(ogus_verdicts(&report));
            let data = json!({ "etale": report });
            Ok((s.report("validate", verdicts, vec![], data), status_code(report.status())))
        }
        Kind::OgusMorphism => {
            let m: OgusMorphism = decode(&v, "Ogus morphism")?;
            let audit = strictness_audit(&m);
            let coim_to_im = canonical_map(&m)?.is_iso();
            let mut verdicts = vec![
                Verdict::new(
                    "weight_strict",
                    "info",
                    format!("{} (first failure {:?})", audit.weight_strict, audit.weight_index),
                ),
                Verdict::new(
                    "hodge_strict",
                    "info",
                    format!("{} (first failure {:?})", audit.hodge_strict, audit.hodge_index),
                ),
                Verdict::new("coimage_to_image_iso", "info", coim_to_im.to_string()),
            ];
            if let Some(w) = m.place_warning() {
                verdicts.push(Verdict::new("warning", "info", w));
            }
            let data = json!({ "audit": audit, "coimage_to_image_iso": coim_to_im });
            Ok((s.report("validate", verdicts, vec![], data), EXIT_OK))
        }
        Kind::MorphismA => {
            let m: MFOgAMorphism = decode(&v, "morphism with A/B data")?;
            let verdicts = vec![Verdict::new("intertwines", "pass", "alpha, beta, delta, gamma, epsilon")];
            Ok((s.report("validate", verdicts, vec![], json!({ "is_iso": m.is_iso() })), EXIT_OK))
        }
        Kind::ObjectA => Err(Fail::malformed("objects with A/B data are checked by validate-a")),
        Kind::Unknown => Err(Fail::malformed("unrecognized document")),
    }
}

const A_CLAUSES: [&str; 5] = ["level", "delta_invertible", "square", "cartesian", "fil0_kernel"];

fn validate_a(s: &mut Session, file: &Path) -> Outcome {
    let v = s.load(file)?;
    if kind(&v) != Kind::ObjectA {
        return Err(Fail::malformed("expected an object with A/B data"));
    }
    let o: MFOgAObject = decode(&v, "object with A/B data")?;
    let seed = s.seed();
    let report = validate_a_with(&o, Some(seed));
    let mut verdicts: Vec<Verdict> = A_CLAUSES
        .iter()
        .map(|c| match report.failures.iter().find(|f| f.clause == *c) {
            Some(f) => Verdict::new(*c, "fail", f.detail.clone()),
            None => Verdict::new(*c, "pass", ""),
        })
        .collect();
    verdicts.extend(ogus_verdicts(&report.base));
    Ok((s.report("validate-a", verdicts, vec![], to_value(&report)), status_code(report.status())))
}

fn check_admissible(s: &mut Session, file: &Path, place: &str, samples: usize) -> Outcome {
    let v = s.load(file)?;
    let d = match kind(&v) {
        Kind::PhiModule => decode::<FilteredPhiModule>(&v, "filtered φ-module")?,
        Kind::Ogus => decode::<OgusObject>(&v, "Ogus object")?.phi_module(),
        _ => return Err(Fail::malformed("expected a filtered φ-module or an Ogus object")),
    };
    let seed = s.seed();
    let verdict = check_admissible_with(&d, place, AdmissibilityOptions { seed, samples })?;
    let t_h = hodge_number(&d, None)?;
    let t_n = newton_number(&d, place, None)?;
    let status = match verdict.status {
        AdmissibilityStatus::Admissible => "pass",
        AdmissibilityStatus::NotAdmissible => "fail",
        AdmissibilityStatus::Undetermined => "undetermined",
    };
    let verdicts = vec![Verdict::new(format!("admissible[{place}]"), status, format!("{:?}", verdict.method))];
    let summary = vec![format!("t_H = {t_h}, t_N = {t_n}")];
    let data = json!({ "place": place, "t_h": t_h, "t_n": t_n, "verdict": verdict });
    Ok((s.report("check-admissible", verdicts, summary, data), admissibility_code(verdict.status)))
}

fn hom(s: &mut Session, a: &Path, b: &Path) -> Outcome {
    let (va, vb) = (s.load(a)?, s.load(b)?);
    match (kind(&va), kind(&vb)) {
        (Kind::DiagramObject, Kind::DiagramObject) => {
            let (x, y): (DiagramObject, DiagramObject) =
                (decode(&va, "diagram object")?, decode(&vb, "diagram object")?);
            let basis = hom_basis(&x, &y)?;
            let comps: Vec<_> = basis.iter().map(|m| m.components().clone()).collect();
            let summary = vec![format!("dim Hom = {}", basis.len())];
            Ok((s.report("hom", vec![], summary, json!({ "dim": basis.len(), "basis": comps })), EXIT_OK))
        }
        (Kind::Ogus, Kind::Ogus) => {
            let (x, y): (OgusObject, OgusObject) = (decode(&va, "Ogus object")?, decode(&vb, "Ogus object")?);
            let basis = ogus::hom(&x, &y)?;
            let mats: Vec<_> = basis.iter().map(|m| m.matrix().clone()).collect();
            let mut verdicts = Vec::new();
            if let Some(w) = basis.first().and_then(|m| m.place_warning()) {
                verdicts.push(Verdict::new("warning", "info", w));
            }
            let summary = vec![format!("dim Hom = {}", basis.len())];
            Ok((s.report("hom", verdicts, summary, json!({ "dim": basis.len(), "basis": mats })), EXIT_OK))
        }
        _ => Err(Fail::malformed("hom expects two diagram objects or two Ogus objects")),
    }
}

fn hom_a_cmd(s: &mut Session, a: &Path, b: &Path, iso: bool) -> Outcome {
    let (va, vb) = (s.load(a)?, s.load(b)?);
    let x: MFOgAObject = decode(&va, "object with A/B data")?;
    let y: MFOgAObject = decode(&vb, "object with A/B data")?;
    let basis = hom_a(&x, &y);
    let mut verdicts = Vec::new();
    let mut data = json!({ "dim": basis.len(), "basis": basis });
    let mut code = EXIT_OK;
    if iso {
        let seed = s.seed();
        let found = find_isomorphism(&x, &y, seed);
        verdicts.push(Verdict::pass_fail("isomorphism", found.is_some(), "random search in the Hom space"));
        data["isomorphism"] = to_value(&found);
        if found.is_none() {
            code = EXIT_INVALID;
        }
    }
    let summary = vec![format!("dim Hom = {}", basis.len())];
    Ok((s.report("hom-a", verdicts, summary, data), code))
}

fn hom_motives_cmd(s: &mut Session, a: &Path, b: &Path) -> Outcome {
    let (va, vb) = (s.load(a)?, s.load(b)?);
    let m: LinearizedLaumonMotive = decode(&va, "linearized motive")?;
    let n: LinearizedLaumonMotive = decode(&vb, "linearized motive")?;
    let basis = hom_motives(&m, &n);
    let presented = presentation_hom_dim(&m, &n)?;
    let agree = presented == basis.len();
    let verdicts =
        vec![Verdict::pass_fail("presentation_dim", agree, format!("fibre-product presentation gives {presented}"))];
    let summary = vec![format!("dim Hom = {}", basis.len())];
    let data = json!({ "dim": basis.len(), "presentation_dim": presented, "basis": basis });
    Ok((s.report("hom-motives", verdicts, summary, data), if agree { EXIT_OK } else { EXIT_INVALID }))
}

fn partial_outcome(s: &mut Session, command: &str, p: Partial) -> Outcome {
    match p {
        Partial::Built { object, morphism, .. } => {
            let seed = s.seed();
            let report = validate_a_with(&object, Some(seed));
            let verdicts = vec![Verdict::new("object", "pass", "componentwise construction is an object")];
            let data = json!({ "object": object, "morphism": morphism, "report": report });
            Ok((s.report(command, verdicts, vec![], data), status_code(report.status())))
        }
        Partial::Failed { clauses, detail } => {
            let verdicts = clauses.iter().map(|c| Verdict::new(c.clone(), "fail", detail.clone())).collect();
            Ok((s.report(command, verdicts, vec![], json!({ "failed": clauses })), EXIT_INVALID))
        }
    }
}

fn kernel_or_cokernel(s: &mut Session, file: &Path, cokernel: bool) -> Outcome {
    let command = if cokernel { "cokernel" } else { "kernel" };
    let v = s.load(file)?;
    match kind(&v) {
        Kind::DiagramMorphism => {
            let m: DiagramMorphism = decode(&v, "diagram morphism")?;
            let (object, map) = if cokernel { cokernel_object(&m)? } else { kernel_object(&m)? };
            let data = json!({ "object": object, "morphism": map.components() });
            Ok((s.report(command, vec![], vec![], data), EXIT_OK))
        }
        Kind::OgusMorphism => {
            let m: OgusMorphism = decode(&v, "Ogus morphism")?;
            let st = match if cokernel { ogus::cokernel(&m) } else { ogus::kernel(&m) } {
                Ok(st) => st,
                Err(crate::Error::NotStable(p)) => {
                    let verdicts = vec![Verdict::new(format!("frobenius_stable[{p}]"), "fail", "not an Ogus object")];
                    return Ok((
                        s.report(command, verdicts, vec![], json!({ "failed": ["frobenius_stable"] })),
                        EXIT_INVALID,
                    ));
                }
                Err(e) => return Err(e.into()),
            };
            let seed = s.seed();
            let report = validate_with(&st.object, Some(seed));
            let verdicts = ogus_verdicts(&report);
            let data = json!({ "object": st.object, "matrix": st.morphism.matrix(), "report": report });
            Ok((s.report(command, verdicts, vec![], data), status_code(report.status())))
        }
        Kind::MorphismA => {
            let m: MFOgAMorphism = decode(&v, "morphism with A/B data")?;
            let p = if cokernel { cokernel_a(&m)? } else { kernel_a(&m)? };
            partial_outcome(s, command, p)
        }
        _ => Err(Fail::malformed("expected a morphism")),
    }
}

fn ext1(s: &mut Session, a: &Path, b: &Path) -> Outcome {
    let (va, vb) = (s.load(a)?, s.load(b)?);
    let x: DiagramObject = decode(&va, "diagram object")?;
    let y: DiagramObject = decode(&vb, "diagram object")?;
    let e = ext1_basis(&x, &y)?;
    let h = hom_dim(&x, &y)?;
    let summary = vec![format!("dim Hom = {h}, dim Ext1 = {}", e.dim())];
    Ok((s.report("ext1", vec![], summary, json!({ "hom_dim": h, "ext1": e })), EXIT_OK))
}

#[derive(Deserialize)]
struct FibreDoc {
    x: DiagramShape,
    y: DiagramShape,
    f: Selection,
    g: Selection,
    #[serde(default)]
    triple: Option<FibreProductObject>,
}

fn fibre_product(s: &mut Session, file: &Path) -> Outcome {
    let v = s.load(file)?;
    let d: FibreDoc = decode(&v, "fibre-product description")?;
    let fp = fibre_product_category(&d.x, &d.y, &d.f, &d.g)?;
    let mut data = json!({ "shape": fp.shape() });
    if let Some(t) = &d.triple {
        data["object"] = to_value(&fp.object(t)?);
    }
    let summary = vec![format!("{} vertices, {} edges", fp.shape().num_vertices(), fp.shape().num_edges())];
    Ok((s.report("fibre-product", vec![], summary, data), EXIT_OK))
}

#[derive(Deserialize)]
struct LesDoc {
    x: DiagramShape,
    y: DiagramShape,
    f: Selection,
    g: Selection,
    a: FibreProductObject,
    b: FibreProductObject,
}

fn les(s: &mut Session, file: &Path) -> Outcome {
    let v = s.load(file)?;
    let d: LesDoc = decode(&v, "long-exact-sequence description")?;
    let fp = fibre_product_category(&d.x, &d.y, &d.f, &d.g)?;
    let report = les_check(&fp, &fp.object(&d.a)?, &fp.object(&d.b)?)?;
    let mut verdicts: Vec<Verdict> =
        report.nodes.iter().map(|n| Verdict::pass_fail(format!("exact[{}]", n.term), n.exact, "")).collect();
    verdicts.extend(report.cross_checks.iter().map(|c| Verdict::pass_fail(c.name, c.ok, "")));
    let ok = report.is_exact() && report.cross_checks.iter().all(|c| c.ok);
    Ok((s.report("les-check", verdicts, vec![], to_value(&report)), if ok { EXIT_OK } else { EXIT_INVALID }))
}

#[derive(Deserialize)]
struct SplittingDoc {
    etale: OgusObject,
    lie_f: usize,
    du_times: RationalMatrix,
    v: usize,
    u_m: usize,
    j: RationalMatrix,
    q: RationalMatrix,
    alpha: RationalMatrix,
    sigma: RationalMatrix,
    s: RationalMatrix,
}

/// A motive given either with `gamma` or with a section `sigma` and a lift `s`.
fn decode_motive(v: &Value) -> std::result::Result<LinearizedLaumonMotive, Fail> {
    if v.get("gamma").is_some() {
        return decode(v, "linearized motive");
    }
    let d: SplittingDoc = decode(v, "motive with splitting data")?;
    let times = TimesMotiveData::new(d.etale, d.lie_f, d.du_times)?;
    let gamma = build_gamma(&times, &d.j, &d.q, &d.sigma, &d.s)?;
    Ok(assemble(times, AlphaRowData { v: d.v, u_m: d.u_m, j: d.j, q: d.q, alpha: d.alpha, gamma })?)
}

fn devissage(s: &mut Session, file: &Path, roundtrip: bool) -> Outcome {
    let v = s.load(file)?;
    let m = decode_motive(&v)?;
    let (times, row) = disassemble(&m);
    let presentation = fibre_presentation(&m)?;
    let mut verdicts = Vec::new();
    let mut code = EXIT_OK;
    if roundtrip {
        let back = assemble(times.clone(), row.clone())?;
        let same = back == m;
        let (direct, presented) = (hom_motives(&m, &m).len(), presentation_hom_dim(&m, &m)?);
        verdicts.push(Verdict::pass_fail("roundtrip", same, "disassemble then assemble"));
        verdicts.push(Verdict::pass_fail(
            "end_dim",
            direct == presented,
            format!("{direct} direct, {presented} presented"),
        ));
        if !same || direct != presented {
            code = EXIT_INVALID;
        }
    }
    let data = json!({ "times": times, "row": row, "presentation": presentation.object, "gamma": m.gamma() });
    Ok((s.report("devissage", verdicts, vec![], data), code))
}

fn ta(s: &mut Session, file: &Path) -> Outcome {
    let v = s.load(file)?;
    let o = match kind(&v) {
        Kind::Motive => t_a(&decode(&v, "linearized motive")?)?,
        Kind::Ogus => embed_level1(&decode(&v, "Ogus object")?)?,
        _ => return Err(Fail::malformed("expected a linearized motive or a level <= 1 Ogus object")),
    };
    let verdicts = vec![Verdict::pass_fail("structure", structural_failures(&o).is_empty(), "square and cartesian")];
    Ok((s.report("ta", verdicts, vec![], to_value(&o)), EXIT_OK))
}

fn sharp(s: &mut Session, file: &Path) -> Outcome {
    let v = s.load(file)?;
    let o: MFOgAObject = decode(&v, "object with A/B data")?;
    let failures = structural_failures(&o);
    if !failures.is_empty() {
        let verdicts = failures.iter().map(|f| Verdict::new(f.clause.clone(), "fail", f.detail.clone())).collect();
        return Ok((s.report("sharp", verdicts, vec![], json!({ "failed": failures })), EXIT_INVALID));
    }
    let r = sharp_s(&o)?;
    let lie_f = r.dim_a0 - r.dim_fil0;
    let summary = vec![format!("dim = T + LieF + V = {} + {} + {} = {}", r.dim_t, lie_f, r.dim_a1, r.dim)];
    Ok((s.report("sharp", vec![], summary, to_value(&r)), EXIT_OK))
}

fn dispatch(s: &mut Session, c: &Command) -> Outcome {
    match c {
        Command::Validate { file } => validate(s, file),
        Command::ValidateA { file } => validate_a(s, file),
        Command::CheckAdmissible { file, place, samples } => check_admissible(s, file, place, *samples),
        Command::Hom { a, b } => hom(s, a, b),
        Command::HomA { a, b, iso } => hom_a_cmd(s, a, b, *iso),
        Command::HomMotives { a, b } => hom_motives_cmd(s, a, b),
        Command::Kernel { file } => kernel_or_cokernel(s, file, false),
        Command::Cokernel { file } => kernel_or_cokernel(s, file, true),
        Command::Ext1 { a, b } => ext1(s, a, b),
        Command::FibreProduct { file } => fibre_product(s, file),
        Command::Devissage { file, roundtrip } => devissage(s, file, *roundtrip),
        Command::Ta { file } => ta(s, file),
        Command::Sharp { file } => sharp(s, file),
        Command::LesCheck { file } => les(s, file),
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let seed_override = match (cli.seed, std::env::var("OGUS_SEED")) {
        (Some(s), _) => Some(s),
        (None, Ok(env)) => match env.trim().parse() {
            Ok(s) => Some(s),
            Err(_) => {
                let _ = writeln!(err, "OGUS_SEED is not an unsigned integer: {env}");
                return EXIT_USAGE;
            }
        },
        (None, Err(_)) => None,
    };
    let mut session = Session { inputs: Vec::new(), seed_override, seed_used: None };
    let (mut report, code) = match dispatch(&mut session, &cli.command) {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(err, "ogus {}: {}", cli.command.name(), f.message);
            return f.code;
        }
    };
    if let Some(path) = &cli.out {
        let body = serde_json::to_string_pretty(&report.data).expect("serializable") + "\n";
        if let Err(e) = fs::write(path, body) {
            let _ = writeln!(err, "cannot write {}: {e}", path.display());
            return EXIT_NO_INPUT;
        }
        report.artifacts.push(path.display().to_string());
    }
    let text = if cli.json { report.to_canonical_json() } else { report.to_text() };
    let _ = out.write_all(text.as_bytes());
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn coverage_table_is_a_function_onto_subcommands() {
        let names: BTreeSet<String> = subcommands().into_iter().collect();
        let ops: BTreeSet<&str> = COVERAGE.iter().map(|(op, _)| *op).collect();
        assert_eq!(ops.len(), COVERAGE.len());
        for (_, cmd) in COVERAGE {
            assert!(names.contains(*cmd), "{cmd}");
        }
        let used: BTreeSet<String> = COVERAGE.iter().map(|(_, c)| c.to_string()).collect();
        assert_eq!(used, names);
    }

    #[test]
    fn usage_errors() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["ogus", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["ogus", "validate", "/nonexistent/file.json"], &mut out, &mut err), EXIT_NO_INPUT);
        assert_eq!(run(["ogus", "--help"], &mut out, &mut err), EXIT_OK);
    }

    #[test]
    fn worst_code() {
        assert_eq!(worst([EXIT_OK, EXIT_UNDETERMINED]), EXIT_UNDETERMINED);
        assert_eq!(worst([EXIT_UNDETERMINED, EXIT_INVALID, EXIT_OK]), EXIT_INVALID);
        assert_eq!(worst([]), EXIT_OK);
    }
}
