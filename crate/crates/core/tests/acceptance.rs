//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::*;
use ogus::diagram::{
    cokernel_object, ext1_basis, ext1_pushforward_matrix, hom_dim as diagram_hom_dim, les_check, map_object,
};
use ogus::exact_linalg::{int, RationalMatrix, Subspace};
use ogus::filtered_phi::{check_admissible, AdmissibilityStatus, FilteredPhiModule, Filtration, FrobeniusAt};
use ogus::laumon::{assemble, disassemble, hom_motives_dim, presentation_hom_dim, LinearizedLaumonMotive};
use ogus::mfog_a::{embed_level1, hom_a_dim, sharp_s, t_a};
use ogus::ogus::{hom_dim, strictness_audit, OgusObject};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn admissibility_oracle() -> Outcome {
    let (mut disagreements, mut bad_witnesses, mut admissible) = (0, 0, 0);
    for seed in 0..200 {
        let om = oracle_module(&mut rng(1000 + seed));
        let verdict = check_admissible(&om.module, &om.place).unwrap();
        if verdict.status != om.oracle() {
            disagreements += 1;
        }
        if verdict.status == AdmissibilityStatus::Admissible {
            admissible += 1;
        }
        if !om.witness_ok(&verdict) {
            bad_witnesses += 1;
        }
    }
    outcome(
        disagreements == 0 && bad_witnesses == 0,
        format!(
            "200 modules ({admissible} admissible), {disagreements} disagreements with the subset oracle, \
             {bad_witnesses} witnesses without t_H > t_N"
        ),
    )
}

fn tate_fixture() -> Outcome {
    let tate = OgusObject::tate(&places()).phi_module();
    let mut ok = true;
    let mut totals = Vec::new();
    for f in tate.frobenii() {
        let v = check_admissible(&tate, f.label()).unwrap();
        ok &= v.status == AdmissibilityStatus::Admissible && v.t_h_total == -1 && v.t_n_total == -1;
        totals.push(format!("{}: t_H = {}, t_N = {}", f.label(), v.t_h_total, v.t_n_total));
    }
    let fil0_full = Filtration::new(1, vec![(0, Subspace::full(1))]).unwrap();
    let flipped = FilteredPhiModule::new(1, fil0_full, tate.frobenii().to_vec()).unwrap();
    let phi_p: Vec<FrobeniusAt> = tate
        .frobenii()
        .iter()
        .map(|f| FrobeniusAt::new(f.place.clone(), RationalMatrix::diagonal(&[int(f.prime() as i64)]), false).unwrap())
        .collect();
    let flipped_phi = FilteredPhiModule::new(1, tate.filtration().clone(), phi_p).unwrap();
    for m in [&flipped, &flipped_phi] {
        for f in m.frobenii() {
            ok &= check_admissible(m, f.label()).unwrap().status == AdmissibilityStatus::NotAdmissible;
        }
    }
    outcome(ok, format!("{}; Fil⁰ = T and φ = p both NotAdmissible", totals.join(", ")))
}

fn motives(base: u64, count: u64) -> Vec<LinearizedLaumonMotive> {
    (0..count).map(|s| random_motive(&mut rng(base + s), 3)).collect()
}

fn devissage() -> Outcome {
    let ms = motives(3000, 100);
    let roundtrip_failures = ms
        .iter()
        .filter(|m| {
            let (times, row) = disassemble(m);
            let back = assemble(times, row).unwrap();
            back != **m || serde_json::to_string(&back).unwrap() != serde_json::to_string(m).unwrap()
        })
        .count();
    let (mut mismatches, mut nonzero) = (0, 0);
    for s in 0..50 {
        let mut r = rng(3500 + s);
        let m = random_motive(&mut r, 3);
        let n = random_motive(&mut r, 3);
        let d = hom_motives_dim(&m, &n);
        nonzero += usize::from(d > 0);
        if presentation_hom_dim(&m, &n).unwrap() != d {
            mismatches += 1;
        }
    }
    outcome(
        roundtrip_failures == 0 && mismatches == 0,
        format!(
            "100 round-trips, {roundtrip_failures} failures; 50 pairs ({nonzero} with nonzero Hom), \
             {mismatches} presentation Hom-dimension mismatches"
        ),
    )
}

fn cohomological_dimension() -> Outcome {
    let mut euler_failures = 0;
    for s in 0..50 {
        let mut r = rng(4000 + s);
        let (z1, z0, w1, w0) = (r.gen_range(0..=3), r.gen_range(0..=3), r.gen_range(0..=3), r.gen_range(0..=3));
        let a = map_object(&random_matrix(&mut r, z1, z0, 2));
        let b = map_object(&random_matrix(&mut r, w1, w0, 2));
        let lhs = diagram_hom_dim(&a, &b).unwrap() as i64 - ext1_basis(&a, &b).unwrap().dim() as i64;
        let (z0, z1, w0, w1) = (z0 as i64, z1 as i64, w0 as i64, w1 as i64);
        if lhs != z0 * w0 + z1 * w1 - z0 * w1 {
            euler_failures += 1;
        }
    }
    let (mut surjectivity_failures, mut nontrivial) = (0, 0);
    for s in 0..50 {
        let mut r = rng(4100 + s);
        let shape = random_shape(&mut r, "v");
        let none = Default::default();
        let a = random_object(&mut r, &shape, &none);
        let b = random_object(&mut r, &shape, &none);
        let c = random_object(&mut r, &shape, &none);
        let m = random_diagram_morphism(&mut r, &c, &b);
        let (quotient, projection) = cokernel_object(&m).unwrap();
        let from = ext1_basis(&a, &b).unwrap();
        let to = ext1_basis(&a, &quotient).unwrap();
        nontrivial += usize::from(to.dim() > 0);
        if ext1_pushforward_matrix(&from, &to, &projection).unwrap().rank() != to.dim() {
            surjectivity_failures += 1;
        }
    }
    let mut les_failures = 0;
    for s in 0..100 {
        let (fp, a, b) = random_fibre_instance(&mut rng(4200 + s));
        if !les_check(&fp, &a, &b).unwrap().is_exact() {
            les_failures += 1;
        }
    }
    outcome(
        euler_failures + surjectivity_failures + les_failures == 0,
        format!(
            "Euler identity {euler_failures}/50 failures; Ext¹ surjectivity {surjectivity_failures}/50 failures \
             ({nontrivial} with nonzero target); les_check {les_failures}/100 inexact"
        ),
    )
}

fn full_faithfulness() -> Outcome {
    let (mut mismatches, mut nonzero) = (0, 0);
    for s in 0..100 {
        let mut r = rng(5000 + s);
        let m = random_motive(&mut r, 3);
        let n = random_motive(&mut r, 3);
        let d = hom_motives_dim(&m, &n);
        nonzero += usize::from(d > 0);
        if hom_a_dim(&t_a(&m).unwrap(), &t_a(&n).unwrap()) != d {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("100 pairs ({nonzero} with nonzero Hom), {mismatches} mismatches"))
}

fn embedding_fullness() -> Outcome {
    let (mut mismatches, mut nonzero) = (0, 0);
    for s in 0..50 {
        let (a, b) = random_related_pair(&mut rng(6000 + s), 3);
        let d = hom_dim(&a, &b);
        nonzero += usize::from(d > 0);
        if hom_a_dim(&embed_level1(&a).unwrap(), &embed_level1(&b).unwrap()) != d {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("50 pairs ({nonzero} with nonzero Hom), {mismatches} mismatches"))
}

fn sharp_identity() -> Outcome {
    let mut all = motives(3000, 100);
    all.extend((0..100).flat_map(|s| {
        let mut r = rng(5000 + s);
        [random_motive(&mut r, 3), random_motive(&mut r, 3)]
    }));
    let identity_failures =
        all.iter().filter(|m| sharp_s(&t_a(m).unwrap()).unwrap().dim != m.t_dr() + m.lie_f() + m.v()).count();
    let mut deligne_failures = 0;
    for s in 0..30 {
        let m = LinearizedLaumonMotive::deligne(random_level1(&mut rng(7000 + s), 3)).unwrap();
        let sharp = sharp_s(&t_a(&m).unwrap()).unwrap();
        if sharp.dim != m.t_dr() || !sharp.leg_t.is_invertible() {
            deligne_failures += 1;
        }
    }
    outcome(
        identity_failures == 0 && deligne_failures == 0,
        format!(
            "{} instances, {identity_failures} dimension failures; 30 Deligne-type, {deligne_failures} where T → S \
             is not an isomorphism",
            all.len()
        ),
    )
}

fn strictness() -> Outcome {
    let (mut failures, mut nonzero) = (0, 0);
    for s in 0..200 {
        let mut r = rng(8000 + s);
        let (a, b) = random_related_pair(&mut r, 3);
        let m = random_ogus_morphism(&mut r, &a, &b);
        nonzero += usize::from(!m.matrix().is_zero());
        if !strictness_audit(&m).hodge_strict {
            failures += 1;
        }
    }
    let mut detected = 0;
    for s in 0..50 {
        let mut r = rng(8500 + s);
        let a = frobenius_free(&mut r, 3);
        let b = frobenius_free(&mut r, 3);
        let m = random_ogus_morphism(&mut r, &a, &b);
        if !strictness_audit(&m).hodge_strict {
            detected += 1;
        }
    }
    outcome(
        failures == 0 && detected > 0,
        format!(
            "200 morphisms ({nonzero} nonzero), {failures} Hodge-strictness failures; Frobenius-free control \
             detected {detected}/50 non-strict"
        ),
    )
}

/// Fixture runs covered by the golden files.
pub const GOLDEN_RUNS: &[(&str, &[&str])] = &[
    ("check_admissible_tate", &["check-admissible", "tests/fixtures/tate.json", "--place", "v2"]),
    ("check_admissible_undetermined", &["check-admissible", "tests/fixtures/undetermined.json", "--place", "v2"]),
    ("validate_sum", &["validate", "tests/fixtures/sum_ogus.json"]),
    ("hom_sum_tate", &["hom", "tests/fixtures/sum_ogus.json", "tests/fixtures/tate_ogus.json"]),
    ("kernel_projection", &["kernel", "tests/fixtures/projection.json"]),
    ("ext1_maps", &["ext1", "tests/fixtures/map_a.json", "tests/fixtures/map_b.json"]),
    ("fibre_product", &["fibre-product", "tests/fixtures/fibre.json"]),
    ("les_check", &["les-check", "tests/fixtures/les.json"]),
    ("devissage_split", &["devissage", "tests/fixtures/motive_split.json", "--roundtrip"]),
    ("hom_motives", &["hom-motives", "tests/fixtures/motive.json", "tests/fixtures/motive.json"]),
    ("ta_motive", &["ta", "tests/fixtures/motive.json"]),
    ("validate_a_broken", &["validate-a", "tests/fixtures/broken.json"]),
    ("hom_a_iso", &["hom-a", "tests/fixtures/ta_out.json", "tests/fixtures/ta_out.json", "--iso"]),
    ("sharp", &["sharp", "tests/fixtures/ta_out.json"]),
    ("kernel_a", &["kernel", "tests/fixtures/a_morphism.json"]),
    ("cokernel_a", &["cokernel", "tests/fixtures/a_morphism.json"]),
];

fn run_json(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_ogus"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .args(["--json", "--seed", "7"])
        .output()
        .unwrap();
    out.stdout
}

fn determinism() -> Outcome {
    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("OGUS_UPDATE_GOLDEN").is_some();
    let (mut unstable, mut drifted) = (Vec::new(), Vec::new());
    for (name, args) in GOLDEN_RUNS {
        let runs: Vec<Vec<u8>> = (0..3).map(|_| run_json(args)).collect();
        if runs.iter().any(|r| r != &runs[0] || r.is_empty()) {
            unstable.push(*name);
        }
        let path = golden_dir.join(format!("{name}.json"));
        if update {
            std::fs::create_dir_all(&golden_dir).unwrap();
            std::fs::write(&path, &runs[0]).unwrap();
        }
        if std::fs::read(&path).ok().as_deref() != Some(&runs[0][..]) {
            drifted.push(*name);
        }
    }
    outcome(
        unstable.is_empty() && drifted.is_empty(),
        format!(
            "{} fixtures x 3 runs, unstable: {:?}, differing from golden: {:?}",
            GOLDEN_RUNS.len(),
            unstable,
            drifted
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("admissibility oracle equivalence", admissibility_oracle),
        ("Tate fixture", tate_fixture),
        ("devissage round-trip and presentation Hom", devissage),
        ("cohomological dimension one", cohomological_dimension),
        ("full faithfulness of t_a", full_faithfulness),
        ("embedding fullness", embedding_fullness),
        ("sharp de Rham identity", sharp_identity),
        ("strictness audit", strictness),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        let mark = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!(
            "acceptance {} [{mark}] {name}: {} (tolerance: exact, {:.1}s)",
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
