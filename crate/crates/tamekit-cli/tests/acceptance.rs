//! Acceptance suite: every release criterion at its stated tolerance, one
//! pass/fail line per criterion (run with --nocapture to see them all).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;
use std::time::Instant;
use tamekit_core::linalg::{fro_norm, fro_norm_c, to_complex, CMat};
use tamekit_core::{
    interpolate_simplex, is_compatible, is_slice_compatible, retraction_j,
    shared_lines_certificate, splice_partition, ComplexStructure, LinearSlice, LocalPatchSet,
    NoRealEigMatrix, PatchPoint, SimplexPoint, SkewForm, SlitMatrix, Tolerance,
};
use tamekit_fibration::sample::taming_lambda_min;
use tamekit_fibration::{
    discrete_closedness, generate_product_bundle, generate_projectivization,
    global_taming_threshold, radial_change_check, ProductBundleParams, ProjectivizationParams,
};
use tamekit_search::{run_campaign, DescentParams, SearchCampaign, SearchMode, Verdict, VertexKind};

type RMat = DMatrix<f64>;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn verdict(name: &str, ok: bool, detail: &str) {
    println!("criterion {name}: {}{}", if ok { "PASS" } else { "FAIL" }, if detail.is_empty() {
        String::new()
    } else {
        format!(" ({detail})")
    });
    assert!(ok, "criterion {name} failed: {detail}");
}

// --- shared generators -----------------------------------------------------

fn random_invertible(rng: &mut ChaCha12Rng, m: usize, amp: f64) -> RMat {
    loop {
        let q = RMat::from_fn(m, m, |i, j| {
            (if i == j { 1.0 } else { 0.0 }) + amp * rng.gen_range(-1.0..1.0)
        });
        let sv = q.clone().svd(false, false).singular_values;
        if sv.iter().cloned().fold(f64::INFINITY, f64::min)
            > 0.05 * sv.iter().cloned().fold(0.0_f64, f64::max)
        {
            return q;
        }
    }
}

fn slit_distance(l: Complex64) -> f64 {
    if l.re <= 0.0 {
        l.im.abs()
    } else {
        l.norm()
    }
}

/// Random member of the slit domain with eigenvalues clearing the slit by a
/// relative safety margin.
fn random_slit(rng: &mut ChaCha12Rng, m: usize, real: bool, margin: f64) -> SlitMatrix {
    loop {
        let cand = if real {
            SlitMatrix::from_real(&RMat::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0)), &tol())
        } else {
            SlitMatrix::new(
                CMat::from_fn(m, m, |_, _| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }),
                &tol(),
            )
        };
        if let Ok(s) = cand {
            let scale = s.eigenvalues().iter().map(|e| e.norm()).fold(1.0_f64, f64::max);
            if s.eigenvalues().iter().all(|&l| slit_distance(l) >= margin * scale) {
                return s;
            }
        }
    }
}

fn random_no_real_eig(rng: &mut ChaCha12Rng, m: usize) -> NoRealEigMatrix {
    let mut b = RMat::zeros(m, m);
    for blk in 0..m / 2 {
        let a = rng.gen_range(-1.0..1.0);
        let rot = rng.gen_range(0.3..1.5_f64) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let s = rng.gen_range(0.5..1.6_f64);
        b[(2 * blk, 2 * blk)] = s * a;
        b[(2 * blk, 2 * blk + 1)] = s * rot;
        b[(2 * blk + 1, 2 * blk)] = -s * rot;
        b[(2 * blk + 1, 2 * blk + 1)] = s * a;
    }
    let q = random_invertible(rng, m, 0.3);
    let qi = q.clone().try_inverse().unwrap();
    NoRealEigMatrix::new(&q * b * qi, &tol()).unwrap()
}

fn random_skew_form(rng: &mut ChaCha12Rng, m: usize) -> SkewForm {
    let q = random_invertible(rng, m, 0.3);
    SkewForm::new(q.transpose() * SkewForm::standard(m).matrix() * &q, &tol()).unwrap()
}

fn random_compatible(rng: &mut ChaCha12Rng, omega: &SkewForm) -> ComplexStructure {
    let m = omega.dim();
    let l = RMat::from_fn(m, m, |i, j| {
        if i == j {
            (0.4 * rng.gen_range(-1.0..1.0_f64)).exp()
        } else if i > j {
            0.25 * rng.gen_range(-1.0..1.0)
        } else {
            0.0
        }
    });
    let g = &l * l.transpose();
    let b = omega.matrix().clone().try_inverse().unwrap() * g;
    retraction_j(&NoRealEigMatrix::new(b, &tol()).unwrap(), &tol()).unwrap()
}

fn random_structure(rng: &mut ChaCha12Rng, m: usize) -> ComplexStructure {
    let q = random_invertible(rng, m, 0.4);
    let qi = q.clone().try_inverse().unwrap();
    ComplexStructure::new(&q * ComplexStructure::standard(m).matrix() * qi, &tol()).unwrap()
}

// --- criterion 1: matrix-calculus suite ------------------------------------

#[test]
fn criterion_1_matrix_calculus_suite() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(1001);
    let per_dim = 1000usize;
    let gate = 1e-8;
    let mut failures: Vec<String> = Vec::new();

    for m in 1..=8usize {
        for i in 0..per_dim {
            let real = i % 2 == 0;
            let a = random_slit(&mut rng, m, real, 1e-3);
            let anorm = fro_norm_c(a.matrix()).max(1e-300);

            // Square-root round trip (and the principal-branch property (f)).
            let x = a.power(0.5, &tol()).unwrap();
            let resid = fro_norm_c(&(&x * &x - a.matrix())) / anorm;
            if resid > gate {
                failures.push(format!("roundtrip dim {m} trial {i}: {resid:.3e}"));
            }
            let xs = SlitMatrix::new(x, &tol()).unwrap();
            if xs.eigenvalues().iter().any(|l| l.arg().abs() >= std::f64::consts::FRAC_PI_2 + 1e-10)
            {
                failures.push(format!("branch dim {m} trial {i}"));
            }

            // (a) integer powers match repeated multiplication.
            let sq = a.power(2.0, &tol()).unwrap();
            let direct = a.matrix() * a.matrix();
            if fro_norm_c(&(sq - &direct)) / fro_norm_c(&direct).max(1.0) > gate {
                failures.push(format!("integer dim {m} trial {i}"));
            }

            // (b) semigroup.
            let r = rng.gen_range(-1.0..1.0);
            let s = [-2.0, -1.0, 1.0, 2.0, 3.0][i % 5];
            let ar = SlitMatrix::new(a.power(r, &tol()).unwrap(), &tol()).unwrap();
            let lhs = ar.power(s, &tol()).unwrap();
            let rhs = a.power(r * s, &tol()).unwrap();
            if fro_norm_c(&(lhs - &rhs)) / fro_norm_c(&rhs).max(1.0) > gate {
                failures.push(format!("semigroup dim {m} trial {i} r={r} s={s}"));
            }

            // (c) naturality under similarity.
            let q = to_complex(&random_invertible(&mut rng, m, 0.3));
            let qi = q.clone().try_inverse().unwrap();
            let b = SlitMatrix::new(&q * a.matrix() * qi, &tol()).unwrap();
            let lhs = &q * a.power(r, &tol()).unwrap();
            let rhs = b.power(r, &tol()).unwrap() * &q;
            if fro_norm_c(&(lhs - &rhs)) / fro_norm_c(&rhs).max(1.0) > gate {
                failures.push(format!("naturality dim {m} trial {i}"));
            }

            // (d) realness of powers of real matrices.
            if real {
                let f = a.power(r, &tol()).unwrap();
                let imag = f.iter().map(|x| x.im.abs()).fold(0.0_f64, f64::max);
                if imag > 1e-10 * fro_norm_c(&f).max(1.0) {
                    failures.push(format!("realness dim {m} trial {i}: {imag:.3e}"));
                }
            }

            // (e) powers of SPD matrices stay self-adjoint.
            let l = RMat::from_fn(m, m, |r_, c| if r_ >= c { rng.gen_range(-1.0..1.0) } else { 0.0 });
            let spd = &l * l.transpose() + RMat::identity(m, m) * 0.05;
            let sa = SlitMatrix::from_real(&spd, &tol()).unwrap();
            let f = sa.power_real(r, &tol()).unwrap();
            if fro_norm(&(&f - f.transpose())) / fro_norm(&f).max(1.0) > gate {
                failures.push(format!("self-adjoint dim {m} trial {i}"));
            }
        }
    }
    let elapsed = started.elapsed();
    let ok = failures.is_empty() && elapsed.as_secs_f64() <= 60.0;
    verdict(
        "1 (matrix-calculus suite)",
        ok,
        &format!("{} failures, {:.1}s", failures.len(), elapsed.as_secs_f64()),
    );
}

// --- criterion 2: Jordan-family continuity ---------------------------------

#[test]
fn criterion_2_jordan_family_continuity() {
    let unit_roundoff = f64::EPSILON / 2.0;
    let mut ok = true;
    let mut worst = String::new();
    for &l in &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)] {
        for &z in &[1e-2, 1e-4, 1e-6] {
            let zc = Complex64::new(z, 0.0);
            let a = SlitMatrix::new(
                CMat::from_row_slice(
                    2,
                    2,
                    &[l + zc, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), l],
                ),
                &tol(),
            )
            .unwrap();
            let got = a.power(0.5, &tol()).unwrap();
            let top = (l + zc).powf(0.5);
            let bot = l.powf(0.5);
            let expect = [[top, Complex64::new(0.0, 0.0)], [(top - bot) / zc, bot]];
            let gate = 10.0 * unit_roundoff / z;
            for i in 0..2 {
                for j in 0..2 {
                    let err = (got[(i, j)] - expect[i][j]).norm();
                    if err > gate {
                        ok = false;
                        worst = format!("l={l}, z={z}, entry ({i},{j}): {err:.3e} > {gate:.3e}");
                    }
                }
            }
            if z <= 1e-6 {
                let deriv = l.powf(-0.5) * 0.5;
                if (got[(1, 0)] - deriv).norm() > 1e-4 {
                    ok = false;
                    worst = format!("l={l}: limit deviation {:.3e}", (got[(1, 0)] - deriv).norm());
                }
            }
        }
    }
    verdict("2 (Jordan-family continuity)", ok, &worst);
}

// --- criterion 3: retraction suite ------------------------------------------

#[test]
fn criterion_3_retraction_suite() {
    let mut rng = ChaCha12Rng::seed_from_u64(1003);
    let mut failures = 0usize;
    let mut total = 0usize;
    for m in [2usize, 4, 6, 8] {
        for _ in 0..250 {
            total += 1;
            let b = random_no_real_eig(&mut rng, m);
            let j = retraction_j(&b, &tol()).unwrap();
            let jm = j.matrix();
            if fro_norm(&(jm * jm + RMat::identity(m, m))) > 1e-8 {
                failures += 1;
                continue;
            }
            let jj = retraction_j(&NoRealEigMatrix::new(jm.clone(), &tol()).unwrap(), &tol()).unwrap();
            if fro_norm(&(jj.matrix() - jm)) > 1e-8 {
                failures += 1;
            }
        }
    }
    // Fixed points: j(J) = J at 1e-10 for 100 random structures.
    for i in 0..100 {
        let m = [2usize, 4, 6, 8][i % 4];
        let j = random_structure(&mut rng, m);
        let again =
            retraction_j(&NoRealEigMatrix::new(j.matrix().clone(), &tol()).unwrap(), &tol()).unwrap();
        if fro_norm(&(again.matrix() - j.matrix())) > 1e-10 {
            failures += 1;
        }
        total += 1;
    }
    verdict(
        "3 (retraction suite)",
        failures == 0 && total >= 1100,
        &format!("{failures} failures over {total} draws"),
    );
}

// --- criterion 4: compatibility closure -------------------------------------

#[test]
fn criterion_4_compatibility_closure() {
    let mut rng = ChaCha12Rng::seed_from_u64(1004);
    let mut failures = 0usize;
    let trials = 2000usize;
    for i in 0..trials {
        let m = [4usize, 6, 8][i % 3];
        let k = 2 + (i / 3) % 3; // k in {2, 3, 4}
        let omega = random_skew_form(&mut rng, m);
        let verts: Vec<ComplexStructure> = (0..k).map(|_| random_compatible(&mut rng, &omega)).collect();
        let raw: Vec<f64> = (0..k).map(|_| -rng.gen_range(1e-12..1.0_f64).ln()).collect();
        let s: f64 = raw.iter().sum();
        let t = SimplexPoint::new(raw.iter().map(|x| x / s).collect()).unwrap();
        match interpolate_simplex(&verts, &t, Some(&omega), &tol()) {
            Ok(j) => {
                if !is_compatible(&omega, &j, &tol()).unwrap() {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    verdict(
        "4 (compatibility closure)",
        failures == 0,
        &format!("{failures} failures over {trials} trials"),
    );
}

// --- criterion 5: splicing ---------------------------------------------------

#[test]
fn criterion_5_splicing() {
    let mut rng = ChaCha12Rng::seed_from_u64(1005);
    let mut failures = 0usize;
    let sets = 200usize;
    let omega2 = SkewForm::standard(2);
    let slice = {
        let mut t = RMat::zeros(2, 4);
        t[(0, 0)] = 1.0;
        t[(1, 1)] = 1.0;
        LinearSlice::new(t, omega2.clone()).unwrap()
    };
    for set in 0..sets {
        let n_points = 1 + set % 4;
        let mut points = Vec::with_capacity(n_points);
        for p in 0..n_points {
            let n_patches = 2 + (set + p) % 3;
            let jb = random_compatible(&mut rng, &omega2);
            let raw: Vec<f64> = (0..n_patches).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = raw.iter().sum();
            let mut weights = BTreeMap::new();
            let mut structures = BTreeMap::new();
            for (a, w) in raw.iter().enumerate() {
                let jf = random_structure(&mut rng, 2);
                let mut j = RMat::zeros(4, 4);
                j.view_mut((0, 0), (2, 2)).copy_from(jb.matrix());
                j.view_mut((2, 2), (2, 2)).copy_from(jf.matrix());
                weights.insert(format!("a{a}"), w / s);
                structures.insert(format!("a{a}"), ComplexStructure::new(j, &tol()).unwrap());
            }
            points.push(PatchPoint {
                id: format!("set{set}-p{p}"),
                weights,
                structures,
                slice: slice.clone(),
                regular: false,
            });
        }
        match splice_partition(&LocalPatchSet { points }, &tol()) {
            Ok(out) => {
                for sp in out {
                    if !is_slice_compatible(&slice, &sp.structure, &tol()).unwrap()
                        || sp.pushforward_residual > 1e-8
                    {
                        failures += 1;
                    }
                }
            }
            Err(_) => failures += 1,
        }
    }
    verdict("5 (splicing)", failures == 0, &format!("{failures} failures over {sets} patch sets"));
}

// --- criterion 6: harness sanity ---------------------------------------------

#[test]
fn criterion_6_question_harness() {
    let started = Instant::now();
    // Compatible-restricted campaign: the probe never goes meaningfully
    // negative.
    let compatible_cfg = SearchCampaign {
        dim: 4,
        k: 2,
        mode: SearchMode::Random,
        vertex_kind: VertexKind::Compatible,
        seed: 7,
        trials: 10_000,
        margin_floor: 1e-4,
        candidate_threshold: 1e-6,
        rejection_budget: 20_000,
        descent: DescentParams::default(),
        tolerance: tol(),
    };
    let compatible = run_campaign(&compatible_cfg).unwrap();
    let compat_ok = compatible.global_min >= -1e-8 && !compatible.has_confirmed_candidate();

    // Unrestricted campaign: 1e5 trials, dim 4, seed 42, bit-identical rerun.
    let cfg = SearchCampaign {
        dim: 4,
        k: 2,
        mode: SearchMode::Random,
        vertex_kind: VertexKind::Tame,
        seed: 42,
        trials: 100_000,
        margin_floor: 1e-4,
        candidate_threshold: 1e-6,
        rejection_budget: 20_000,
        descent: DescentParams::default(),
        tolerance: tol(),
    };
    let first = run_campaign(&cfg).unwrap();
    let second = run_campaign(&cfg).unwrap();
    let identical = serde_json::to_string(&first).unwrap() == serde_json::to_string(&second).unwrap()
        && first.to_csv() == second.to_csv();
    // Any confirmed candidate must have survived the extended-precision
    // re-verification with a decisively negative objective.
    let confirmed_sound = first
        .candidates
        .iter()
        .filter(|c| c.verdict == Verdict::Confirmed)
        .all(|c| c.xp_objective < -10.0 * f64::EPSILON && c.xp_min_vertex_margin > 10.0 * f64::EPSILON);
    let elapsed = started.elapsed();
    let ok = compat_ok && identical && confirmed_sound && elapsed.as_secs_f64() <= 600.0;
    verdict(
        "6 (harness sanity)",
        ok,
        &format!(
            "compatible min {:.3e}; unrestricted min {:.3e}; {} candidates; reproducible {}; {:.1}s",
            compatible.global_min,
            first.global_min,
            first.candidates.len(),
            identical,
            elapsed.as_secs_f64()
        ),
    );
}

// --- criterion 7: assembly on generated fibrations ----------------------------

#[test]
fn criterion_7_thurston_assembly() {
    let t_max = 10.0;
    let product = generate_product_bundle(&ProductBundleParams { grid: [8, 8, 8, 8] }, &tol()).unwrap();
    let product_threshold = global_taming_threshold(&product, t_max, &tol()).unwrap();
    let product_ok = product_threshold.is_infinite();

    let coarse =
        generate_projectivization(&ProjectivizationParams::default(), &tol()).unwrap();
    let fine = generate_projectivization(
        &ProjectivizationParams { sphere_points: 64, radial_points: 16, ..Default::default() },
        &tol(),
    )
    .unwrap();
    let t_coarse = global_taming_threshold(&coarse, t_max, &tol()).unwrap();
    let t_fine = global_taming_threshold(&fine, t_max, &tol()).unwrap();
    let positive = t_coarse > 0.0;
    let stable = match (t_coarse.is_finite(), t_fine.is_finite()) {
        (false, false) => true,
        (true, true) => (t_coarse - t_fine).abs() <= 0.01 * t_coarse.abs(),
        _ => false,
    };

    // omega_t at half-threshold: tame with positive orientation everywhere.
    let mut assembly_ok = true;
    for (fib, threshold) in [(&product, product_threshold), (&coarse, t_coarse)] {
        let t = if threshold.is_finite() { threshold / 2.0 } else { t_max / 2.0 };
        match tamekit_fibration::assemble_omega_t(fib, t, threshold, 0.05, &tol()) {
            Ok(forms) => {
                for f in forms {
                    if !(f.taming_margin > 0.0) || f.pfaffian_sign != 1 {
                        assembly_ok = false;
                    }
                }
            }
            Err(_) => assembly_ok = false,
        }
    }
    let ok = product_ok && positive && stable && assembly_ok;
    verdict(
        "7 (assembly)",
        ok,
        &format!("product {product_threshold}, projectivization {t_coarse} vs refined {t_fine}"),
    );
}

// --- criterion 8: radial model -------------------------------------------------

#[test]
fn criterion_8_radial_model() {
    let dir = {
        let mut v = vec![Complex64::new(0.6, -0.2), Complex64::new(0.4, 0.7)];
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= n;
        }
        v
    };
    let mut max_resid = 0.0_f64;
    for i in 0..10 {
        for j in 0..10 {
            let t = 0.1 + (10.0 - 0.1) * i as f64 / 9.0;
            let r = 0.5 + 1.5 * j as f64 / 9.0;
            let z: Vec<Complex64> = dir.iter().map(|x| x * r).collect();
            max_resid = max_resid.max(radial_change_check(t, &z, 1e-9).unwrap());
        }
    }
    let grid_ok = max_resid <= 1e-6;

    // Closedness: the full radial 2-form is closed (its field is constant in
    // this chart, so the residual sits at roundoff), and the discrete
    // exterior derivative shows second order on the nonconstant
    // Fubini-Study factor of the same formula.
    let point = [0.6, -0.2, 0.4, 0.7];
    let eta_resid = discrete_closedness(
        |x| tamekit_fibration::radial::radial_eta_field(x, 1e-9),
        &point,
        1e-3,
    )
    .unwrap();
    let fs = |x: &[f64]| tamekit_fibration::radial::fs_pullback_field(x, 1e-9);
    let r1 = discrete_closedness(fs, &point, 2e-2).unwrap();
    let r2 = discrete_closedness(fs, &point, 1e-2).unwrap();
    let ratio = r1 / r2;
    let closed_ok = eta_resid <= 1e-4 && (ratio - 4.0).abs() <= 0.5;
    verdict(
        "8 (radial model)",
        grid_ok && closed_ok,
        &format!("max grid residual {max_resid:.3e}, eta residual {eta_resid:.3e}, order ratio {ratio:.2}"),
    );
}

// --- criterion 9: line-determination certificate -------------------------------

#[test]
fn criterion_9_line_certificate() {
    let mut rng = ChaCha12Rng::seed_from_u64(1009);
    let mut false_negatives = 0usize;
    let mut misses = 0usize;
    let mut bound_violations = 0usize;
    for i in 0..500 {
        let m = [4usize, 6][i % 2];
        let j1 = random_structure(&mut rng, m);
        // Equal pair: must certify, and the certified bound must hold.
        match shared_lines_certificate(&j1, &j1, &tol()) {
            Ok(true) => {}
            Ok(false) => false_negatives += 1,
            Err(_) => bound_violations += 1,
        }
        // Distinct pair: generic conjugation moves some certificate plane.
        let j2 = loop {
            let q = random_invertible(&mut rng, m, 0.2);
            let qi = q.clone().try_inverse().unwrap();
            let cand = ComplexStructure::new(&q * j1.matrix() * qi, &tol()).unwrap();
            if fro_norm(&(cand.matrix() - j1.matrix())) > 1e-4 {
                break cand;
            }
        };
        match shared_lines_certificate(&j1, &j2, &tol()) {
            Ok(false) => {}
            Ok(true) => misses += 1,
            Err(_) => bound_violations += 1,
        }
    }
    let ok = false_negatives == 0 && misses == 0 && bound_violations == 0;
    verdict(
        "9 (line certificate)",
        ok,
        &format!("{false_negatives} false negatives, {misses} misses, {bound_violations} bound violations"),
    );
}
