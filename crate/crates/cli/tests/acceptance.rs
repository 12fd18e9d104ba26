//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p gframe-lab --test acceptance`.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use gframe_core::controlled::{
    controlled_bounds, equivalence_audit, frame_equivalence, induced_controlled_check, product_root,
    synthesis_norm_audit,
};
use gframe_core::duals::{
    canonical_dual, controlled_canonical_dual, dual_to_left_inverse, left_inverse_to_dual, lower_bound_inference,
    parametrization_audit, pseudo_inverse_left_inverse, reconstruction_equivalence_audit, CanonicalMode,
    DEFAULT_SAMPLES,
};
use gframe_core::sampling::{random_unitary, seeded_rng};
use gframe_core::scenarios::{
    noncommuting_fixture, random_scenario, rank_deficient_fixture, save_scenario, trig_example, RandomSpec,
};
use gframe_core::{Controller, GFrameFamily, Matrix, OrthonormalBasis, Scenario, Tolerances};
use tempfile::TempDir;

type Check = Result<String, String>;
type Pairs = Vec<(Scenario, GFrameFamily)>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 100 scenarios: n ≤ 6, at most 16 nodes, controller condition ≤ 100,
/// `Σd_w ≥ n`, alternating commuting and generic controllers.
fn suite() -> Vec<Scenario> {
    const CONDITIONS: [f64; 4] = [1.5, 5.0, 20.0, 100.0];
    (0..100u64)
        .map(|i| {
            let n = 1 + (i % 6) as usize;
            let nodes = 1 + ((i * 7) % 16) as usize;
            let mut blocks: Vec<usize> = (0..nodes).map(|w| 1 + (i as usize + 3 * w) % 3).collect();
            while blocks.iter().sum::<usize>() < n && blocks.len() < 16 {
                blocks.push(1 + blocks.len() % 3);
            }
            random_scenario(&RandomSpec {
                n,
                blocks,
                condition: CONDITIONS[(i / 2 % 4) as usize],
                commuting: i % 2 == 0,
                seed: 1000 + i,
            })
            .expect("suite scenario")
        })
        .collect()
}

fn max_block_diff(a: &GFrameFamily, b: &GFrameFamily) -> f64 {
    (&a.stacked_blocks() - &b.stacked_blocks()).max_abs()
}

// Closed-form 2×2 oracles, independent of the eigen solver.

fn inv2(m: &Matrix) -> Matrix {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let det = a * d - b * c;
    Matrix::from_row_major(2, 2, vec![d / det, -b / det, -c / det, a / det]).unwrap()
}

fn norm2x2(m: &Matrix) -> f64 {
    let g = &m.adjoint() * m;
    let (a, d, b) = (g[(0, 0)].re, g[(1, 1)].re, g[(0, 1)]);
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
    (mean + radius).sqrt()
}

fn criterion_1() -> Check {
    let tol = Tolerances::default();
    let s = trig_example(1024, Controller::identity(2), Controller::identity(2)).map_err(|e| e.to_string())?;
    let plain = s.lambda.frame_bounds(&tol);
    ensure(
        (plain.lower_bound - PI).abs() <= 1e-6 && (plain.upper_bound - PI).abs() <= 1e-6,
        || format!("plain bounds ({}, {})", plain.lower_bound, plain.upper_bound),
    )?;
    ensure(plain.tight, || "tight flag not set".into())?;
    let p = Controller::from_diagonal(&[2.0, 1.0]).unwrap();
    let q = Controller::from_diagonal(&[3.0, 1.0]).unwrap();
    let c = controlled_bounds(&s.lambda, &p, &q, &tol).map_err(|e| e.to_string())?;
    let (dl, du) = ((c.controlled_lower - PI).abs(), (c.controlled_upper - 6.0 * PI).abs());
    ensure(dl <= 1e-6 && du <= 1e-6, || {
        format!("controlled bounds ({}, {})", c.controlled_lower, c.controlled_upper)
    })?;
    Ok(format!(
        "plain A,B err {:.1e}, controlled err {:.1e}",
        (plain.lower_bound - PI).abs(),
        dl.max(du)
    ))
}

fn criterion_2(suite: &[Scenario]) -> Check {
    let tol = Tolerances::default();
    let (mut applicable, mut worst) = (0, f64::INFINITY);
    for s in suite {
        let eq = frame_equivalence(&s.lambda, &s.p, &s.q, &tol).map_err(|e| format!("{}: {e}", s.label))?;
        if !eq.applicable {
            continue;
        }
        applicable += 1;
        ensure(eq.verdicts_agree, || format!("{}: verdicts differ", s.label))?;
        ensure(eq.min_slack >= -1e-10, || {
            format!("{}: slack {}", s.label, eq.min_slack)
        })?;
        worst = worst.min(eq.min_slack);
    }
    ensure(applicable >= 50, || {
        format!("only {applicable} scenarios with a real form")
    })?;
    Ok(format!("{applicable}/100 with real form, min slack {worst:.2e}"))
}

fn criterion_3(suite: &[Scenario]) -> Check {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for s in suite.iter().filter(|s| s.label.contains("commuting-")) {
        let a = equivalence_audit(&s.lambda, &s.p, &s.q, 64, 7, &tol).map_err(|e| e.to_string())?;
        ensure(a.root_form.is_some(), || format!("{}: root undefined", s.label))?;
        ensure(a.max_discrepancy() <= 1e-10, || {
            format!("{}: discrepancy {}", s.label, a.max_discrepancy())
        })?;
        ensure(a.statements.unanimous(), || format!("{}: statements disagree", s.label))?;
        worst = worst.max(a.max_discrepancy());
        count += 1;
    }
    ensure(count == 50, || format!("{count} commuting scenarios"))?;
    let fx = noncommuting_fixture().unwrap();
    let a = equivalence_audit(&fx.lambda, &fx.p, &fx.q, 64, 7, &tol).map_err(|e| e.to_string())?;
    ensure(a.max_discrepancy() > 1e-3, || {
        format!("fixture discrepancy {}", a.max_discrepancy())
    })?;
    let c = a.commutation;
    ensure(c.pq > 1e-3 && c.ps > 1e-3 && c.qs > 1e-3, || {
        format!("fixture commutators {c:?}")
    })?;
    Ok(format!(
        "commuting max {worst:.1e}; fixture {:.3} with ‖[P,Q]‖={:.3} ‖[P,S]‖={:.3} ‖[Q,S]‖={:.3}",
        a.max_discrepancy(),
        c.pq,
        c.ps,
        c.qs
    ))
}

fn criterion_4(suite: &[Scenario]) -> Check {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let fixtures = [noncommuting_fixture().unwrap(), rank_deficient_fixture().unwrap()];
    for (i, s) in suite.iter().chain(&fixtures).enumerate() {
        let space = s.lambda.space();
        let bases = if i % 2 == 1 {
            let mut rng = seeded_rng(i as u64);
            (0..space.len())
                .map(|w| OrthonormalBasis::new(random_unitary(&mut rng, space.block_dim(w)), w, &tol).unwrap())
                .collect()
        } else {
            OrthonormalBasis::standard_bases(space)
        };
        let c = induced_controlled_check(&s.lambda, &s.p, &s.q, &bases, 20, i as u64, &tol)
            .map_err(|e| format!("{}: {e}", s.label))?;
        let m = c.vector_form.max(c.reweighted_form);
        ensure(m <= 1e-12, || format!("{}: form discrepancy {m}", s.label))?;
        worst = worst.max(m);
    }
    Ok(format!("102 scenarios × 20 vectors, max relative {worst:.1e}"))
}

fn criterion_5(suite: &[Scenario]) -> Check {
    let tol = Tolerances::default();
    let (mut general, mut symmetric) = (0.0f64, 0.0f64);
    for s in suite {
        let g =
            canonical_dual(&s.lambda, &s.p, CanonicalMode::General, &tol).map_err(|e| format!("{}: {e}", s.label))?;
        ensure(g.certificate.residual <= 1e-10, || {
            format!("{}: general {}", s.label, g.certificate.residual)
        })?;
        general = general.max(g.certificate.residual);
        if s.label.contains("commuting-") {
            let d = canonical_dual(&s.lambda, &s.p, CanonicalMode::Symmetric, &tol).map_err(|e| e.to_string())?;
            ensure(d.certificate.residual <= 1e-10, || {
                format!("{}: paper mode {}", s.label, d.certificate.residual)
            })?;
            symmetric = symmetric.max(d.certificate.residual);
        }
    }
    let fx = noncommuting_fixture().unwrap();
    let d = canonical_dual(&fx.lambda, &fx.p, CanonicalMode::Symmetric, &tol).map_err(|e| e.to_string())?;
    let s = fx.lambda.frame_operator();
    let p = fx.p.matrix();
    let oracle = norm2x2(&(&(&(&(p * &s) * &inv2(p)) * &inv2(&s)) - &Matrix::identity(2)));
    let r = d.certificate.residual;
    ensure(r > 1e-3, || format!("fixture residual {r}"))?;
    ensure((r - oracle).abs() <= 1e-10, || {
        format!("fixture residual {r} vs oracle {oracle}")
    })?;
    Ok(format!(
        "general max {general:.1e}, paper mode (commuting) max {symmetric:.1e}, fixture {r:.6} = oracle"
    ))
}

fn criterion_6() -> Check {
    let tol = Tolerances::default();
    let mut lines = Vec::new();
    for (commuting, mode) in [(false, CanonicalMode::General), (true, CanonicalMode::Symmetric)] {
        let s = random_scenario(&RandomSpec {
            n: 3,
            blocks: vec![2, 1, 2, 2],
            condition: 20.0,
            commuting,
            seed: 77,
        })
        .unwrap();
        let (mut residual, mut kernel, mut trip, mut slack) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
        for seed in 1..=50 {
            let a = parametrization_audit(&s.lambda, &s.p, mode, seed, &tol).map_err(|e| e.to_string())?;
            ensure(a.bounds.kernel_norm_sq > 1e-6, || {
                format!("seed {seed}: trivial kernel operator")
            })?;
            ensure(a.certificate.residual <= 1e-10, || {
                format!("seed {seed}: residual {}", a.certificate.residual)
            })?;
            ensure(a.kernel_residual <= 1e-10, || {
                format!("seed {seed}: kernel {}", a.kernel_residual)
            })?;
            ensure(a.extracted_residual <= 1e-10, || {
                format!("seed {seed}: extracted {}", a.extracted_residual)
            })?;
            let rel_trip = a.round_trip / a.bounds.kernel_norm_sq.sqrt().max(1.0);
            ensure(rel_trip <= 1e-12, || {
                format!("seed {seed}: round trip {}", a.round_trip)
            })?;
            let sl = a.bounds.kernel_slack().min(a.bounds.bessel_slack());
            ensure(sl >= -1e-8, || format!("seed {seed}: estimate slack {sl}"))?;
            residual = residual.max(a.certificate.residual);
            kernel = kernel.max(a.kernel_residual);
            trip = trip.max(rel_trip);
            slack = slack.min(sl);
        }
        lines.push(format!(
            "{}: residual {residual:.1e}, ‖T_PΛP T‖ {kernel:.1e}, round trip {trip:.1e}, slack {slack:.2e}",
            mode.as_str()
        ));
    }
    Ok(lines.join("; "))
}

/// Certified `(P, Q)` dual pairs from the suite plus non-dual pairs.
fn dual_pairs(suite: &[Scenario]) -> Result<(Pairs, Pairs), String> {
    let tol = Tolerances::default();
    let (mut duals, mut others) = (Vec::new(), Vec::new());
    for s in suite {
        let d = controlled_canonical_dual(&s.lambda, &s.p, &s.q, &tol).map_err(|e| format!("{}: {e}", s.label))?;
        if !d.certificate.is_dual {
            return Err(format!("{}: canonical dual not certified", s.label));
        }
        others.push((s.clone(), d.gamma.scaled(1.01)));
        others.push((s.clone(), s.lambda.clone()));
        duals.push((s.clone(), d.gamma));
    }
    let fx = noncommuting_fixture().unwrap();
    let symmetric = canonical_dual(&fx.lambda, &fx.p, CanonicalMode::Symmetric, &tol).unwrap();
    let id = Controller::identity(2);
    let fx_id = Scenario::new(fx.label.clone(), 0, fx.lambda.clone(), None, fx.p.clone(), id).unwrap();
    others.push((fx_id, symmetric.gamma));
    Ok((duals, others))
}

fn criterion_7(duals: &[(Scenario, GFrameFamily)], others: &[(Scenario, GFrameFamily)]) -> Check {
    let tol = Tolerances::default();
    let mut worst_pass = 0.0f64;
    let mut best_fail = f64::INFINITY;
    for (s, g) in duals {
        let a = reconstruction_equivalence_audit(&s.lambda, g, &s.p, &s.q, DEFAULT_SAMPLES, 3, &tol)
            .map_err(|e| format!("{}: {e}", s.label))?;
        let m = a.certificate.max_condition();
        ensure(m <= 1e-10, || {
            format!("{}: conditions {:?}", s.label, a.certificate.condition_checks)
        })?;
        worst_pass = worst_pass.max(m);
    }
    let mut unanimous = 0;
    for (s, g) in others {
        let a = reconstruction_equivalence_audit(&s.lambda, g, &s.p, &s.q, DEFAULT_SAMPLES, 3, &tol)
            .map_err(|e| format!("{}: {e}", s.label))?;
        if a.certificate.is_dual {
            continue;
        }
        let c = a.certificate.condition_checks;
        ensure(a.all_fail, || format!("{}: mixed conditions {c:?}", s.label))?;
        best_fail = c.iter().copied().fold(best_fail, f64::min);
        unanimous += 1;
    }
    Ok(format!(
        "{} dual pairs max {worst_pass:.1e}; {unanimous} non-dual pairs min {best_fail:.1e}; unanimity 100%",
        duals.len()
    ))
}

fn criterion_8(suite: &[Scenario]) -> Check {
    let tol = Tolerances::default();
    let (mut count, mut worst) = (0, 0.0f64);
    let fixtures = [noncommuting_fixture().unwrap(), rank_deficient_fixture().unwrap()];
    for s in suite.iter().chain(&fixtures) {
        for q in [&s.q, &s.p] {
            if product_root(&s.p, q, &tol).is_err() {
                continue;
            }
            let a = synthesis_norm_audit(&s.lambda, &s.p, q, &tol).map_err(|e| format!("{}: {e}", s.label))?;
            ensure(a.relative_gap <= 1e-10, || {
                format!("{}: gap {}", s.label, a.relative_gap)
            })?;
            worst = worst.max(a.relative_gap);
            count += 1;
        }
    }
    Ok(format!(
        "{count} controller pairs with a defined root, max relative gap {worst:.1e}"
    ))
}

fn criterion_9(duals: &[(Scenario, GFrameFamily)]) -> Check {
    let tol = Tolerances::default();
    let mut slack = f64::INFINITY;
    for (s, g) in duals {
        let inf = lower_bound_inference(&s.lambda, g, &s.p, &s.q, &tol).map_err(|e| format!("{}: {e}", s.label))?;
        let sl = (inf.actual_gamma_lower - inf.inferred_gamma_lower)
            .min(inf.actual_lambda_lower - inf.inferred_lambda_lower);
        ensure(sl >= -1e-10, || format!("{}: slack {sl}", s.label))?;
        ensure(!inf.vacuous, || {
            format!("{}: vacuous inference on a dual pair", s.label)
        })?;
        slack = slack.min(sl);
    }
    Ok(format!("{} dual pairs, min slack {slack:.2e}", duals.len()))
}

fn criterion_10(duals: &[(Scenario, GFrameFamily)]) -> Check {
    let tol = Tolerances::default();
    let (mut trip, mut basis, mut pinv) = (0.0f64, 0.0f64, 0.0f64);
    for (s, g) in duals {
        let li = dual_to_left_inverse(&s.lambda, g, &s.p, &s.q, &tol).map_err(|e| format!("{}: {e}", s.label))?;
        let back = left_inverse_to_dual(&s.lambda, &s.p, &s.q, &li.u, &tol).map_err(|e| format!("{}: {e}", s.label))?;
        let d = max_block_diff(&back.gamma, g);
        ensure(d <= 1e-10, || format!("{}: round trip {d}", s.label))?;
        ensure(li.basis_residual <= 1e-10, || {
            format!("{}: basis identity {}", s.label, li.basis_residual)
        })?;
        trip = trip.max(d);
        basis = basis.max(li.basis_residual);

        // The pseudo-inverse left-inverse with Q = I gives the general canonical dual.
        let id = Controller::identity(s.lambda.ambient_dim());
        let u = pseudo_inverse_left_inverse(&s.lambda, &s.p);
        let from_pinv = left_inverse_to_dual(&s.lambda, &s.p, &id, &u, &tol).map_err(|e| e.to_string())?;
        let canonical = canonical_dual(&s.lambda, &s.p, CanonicalMode::General, &tol).map_err(|e| e.to_string())?;
        let d = max_block_diff(&from_pinv.gamma, &canonical.gamma);
        ensure(d <= 1e-10, || {
            format!("{}: pseudo-inverse dual differs by {d}", s.label)
        })?;
        pinv = pinv.max(d);
    }
    Ok(format!(
        "{} pairs, round trip {trip:.1e}, basis identity {basis:.1e}, pseudo-inverse oracle {pinv:.1e}",
        duals.len()
    ))
}

fn run_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_gframe-lab"))
        .args(args)
        .output()
        .expect("spawn gframe-lab");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_11() -> Check {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let save = |s: &Scenario, name: &str| save_scenario(s, Path::new(&path(name))).map_err(|e| e.to_string());
    save(&noncommuting_fixture().unwrap(), "nc.json")?;
    save(&rank_deficient_fixture().unwrap(), "rd.json")?;
    let (e, nc, rd, r2, dual) = (
        path("e.json"),
        path("nc.json"),
        path("rd.json"),
        path("r2.json"),
        path("d.json"),
    );
    let missing = path("missing.json");

    let gen_e = ["gen", "--preset", "example15", "--nodes", "256", "--out", e.as_str()];
    let gen_r = [
        "gen",
        "--preset",
        "random",
        "--n",
        "2",
        "--blocks",
        "1",
        "--seed",
        "1",
        "--out",
        r2.as_str(),
    ];
    ensure(run_bin(&gen_e).0 == 0 && run_bin(&gen_r).0 == 0, || "gen failed".into())?;

    let cases: Vec<(i32, Vec<&str>)> = vec![
        (0, vec!["check", &e, "--format", "json"]),
        (
            1,
            vec!["audit", &nc, "--theorem", "3.7", "--mode", "paper", "--format", "json"],
        ),
        (2, vec!["check", &rd, "--format", "json"]),
        (3, vec!["check", &r2, "--format", "json"]),
        (
            4,
            vec!["dual", &rd, "--mode", "general", "--out", &dual, "--format", "json"],
        ),
        (64, vec!["audit", &nc, "--theorem", "4.2"]),
        (65, vec!["check", &missing]),
        (66, vec!["audit", &nc, "--theorem", "3.4", "--format", "json"]),
    ];
    for (expected, args) in &cases {
        let (code, first) = run_bin(args);
        ensure(code == *expected, || {
            format!("{args:?}: exit {code}, expected {expected}")
        })?;
        let (_, second) = run_bin(args);
        ensure(first == second, || format!("{args:?}: output differs between runs"))?;
    }

    let before = std::fs::read(&e).map_err(|e| e.to_string())?;
    run_bin(&gen_e);
    ensure(std::fs::read(&e).map_err(|e| e.to_string())? == before, || {
        "gen is not byte-identical".into()
    })?;
    Ok(format!(
        "{} exit codes exercised, reports byte-identical across runs",
        cases.len()
    ))
}

fn main() {
    let suite = suite();
    let pairs = dual_pairs(&suite);
    let criteria: Vec<Criterion> = vec![
        ("example fixture bounds", Box::new(criterion_1)),
        ("plain/controlled equivalence", Box::new(|| criterion_2(&suite))),
        ("equivalence chain audit", Box::new(|| criterion_3(&suite))),
        ("induced sequences", Box::new(|| criterion_4(&suite))),
        ("canonical duals", Box::new(|| criterion_5(&suite))),
        ("dual parametrization", Box::new(criterion_6)),
        (
            "reconstruction conditions",
            Box::new(|| {
                pairs
                    .as_ref()
                    .map_err(Clone::clone)
                    .and_then(|(d, o)| criterion_7(d, o))
            }),
        ),
        ("synthesis norm", Box::new(|| criterion_8(&suite))),
        (
            "lower bound inference",
            Box::new(|| pairs.as_ref().map_err(Clone::clone).and_then(|(d, _)| criterion_9(d))),
        ),
        (
            "left-inverse round trip",
            Box::new(|| pairs.as_ref().map_err(Clone::clone).and_then(|(d, _)| criterion_10(d))),
        ),
        ("cli contract", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
