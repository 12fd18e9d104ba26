use std::io::Write;
use std::path::Path;

use gframe_core::controlled::{
    equivalence_audit, frame_equivalence, induced_controlled_check, synthesis_norm_audit, ControlledVerdict,
    BRACKET_SLACK,
};
use gframe_core::duals::{
    check_duality, dual_parametrization, dual_to_left_inverse, kernel_sampler, left_inverse_to_dual,
    lower_bound_inference, parametrization_audit, reconstruction_equivalence_audit, KernelOperator, DEFAULT_SAMPLES,
    DEFAULT_SEED, ESTIMATE_SLACK,
};
use gframe_core::scenarios::{load_scenario, random_scenario, save_scenario, trig_example, RandomSpec};
use gframe_core::{Controller, Error, OrthonormalBasis, Scenario, Tolerances};

use crate::report::Report;
use crate::{exit, AuditArgs, AuditTarget, CheckArgs, Command, DualArgs, Format, GenArgs, OutputArgs, Preset};

pub(crate) fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match command {
        Command::Check(args) => check(args, stdout, stderr),
        Command::Audit(args) => audit(args, stdout, stderr),
        Command::Dual(args) => dual(args, stdout, stderr),
        Command::Gen(args) => generate(args, stdout, stderr),
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::SingularFrameOperator(_) => exit::SINGULAR,
        Error::BesselPreconditionFailed(_) => exit::NOT_FRAME,
        Error::NonCommutingControllers { .. }
        | Error::KernelViolation { .. }
        | Error::NotLeftInverse { .. }
        | Error::NotDual { .. } => exit::AUDIT_FAIL,
        _ => exit::IO_FORMAT,
    }
}

fn fail(stderr: &mut dyn Write, code: i32, message: impl std::fmt::Display) -> i32 {
    let _ = writeln!(stderr, "gframe-lab: {message}");
    code
}

fn load(path: &Path, stderr: &mut dyn Write) -> Result<Scenario, i32> {
    load_scenario(path).map_err(|e| fail(stderr, exit::IO_FORMAT, e))
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

fn emit(report: &Report, output: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = render(report, output.format);
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return fail(stderr, exit::IO_FORMAT, format!("cannot write {}: {e}", path.display()));
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    report.exit_code
}

/// Runs `fill`; errors become a note plus the matching exit code.
fn complete(report: &mut Report, fill: impl FnOnce(&mut Report) -> Result<i32, Error>) {
    report.exit_code = match fill(report) {
        Ok(code) => code,
        Err(e) => {
            report.note(e.to_string());
            error_code(&e)
        }
    };
}

fn audit_code(report: &Report) -> i32 {
    if report.all_passed() {
        exit::PASS
    } else {
        exit::AUDIT_FAIL
    }
}

fn check(args: CheckArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let tol = match args.tolerances.resolve() {
        Ok(t) => t,
        Err(e) => return fail(stderr, exit::USAGE, e),
    };
    let s = match load(&args.scenario, stderr) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let mut report = Report::new("check", &s.label, s.seed, tol);
    complete(&mut report, |r| fill_check(r, &s, &tol));
    emit(&report, &args.output, stdout, stderr)
}

fn fill_check(r: &mut Report, s: &Scenario, tol: &Tolerances) -> Result<i32, Error> {
    let eq = frame_equivalence(&s.lambda, &s.p, &s.q, tol)?;
    let plain = &eq.plain;
    let c = &eq.controlled;
    r.metric("plain_lower", plain.lower_bound, tol.frame_floor);
    r.metric("plain_upper", plain.upper_bound, tol.frame_floor);
    r.verdict("plain_frame", plain.is_frame(), "plain_lower", tol.frame_floor);
    let gap_tol = tol.identity_tol * plain.upper_bound.abs().max(1.0);
    r.metric("plain_bound_gap", plain.upper_bound - plain.lower_bound, gap_tol);
    r.verdict("plain_tight", plain.tight, "plain_bound_gap", gap_tol);
    let parseval_gap = (plain.lower_bound - 1.0).abs().max((plain.upper_bound - 1.0).abs());
    r.metric("plain_parseval_gap", parseval_gap, tol.identity_tol);
    r.verdict("plain_parseval", plain.parseval, "plain_parseval_gap", tol.identity_tol);

    r.metric("controlled_lower", c.controlled_lower, tol.frame_floor);
    r.metric("controlled_upper", c.controlled_upper, tol.frame_floor);
    r.verdict("controlled_frame", c.is_frame(), "controlled_lower", tol.frame_floor);
    let defect_limit = tol.defect_tol * c.defect_scale;
    r.metric("hermitian_defect", c.hermitian_defect, defect_limit);
    r.verdict("real_form", eq.applicable, "hermitian_defect", defect_limit);
    r.metric(
        "commutator_pq",
        c.commutation.pq,
        tol.commute_tol * s.p.norm() * s.q.norm(),
    );
    r.metric("commutator_ps", c.commutation.ps, defect_limit);
    r.metric("commutator_qs", c.commutation.qs, defect_limit);

    r.metric("to_controlled_lower", eq.to_controlled.0, tol.frame_floor);
    r.metric("to_controlled_upper", eq.to_controlled.1, tol.frame_floor);
    match eq.to_plain {
        Some((a, b)) => {
            r.metric("to_plain_lower", a, tol.frame_floor);
            r.metric("to_plain_upper", b, tol.frame_floor);
        }
        None => r.note("P and Q do not commute: (PQ)^1/2 is undefined, no plain bounds inferred"),
    }
    r.metric("bracket_min_slack", eq.min_slack, BRACKET_SLACK);
    r.notes.extend(plain.notes.iter().map(|n| format!("plain: {n}")));
    Ok(match c.verdict {
        ControlledVerdict::ControlledFrame => exit::PASS,
        ControlledVerdict::ControlledBessel => exit::BESSEL_ONLY,
        ControlledVerdict::Fail => exit::NOT_FRAME,
    })
}

fn audit(args: AuditArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let tol = match args.tolerances.resolve() {
        Ok(t) => t,
        Err(e) => return fail(stderr, exit::USAGE, e),
    };
    let s = match load(&args.scenario, stderr) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let theorem = args.theorem;
    let seed = if theorem == AuditTarget::Parametrization {
        args.kernel_seed
    } else {
        args.seed
    };
    let mut report = Report::new(&format!("audit {}", theorem.label()), &s.label, seed, tol);
    if theorem.needs_gamma() && s.gamma.is_none() {
        report.note("scenario has no gamma family");
        report.exit_code = exit::INCOMPLETE;
        let _ = emit(&report, &args.output, stdout, stderr);
        return exit::INCOMPLETE;
    }
    complete(&mut report, |r| fill_audit(r, &s, &args, &tol));
    emit(&report, &args.output, stdout, stderr)
}

fn fill_audit(r: &mut Report, s: &Scenario, args: &AuditArgs, tol: &Tolerances) -> Result<i32, Error> {
    let (lambda, p, q) = (&s.lambda, &s.p, &s.q);
    match args.theorem {
        AuditTarget::Equivalence => {
            let eq = frame_equivalence(lambda, p, q, tol)?;
            let c = &eq.controlled;
            r.metric("plain_lower", eq.plain.lower_bound, tol.frame_floor);
            r.metric("plain_upper", eq.plain.upper_bound, tol.frame_floor);
            r.metric("controlled_lower", c.controlled_lower, tol.frame_floor);
            r.metric("controlled_upper", c.controlled_upper, tol.frame_floor);
            r.at_most("hermitian_defect", c.hermitian_defect, tol.defect_tol * c.defect_scale);
            r.verdict("verdicts_agree", eq.verdicts_agree, "controlled_lower", tol.frame_floor);
            r.metric("bracket_min_slack", eq.min_slack, BRACKET_SLACK);
            r.verdict(
                "bounds_bracketed",
                eq.min_slack >= -BRACKET_SLACK,
                "bracket_min_slack",
                BRACKET_SLACK,
            );
            if eq.to_plain.is_none() {
                r.note("P and Q do not commute: only the plain-to-controlled conversion is checked");
            }
        }
        AuditTarget::RootControlled | AuditTarget::ProductControlled => {
            let a = equivalence_audit(lambda, p, q, args.samples, args.seed, tol)?;
            let commute_limit = tol.commute_tol * p.norm() * q.norm();
            r.metric("commutator_pq", a.commutation.pq, commute_limit);
            r.metric("commutator_ps", a.commutation.ps, tol.identity_tol * a.scale);
            r.metric("commutator_qs", a.commutation.qs, tol.identity_tol * a.scale);
            r.at_most("qps_form", a.qps_form, tol.identity_tol);
            r.at_most("imaginary_part", a.imaginary_part, tol.identity_tol);
            match a.root_form {
                Some(d) => {
                    r.at_most("root_form", d, tol.identity_tol);
                }
                None => r.verdict("root_defined", false, "commutator_pq", commute_limit),
            }
            let st = &a.statements;
            if args.theorem == AuditTarget::RootControlled {
                let agree = st.root_controlled == Some(st.pq_controlled);
                r.verdict("root_statement_agrees", agree, "qps_form", tol.identity_tol);
            } else {
                r.at_most("product_pq_form", a.product_pq_form, tol.identity_tol);
                r.at_most("product_qp_form", a.product_qp_form, tol.identity_tol);
                r.verdict(
                    "statements_unanimous",
                    st.unanimous(),
                    "product_qp_form",
                    tol.identity_tol,
                );
            }
        }
        AuditTarget::InducedVectors | AuditTarget::InducedReweighted => {
            let bases = OrthonormalBasis::standard_bases(lambda.space());
            let c = induced_controlled_check(lambda, p, q, &bases, args.samples, args.seed, tol)?;
            if args.theorem == AuditTarget::InducedVectors {
                r.at_most("vector_form", c.vector_form, tol.form_tol);
                r.metric("vector_lower", c.vector_report.lower_bound, tol.frame_floor);
                r.metric("vector_upper", c.vector_report.upper_bound, tol.frame_floor);
            } else {
                r.at_most("reweighted_form", c.reweighted_form, tol.form_tol);
                r.metric("reweighted_lower", c.reweighted_report.lower_bound, tol.frame_floor);
                r.metric("reweighted_upper", c.reweighted_report.upper_bound, tol.frame_floor);
            }
        }
        AuditTarget::LowerBound => {
            let gamma = s.gamma.as_ref().expect("checked by caller");
            let inf = lower_bound_inference(lambda, gamma, p, q, tol)?;
            r.metric("lambda", inf.lambda, tol.frame_floor);
            r.metric("bessel_lambda", inf.bessel_lambda, tol.frame_floor);
            r.metric("bessel_gamma", inf.bessel_gamma, tol.frame_floor);
            r.metric("inferred_gamma_lower", inf.inferred_gamma_lower, tol.identity_tol);
            r.metric("actual_gamma_lower", inf.actual_gamma_lower, tol.identity_tol);
            r.metric("inferred_lambda_lower", inf.inferred_lambda_lower, tol.identity_tol);
            r.metric("actual_lambda_lower", inf.actual_lambda_lower, tol.identity_tol);
            r.at_most(
                "gamma_bound_deficit",
                inf.inferred_gamma_lower - inf.actual_gamma_lower,
                tol.identity_tol,
            );
            r.at_most(
                "lambda_bound_deficit",
                inf.inferred_lambda_lower - inf.actual_lambda_lower,
                tol.identity_tol,
            );
            if inf.vacuous {
                r.note("S_PΛΓQ is not bounded below: the inference is vacuous");
            }
        }
        AuditTarget::Reconstruction => {
            let gamma = s.gamma.as_ref().expect("checked by caller");
            let a = reconstruction_equivalence_audit(lambda, gamma, p, q, args.samples, args.seed, tol)?;
            for (k, v) in a.certificate.condition_checks.iter().enumerate() {
                r.metric(&format!("condition_{}", k + 1), *v, tol.dual_tol);
            }
            r.verdict("conditions_unanimous", a.unanimous(), "condition_1", tol.dual_tol);
            r.at_most("polarization_form", a.polarization_form, tol.identity_tol);
            r.metric("polarization_inner", a.polarization_inner, tol.dual_tol);
            r.note(if a.all_pass {
                "the pair is a controlled dual"
            } else {
                "the pair is not a controlled dual"
            });
        }
        AuditTarget::SynthesisNorm => match synthesis_norm_audit(lambda, p, q, tol) {
            Ok(a) => {
                r.metric("bessel_bound", a.bessel_bound, tol.frame_floor);
                r.metric("synthesis_norm_sq", a.synthesis_norm_sq, tol.frame_floor);
                r.at_most("relative_gap", a.relative_gap, tol.identity_tol);
            }
            Err(Error::NonCommutingControllers { commutator, limit }) => {
                r.metric("commutator_pq", commutator, limit);
                r.verdict("root_defined", false, "commutator_pq", limit);
            }
            Err(e) => return Err(e),
        },
        AuditTarget::LeftInverse => {
            let gamma = s.gamma.as_ref().expect("checked by caller");
            match dual_to_left_inverse(lambda, gamma, p, q, tol) {
                Ok(li) => {
                    r.at_most("left_inverse_residual", li.left_inverse_residual, tol.dual_tol);
                    r.at_most("basis_residual", li.basis_residual, tol.identity_tol);
                    let back = left_inverse_to_dual(lambda, p, q, &li.u, tol)?;
                    let diff = (&back.gamma.stacked_blocks() - &gamma.stacked_blocks()).max_abs();
                    r.at_most("round_trip", diff, tol.identity_tol);
                    r.at_most("recovered_dual_residual", back.certificate.residual, tol.dual_tol);
                }
                Err(Error::NotDual { residual, limit }) => {
                    r.at_most("dual_residual", residual, limit);
                }
                Err(e) => return Err(e),
            }
        }
        AuditTarget::Parametrization => {
            let mode = args.mode.into();
            let a = parametrization_audit(lambda, p, mode, args.kernel_seed, tol)?;
            r.at_most("dual_residual", a.certificate.residual, tol.dual_tol);
            r.at_most("kernel_residual", a.kernel_residual, tol.kernel_tol);
            r.at_most("extracted_kernel_residual", a.extracted_residual, tol.kernel_tol);
            r.at_most(
                "round_trip",
                a.round_trip,
                tol.identity_tol * a.bounds.gamma_bessel.sqrt().max(1.0),
            );
            r.metric("kernel_norm_sq", a.bounds.kernel_norm_sq, ESTIMATE_SLACK);
            r.metric("kernel_bound", a.bounds.kernel_bound, ESTIMATE_SLACK);
            r.at_most("kernel_norm_excess", -a.bounds.kernel_slack(), ESTIMATE_SLACK);
            r.metric("gamma_bessel", a.bounds.gamma_bessel, ESTIMATE_SLACK);
            r.metric("bessel_estimate", a.bounds.bessel_estimate, ESTIMATE_SLACK);
            r.at_most("bessel_excess", -a.bounds.bessel_slack(), ESTIMATE_SLACK);
            r.note(format!("canonical part: {} mode; Q is not used", mode.as_str()));
        }
    }
    Ok(audit_code(r))
}

fn dual(args: DualArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let tol = match args.tolerances.resolve() {
        Ok(t) => t,
        Err(e) => return fail(stderr, exit::USAGE, e),
    };
    let s = match load(&args.scenario, stderr) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let mut report = Report::new("dual", &s.label, args.kernel_seed, tol);
    let mut built = None;
    complete(&mut report, |r| {
        let mode = args.mode.into();
        let (lambda, p, q) = (&s.lambda, &s.p, &s.q);
        let t = if args.kernel_seed == 0 {
            KernelOperator::zero(lambda.space().clone(), lambda.ambient_dim())
        } else {
            kernel_sampler(lambda, p, args.kernel_seed, &tol)?
        };
        let controlled = dual_parametrization(lambda, p, &t, mode, &tol)?;
        // A P-controlled dual composed with Q⁻¹ is a (P, Q)-controlled dual.
        let gamma = controlled.gamma.map_blocks(|_, b| b * q.inv())?;
        let cert = check_duality(lambda, &gamma, p, q, DEFAULT_SAMPLES, DEFAULT_SEED, &tol)?;
        r.at_most("residual", cert.residual, tol.dual_tol);
        for (k, v) in cert.condition_checks.iter().enumerate() {
            r.metric(&format!("condition_{}", k + 1), *v, tol.dual_tol);
        }
        r.metric("lambda_min", cert.lambda_min, tol.frame_floor);
        r.metric("inferred_gamma_lower", cert.inferred_lower_bounds.0, tol.frame_floor);
        r.metric("inferred_lambda_lower", cert.inferred_lower_bounds.1, tol.frame_floor);
        r.metric("kernel_norm", t.norm(), tol.kernel_tol);
        r.metric("kernel_residual", t.constraint_residual(lambda, p)?, tol.kernel_tol);
        r.note(format!("canonical part: {} mode", mode.as_str()));
        built = Some(s.with_gamma(gamma)?);
        Ok(audit_code(r))
    });
    if let Some(out) = built {
        if let Err(e) = save_scenario(&out, &args.out) {
            return fail(stderr, exit::IO_FORMAT, e);
        }
    }
    let _ = stdout.write_all(render(&report, args.format).as_bytes());
    report.exit_code
}

fn generate(args: GenArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let built = match args.preset {
        Preset::Example15 => Controller::from_diagonal(&args.p_diag)
            .and_then(|p| Ok((p, Controller::from_diagonal(&args.q_diag)?)))
            .and_then(|(p, q)| trig_example(args.nodes, p, q)),
        Preset::Random => {
            if args.n == 0 || args.blocks.is_empty() {
                return fail(stderr, exit::USAGE, "--n and --blocks must be non-empty");
            }
            random_scenario(&RandomSpec {
                n: args.n,
                blocks: args.blocks.clone(),
                condition: args.cond,
                commuting: args.commuting,
                seed: args.seed,
            })
        }
    };
    let scenario = match built {
        Ok(s) => s,
        Err(e) => return fail(stderr, exit::USAGE, e),
    };
    if let Err(e) = save_scenario(&scenario, &args.out) {
        return fail(stderr, exit::IO_FORMAT, e);
    }
    let _ = writeln!(
        stdout,
        "{} seed {} -> {}",
        scenario.label,
        scenario.seed,
        args.out.display()
    );
    exit::PASS
}
