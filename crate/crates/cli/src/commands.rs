use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use decompq_core::coherent::{tradeoff_curve_coherent, verify_suite, Spin, MAX_VERIFY_J};
use decompq_core::ensembles::{analyze, induced_ensemble, qubit_fixture, EnsembleReport, Partition};
use decompq_core::optimizer::{
    optimal_exhaustive_with, optimal_greedy_with, GreedyOptions, OptimizationResult, MAX_ENUMERATION_N,
};
use decompq_core::randsphere::{tradeoff_curve, TradeoffPoint};

use crate::args::{Command, CurveCoherentArgs, CurveRandsphereArgs, DecomposeArgs, Mode, VerifyArgs};
use crate::error::{CliError, Result, Status};
use crate::format::{check_monotone, check_writable, curve_csv, write_atomic};
use crate::input::read_joint;

/// Entropy of each paired group that a hand calculation commonly quotes.
const QUOTED_PAIRED_ENTROPY: f64 = 0.81;

pub fn run(command: Command, out: &mut dyn Write) -> Result<Status> {
    match command {
        Command::ExampleQubit => example_qubit(out),
        Command::CurveRandsphere(a) => curve_randsphere(&a, out),
        Command::CurveCoherent(a) => curve_coherent(&a, out),
        Command::Decompose(a) => decompose(&a, out),
        Command::Verify(a) => verify(&a, out),
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| CliError::io("<stdout>", e))?
    };
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn print_report(out: &mut dyn Write, r: &EnsembleReport) -> Result<()> {
    let h_r: Vec<String> = r.h_r.iter().map(|h| format!("{h:.6}")).collect();
    say!(out, "  H = {:.6}", r.h);
    say!(out, "  H_r = [{}]", h_r.join(", "));
    say!(out, "  H_bar = {:.6}", r.h_bar);
    say!(out, "  Delta_H_bar = {:.6}", r.delta_h_bar);
    say!(out, "  I_bar = {:.6}", r.info);
    Ok(())
}

fn example_qubit(out: &mut dyn Write) -> Result<Status> {
    let joint = qubit_fixture();
    say!(out, "two-level fixture: |0>, |1>, |+>, |-> with weight 1/4 each");
    let singletons = Partition::singletons(4);
    let paired = Partition::from_one_based(4, &[&[1, 3], &[2, 4]])?;
    let mut paired_report = None;
    for (name, p) in [("singletons", &singletons), ("paired", &paired)] {
        let r = analyze(&induced_ensemble(&joint, p)?)?;
        say!(out, "{name} {p}");
        print_report(out, &r)?;
        paired_report = Some(r);
    }
    let h1 = paired_report.expect("two partitions reported").h_r[0];
    say!(out, "H_1 = {h1:.6}");
    say!(
        out,
        "DISCREPANCY: H_1 = {h1:.6} is the binary entropy of (1 + 1/sqrt 2)/2; the quoted value {QUOTED_PAIRED_ENTROPY} \
         is not reproduced (0.811278 is the binary entropy of 1/4)"
    );
    Ok(Status::Success)
}

/// `steps` points from `max` down to `min`; a single step gives `max`.
fn descending_grid(max: f64, min: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![max];
    }
    let h = (max - min) / (steps - 1) as f64;
    (0..steps)
        .map(|k| if k + 1 == steps { min } else { max - k as f64 * h })
        .collect()
}

fn write_curve(points: &[TradeoffPoint], args_out: &std::path::Path, out: &mut dyn Write) -> Result<Status> {
    check_monotone(points)?;
    write_atomic(args_out, &curve_csv(points))?;
    say!(out, "wrote {} rows to {}", points.len(), args_out.display());
    Ok(Status::Success)
}

fn curve_randsphere(a: &CurveRandsphereArgs, out: &mut dyn Write) -> Result<Status> {
    if a.dim < 2 {
        return Err(usage(format!("--dim must be at least 2, got {}", a.dim)));
    }
    if !(a.phi_min > 0.0 && a.phi_min < a.phi_max && a.phi_max <= FRAC_PI_2) {
        return Err(usage(format!(
            "need 0 < --phi-min < --phi-max <= pi/2, got {} and {}",
            a.phi_min, a.phi_max
        )));
    }
    if a.steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    check_writable(&a.out)?;
    let points = tradeoff_curve(a.dim, &descending_grid(a.phi_max, a.phi_min, a.steps))?;
    write_curve(&points, &a.out, out)
}

fn curve_coherent(a: &CurveCoherentArgs, out: &mut dyn Write) -> Result<Status> {
    let spin = Spin::new(a.j).map_err(|e| usage(format!("--j: {e}")))?;
    if !(a.theta_min > 0.0 && a.theta_min < a.theta_max && a.theta_max <= PI) {
        return Err(usage(format!(
            "need 0 < --theta-min < --theta-max <= pi, got {} and {}",
            a.theta_min, a.theta_max
        )));
    }
    if a.steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    check_writable(&a.out)?;
    let points = tradeoff_curve_coherent(spin, &descending_grid(a.theta_max, a.theta_min, a.steps))?;
    write_curve(&points, &a.out, out)
}

fn decompose(a: &DecomposeArgs, out: &mut dyn Write) -> Result<Status> {
    if !(a.delta_h.is_finite() && a.delta_h >= 0.0) {
        return Err(usage(format!("--delta-h must be a non-negative number, got {}", a.delta_h)));
    }
    if a.epsilon.is_nan() || a.epsilon < 0.0 {
        return Err(usage(format!("--epsilon must be non-negative, got {}", a.epsilon)));
    }
    if a.target_groups == 0 {
        return Err(usage("--target-groups must be at least 1"));
    }
    let joint = read_joint(&a.input)?;
    let result = match a.mode {
        Mode::Exhaustive => {
            if joint.d_env() > MAX_ENUMERATION_N {
                return Err(usage(format!(
                    "exhaustive mode handles at most {MAX_ENUMERATION_N} branches, the file has {}; use --mode greedy",
                    joint.d_env()
                )));
            }
            optimal_exhaustive_with(&joint, a.delta_h, a.epsilon)
        }
        Mode::Greedy => {
            if joint.pure_states().is_none() {
                return Err(usage("greedy mode needs every branch given as a ket"));
            }
            optimal_greedy_with(
                &joint,
                a.delta_h,
                GreedyOptions {
                    target_groups: a.target_groups,
                    seed: a.seed,
                    ..GreedyOptions::default()
                },
            )
        }
    };
    match result {
        Ok(r) => {
            print_result(out, &r)?;
            Ok(Status::Success)
        }
        Err(decompq_core::Error::Infeasible {
            requested,
            max_achievable,
        }) => {
            say!(out, "infeasible: requested Delta_H = {requested:.6}");
            say!(out, "max achievable Delta_H_bar = {max_achievable:.6}");
            Ok(Status::Infeasible)
        }
        Err(e) => Err(e.into()),
    }
}

fn print_result(out: &mut dyn Write, r: &OptimizationResult) -> Result<()> {
    say!(out, "partition = {}", r.partition);
    say!(out, "groups = {}", r.partition.num_groups());
    say!(out, "I_bar = {:.6}", r.report.info);
    say!(out, "Delta_H_bar = {:.6}", r.report.delta_h_bar);
    say!(out, "H = {:.6}", r.report.h);
    say!(out, "H_bar = {:.6}", r.report.h_bar);
    say!(out, "optimality = {}", r.optimality);
    Ok(())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<Status> {
    if !(1..=MAX_VERIFY_J).contains(&a.j_max) {
        return Err(usage(format!("--j-max must lie in 1..={MAX_VERIFY_J}, got {}", a.j_max)));
    }
    let report = verify_suite(a.j_max)?;
    for c in &report.checks {
        say!(out, "{c}");
    }
    for j in &report.vacuous_chernoff {
        say!(out, "tail bounds at j = {j}: vacuous (no m in either range)");
    }
    say!(out, "H_bar(j = {}, pi/2) = {:.6}", report.j_max, report.hemisphere_entropy);
    say!(out, "|H_bar - log2 j| = {:.6}", report.log_gap);
    if report.passed() {
        say!(out, "all checks passed");
        return Ok(Status::Success);
    }
    say!(out, "violations:");
    for c in report.checks.iter().filter(|c| !c.passed()) {
        for v in &c.violations {
            say!(out, "  {}: {v}", c.name);
        }
    }
    Ok(Status::Invariant)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        assert_eq!(descending_grid(1.0, 0.0, 1), vec![1.0]);
        let g = descending_grid(FRAC_PI_2, 0.3, 5);
        assert_eq!((g[0], g[4]), (FRAC_PI_2, 0.3));
        assert!(g.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn qubit_report_text() {
        let mut buf = Vec::new();
        assert_eq!(example_qubit(&mut buf).unwrap(), Status::Success);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("I_bar = 2.000000"));
        assert!(text.contains("I_bar = 1.000000"));
        assert!(text.contains("H_1 = 0.600876"));
        assert!(text.contains("DISCREPANCY"));
    }
}
