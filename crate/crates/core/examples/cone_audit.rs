//! Audit cone families against the admissibility axioms, including two
//! deliberately broken ones, and print any failure witnesses.
//!
//! ```bash
//! cargo run --example cone_audit
//! ```

use matrix_order::cone::mutants::{AllHermitianCone, ZeroedCornerCone};
use matrix_order::cone::{audit_matrix_ordered, audit_star_admissible, ConeAuditReport, MatrixCone, Verdict};
use matrix_order::{ConeOracle, OperatorAlgebra};

fn show(report: &ConeAuditReport, cone: &dyn MatrixCone) {
    println!("{} / {}: {}", report.cone, report.audit, if report.passed() { "pass" } else { "FAIL" });
    for check in &report.checks {
        let mark = match check.verdict {
            Verdict::Pass => "ok",
            Verdict::Fail => "FAIL",
            Verdict::Unknown => "?",
        };
        print!("  {mark:4} {:22} {}/{}", check.axiom, check.failures, check.trials);
        if let Some(w) = &check.witness {
            print!("  witness reproduces: {}", w.reproduces(cone));
        }
        println!();
    }
    if let Some(r) = &report.r4 {
        println!("  r4 ~ {:.6}", r.value);
    }
    if let Some(k) = &report.k {
        println!("  K  ~ {:.6}", k.value);
    }
}

fn main() {
    let m2 = OperatorAlgebra::full_matrix_algebra(2);
    let standard = ConeOracle::standard(m2.clone());
    show(&audit_star_admissible(&standard, &[1, 2], 30, 1), &standard);

    let all_herm = AllHermitianCone::new(m2.clone());
    show(&audit_star_admissible(&all_herm, &[1, 2], 30, 1), &all_herm);

    let corner = ZeroedCornerCone::new(m2);
    show(&audit_matrix_ordered(&corner, &[1, 2], 30, 1), &corner);
}
