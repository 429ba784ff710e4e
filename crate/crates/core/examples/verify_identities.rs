//! Re-derives every coefficient identity exactly and prints the step table.
//!
//! `cargo run --example verify_identities`

use kahler_sobolev::algebra::verify::{self, PassReport, Status};

fn show(p: &PassReport) {
    println!("{} ({})", p.name, if p.passed() { "pass" } else { "FAIL" });
    for s in &p.steps {
        let mark = if s.status == Status::Pass { "ok" } else { "fail" };
        let cleared = s.cleared_factor.as_deref().map(|f| format!(", cleared {f}")).unwrap_or_default();
        println!(
            "  [{mark}] {}: {} identities, {} points, {} sign checks{cleared}",
            s.name,
            s.checks,
            s.instantiations.len(),
            s.sign_checks
        );
        if let Some(r) = &s.residual {
            println!("        residual {r}");
        }
    }
}

fn main() -> kahler_sobolev::Result<()> {
    for i in 1..=3 {
        show(&verify::verify_lemma22(i)?);
    }
    show(&verify::verify_lemma23());
    show(&verify::verify_lemma24());
    show(&verify::verify_remark_b1());
    show(&verify::verify_lemma31());
    show(&verify::verify_section2_chain());
    show(&verify::verify_section3_chain());
    Ok(())
}
