//! The full sphere suite at a given rank and truncation, with one line
//! per check group.

use cstar_corr::spheres::{verify_sphere_suite, SphereConfig};

fn main() -> cstar_corr::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let rep = verify_sphere_suite(&SphereConfig::new(n, SphereConfig::DEFAULT_TRUNC)?)?;
    println!("{}", rep.title);
    for (name, s) in rep.summary() {
        let verdict = if s.failed > 0 { "FAIL" } else { "pass" };
        println!("  {verdict} {name} ({} instances)", s.passed + s.failed);
    }
    for note in &rep.notes {
        println!("note: {note}");
    }
    Ok(())
}
