//! Conditions (C1)–(C4) for correspondence morphisms: the isometric
//! embedding C → C^2 of Hilbert spaces, then ψ: X → Z for the sphere.

use cstar_corr::corr::hilbert::isometric_embedding;
use cstar_corr::report::Report;
use cstar_corr::spheres::{gluing_data, SphereConfig};

fn show(what: &str, rep: &Report) {
    println!("{what}");
    for (name, s) in rep.summary() {
        println!("  {name}: {} passed, {} failed", s.passed, s.failed);
        if let Some(w) = s.first_failure {
            println!("    witness: {w}");
        }
    }
}

fn main() -> cstar_corr::Result<()> {
    show("C → C^2, e ↦ f1", &isometric_embedding()?.check()?);

    let g = gluing_data(&SphereConfig::new(2, 4)?)?;
    println!("X: {} generators over an algebra of rank {}", g.xa.generators().len(), g.xa.algebra().atoms());
    show("ψ: X → Z", &g.psi.check()?);
    show("ω: Y → Z", &g.omega.check()?);
    Ok(())
}
