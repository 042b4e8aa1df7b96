//! Gluing hypotheses for ψ: X → Z and ω: Y → Z, and the restricted
//! direct sum they determine.

use cstar_corr::corr::pullback::check_pullback_hypotheses;
use cstar_corr::spheres::{build_mirror_sum, gluing_data, SphereConfig};

fn main() -> cstar_corr::Result<()> {
    let cfg = SphereConfig::new(2, 4)?;
    let g = gluing_data(&cfg)?;
    let hyp = check_pullback_hypotheses(&g.psi, &g.omega)?;
    print!("{}", hyp.report.text());
    println!("ker φ_X: {:?}", hyp.kernel_x);
    println!("complement of ker φ_X: {:?}", hyp.complement_x);
    println!("ker φ_Y: {:?}", hyp.kernel_y);

    let ms = build_mirror_sum(&cfg, &g)?;
    let sum = &ms.sum.corr;
    println!("X ⊕_Z Y: {} generators, {} projections", sum.generators().len(), ms.projections.len());
    println!("valid correspondence: {}", sum.validate().is_valid());
    println!("projection to X:\n{}", ms.sum.to_x.check()?.text());
    Ok(())
}
