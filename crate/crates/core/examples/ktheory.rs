//! K-theory of the quantum disc and odd-sphere graphs.

use cstar_corr::graph::ktheory::indicator;
use cstar_corr::graph::{k0_class_membership, k_theory};
use cstar_corr::spheres::build::{build_disc_graph, build_odd_sphere_graph, loop_graph};
use cstar_corr::spheres::SphereConfig;

fn main() -> cstar_corr::Result<()> {
    for n in 1..=4 {
        let cfg = SphereConfig::new(n, 2)?;
        println!("M_{n}: {}", k_theory(&build_disc_graph(&cfg)).text());
        println!("odd sphere graph, n = {n}: {}", k_theory(&build_odd_sphere_graph(&cfg)).text());
    }
    println!("single loop: {}", k_theory(&loop_graph()).text());

    // the class of a vertex projection vanishes when its indicator lies in the image
    let m2 = build_disc_graph(&SphereConfig::new(2, 2)?);
    for v in ["v_1", "v_2", "v_3"] {
        let m = k0_class_membership(&m2, &indicator(&m2, &[v]));
        println!("[{v}] = 0 in K0(C*(M_2)): {} {:?}", m.member, m.preimage.unwrap_or_default());
    }
    Ok(())
}
