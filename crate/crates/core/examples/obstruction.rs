//! Exhaustive search for small graphs meeting the structural constraints
//! of a sphere model, and the K0 obstruction on the smallest
//! counterexample.

use cstar_corr::graph::ktheory::indicator;
use cstar_corr::graph::{enumerate_obstruction, k0_class_membership, k_theory, DirectedGraph, ObstructionConfig};

fn main() -> cstar_corr::Result<()> {
    let rep = enumerate_obstruction(&ObstructionConfig::new(5))?;
    println!("{}", rep.text());
    let Some(first) = rep.counterexamples.first() else {
        return Ok(());
    };
    let g = DirectedGraph::from_json(first)?;
    for e in g.edges() {
        println!("  {}: {} → {}", e.name, g.vertices()[e.src], g.vertices()[e.dst]);
    }
    println!("{}", k_theory(&g).text());
    let m = k0_class_membership(&g, &indicator(&g, &["w1", "w2"]));
    println!("[p_w1 + p_w2] in the image of the presentation map: {}", m.member);
    Ok(())
}
