//! The labelled graph E_2: closure of its accommodating family, the
//! resolving properties and a few products in the labelled algebra.

use cstar_corr::labelled::SetExpr;
use cstar_corr::spheres::mirror::{tail_set, u, w1};
use cstar_corr::spheres::{build_en_space, SphereConfig};

fn main() -> cstar_corr::Result<()> {
    let cfg = SphereConfig::new(2, 4)?;
    let en = build_en_space(&cfg)?;
    println!("closure: {} sets, {} atoms, horizon {}", en.members().len(), en.atoms().len(), en.horizon());

    let (lr, witness) = en.graph().is_left_resolving();
    println!("left-resolving: {lr}");
    if let Some(w) = witness {
        println!("  {} receives two edges labelled {}", w.vertex, w.label);
    }
    let weak = en.is_weakly_left_resolving()?;
    println!("weakly left-resolving: {} ({} pairs)", weak.holds, weak.pairs_checked);

    let h = en.s("h")?;
    let range = en.relative_range(&tail_set(1), &["h".to_string()])?;
    println!("r(A_1, h) = {range}");
    let lhs = en.mul(&h.star(), &h)?;
    println!("s_h* s_h = {lhs}");
    println!("s_h* s_h = p_{{w_1}}: {}", en.equals(&lhs, &en.p(&SetExpr::singleton(w1()))?)?);

    let f = en.s("f_1")?;
    let tail = en.mul(&en.p(&SetExpr::singleton(u(1)))?, &f)?;
    println!("p_{{u_1}} s_{{f_1}} = {tail}, degree {:?}", tail.degree());
    Ok(())
}
