//! Hilbert spaces `C^k` as correspondences over `C`, and the isometric
//! embedding `C → C^2`, `e ↦ f1`.

use std::sync::Arc;

use super::{CorrBuilder, CorrMorphism, PresentedCorrespondence};
use crate::algebra::PresentedCommAlgebra;
use crate::error::Result;
use crate::scalar::one;

/// `C^k` with orthonormal generators `names` and the identity left action.
pub fn hilbert_space(names: &[&str]) -> Result<PresentedCorrespondence> {
    let a = PresentedCommAlgebra::orthogonal(["1"]);
    let unit = a.elem("1")?;
    let mut b = CorrBuilder::new(a, names.iter().map(|s| s.to_string()).collect())?;
    for g in names {
        b.right_to(g, "1", Some(g))?;
        b.left("1", g, &[(g, one())])?;
        b.inner(g, g, unit.clone())?;
    }
    b.build()
}

/// Satisfies (C1)–(C3) but not (C4): `φ(1)` is `θ_{e,e}` on the source and
/// `θ_{f1,f1} + θ_{f2,f2}` on the target.
pub fn isometric_embedding() -> Result<CorrMorphism> {
    let x = Arc::new(hilbert_space(&["e"])?);
    let y = Arc::new(hilbert_space(&["f1", "f2"])?);
    CorrMorphism::from_names(x, y, &[("e", vec![("f1", one())])], &[("1", vec![("1", one())])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_breaks_covariance_only() {
        let rep = isometric_embedding().unwrap().check().unwrap();
        assert!(rep.check_passed("C3"));
        assert_eq!(rep.check("C4").failed, 1);
    }
}
