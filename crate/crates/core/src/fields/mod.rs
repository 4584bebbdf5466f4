//! Exact arithmetic in `GF(p) < GF(q) < GF(q^3)`.

mod embed;
mod gf;
mod tower;
mod upoly;

pub use embed::{DigitSolver, Embedding};
pub use gf::{Elem, Gf};
pub use tower::{nth_roots_of_unity, RootsOfUnity, TowerContext, TowerSummary};
pub use upoly::UniPoly;

use serde::{Deserialize, Serialize};

/// Serialized form of a field element: the field spec string plus the
/// coefficient vector (low to high).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub field: String,
    pub coeffs: Vec<u64>,
}

impl ElementJson {
    pub fn new(field: &Gf, a: Elem) -> ElementJson {
        ElementJson {
            field: field.spec_string(),
            coeffs: field.coeffs(a),
        }
    }

    pub fn decode(&self) -> crate::Result<(Gf, Elem)> {
        let f = Gf::parse(&self.field)?;
        let a = f.from_coeffs(&self.coeffs)?;
        Ok((f, a))
    }
}

/// `GF(p^(deg f * d))` together with the embedding of `f`.
pub fn extend(f: &Gf, d: u32) -> crate::Result<(Gf, Embedding)> {
    let big = Gf::new(f.characteristic(), f.degree() * d)?;
    let emb = Embedding::new(f, &big)?;
    Ok((big, emb))
}
