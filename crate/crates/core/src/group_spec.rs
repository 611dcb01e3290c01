//! JSON description of a pair (G, H_K):
//! `{"level": N, "generators": [[[a,b],[c,d]], ...], "galois": "full" | "detG" | [units]}`.
//! `galois` defaults to `"detG"`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gl2::{closure, GaloisSpec, ResidueMatrix, Subgroup, UnitGroup};
use crate::units::ModularCurve;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GaloisField {
    Preset(Preset),
    Units(Vec<i64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "full")]
    Full,
    #[serde(rename = "detG")]
    DetG,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub level: u32,
    pub generators: Vec<[[i64; 2]; 2]>,
    #[serde(default = "default_galois")]
    pub galois: GaloisField,
}

fn default_galois() -> GaloisField {
    GaloisField::Preset(Preset::DetG)
}

impl GroupSpec {
    /// Parse; the error keeps serde_json's line and column.
    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The diagonal subgroup mod p with H_K = (Z/pZ)^×.
    pub fn split_cartan(p: u32) -> Self {
        let gens = (1..p)
            .flat_map(|u| [[[u as i64, 0], [0, 1]], [[1, 0], [0, u as i64]]])
            .collect();
        GroupSpec { level: p, generators: gens, galois: GaloisField::Preset(Preset::Full) }
    }

    pub fn galois_spec(&self) -> GaloisSpec {
        match &self.galois {
            GaloisField::Preset(Preset::Full) => GaloisSpec::Full,
            GaloisField::Preset(Preset::DetG) => GaloisSpec::DetG,
            GaloisField::Units(u) => GaloisSpec::Explicit(u.clone()),
        }
    }

    pub fn subgroup(&self) -> Result<Subgroup> {
        let gens = self
            .generators
            .iter()
            .map(|[[a, b], [c, d]]| ResidueMatrix::new(self.level, [*a, *b, *c, *d]))
            .collect::<Result<Vec<_>>>()?;
        closure(&gens, self.level)
    }

    pub fn build(&self) -> Result<(Subgroup, UnitGroup)> {
        let g = self.subgroup()?;
        let h = g.galois_group(&self.galois_spec())?;
        Ok((g, h))
    }

    pub fn curve(&self) -> Result<ModularCurve> {
        let (g, h) = self.build()?;
        ModularCurve::new(g, h)
    }
}
