//! JSON descriptions of groups, modules and cochains.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Zpm};

use super::cochain::Cochain;
use super::group::{Character, FiniteGroup};
use super::module::GModule;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    UnitsMod { p: u64, n: u32, m: u32 },
    OnePlusP { p: u64, n: u32, m: u32 },
    Kummer { p: u64, m: u32, k: u32 },
    Table {
        name: String,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        #[serde(default)]
        character: Option<Character>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            Self::Cyclic { n } => FiniteGroup::cyclic(*n),
            Self::UnitsMod { p, n, m } => FiniteGroup::units_mod(*p, *n, *m),
            Self::OnePlusP { p, n, m } => FiniteGroup::one_plus_p(*p, *n, *m),
            Self::Kummer { p, m, k } => FiniteGroup::kummer(*p, *m, *k),
            Self::Table {
                name,
                labels,
                table,
                character,
            } => {
                let g = FiniteGroup::from_table(name, labels.clone(), table)?;
                match character {
                    Some(ch) => g.with_character(ch.clone()),
                    None => Ok(g),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorAction {
    /// Group element label.
    pub element: String,
    /// Action matrix, by rows.
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpec {
    /// `Z/p^m(k)`, through the group's character.
    Twist { p: u64, m: u32, k: i64 },
    /// `⊕ Z/p^{e_j}` with trivial action.
    Trivial { p: u64, m: u32, exps: Vec<u32> },
    /// `(Z/p^m)^rank / ⟨relations⟩` with the action given on generators.
    Presented {
        p: u64,
        m: u32,
        rank: usize,
        /// Relation vectors, each of length `rank`.
        #[serde(default)]
        relations: Vec<Vec<u64>>,
        generators: Vec<GeneratorAction>,
    },
}

impl ModuleSpec {
    pub fn build(&self, group: &FiniteGroup) -> Result<GModule> {
        match self {
            Self::Twist { p, m, k } => GModule::twist(group, Zpm::new(*p, *m)?, *k),
            Self::Trivial { p, m, exps } => GModule::trivial(group, Zpm::new(*p, *m)?, exps.clone()),
            Self::Presented {
                p,
                m,
                rank,
                relations,
                generators,
            } => {
                let ring = Zpm::new(*p, *m)?;
                if relations.iter().any(|r| r.len() != *rank) {
                    return Err(Error::InvalidModule("relation length differs from rank".into()));
                }
                let rel = Matrix::from_cols(relations, *rank);
                let mut gens = Vec::with_capacity(generators.len());
                for ga in generators {
                    let g = group.index_of(&ga.element).ok_or_else(|| {
                        Error::InvalidModule(format!("unknown group element {}", ga.element))
                    })?;
                    if ga.matrix.len() != *rank || ga.matrix.iter().any(|r| r.len() != *rank) {
                        return Err(Error::InvalidModule("action matrix has wrong shape".into()));
                    }
                    gens.push((g, Matrix::from_rows(&ga.matrix, *rank)));
                }
                GModule::from_presentation(group, ring, *rank, &rel, &gens)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub args: Vec<String>,
    pub value: Vec<u64>,
}

/// A sparse cochain: unlisted arguments take the value 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainSpec {
    pub degree: usize,
    pub entries: Vec<CochainEntry>,
}

impl CochainSpec {
    pub fn build(&self, group: &FiniteGroup, module: &GModule) -> Result<Cochain> {
        let n = group.order();
        let mut values = vec![module.zero(); n.pow(self.degree as u32)];
        for e in &self.entries {
            if e.args.len() != self.degree || e.value.len() != module.rank() {
                return Err(Error::Parse("cochain entry has wrong shape".into()));
            }
            let mut idx = 0;
            for a in &e.args {
                let g = group
                    .index_of(a)
                    .ok_or_else(|| Error::Parse(format!("unknown group element {a}")))?;
                idx = idx * n + g;
            }
            values[idx] = e.value.clone();
        }
        Cochain::from_values(group, module, self.degree, values)
    }

    pub fn from_cochain(group: &FiniteGroup, c: &Cochain) -> Self {
        let n = group.order();
        let k = c.degree();
        let entries = c
            .values()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.iter().any(|&x| x != 0))
            .map(|(idx, v)| {
                let mut args = vec![String::new(); k];
                let mut x = idx;
                for slot in args.iter_mut().rev() {
                    *slot = group.label(x % n).to_string();
                    x /= n;
                }
                CochainEntry {
                    args,
                    value: v.clone(),
                }
            })
            .collect();
        Self { degree: k, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let gs: GroupSpec = serde_json::from_str(r#"{"kind":"cyclic","n":3}"#).unwrap();
        let g = gs.build().unwrap();
        let ms: ModuleSpec =
            serde_json::from_str(r#"{"kind":"trivial","p":3,"m":1,"exps":[1]}"#).unwrap();
        let m = ms.build(&g).unwrap();
        let c = Cochain::from_fn(&g, &m, 2, |a| vec![u64::from(a[0] + a[1] >= 3)]);
        let spec = CochainSpec::from_cochain(&g, &c);
        let text = serde_json::to_string(&spec).unwrap();
        let back: CochainSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build(&g, &m).unwrap(), c);
    }

    #[test]
    fn presented_module() {
        let g = GroupSpec::Cyclic { n: 2 }.build().unwrap();
        let ms: ModuleSpec = serde_json::from_str(
            r#"{"kind":"presented","p":2,"m":2,"rank":1,
                "generators":[{"element":"g^1","matrix":[[3]]}]}"#,
        )
        .unwrap();
        let m = ms.build(&g).unwrap();
        assert_eq!(m.act(1, &[1]), vec![3]);
    }
}
