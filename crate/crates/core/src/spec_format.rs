//! Algebra spec files.
//!
//! A spec is TOML:
//!
//! ```toml
//! name = "heisenberg"
//!
//! [[generators]]
//! label = "X"
//! weight = 1
//! # ... one entry per basis vector
//!
//! [[brackets]]
//! lhs = "X"
//! rhs = "Y"
//! terms = [{ coeff = "1", target = "Z" }]
//! ```
//!
//! A family adds a `[family]` table (`parameter`, `domain = ["0", "1"]`) and
//! writes each coefficient as a list of rational strings, lowest degree
//! first: `coeff = ["0", "1"]` is the polynomial `t`. Rationals are `"p/q"`
//! or integer strings.

use serde::{Deserialize, Serialize};

use crate::algebra::{BasisEntry, Bracket, GradedLieAlgebra};
use crate::error::{Error, Result};
use crate::family::{AlgebraFamily, FamilyBracket, Polynomial};
use crate::rational::{format_rational, parse_rational, Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySection>,
    pub generators: Vec<BasisEntry>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySection {
    #[serde(default = "default_parameter")]
    pub parameter: String,
    pub domain: [String; 2],
}

fn default_parameter() -> String {
    "t".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub lhs: String,
    pub rhs: String,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub coeff: Coefficient,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Scalar(String),
    Polynomial(Vec<String>),
}

/// Either kind of parsed spec.
#[derive(Debug, Clone)]
pub enum Spec {
    Algebra(GradedLieAlgebra),
    Family(AlgebraFamily),
}

pub fn parse_spec_file(text: &str) -> Result<SpecFile> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn label_index(basis: &[BasisEntry], label: &str) -> Result<usize> {
    basis
        .iter()
        .position(|b| b.label == label)
        .ok_or_else(|| Error::Parse(format!("unknown basis label `{label}`")))
}

pub fn load_spec(text: &str) -> Result<Spec> {
    let file = parse_spec_file(text)?;
    let basis = &file.generators;
    match &file.family {
        None => {
            let mut brackets = Vec::new();
            for b in &file.brackets {
                let mut terms = Vec::new();
                for t in &b.terms {
                    let c = match &t.coeff {
                        Coefficient::Scalar(s) => parse_rational(s)?,
                        Coefficient::Polynomial(_) => {
                            return Err(Error::Parse(
                                "polynomial coefficient outside a [family] spec".into(),
                            ))
                        }
                    };
                    terms.push((c, label_index(basis, &t.target)?));
                }
                brackets.push(Bracket::new(
                    label_index(basis, &b.lhs)?,
                    label_index(basis, &b.rhs)?,
                    terms,
                ));
            }
            Ok(Spec::Algebra(GradedLieAlgebra::from_brackets(
                &file.name, basis, &brackets,
            )?))
        }
        Some(fam) => {
            let mut brackets = Vec::new();
            for b in &file.brackets {
                let mut terms = Vec::new();
                for t in &b.terms {
                    let p = match &t.coeff {
                        Coefficient::Scalar(s) => Polynomial::constant(parse_rational(s)?),
                        Coefficient::Polynomial(cs) => Polynomial(
                            cs.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?,
                        ),
                    };
                    terms.push((p, label_index(basis, &t.target)?));
                }
                brackets.push(FamilyBracket {
                    lhs: label_index(basis, &b.lhs)?,
                    rhs: label_index(basis, &b.rhs)?,
                    terms,
                });
            }
            let domain = (parse_rational(&fam.domain[0])?, parse_rational(&fam.domain[1])?);
            Ok(Spec::Family(AlgebraFamily::new(
                &file.name,
                &fam.parameter,
                basis.clone(),
                brackets,
                domain,
            )?))
        }
    }
}

/// Loads a spec that must describe a single algebra.
pub fn load_algebra(text: &str) -> Result<GradedLieAlgebra> {
    match load_spec(text)? {
        Spec::Algebra(a) => Ok(a),
        Spec::Family(_) => Err(Error::Parse(
            "spec describes a family; evaluate it at a parameter first".into(),
        )),
    }
}

pub fn load_family(text: &str) -> Result<AlgebraFamily> {
    match load_spec(text)? {
        Spec::Family(f) => Ok(f),
        Spec::Algebra(_) => Err(Error::Parse("spec has no [family] section".into())),
    }
}

pub fn algebra_to_spec_file(alg: &GradedLieAlgebra) -> SpecFile {
    let basis = alg.user_basis();
    let brackets = alg
        .user_brackets()
        .into_iter()
        .map(|b| BracketEntry {
            lhs: basis[b.lhs].label.clone(),
            rhs: basis[b.rhs].label.clone(),
            terms: b
                .terms
                .iter()
                .map(|(c, k)| TermEntry {
                    coeff: Coefficient::Scalar(format_rational(c)),
                    target: basis[*k].label.clone(),
                })
                .collect(),
        })
        .collect();
    SpecFile {
        name: alg.name().to_string(),
        family: None,
        generators: basis,
        brackets,
    }
}

pub fn family_to_spec_file(fam: &AlgebraFamily) -> SpecFile {
    let basis = fam.basis().to_vec();
    let brackets = fam
        .brackets()
        .iter()
        .map(|b| BracketEntry {
            lhs: basis[b.lhs].label.clone(),
            rhs: basis[b.rhs].label.clone(),
            terms: b
                .terms
                .iter()
                .map(|(p, k)| TermEntry {
                    coeff: Coefficient::Polynomial(p.0.iter().map(format_rational).collect()),
                    target: basis[*k].label.clone(),
                })
                .collect(),
        })
        .collect();
    let (lo, hi): &(Q, Q) = fam.domain();
    SpecFile {
        name: fam.name().to_string(),
        family: Some(FamilySection {
            parameter: fam.parameter().to_string(),
            domain: [format_rational(lo), format_rational(hi)],
        }),
        generators: basis,
        brackets,
    }
}

pub fn to_toml(file: &SpecFile) -> String {
    toml::to_string(file).expect("spec files always serialize")
}

pub fn algebra_to_spec(alg: &GradedLieAlgebra) -> String {
    to_toml(&algebra_to_spec_file(alg))
}

pub fn family_to_spec(fam: &AlgebraFamily) -> String {
    to_toml(&family_to_spec_file(fam))
}
