//! One-parameter polynomial families of graded Lie algebras.

use num_traits::Zero;

use crate::algebra::{BasisEntry, Bracket, GradedLieAlgebra};
use crate::error::{Error, Result};
use crate::rational::{format_rational, q, Q};

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial(pub Vec<Q>);

impl Polynomial {
    pub fn constant(c: Q) -> Self {
        Polynomial(vec![c])
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.0
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * t + c)
    }

    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

/// Bracket relation whose coefficients depend polynomially on the parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyBracket {
    pub lhs: usize,
    pub rhs: usize,
    pub terms: Vec<(Polynomial, usize)>,
}

/// Graded Lie algebras on a fixed graded vector space whose structure
/// constants are polynomials in one parameter ranging over a closed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraFamily {
    name: String,
    parameter: String,
    basis: Vec<BasisEntry>,
    brackets: Vec<FamilyBracket>,
    domain: (Q, Q),
}

impl AlgebraFamily {
    /// Builds the family and checks the identities as polynomial identities:
    /// Jacobi residuals have degree at most twice the largest coefficient
    /// degree, so validity at that many plus one distinct parameters is enough.
    pub fn new(
        name: impl Into<String>,
        parameter: impl Into<String>,
        basis: Vec<BasisEntry>,
        brackets: Vec<FamilyBracket>,
        domain: (Q, Q),
    ) -> Result<Self> {
        if domain.0 > domain.1 {
            return Err(Error::Parse("family domain is empty".into()));
        }
        let fam = AlgebraFamily {
            name: name.into(),
            parameter: parameter.into(),
            basis,
            brackets,
            domain,
        };
        let deg = fam
            .brackets
            .iter()
            .flat_map(|b| b.terms.iter().map(|(p, _)| p.degree()))
            .max()
            .unwrap_or(0);
        let points = 2 * deg + 1;
        let (lo, hi) = &fam.domain;
        for i in 0..points {
            let t = if points == 1 || lo == hi {
                // A degenerate interval only holds one parameter; test it
                // plus integers so the identity check still covers the polynomial.
                lo + q(i as i64)
            } else {
                lo + (hi - lo) * Q::new((i as i64).into(), ((points - 1) as i64).into())
            };
            fam.evaluate_unchecked(&t)?;
        }
        Ok(fam)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    pub fn domain(&self) -> &(Q, Q) {
        &self.domain
    }

    pub fn basis(&self) -> &[BasisEntry] {
        &self.basis
    }

    pub fn brackets(&self) -> &[FamilyBracket] {
        &self.brackets
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, t: &Q) -> bool {
        &self.domain.0 <= t && t <= &self.domain.1
    }

    /// The fiber algebra at parameter `t`.
    pub fn evaluate(&self, t: &Q) -> Result<GradedLieAlgebra> {
        if !self.contains(t) {
            return Err(Error::OutOfDomain(format_rational(t)));
        }
        self.evaluate_unchecked(t)
    }

    fn evaluate_unchecked(&self, t: &Q) -> Result<GradedLieAlgebra> {
        let brackets: Vec<Bracket> = self
            .brackets
            .iter()
            .map(|b| {
                let terms = b
                    .terms
                    .iter()
                    .map(|(p, k)| (p.eval(t), *k))
                    .filter(|(c, _)| !c.is_zero())
                    .collect();
                Bracket::new(b.lhs, b.rhs, terms)
            })
            .collect();
        let name = format!("{}[{}={}]", self.name, self.parameter, format_rational(t));
        GradedLieAlgebra::from_brackets(name, &self.basis, &brackets)
    }

    /// Depth shared by every fiber's grading.
    pub fn depth(&self) -> u32 {
        self.basis.iter().map(|b| b.weight).max().unwrap_or(1)
    }
}

/// Rescales a fixed algebra's brackets by the parameter: `[.,.]_t = t [.,.]`.
pub fn scaled_family(alg: &GradedLieAlgebra, domain: (Q, Q)) -> Result<AlgebraFamily> {
    let brackets = alg
        .user_brackets()
        .into_iter()
        .map(|b| FamilyBracket {
            lhs: b.lhs,
            rhs: b.rhs,
            terms: b
                .terms
                .into_iter()
                .map(|(c, k)| (Polynomial(vec![Q::zero(), c]), k))
                .collect(),
        })
        .collect();
    AlgebraFamily::new(
        format!("scaled-{}", alg.name()),
        "t",
        alg.user_basis(),
        brackets,
        domain,
    )
}

/// Family that does not depend on its parameter.
pub fn constant_family(alg: &GradedLieAlgebra, domain: (Q, Q)) -> Result<AlgebraFamily> {
    let brackets = alg
        .user_brackets()
        .into_iter()
        .map(|b| FamilyBracket {
            lhs: b.lhs,
            rhs: b.rhs,
            terms: b
                .terms
                .into_iter()
                .map(|(c, k)| (Polynomial::constant(c), k))
                .collect(),
        })
        .collect();
    AlgebraFamily::new(
        format!("constant-{}", alg.name()),
        "t",
        alg.user_basis(),
        brackets,
        domain,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{abelian, heisenberg};
    use crate::rational::qr;

    fn heis_family() -> AlgebraFamily {
        scaled_family(&heisenberg(1), (q(0), q(1))).unwrap()
    }

    #[test]
    fn polynomial_eval() {
        let p = Polynomial(vec![q(1), q(0), qr(1, 2)]);
        assert_eq!(p.eval(&q(2)), q(3));
        assert_eq!(p.degree(), 2);
        assert!(Polynomial(vec![q(0), q(0)]).is_zero());
    }

    #[test]
    fn fiber_at_one_is_heisenberg() {
        let h = heis_family().evaluate(&q(1)).unwrap();
        let reference = heisenberg(1);
        assert_eq!(h.labels(), reference.labels());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.bracket_basis(i, j), reference.bracket_basis(i, j));
            }
        }
    }

    #[test]
    fn fiber_at_zero_is_abelian() {
        let a = heis_family().evaluate(&q(0)).unwrap();
        assert!(a.is_abelian());
        assert_eq!(a.homogeneous_dimension(), 4);
        assert!(abelian(3).is_abelian());
    }

    #[test]
    fn out_of_domain() {
        assert!(matches!(heis_family().evaluate(&q(2)), Err(Error::OutOfDomain(_))));
        assert!(matches!(heis_family().evaluate(&qr(-1, 3)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn inconsistent_family_rejected() {
        // [X,Y] = t^2 Z with Z of weight 3: off-grade for every t except t = 0.
        let basis = vec![
            BasisEntry::new("X", 1),
            BasisEntry::new("Y", 1),
            BasisEntry::new("Z", 3),
        ];
        let brackets = vec![FamilyBracket {
            lhs: 0,
            rhs: 1,
            terms: vec![(Polynomial(vec![q(0), q(0), q(1)]), 2)],
        }];
        assert!(AlgebraFamily::new("bad", "t", basis, brackets, (q(0), q(1))).is_err());
    }
}
