//! Total, report-based validation. Mathematical law violations are never
//! thrown as errors; they are collected with the witnessing tuple so the
//! CLI can print all of them at once.

use serde::Serialize;
use std::fmt;

/// The laws the validators check. Each variant names one axiom.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Law {
    IdempotentData,
    IdempotentOrthogonality,
    IdentityAction,
    PeirceCompatibility,
    DegreeHomogeneity,
    Associativity,
    DifferentialDegree,
    DifferentialOnIdempotent,
    DifferentialSquare,
    Leibniz,
    Unitarity,
    MiddleAssociativity,
    GradedLinearity,
    HomDegreeZero,
    HomMultiplicative,
    HomDifferential,
    HomIdempotentImage,
    Bijectivity,
    ChainMap,
    Exactness,
    GradedSplitting,
    ConeComparison,
    Naturality,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Law::IdempotentData => "idempotent basis data",
            Law::IdempotentOrthogonality => "idempotent orthogonality e_i*e_j",
            Law::IdentityAction => "idempotent identity action",
            Law::PeirceCompatibility => "Peirce compatibility",
            Law::DegreeHomogeneity => "degree homogeneity of products",
            Law::Associativity => "associativity",
            Law::DifferentialDegree => "differential degree +1",
            Law::DifferentialOnIdempotent => "differential vanishes on idempotents",
            Law::DifferentialSquare => "d\u{2218}d = 0",
            Law::Leibniz => "Leibniz rule",
            Law::Unitarity => "unitarity",
            Law::MiddleAssociativity => "bimodule middle associativity",
            Law::GradedLinearity => "graded linearity",
            Law::HomDegreeZero => "homomorphism degree zero",
            Law::HomMultiplicative => "homomorphism multiplicativity",
            Law::HomDifferential => "homomorphism commutes with differentials",
            Law::HomIdempotentImage => "homomorphism idempotent image",
            Law::Bijectivity => "bijectivity",
            Law::ChainMap => "chain map condition",
            Law::Exactness => "degreewise exactness",
            Law::GradedSplitting => "graded splitting",
            Law::ConeComparison => "cone comparison isomorphism",
            Law::Naturality => "naturality",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub law: Law,
    pub witness: String,
}

/// Outcome of a validation run: empty means valid.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub entries: Vec<Violation>,
}

impl Report {
    pub fn push(&mut self, law: Law, witness: impl Into<String>) {
        self.entries.push(Violation {
            law,
            witness: witness.into(),
        });
    }

    pub fn is_valid(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn violates(&self, law: Law) -> bool {
        self.entries.iter().any(|v| v.law == law)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "violated: {} at {}", v.law, v.witness)?;
        }
        Ok(())
    }
}
