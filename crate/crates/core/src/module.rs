//! Side-tagged dg modules: right, left and bimodules over dg algebras
//! with enough idempotents.
//!
//! Internally every module carries two acting algebras; a right module is
//! a bimodule whose left algebra is the trivial one (the ground field),
//! and symmetrically for left modules. The side tag keeps the user-facing
//! sign conventions honest: the sign tricks of the left/right and
//! bimodule encodings are real operations here, not identifications.

use crate::algebra::{DgAlgebra, LinComb};
use crate::error::{Error, Result};
use crate::graded::{check_degree, GradedHomology, GradedMap, GradedSpace};
use crate::matrix::Matrix;
use crate::report::{Law, Report};
use crate::scalar::{Field, Scalar};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Side {
    Right,
    Left,
    Bimodule,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Right => write!(f, "right"),
            Side::Left => write!(f, "left"),
            Side::Bimodule => write!(f, "bimodule"),
        }
    }
}

/// One homogeneous module basis element with its supporting idempotents:
/// `x ∈ e_left · M · e_right` (family positions in the acting algebras;
/// the trivial algebra supplies position 0 on an absent side).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModBasisElement {
    pub label: String,
    pub degree: i32,
    pub left: usize,
    pub right: usize,
}

pub fn same_algebra(a: &Arc<DgAlgebra>, b: &Arc<DgAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A dg module given by a finite homogeneous basis, action structure
/// constants and a differential table. Values are immutable after
/// construction; all operations are pure.
///
/// Equality compares the mathematical data — algebras, basis, actions,
/// differential — but not the side tag, which is presentation metadata
/// (a right module and the same data tagged as a bimodule with trivial
/// left algebra are the same module).
#[derive(Clone, Debug)]
pub struct DgModule {
    side: Side,
    left_algebra: Arc<DgAlgebra>,
    right_algebra: Arc<DgAlgebra>,
    basis: Vec<ModBasisElement>,
    /// stored entries for x·a, keyed by (module index, algebra index)
    right_action: BTreeMap<(usize, usize), LinComb>,
    /// stored entries for a·x, keyed by (algebra index, module index)
    left_action: BTreeMap<(usize, usize), LinComb>,
    diff: BTreeMap<usize, LinComb>,
}

impl PartialEq for DgModule {
    fn eq(&self, other: &Self) -> bool {
        self.left_algebra == other.left_algebra
            && self.right_algebra == other.right_algebra
            && self.basis == other.basis
            && self.right_action == other.right_action
            && self.left_action == other.left_action
            && self.diff == other.diff
    }
}

impl DgModule {
    #[allow(clippy::too_many_arguments)]
    fn raw(
        side: Side,
        left_algebra: Arc<DgAlgebra>,
        right_algebra: Arc<DgAlgebra>,
        basis: Vec<ModBasisElement>,
        left_action: BTreeMap<(usize, usize), LinComb>,
        right_action: BTreeMap<(usize, usize), LinComb>,
        diff: BTreeMap<usize, LinComb>,
    ) -> Result<DgModule> {
        if left_algebra.field() != right_algebra.field() {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                left_algebra.field(),
                right_algebra.field()
            )));
        }
        let n = basis.len();
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            check_degree(b.degree)?;
            if !seen.insert(b.label.clone()) {
                return Err(Error::Invalid(format!("duplicate basis label `{}`", b.label)));
            }
            if b.left >= left_algebra.idempotent_count() {
                return Err(Error::Invalid(format!(
                    "basis element `{}` has an unknown left support",
                    b.label
                )));
            }
            if b.right >= right_algebra.idempotent_count() {
                return Err(Error::Invalid(format!(
                    "basis element `{}` has an unknown right support",
                    b.label
                )));
            }
        }
        let field = left_algebra.field();
        let mut ra = BTreeMap::new();
        for ((m, a), c) in right_action {
            if m >= n || a >= right_algebra.dim() {
                return Err(Error::Invalid("action table index out of range".into()));
            }
            check_mod_lincomb(&c, n, field)?;
            if !c.is_zero() {
                ra.insert((m, a), c);
            }
        }
        let mut la = BTreeMap::new();
        for ((a, m), c) in left_action {
            if m >= n || a >= left_algebra.dim() {
                return Err(Error::Invalid("action table index out of range".into()));
            }
            check_mod_lincomb(&c, n, field)?;
            if !c.is_zero() {
                la.insert((a, m), c);
            }
        }
        let mut d = BTreeMap::new();
        for (m, c) in diff {
            if m >= n {
                return Err(Error::Invalid("differential table index out of range".into()));
            }
            check_mod_lincomb(&c, n, field)?;
            if !c.is_zero() {
                d.insert(m, c);
            }
        }
        Ok(DgModule {
            side,
            left_algebra,
            right_algebra,
            basis,
            right_action: ra,
            left_action: la,
            diff: d,
        })
    }

    pub fn new_right(
        algebra: Arc<DgAlgebra>,
        basis: Vec<ModBasisElement>,
        right_action: BTreeMap<(usize, usize), LinComb>,
        diff: BTreeMap<usize, LinComb>,
    ) -> Result<DgModule> {
        let trivial = DgAlgebra::trivial(algebra.field());
        DgModule::raw(
            Side::Right,
            trivial,
            algebra,
            basis,
            BTreeMap::new(),
            right_action,
            diff,
        )
    }

    pub fn new_left(
        algebra: Arc<DgAlgebra>,
        basis: Vec<ModBasisElement>,
        left_action: BTreeMap<(usize, usize), LinComb>,
        diff: BTreeMap<usize, LinComb>,
    ) -> Result<DgModule> {
        let trivial = DgAlgebra::trivial(algebra.field());
        DgModule::raw(
            Side::Left,
            algebra,
            trivial,
            basis,
            left_action,
            BTreeMap::new(),
            diff,
        )
    }

    /// A dg (A,B)-bimodule: left algebra acts on the left, right on the
    /// right.
    pub fn new_bimodule(
        left_algebra: Arc<DgAlgebra>,
        right_algebra: Arc<DgAlgebra>,
        basis: Vec<ModBasisElement>,
        left_action: BTreeMap<(usize, usize), LinComb>,
        right_action: BTreeMap<(usize, usize), LinComb>,
        diff: BTreeMap<usize, LinComb>,
    ) -> Result<DgModule> {
        DgModule::raw(
            Side::Bimodule,
            left_algebra,
            right_algebra,
            basis,
            left_action,
            right_action,
            diff,
        )
    }

    /// The zero module on any side.
    pub fn zero(side: Side, left: Arc<DgAlgebra>, right: Arc<DgAlgebra>) -> DgModule {
        DgModule::raw(
            side,
            left,
            right,
            Vec::new(),
            BTreeMap::new(),
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("zero module is structurally sound")
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// The side determined by the data alone: bimodule when both acting
    /// algebras are nontrivial, otherwise the one-sided reading.
    pub fn effective_side(&self) -> Side {
        let trivial = DgAlgebra::trivial(self.field());
        match (
            same_algebra(&self.left_algebra, &trivial),
            same_algebra(&self.right_algebra, &trivial),
        ) {
            (true, false) => Side::Right,
            (false, true) => Side::Left,
            (true, true) => Side::Right,
            (false, false) => Side::Bimodule,
        }
    }

    pub fn field(&self) -> Field {
        self.right_algebra.field()
    }

    pub fn left_algebra(&self) -> &Arc<DgAlgebra> {
        &self.left_algebra
    }

    pub fn right_algebra(&self) -> &Arc<DgAlgebra> {
        &self.right_algebra
    }

    /// The acting algebra of a one-sided module.
    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        match self.side {
            Side::Right => &self.right_algebra,
            Side::Left => &self.left_algebra,
            Side::Bimodule => &self.right_algebra,
        }
    }

    pub fn basis(&self) -> &[ModBasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero_module(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn element(&self, i: usize) -> &ModBasisElement {
        &self.basis[i]
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_by_label(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn stored_right_action(&self) -> &BTreeMap<(usize, usize), LinComb> {
        &self.right_action
    }

    pub fn stored_left_action(&self) -> &BTreeMap<(usize, usize), LinComb> {
        &self.left_action
    }

    pub fn stored_diff(&self) -> &BTreeMap<usize, LinComb> {
        &self.diff
    }

    /// `x_m · a`. Stored entries win; distinguished idempotents act by
    /// the support bookkeeping.
    pub fn right_act_basis(&self, m: usize, a: usize) -> LinComb {
        if let Some(c) = self.right_action.get(&(m, a)) {
            return c.clone();
        }
        if let Some(k) = self.right_algebra.family_position(a) {
            return if self.basis[m].right == k {
                LinComb::basis(m, self.field())
            } else {
                LinComb::zero()
            };
        }
        LinComb::zero()
    }

    /// `a · x_m`.
    pub fn left_act_basis(&self, a: usize, m: usize) -> LinComb {
        if let Some(c) = self.left_action.get(&(a, m)) {
            return c.clone();
        }
        if let Some(k) = self.left_algebra.family_position(a) {
            return if self.basis[m].left == k {
                LinComb::basis(m, self.field())
            } else {
                LinComb::zero()
            };
        }
        LinComb::zero()
    }

    pub fn right_act(&self, x: &LinComb, a: &LinComb) -> LinComb {
        let f = self.field();
        let mut out = LinComb::zero();
        for (m, cm) in x.terms() {
            for (ai, ca) in a.terms() {
                let prod = self.right_act_basis(m, ai);
                out = out.add(&prod.scale(&f.mul(cm, ca), f), f);
            }
        }
        out
    }

    pub fn left_act(&self, a: &LinComb, x: &LinComb) -> LinComb {
        let f = self.field();
        let mut out = LinComb::zero();
        for (ai, ca) in a.terms() {
            for (m, cm) in x.terms() {
                let prod = self.left_act_basis(ai, m);
                out = out.add(&prod.scale(&f.mul(ca, cm), f), f);
            }
        }
        out
    }

    pub fn diff_basis(&self, m: usize) -> LinComb {
        self.diff.get(&m).cloned().unwrap_or_default()
    }

    pub fn diff_elem(&self, x: &LinComb) -> LinComb {
        let f = self.field();
        let mut out = LinComb::zero();
        for (m, c) in x.terms() {
            out = out.add(&self.diff_basis(m).scale(c, f), f);
        }
        out
    }

    pub fn underlying_space(&self) -> GradedSpace {
        let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for b in &self.basis {
            degrees.entry(b.degree).or_default().push(b.label.clone());
        }
        GradedSpace::new(self.field(), degrees).expect("basis labels are unique")
    }

    pub fn position_in_degree(&self, i: usize) -> usize {
        let d = self.basis[i].degree;
        self.basis[..i].iter().filter(|b| b.degree == d).count()
    }

    /// Basis index of the `pos`-th element in degree `n`.
    pub fn index_at(&self, n: i32, pos: usize) -> Option<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.degree == n)
            .nth(pos)
            .map(|(i, _)| i)
    }

    /// A coordinate vector at one degree, as a linear combination.
    pub fn lincomb_at(&self, n: i32, coords: &[Scalar]) -> Result<LinComb> {
        let f = self.field();
        let mut out = LinComb::zero();
        for (pos, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let Some(i) = self.index_at(n, pos) else {
                return Err(Error::ShapeMismatch(format!(
                    "coordinate {pos} out of range in degree {n}"
                )));
            };
            out.add_term(i, c, f);
        }
        Ok(out)
    }

    /// Coordinates of a homogeneous linear combination; errors when terms
    /// spread over several degrees.
    pub fn coords_of(&self, x: &LinComb) -> Result<Option<(i32, Vec<Scalar>)>> {
        let f = self.field();
        let mut degree = None;
        for (m, _) in x.terms() {
            let d = self.basis[m].degree;
            if *degree.get_or_insert(d) != d {
                return Err(Error::Invalid("inhomogeneous linear combination".into()));
            }
        }
        let Some(n) = degree else { return Ok(None) };
        let mut coords = vec![f.zero(); self.basis.iter().filter(|b| b.degree == n).count()];
        for (m, c) in x.terms() {
            coords[self.position_in_degree(m)] = c.clone();
        }
        Ok(Some((n, coords)))
    }

    pub fn differential_map(&self) -> Result<GradedMap> {
        let space = self.underlying_space();
        let field = self.field();
        let mut blocks: BTreeMap<i32, Matrix> = BTreeMap::new();
        for n in space.degrees() {
            blocks.insert(n, Matrix::zero(field, space.dim(n + 1), space.dim(n)));
        }
        for (i, dc) in &self.diff {
            let n = self.basis[*i].degree;
            let col = self.position_in_degree(*i);
            for (j, c) in dc.terms() {
                if self.basis[j].degree != n + 1 {
                    return Err(Error::Invalid(format!(
                        "differential of `{}` is not homogeneous",
                        self.label(*i)
                    )));
                }
                let row = self.position_in_degree(j);
                blocks.get_mut(&n).unwrap().set(row, col, c.clone());
            }
        }
        GradedMap::new(space.clone(), space, 1, blocks)
    }

    pub fn homology(&self) -> Result<GradedHomology> {
        let space = self.underlying_space();
        let d = self.differential_map()?;
        GradedHomology::new(&space, &d)
    }

    /// Brute-force validation of every dg-module law over basis tuples.
    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        let f = self.field();

        // unitarity: distinguished idempotents act as identity/zero by
        // block, on both sides
        for k in 0..self.right_algebra.idempotent_count() {
            let e = self.right_algebra.idempotent(k);
            for m in 0..self.basis.len() {
                let got = self.right_act_basis(m, e);
                let expected = if self.basis[m].right == k {
                    LinComb::basis(m, f)
                } else {
                    LinComb::zero()
                };
                if got != expected {
                    report.push(
                        Law::Unitarity,
                        format!("({}, {})", self.label(m), self.right_algebra.label(e)),
                    );
                }
            }
        }
        for k in 0..self.left_algebra.idempotent_count() {
            let e = self.left_algebra.idempotent(k);
            for m in 0..self.basis.len() {
                let got = self.left_act_basis(e, m);
                let expected = if self.basis[m].left == k {
                    LinComb::basis(m, f)
                } else {
                    LinComb::zero()
                };
                if got != expected {
                    report.push(
                        Law::Unitarity,
                        format!("({}, {})", self.left_algebra.label(e), self.label(m)),
                    );
                }
            }
        }

        // Peirce and degree compatibility of the actions
        for m in 0..self.basis.len() {
            for a in 0..self.right_algebra.dim() {
                let act = self.right_act_basis(m, a);
                if act.is_zero() {
                    continue;
                }
                let ba = self.right_algebra.element(a);
                if self.basis[m].right != ba.left {
                    report.push(
                        Law::PeirceCompatibility,
                        format!("({}, {}) nonzero across mismatched idempotents", self.label(m), ba.label),
                    );
                }
                for (t, _) in act.terms() {
                    let bt = &self.basis[t];
                    if bt.degree != self.basis[m].degree + ba.degree {
                        report.push(
                            Law::DegreeHomogeneity,
                            format!("({}, {}) -> {}", self.label(m), ba.label, bt.label),
                        );
                    }
                    if bt.left != self.basis[m].left || bt.right != ba.right {
                        report.push(
                            Law::PeirceCompatibility,
                            format!("({}, {}) -> {}", self.label(m), ba.label, bt.label),
                        );
                    }
                }
            }
            for a in 0..self.left_algebra.dim() {
                let act = self.left_act_basis(a, m);
                if act.is_zero() {
                    continue;
                }
                let ba = self.left_algebra.element(a);
                if self.basis[m].left != ba.right {
                    report.push(
                        Law::PeirceCompatibility,
                        format!("({}, {}) nonzero across mismatched idempotents", ba.label, self.label(m)),
                    );
                }
                for (t, _) in act.terms() {
                    let bt = &self.basis[t];
                    if bt.degree != self.basis[m].degree + ba.degree {
                        report.push(
                            Law::DegreeHomogeneity,
                            format!("({}, {}) -> {}", ba.label, self.label(m), bt.label),
                        );
                    }
                    if bt.right != self.basis[m].right || bt.left != ba.left {
                        report.push(
                            Law::PeirceCompatibility,
                            format!("({}, {}) -> {}", ba.label, self.label(m), bt.label),
                        );
                    }
                }
            }
        }

        // associativity (xa)a' = x(aa') on all triples
        for m in 0..self.basis.len() {
            for a in 0..self.right_algebra.dim() {
                for a2 in 0..self.right_algebra.dim() {
                    let lhs = self.right_act(&self.right_act_basis(m, a), &LinComb::basis(a2, f));
                    let rhs = self.right_act(
                        &LinComb::basis(m, f),
                        &self.right_algebra.mul_basis(a, a2),
                    );
                    if lhs != rhs {
                        report.push(
                            Law::Associativity,
                            format!(
                                "(({}, {}), {})",
                                self.label(m),
                                self.right_algebra.label(a),
                                self.right_algebra.label(a2)
                            ),
                        );
                    }
                }
            }
            // (a'a)x = a'(ax)
            for a in 0..self.left_algebra.dim() {
                for a2 in 0..self.left_algebra.dim() {
                    let lhs = self.left_act(&LinComb::basis(a2, f), &self.left_act_basis(a, m));
                    let rhs = self.left_act(
                        &self.left_algebra.mul_basis(a2, a),
                        &LinComb::basis(m, f),
                    );
                    if lhs != rhs {
                        report.push(
                            Law::Associativity,
                            format!(
                                "({}, ({}, {}))",
                                self.left_algebra.label(a2),
                                self.left_algebra.label(a),
                                self.label(m)
                            ),
                        );
                    }
                }
            }
        }

        // middle associativity (ax)b = a(xb)
        if self.side == Side::Bimodule {
            for m in 0..self.basis.len() {
                for a in 0..self.left_algebra.dim() {
                    for b in 0..self.right_algebra.dim() {
                        let lhs = self.right_act(&self.left_act_basis(a, m), &LinComb::basis(b, f));
                        let rhs = self.left_act(
                            &LinComb::basis(a, f),
                            &self.right_act_basis(m, b),
                        );
                        if lhs != rhs {
                            report.push(
                                Law::MiddleAssociativity,
                                format!(
                                    "({}, {}, {})",
                                    self.left_algebra.label(a),
                                    self.label(m),
                                    self.right_algebra.label(b)
                                ),
                            );
                        }
                    }
                }
            }
        }

        // differential degree and d∘d = 0
        for m in 0..self.basis.len() {
            let dm = self.diff_basis(m);
            for (t, _) in dm.terms() {
                if self.basis[t].degree != self.basis[m].degree + 1 {
                    report.push(
                        Law::DifferentialDegree,
                        format!("d({}) -> {}", self.label(m), self.label(t)),
                    );
                }
                if self.basis[t].left != self.basis[m].left
                    || self.basis[t].right != self.basis[m].right
                {
                    report.push(
                        Law::PeirceCompatibility,
                        format!("d({}) -> {}", self.label(m), self.label(t)),
                    );
                }
            }
            if !self.diff_elem(&dm).is_zero() {
                report.push(Law::DifferentialSquare, format!("d(d({}))", self.label(m)));
            }
        }

        // Leibniz, right form: d(xa) = d(x)a + (−1)^{|x|} x d(a)
        for m in 0..self.basis.len() {
            for a in 0..self.right_algebra.dim() {
                let lhs = self.diff_elem(&self.right_act_basis(m, a));
                let sign = f.sign(self.basis[m].degree as i64);
                let rhs = self
                    .right_act(&self.diff_basis(m), &LinComb::basis(a, f))
                    .add(
                        &self
                            .right_act(&LinComb::basis(m, f), &self.right_algebra.diff_basis(a))
                            .scale(&sign, f),
                        f,
                    );
                if lhs != rhs {
                    report.push(
                        Law::Leibniz,
                        format!("({}, {})", self.label(m), self.right_algebra.label(a)),
                    );
                }
            }
            // left form: d(ax) = d(a)x + (−1)^{|a|} a d(x)
            for a in 0..self.left_algebra.dim() {
                let lhs = self.diff_elem(&self.left_act_basis(a, m));
                let sign = f.sign(self.left_algebra.degree(a) as i64);
                let rhs = self
                    .left_act(&self.left_algebra.diff_basis(a), &LinComb::basis(m, f))
                    .add(
                        &self
                            .left_act(&LinComb::basis(a, f), &self.diff_basis(m))
                            .scale(&sign, f),
                        f,
                    );
                if lhs != rhs {
                    report.push(
                        Law::Leibniz,
                        format!("({}, {})", self.left_algebra.label(a), self.label(m)),
                    );
                }
            }
        }

        // bimodule three-term Leibniz, exactly as stated:
        // d(axb) = d(a)xb + (−1)^{|a|} a d(x) b + (−1)^{|a|+|x|} a x d(b)
        if self.side == Side::Bimodule {
            for m in 0..self.basis.len() {
                for a in 0..self.left_algebra.dim() {
                    for b in 0..self.right_algebra.dim() {
                        let axb = self.right_act(&self.left_act_basis(a, m), &LinComb::basis(b, f));
                        let lhs = self.diff_elem(&axb);
                        let da_xb = self.right_act(
                            &self.left_act(&self.left_algebra.diff_basis(a), &LinComb::basis(m, f)),
                            &LinComb::basis(b, f),
                        );
                        let sa = f.sign(self.left_algebra.degree(a) as i64);
                        let a_dx_b = self
                            .right_act(
                                &self.left_act(&LinComb::basis(a, f), &self.diff_basis(m)),
                                &LinComb::basis(b, f),
                            )
                            .scale(&sa, f);
                        let sax =
                            f.sign((self.left_algebra.degree(a) + self.basis[m].degree) as i64);
                        let ax_db = self
                            .right_act(
                                &self.left_act_basis(a, m),
                                &self.right_algebra.diff_basis(b),
                            )
                            .scale(&sax, f);
                        let rhs = da_xb.add(&a_dx_b, f).add(&ax_db, f);
                        if lhs != rhs {
                            report.push(
                                Law::Leibniz,
                                format!(
                                    "({}, {}, {})",
                                    self.left_algebra.label(a),
                                    self.label(m),
                                    self.right_algebra.label(b)
                                ),
                            );
                        }
                    }
                }
            }
        }

        report
    }

    /// `M[k]`: degrees drop by `k`, the differential picks up `(−1)^k`,
    /// the right action is untouched and the left action of `a` picks up
    /// `(−1)^{k|a|}`.
    pub fn shift(&self, k: i32) -> Result<DgModule> {
        let f = self.field();
        let basis = self
            .basis
            .iter()
            .map(|b| {
                check_degree(b.degree - k)?;
                Ok(ModBasisElement {
                    label: b.label.clone(),
                    degree: b.degree - k,
                    left: b.left,
                    right: b.right,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let dsign = f.sign(k as i64);
        let diff = self
            .diff
            .iter()
            .map(|(m, c)| (*m, c.scale(&dsign, f)))
            .collect();
        let left_action = self
            .left_action
            .iter()
            .map(|((a, m), c)| {
                let sign = f.sign(k as i64 * self.left_algebra.degree(*a) as i64);
                ((*a, *m), c.scale(&sign, f))
            })
            .collect();
        DgModule::raw(
            self.side,
            self.left_algebra.clone(),
            self.right_algebra.clone(),
            basis,
            left_action,
            self.right_action.clone(),
            diff,
        )
    }

    /// Lemma 4.1 sign trick: a left dg A-module becomes a right dg
    /// A°-module via `x·a° := (−1)^{|a||x|} ax`.
    pub fn left_to_right(&self) -> Result<DgModule> {
        if self.side != Side::Left {
            return Err(Error::SideMismatch(format!(
                "left_to_right on a {} module",
                self.side
            )));
        }
        let f = self.field();
        let aop = Arc::new(self.left_algebra.opposite());
        let basis = self
            .basis
            .iter()
            .map(|b| ModBasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: 0,
                right: b.left,
            })
            .collect();
        let mut right_action = BTreeMap::new();
        for ((a, m), c) in &self.left_action {
            let sign = f.sign(self.left_algebra.degree(*a) as i64 * self.basis[*m].degree as i64);
            right_action.insert((*m, *a), c.scale(&sign, f));
        }
        DgModule::raw(
            Side::Right,
            DgAlgebra::trivial(f),
            aop,
            basis,
            BTreeMap::new(),
            right_action,
            self.diff.clone(),
        )
    }

    /// Inverse sign trick: a right dg B-module becomes a left dg
    /// B°-module via `a·x := (−1)^{|a||x|} xa`.
    pub fn right_to_left(&self) -> Result<DgModule> {
        if self.side != Side::Right {
            return Err(Error::SideMismatch(format!(
                "right_to_left on a {} module",
                self.side
            )));
        }
        let f = self.field();
        let bop = Arc::new(self.right_algebra.opposite());
        let basis = self
            .basis
            .iter()
            .map(|b| ModBasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: b.right,
                right: 0,
            })
            .collect();
        let mut left_action = BTreeMap::new();
        for ((m, a), c) in &self.right_action {
            let sign = f.sign(self.right_algebra.degree(*a) as i64 * self.basis[*m].degree as i64);
            left_action.insert((*a, *m), c.scale(&sign, f));
        }
        DgModule::raw(
            Side::Left,
            bop,
            DgAlgebra::trivial(f),
            basis,
            left_action,
            BTreeMap::new(),
            self.diff.clone(),
        )
    }

    /// Remark 5.3 encoding: an (A,B)-bimodule becomes a right module over
    /// B⊗A° via `x(b⊗a°) = (−1)^{(|x|+|b|)|a|} axb`.
    pub fn bimodule_to_right(&self) -> Result<DgModule> {
        if self.side != Side::Bimodule {
            return Err(Error::SideMismatch(format!(
                "bimodule_to_right on a {} module",
                self.side
            )));
        }
        let f = self.field();
        let a_alg = &self.left_algebra;
        let b_alg = &self.right_algebra;
        let tensor = Arc::new(DgAlgebra::tensor(b_alg, &a_alg.opposite())?);
        let na = a_alg.dim();
        let n_idem_a = a_alg.idempotent_count();
        let pair = |bj: usize, ai: usize| bj * na + ai;
        let basis = self
            .basis
            .iter()
            .map(|b| ModBasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: 0,
                right: b.right * n_idem_a + b.left,
            })
            .collect();
        let mut right_action = BTreeMap::new();
        for m in 0..self.basis.len() {
            for bj in 0..b_alg.dim() {
                for ai in 0..na {
                    if b_alg.family_position(bj).is_some() && a_alg.family_position(ai).is_some() {
                        continue;
                    }
                    // x(b⊗a°) = (−1)^{(|x|+|b|)|a|} a x b
                    let sign = f.sign(
                        (self.basis[m].degree + b_alg.degree(bj)) as i64
                            * a_alg.degree(ai) as i64,
                    );
                    let axb = self.right_act(
                        &self.left_act_basis(ai, m),
                        &LinComb::basis(bj, f),
                    );
                    let c = axb.scale(&sign, f);
                    if !c.is_zero() {
                        right_action.insert((m, pair(bj, ai)), c);
                    }
                }
            }
        }
        DgModule::raw(
            Side::Right,
            DgAlgebra::trivial(f),
            tensor,
            basis,
            BTreeMap::new(),
            right_action,
            self.diff.clone(),
        )
    }

    /// Inverse of [`bimodule_to_right`](Self::bimodule_to_right): reads a
    /// right B⊗A°-module back as an (A,B)-bimodule.
    pub fn right_to_bimodule(
        &self,
        a_alg: &Arc<DgAlgebra>,
        b_alg: &Arc<DgAlgebra>,
    ) -> Result<DgModule> {
        if self.side != Side::Right {
            return Err(Error::SideMismatch(format!(
                "right_to_bimodule on a {} module",
                self.side
            )));
        }
        let f = self.field();
        let expected = DgAlgebra::tensor(b_alg, &a_alg.opposite())?;
        if **self.right_algebra() != expected {
            return Err(Error::AlgebraMismatch(
                "module is not defined over B⊗A° for the given pair".into(),
            ));
        }
        let na = a_alg.dim();
        let n_idem_a = a_alg.idempotent_count();
        let pair = |bj: usize, ai: usize| bj * na + ai;
        let basis = self
            .basis
            .iter()
            .map(|b| ModBasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: b.right % n_idem_a,
                right: b.right / n_idem_a,
            })
            .collect::<Vec<_>>();
        // axb = (−1)^{(|x|+|b|)|a|} x(b⊗a°); specialize to one-sided acts
        let mut left_action = BTreeMap::new();
        let mut right_action = BTreeMap::new();
        for m in 0..self.basis.len() {
            let xb = &basis[m];
            for ai in 0..na {
                if a_alg.family_position(ai).is_some() {
                    continue;
                }
                // a·x = (−1)^{|x||a|} x(e_k ⊗ a°) with k = right support of x
                let e_k = b_alg.idempotent(xb.right);
                let sign = f.sign(self.basis[m].degree as i64 * a_alg.degree(ai) as i64);
                let c = self
                    .right_act_basis(m, pair(e_k, ai))
                    .scale(&sign, f);
                if !c.is_zero() {
                    left_action.insert((ai, m), c);
                }
            }
            for bj in 0..b_alg.dim() {
                if b_alg.family_position(bj).is_some() {
                    continue;
                }
                // x·b = x(b ⊗ e_l°) with l = left support of x (no sign)
                let e_l = a_alg.idempotent(xb.left);
                let c = self.right_act_basis(m, pair(bj, e_l));
                if !c.is_zero() {
                    right_action.insert((m, bj), c);
                }
            }
        }
        DgModule::raw(
            Side::Bimodule,
            a_alg.clone(),
            b_alg.clone(),
            basis,
            left_action,
            right_action,
            self.diff.clone(),
        )
    }

    /// The regular right dg module A_A.
    pub fn regular_right(algebra: &Arc<DgAlgebra>) -> DgModule {
        let basis = algebra
            .basis()
            .iter()
            .map(|b| ModBasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: 0,
                right: b.right,
            })
            .collect();
        let mut right_action = BTreeMap::new();
        for m in 0..algebra.dim() {
            for a in 0..algebra.dim() {
                if algebra.family_position(a).is_some() {
                    continue;
                }
                let c = algebra.mul_basis(m, a);
                if !c.is_zero() {
                    right_action.insert((m, a), c);
                }
            }
        }
        let diff = algebra.stored_diff().clone();
        DgModule::new_right(algebra.clone(), basis, right_action, diff)
            .expect("regular module is structurally sound")
    }

    /// The regular left dg module _AA.
    pub fn regular_left(algebra: &Arc<DgAlgebra>) -> DgModule {
        let basis = algebra
            .basis()
            .iter()
            .map(|b| ModBasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: b.left,
                right: 0,
            })
            .collect();
        let mut left_action = BTreeMap::new();
        for a in 0..algebra.dim() {
            if algebra.family_position(a).is_some() {
                continue;
            }
            for m in 0..algebra.dim() {
                let c = algebra.mul_basis(a, m);
                if !c.is_zero() {
                    left_action.insert((a, m), c);
                }
            }
        }
        let diff = algebra.stored_diff().clone();
        DgModule::new_left(algebra.clone(), basis, left_action, diff)
            .expect("regular module is structurally sound")
    }

    /// The regular dg bimodule A over (A,A).
    pub fn regular_bimodule(algebra: &Arc<DgAlgebra>) -> DgModule {
        let basis = algebra
            .basis()
            .iter()
            .map(|b| ModBasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: b.left,
                right: b.right,
            })
            .collect();
        let mut left_action = BTreeMap::new();
        let mut right_action = BTreeMap::new();
        for a in 0..algebra.dim() {
            for m in 0..algebra.dim() {
                if algebra.family_position(a).is_none() {
                    let c = algebra.mul_basis(a, m);
                    if !c.is_zero() {
                        left_action.insert((a, m), c);
                    }
                    let c = algebra.mul_basis(m, a);
                    if !c.is_zero() {
                        right_action.insert((m, a), c);
                    }
                }
            }
        }
        let diff = algebra.stored_diff().clone();
        DgModule::new_bimodule(
            algebra.clone(),
            algebra.clone(),
            basis,
            left_action,
            right_action,
            diff,
        )
        .expect("regular bimodule is structurally sound")
    }

    /// The representable right dg module e_kA (k a family position),
    /// shifted by `shift`.
    pub fn representable_right(
        algebra: &Arc<DgAlgebra>,
        k: usize,
        shift: i32,
    ) -> Result<DgModule> {
        if k >= algebra.idempotent_count() {
            return Err(Error::Invalid(format!(
                "no idempotent at family position {k}"
            )));
        }
        let members: Vec<usize> = (0..algebra.dim())
            .filter(|&i| algebra.element(i).left == k)
            .collect();
        let reindex: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let basis = members
            .iter()
            .map(|&i| {
                let b = algebra.element(i);
                check_degree(b.degree - shift)?;
                Ok(ModBasisElement {
                    label: b.label.clone(),
                    degree: b.degree - shift,
                    left: 0,
                    right: b.right,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let f = algebra.field();
        let restrict = |c: &LinComb| -> LinComb {
            c.map_terms(f, |i| {
                (
                    *reindex
                        .get(&i)
                        .expect("e_kA is closed under the operations"),
                    f.one(),
                )
            })
        };
        let mut right_action = BTreeMap::new();
        for (&old, &new) in &reindex {
            for a in 0..algebra.dim() {
                if algebra.family_position(a).is_some() {
                    continue;
                }
                let c = algebra.mul_basis(old, a);
                if !c.is_zero() {
                    right_action.insert((new, a), restrict(&c));
                }
            }
        }
        let dsign = f.sign(shift as i64);
        let mut diff = BTreeMap::new();
        for (&old, &new) in &reindex {
            let c = algebra.diff_basis(old);
            if !c.is_zero() {
                diff.insert(new, restrict(&c).scale(&dsign, f));
            }
        }
        DgModule::new_right(algebra.clone(), basis, right_action, diff)
    }

    /// The right corner module ⊕_{k∈positions} e_kA: all basis elements
    /// whose left idempotent lies in the given family positions.
    pub fn right_corner(algebra: &Arc<DgAlgebra>, positions: &[usize]) -> Result<DgModule> {
        for &k in positions {
            if k >= algebra.idempotent_count() {
                return Err(Error::Invalid(format!(
                    "no idempotent at family position {k}"
                )));
            }
        }
        let members: Vec<usize> = (0..algebra.dim())
            .filter(|&i| positions.contains(&algebra.element(i).left))
            .collect();
        let reindex: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let basis = members
            .iter()
            .map(|&i| {
                let b = algebra.element(i);
                ModBasisElement {
                    label: b.label.clone(),
                    degree: b.degree,
                    left: 0,
                    right: b.right,
                }
            })
            .collect();
        let f = algebra.field();
        let restrict = |c: &LinComb| -> LinComb {
            c.map_terms(f, |i| (*reindex.get(&i).expect("corner is closed"), f.one()))
        };
        let mut right_action = BTreeMap::new();
        for (&old, &new) in &reindex {
            for a in 0..algebra.dim() {
                if algebra.family_position(a).is_some() {
                    continue;
                }
                let c = algebra.mul_basis(old, a);
                if !c.is_zero() {
                    right_action.insert((new, a), restrict(&c));
                }
            }
        }
        let mut diff = BTreeMap::new();
        for (&old, &new) in &reindex {
            let c = algebra.diff_basis(old);
            if !c.is_zero() {
                diff.insert(new, restrict(&c));
            }
        }
        DgModule::new_right(algebra.clone(), basis, right_action, diff)
    }

    /// The left corner module ⊕_{j∈positions} Ae_j.
    pub fn left_corner(algebra: &Arc<DgAlgebra>, positions: &[usize]) -> Result<DgModule> {
        for &k in positions {
            if k >= algebra.idempotent_count() {
                return Err(Error::Invalid(format!(
                    "no idempotent at family position {k}"
                )));
            }
        }
        let members: Vec<usize> = (0..algebra.dim())
            .filter(|&i| positions.contains(&algebra.element(i).right))
            .collect();
        let reindex: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let basis = members
            .iter()
            .map(|&i| {
                let b = algebra.element(i);
                ModBasisElement {
                    label: b.label.clone(),
                    degree: b.degree,
                    left: b.left,
                    right: 0,
                }
            })
            .collect();
        let f = algebra.field();
        let restrict = |c: &LinComb| -> LinComb {
            c.map_terms(f, |i| (*reindex.get(&i).expect("corner is closed"), f.one()))
        };
        let mut left_action = BTreeMap::new();
        for (&old, &new) in &reindex {
            for a in 0..algebra.dim() {
                if algebra.family_position(a).is_some() {
                    continue;
                }
                let c = algebra.mul_basis(a, old);
                if !c.is_zero() {
                    left_action.insert((a, new), restrict(&c));
                }
            }
        }
        let mut diff = BTreeMap::new();
        for (&old, &new) in &reindex {
            let c = algebra.diff_basis(old);
            if !c.is_zero() {
                diff.insert(new, restrict(&c));
            }
        }
        DgModule::new_left(algebra.clone(), basis, left_action, diff)
    }

    /// The representable left dg module Ae_j, shifted by `shift`.
    pub fn representable_left(algebra: &Arc<DgAlgebra>, j: usize, shift: i32) -> Result<DgModule> {
        if j >= algebra.idempotent_count() {
            return Err(Error::Invalid(format!(
                "no idempotent at family position {j}"
            )));
        }
        let members: Vec<usize> = (0..algebra.dim())
            .filter(|&i| algebra.element(i).right == j)
            .collect();
        let reindex: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let f = algebra.field();
        let basis = members
            .iter()
            .map(|&i| {
                let b = algebra.element(i);
                check_degree(b.degree - shift)?;
                Ok(ModBasisElement {
                    label: b.label.clone(),
                    degree: b.degree - shift,
                    left: b.left,
                    right: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let restrict = |c: &LinComb| -> LinComb {
            c.map_terms(f, |i| {
                (
                    *reindex
                        .get(&i)
                        .expect("Ae_j is closed under the operations"),
                    f.one(),
                )
            })
        };
        let mut left_action = BTreeMap::new();
        for (&old, &new) in &reindex {
            for a in 0..algebra.dim() {
                if algebra.family_position(a).is_some() {
                    continue;
                }
                let c = algebra.mul_basis(a, old);
                if !c.is_zero() {
                    // left action in Ae_j[shift] carries (−1)^{shift·|a|}
                    let sign = f.sign(shift as i64 * algebra.degree(a) as i64);
                    left_action.insert((a, new), restrict(&c).scale(&sign, f));
                }
            }
        }
        let dsign = f.sign(shift as i64);
        let mut diff = BTreeMap::new();
        for (&old, &new) in &reindex {
            let c = algebra.diff_basis(old);
            if !c.is_zero() {
                diff.insert(new, restrict(&c).scale(&dsign, f));
            }
        }
        DgModule::new_left(algebra.clone(), basis, left_action, diff)
    }

    /// Relabel every basis element through `f` (labels must stay unique).
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<DgModule> {
        let basis = self
            .basis
            .iter()
            .map(|b| ModBasisElement {
                label: f(&b.label),
                degree: b.degree,
                left: b.left,
                right: b.right,
            })
            .collect();
        DgModule::raw(
            self.side,
            self.left_algebra.clone(),
            self.right_algebra.clone(),
            basis,
            self.left_action.clone(),
            self.right_action.clone(),
            self.diff.clone(),
        )
    }

    /// Reinterpret a one-sided module as a bimodule with the trivial
    /// algebra acting on the missing side (the data is unchanged).
    pub fn as_bimodule(&self) -> DgModule {
        let mut m = self.clone();
        m.side = Side::Bimodule;
        m
    }

    /// Retag a bimodule whose left (resp. right) algebra is trivial as a
    /// right (resp. left) module.
    pub fn tighten_side(&self) -> DgModule {
        let trivial = DgAlgebra::trivial(self.field());
        let mut m = self.clone();
        if same_algebra(&self.left_algebra, &trivial) {
            m.side = Side::Right;
        } else if same_algebra(&self.right_algebra, &trivial) {
            m.side = Side::Left;
        }
        m
    }
}

fn check_mod_lincomb(c: &LinComb, n: usize, field: Field) -> Result<()> {
    for (i, s) in c.terms() {
        if i >= n {
            return Err(Error::Invalid("linear combination index out of range".into()));
        }
        if !field.contains(s) {
            return Err(Error::FieldMismatch(format!(
                "coefficient {s} does not belong to {field}"
            )));
        }
    }
    Ok(())
}
