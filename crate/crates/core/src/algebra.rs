//! Dg algebras with enough idempotents, given by a finite homogeneous
//! basis and structure constants.
//!
//! Products with distinguished idempotents are implied by the Peirce data
//! and are never stored; `mul_basis` derives them. Stored entries may
//! still involve idempotents so that corrupted inputs are representable —
//! validation is total and reports every broken law with its witness.

use crate::error::{Error, Result};
use crate::graded::{check_degree, GradedHomology, GradedMap, GradedSpace};
use crate::matrix::Matrix;
use crate::report::{Law, Report};
use crate::scalar::{Field, Scalar};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Formal linear combination of basis indices. Zero coefficients are never
/// stored, so `==` is semantic equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinComb(BTreeMap<usize, Scalar>);

impl LinComb {
    pub fn zero() -> LinComb {
        LinComb(BTreeMap::new())
    }

    pub fn singleton(index: usize, coeff: Scalar) -> LinComb {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(index, coeff);
        }
        LinComb(m)
    }

    pub fn basis(index: usize, field: Field) -> LinComb {
        LinComb::singleton(index, field.one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>, field: Field) -> LinComb {
        let mut out = LinComb::zero();
        for (i, c) in terms {
            out.add_term(i, &c, field);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, index: usize) -> Option<&Scalar> {
        self.0.get(&index)
    }

    pub fn add_term(&mut self, index: usize, coeff: &Scalar, field: Field) {
        if coeff.is_zero() {
            return;
        }
        let v = match self.0.remove(&index) {
            Some(old) => field.add(&old, coeff),
            None => coeff.clone(),
        };
        if !v.is_zero() {
            self.0.insert(index, v);
        }
    }

    pub fn add(&self, other: &LinComb, field: Field) -> LinComb {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c, field);
        }
        out
    }

    pub fn sub(&self, other: &LinComb, field: Field) -> LinComb {
        self.add(&other.scale(&field.from_integer(-1), field), field)
    }

    pub fn scale(&self, c: &Scalar, field: Field) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb(
            self.0
                .iter()
                .map(|(i, v)| (*i, field.mul(v, c)))
                .collect(),
        )
    }

    /// Remap indices (and optionally twist coefficients), e.g. for
    /// opposite-algebra and relabelling constructions.
    pub fn map_terms(&self, field: Field, mut f: impl FnMut(usize) -> (usize, Scalar)) -> LinComb {
        let mut out = LinComb::zero();
        for (i, c) in self.terms() {
            let (j, s) = f(i);
            out.add_term(j, &field.mul(c, &s), field);
        }
        out
    }
}

/// One homogeneous basis element: its label, degree and Peirce position
/// `e_left · x · e_right = x` (indices into the distinguished family).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BasisElement {
    pub label: String,
    pub degree: i32,
    pub left: usize,
    pub right: usize,
}

/// A dg algebra with enough idempotents over an exact field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgAlgebra {
    field: Field,
    basis: Vec<BasisElement>,
    /// Basis indices of the distinguished idempotents, in family order.
    idempotents: Vec<usize>,
    mul: BTreeMap<(usize, usize), LinComb>,
    diff: BTreeMap<usize, LinComb>,
}

impl DgAlgebra {
    /// Structural construction: checks shapes, label uniqueness and field
    /// membership, but none of the algebra laws — those are `validate`'s
    /// job, which never throws.
    pub fn new(
        field: Field,
        basis: Vec<BasisElement>,
        idempotents: Vec<usize>,
        mul: BTreeMap<(usize, usize), LinComb>,
        diff: BTreeMap<usize, LinComb>,
    ) -> Result<DgAlgebra> {
        let n = basis.len();
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            check_degree(b.degree)?;
            if !seen.insert(b.label.clone()) {
                return Err(Error::Invalid(format!("duplicate basis label `{}`", b.label)));
            }
            if b.left >= idempotents.len() || b.right >= idempotents.len() {
                return Err(Error::Invalid(format!(
                    "basis element `{}` references an unknown idempotent",
                    b.label
                )));
            }
        }
        for &i in &idempotents {
            if i >= n {
                return Err(Error::Invalid("idempotent index out of range".into()));
            }
        }
        let mut mul_clean = BTreeMap::new();
        for ((i, j), c) in mul {
            if i >= n || j >= n {
                return Err(Error::Invalid("multiplication table index out of range".into()));
            }
            check_lincomb(&c, n, field)?;
            if !c.is_zero() {
                mul_clean.insert((i, j), c);
            }
        }
        let mut diff_clean = BTreeMap::new();
        for (i, c) in diff {
            if i >= n {
                return Err(Error::Invalid("differential table index out of range".into()));
            }
            check_lincomb(&c, n, field)?;
            if !c.is_zero() {
                diff_clean.insert(i, c);
            }
        }
        Ok(DgAlgebra {
            field,
            basis,
            idempotents,
            mul: mul_clean,
            diff: diff_clean,
        })
    }

    /// The ground field viewed as a dg algebra: one idempotent, zero
    /// differential. Used as the silent outer algebra of one-sided modules.
    pub fn trivial(field: Field) -> Arc<DgAlgebra> {
        Arc::new(
            DgAlgebra::new(
                field,
                vec![BasisElement {
                    label: "e".into(),
                    degree: 0,
                    left: 0,
                    right: 0,
                }],
                vec![0],
                BTreeMap::new(),
                BTreeMap::new(),
            )
            .expect("trivial algebra is structurally sound"),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn element(&self, i: usize) -> &BasisElement {
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

    /// Family positions of the distinguished idempotents.
    pub fn idempotent_count(&self) -> usize {
        self.idempotents.len()
    }

    /// Basis index of the `k`-th distinguished idempotent.
    pub fn idempotent(&self, k: usize) -> usize {
        self.idempotents[k]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// Is basis element `i` a distinguished idempotent? Returns its family
    /// position.
    pub fn family_position(&self, i: usize) -> Option<usize> {
        self.idempotents.iter().position(|&b| b == i)
    }

    /// Raw stored tables, for printers.
    pub fn stored_mul(&self) -> &BTreeMap<(usize, usize), LinComb> {
        &self.mul
    }

    pub fn stored_diff(&self) -> &BTreeMap<usize, LinComb> {
        &self.diff
    }

    /// Product of two basis elements. Stored entries win; products with
    /// distinguished idempotents are derived from the Peirce data.
    pub fn mul_basis(&self, i: usize, j: usize) -> LinComb {
        if let Some(c) = self.mul.get(&(i, j)) {
            return c.clone();
        }
        if let Some(fi) = self.family_position(i) {
            // e_fi · x
            return if self.basis[j].left == fi {
                LinComb::basis(j, self.field)
            } else {
                LinComb::zero()
            };
        }
        if let Some(fj) = self.family_position(j) {
            // x · e_fj
            return if self.basis[i].right == fj {
                LinComb::basis(i, self.field)
            } else {
                LinComb::zero()
            };
        }
        LinComb::zero()
    }

    pub fn mul_elems(&self, a: &LinComb, b: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (i, ci) in a.terms() {
            for (j, cj) in b.terms() {
                let prod = self.mul_basis(i, j);
                let c = self.field.mul(ci, cj);
                out = out.add(&prod.scale(&c, self.field), self.field);
            }
        }
        out
    }

    pub fn diff_basis(&self, i: usize) -> LinComb {
        self.diff.get(&i).cloned().unwrap_or_default()
    }

    pub fn diff_elem(&self, a: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (i, c) in a.terms() {
            out = out.add(&self.diff_basis(i).scale(c, self.field), self.field);
        }
        out
    }

    /// The identity element Σ_i e_i (finite family, so it exists honestly).
    pub fn unit(&self) -> LinComb {
        LinComb::from_terms(
            self.idempotents.iter().map(|&b| (b, self.field.one())),
            self.field,
        )
    }

    pub fn format_lincomb(&self, c: &LinComb) -> String {
        if c.is_zero() {
            return "0".into();
        }
        c.terms()
            .map(|(i, s)| format!("{}*{}", s, self.label(i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The underlying graded space (basis labels in index order per degree).
    pub fn underlying_space(&self) -> GradedSpace {
        let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for b in &self.basis {
            degrees.entry(b.degree).or_default().push(b.label.clone());
        }
        GradedSpace::new(self.field, degrees).expect("basis labels are unique")
    }

    /// Position of basis element `i` inside the per-degree ordering of
    /// `underlying_space`.
    pub fn position_in_degree(&self, i: usize) -> usize {
        let d = self.basis[i].degree;
        self.basis[..i].iter().filter(|b| b.degree == d).count()
    }

    /// The differential as a graded map of degree +1. Fails if stored
    /// entries are not degree-homogeneous (validate first).
    pub fn differential_map(&self) -> Result<GradedMap> {
        let space = self.underlying_space();
        let field = self.field;
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
                        "differential of `{}` is not homogeneous of degree {}",
                        self.label(*i),
                        n + 1
                    )));
                }
                let row = self.position_in_degree(j);
                blocks.get_mut(&n).unwrap().set(row, col, c.clone());
            }
        }
        GradedMap::new(space.clone(), space, 1, blocks)
    }

    /// Exact per-degree dimensions of H^*(A).
    pub fn homology(&self) -> Result<BTreeMap<i32, usize>> {
        let space = self.underlying_space();
        let d = self.differential_map()?;
        Ok(GradedHomology::new(&space, &d)?.dims())
    }

    /// Total validation of every dg-algebra law, by brute force over basis
    /// tuples. Never fails; all violations become report entries.
    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        let f = self.field;

        // idempotent basis data: degree 0, own Peirce corner
        for (k, &b) in self.idempotents.iter().enumerate() {
            let e = &self.basis[b];
            if e.degree != 0 || e.left != k || e.right != k {
                report.push(
                    Law::IdempotentData,
                    format!("idempotent {} (degree {}, corner ({},{}))", e.label, e.degree, e.left, e.right),
                );
            }
        }

        // e_i e_j = δ_ij e_i
        for (ki, &bi) in self.idempotents.iter().enumerate() {
            for (kj, &bj) in self.idempotents.iter().enumerate() {
                let prod = self.mul_basis(bi, bj);
                let expected = if ki == kj {
                    LinComb::basis(bi, f)
                } else {
                    LinComb::zero()
                };
                if prod != expected {
                    report.push(
                        Law::IdempotentOrthogonality,
                        format!("({}, {})", self.label(bi), self.label(bj)),
                    );
                }
            }
        }

        // identity action of idempotents on every basis element
        for (k, &e) in self.idempotents.iter().enumerate() {
            for x in 0..self.basis.len() {
                if self.family_position(x).is_some() {
                    continue;
                }
                let left = self.mul_basis(e, x);
                let expect_left = if self.basis[x].left == k {
                    LinComb::basis(x, f)
                } else {
                    LinComb::zero()
                };
                if left != expect_left {
                    report.push(
                        Law::IdentityAction,
                        format!("({}, {})", self.label(e), self.label(x)),
                    );
                }
                let right = self.mul_basis(x, e);
                let expect_right = if self.basis[x].right == k {
                    LinComb::basis(x, f)
                } else {
                    LinComb::zero()
                };
                if right != expect_right {
                    report.push(
                        Law::IdentityAction,
                        format!("({}, {})", self.label(x), self.label(e)),
                    );
                }
            }
        }

        // Peirce compatibility and degree homogeneity of every product
        for i in 0..self.basis.len() {
            for j in 0..self.basis.len() {
                let prod = self.mul_basis(i, j);
                if prod.is_zero() {
                    continue;
                }
                let (bi, bj) = (&self.basis[i], &self.basis[j]);
                if bi.right != bj.left {
                    report.push(
                        Law::PeirceCompatibility,
                        format!("({}, {}) nonzero across mismatched idempotents", bi.label, bj.label),
                    );
                }
                for (t, _) in prod.terms() {
                    let bt = &self.basis[t];
                    if bt.degree != bi.degree + bj.degree {
                        report.push(
                            Law::DegreeHomogeneity,
                            format!("({}, {}) -> {}", bi.label, bj.label, bt.label),
                        );
                    }
                    if bt.left != bi.left || bt.right != bj.right {
                        report.push(
                            Law::PeirceCompatibility,
                            format!("({}, {}) -> {}", bi.label, bj.label, bt.label),
                        );
                    }
                }
            }
        }

        // associativity on all basis triples
        for i in 0..self.basis.len() {
            for j in 0..self.basis.len() {
                for k in 0..self.basis.len() {
                    let lhs = self.mul_elems(&self.mul_basis(i, j), &LinComb::basis(k, f));
                    let rhs = self.mul_elems(&LinComb::basis(i, f), &self.mul_basis(j, k));
                    if lhs != rhs {
                        report.push(
                            Law::Associativity,
                            format!("({}, {}, {})", self.label(i), self.label(j), self.label(k)),
                        );
                    }
                }
            }
        }

        // differential: degree +1 homogeneous, zero on idempotents, d∘d = 0
        for i in 0..self.basis.len() {
            let di = self.diff_basis(i);
            for (t, _) in di.terms() {
                if self.basis[t].degree != self.basis[i].degree + 1 {
                    report.push(
                        Law::DifferentialDegree,
                        format!("d({}) -> {}", self.label(i), self.label(t)),
                    );
                }
            }
            if self.family_position(i).is_some() && !di.is_zero() {
                report.push(Law::DifferentialOnIdempotent, self.label(i).to_string());
            }
            if !self.diff_elem(&di).is_zero() {
                report.push(Law::DifferentialSquare, format!("d(d({}))", self.label(i)));
            }
        }

        // Leibniz on all basis pairs: d(ab) = d(a)b + (−1)^{|a|} a d(b)
        for i in 0..self.basis.len() {
            for j in 0..self.basis.len() {
                let lhs = self.diff_elem(&self.mul_basis(i, j));
                let sign = f.sign(self.basis[i].degree as i64);
                let rhs = self
                    .mul_elems(&self.diff_basis(i), &LinComb::basis(j, f))
                    .add(
                        &self
                            .mul_elems(&LinComb::basis(i, f), &self.diff_basis(j))
                            .scale(&sign, f),
                        f,
                    );
                if lhs != rhs {
                    report.push(
                        Law::Leibniz,
                        format!("({}, {})", self.label(i), self.label(j)),
                    );
                }
            }
        }

        report
    }

    /// The opposite algebra: same graded basis with Peirce corners
    /// transposed, multiplication `a°·b° = (−1)^{|a||b|} (ba)°`, unchanged
    /// differential.
    pub fn opposite(&self) -> DgAlgebra {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement {
                label: b.label.clone(),
                degree: b.degree,
                left: b.right,
                right: b.left,
            })
            .collect();
        let f = self.field;
        let mut mul = BTreeMap::new();
        for ((j, i), c) in &self.mul {
            let sign = f.sign(self.basis[*i].degree as i64 * self.basis[*j].degree as i64);
            mul.insert((*i, *j), c.scale(&sign, f));
        }
        DgAlgebra::new(f, basis, self.idempotents.clone(), mul, self.diff.clone())
            .expect("opposite of a structurally sound algebra is sound")
    }

    /// Tensor product of dg algebras: basis pairs, additive degrees,
    /// idempotents `e_i⊗e'_j`, multiplication with the Koszul sign
    /// `(a⊗b)(c⊗d) = (−1)^{|b||c|} ac⊗bd`, tensor differential.
    pub fn tensor(a: &DgAlgebra, b: &DgAlgebra) -> Result<DgAlgebra> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", a.field, b.field)));
        }
        let f = a.field;
        let (na, nb) = (a.basis.len(), b.basis.len());
        let pair = |i: usize, j: usize| i * nb + j;
        let mut basis = Vec::with_capacity(na * nb);
        for (i, x) in a.basis.iter().enumerate() {
            for (j, y) in b.basis.iter().enumerate() {
                check_degree(x.degree + y.degree)?;
                basis.push(BasisElement {
                    label: format!("{}@{}", x.label, y.label),
                    degree: x.degree + y.degree,
                    left: x.left * b.idempotents.len() + y.left,
                    right: x.right * b.idempotents.len() + y.right,
                });
                let _ = (i, j);
            }
        }
        let mut idempotents = Vec::new();
        for &ei in &a.idempotents {
            for &ej in &b.idempotents {
                idempotents.push(pair(ei, ej));
            }
        }
        let is_distinguished = |i: usize, j: usize| {
            a.family_position(i).is_some() && b.family_position(j).is_some()
        };

        let mut mul = BTreeMap::new();
        for i1 in 0..na {
            for j1 in 0..nb {
                if is_distinguished(i1, j1) {
                    continue;
                }
                for i2 in 0..na {
                    for j2 in 0..nb {
                        if is_distinguished(i2, j2) {
                            continue;
                        }
                        // (x1⊗y1)(x2⊗y2) = (−1)^{|y1||x2|} x1x2 ⊗ y1y2
                        let sign = f.sign(b.degree(j1) as i64 * a.degree(i2) as i64);
                        let px = a.mul_basis(i1, i2);
                        let py = b.mul_basis(j1, j2);
                        let mut out = LinComb::zero();
                        for (xi, cx) in px.terms() {
                            for (yj, cy) in py.terms() {
                                let c = f.mul(&f.mul(cx, cy), &sign);
                                out.add_term(pair(xi, yj), &c, f);
                            }
                        }
                        if !out.is_zero() {
                            mul.insert((pair(i1, j1), pair(i2, j2)), out);
                        }
                    }
                }
            }
        }

        let mut diff = BTreeMap::new();
        for i in 0..na {
            for j in 0..nb {
                // d(x⊗y) = d(x)⊗y + (−1)^{|x|} x⊗d(y)
                let mut out = LinComb::zero();
                for (t, c) in a.diff_basis(i).terms() {
                    out.add_term(pair(t, j), c, f);
                }
                let sign = f.sign(a.degree(i) as i64);
                for (t, c) in b.diff_basis(j).terms() {
                    out.add_term(pair(i, t), &f.mul(c, &sign), f);
                }
                if !out.is_zero() {
                    diff.insert(pair(i, j), out);
                }
            }
        }

        DgAlgebra::new(f, basis, idempotents, mul, diff)
    }
}

fn check_lincomb(c: &LinComb, n: usize, field: Field) -> Result<()> {
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

/// The Prop-5.2 comparison Φ : A⊗B° → (B⊗A°)°, `Φ(a⊗b°) =
/// (−1)^{|a||b|}(b⊗a°)°`, checked to be a degree-0 bijective algebra
/// isomorphism commuting with differentials, by brute force over basis
/// pairs.
pub fn check_phi_iso(a: &DgAlgebra, b: &DgAlgebra) -> Result<Report> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.field(), b.field())));
    }
    let f = a.field();
    let source = DgAlgebra::tensor(a, &b.opposite())?;
    let target = DgAlgebra::tensor(b, &a.opposite())?.opposite();
    let nb = b.dim();
    // source index i*nb+j (pair (a_i, b_j)) maps to target index j*na+i
    // with sign (−1)^{|a_i||b_j|}
    let phi_index = |s: usize| -> (usize, Scalar) {
        let (i, j) = (s / nb, s % nb);
        let sign = f.sign(a.degree(i) as i64 * b.degree(j) as i64);
        (j * a.dim() + i, sign)
    };
    let phi = |c: &LinComb| c.map_terms(f, phi_index);

    let mut report = Report::default();
    // degree 0 and bijective by construction (a signed basis bijection);
    // still check the degrees line up
    for s in 0..source.dim() {
        let (t, _) = phi_index(s);
        if source.degree(s) != target.degree(t) {
            report.push(Law::HomDegreeZero, source.label(s).to_string());
        }
    }
    for i in 0..source.dim() {
        for j in 0..source.dim() {
            let lhs = phi(&source.mul_basis(i, j));
            let (ti, si) = phi_index(i);
            let (tj, sj) = phi_index(j);
            let rhs = target
                .mul_basis(ti, tj)
                .scale(&f.mul(&si, &sj), f);
            if lhs != rhs {
                report.push(
                    Law::HomMultiplicative,
                    format!("Φ at ({}, {})", source.label(i), source.label(j)),
                );
            }
        }
    }
    for i in 0..source.dim() {
        let lhs = phi(&source.diff_basis(i));
        let (ti, si) = phi_index(i);
        let rhs = target.diff_basis(ti).scale(&si, f);
        if lhs != rhs {
            report.push(Law::HomDifferential, format!("Φ at {}", source.label(i)));
        }
    }
    Ok(report)
}

/// A homomorphism of dg algebras with enough idempotents, stored as the
/// image of every source basis element.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    pub source: Arc<DgAlgebra>,
    pub target: Arc<DgAlgebra>,
    pub images: Vec<LinComb>,
}

impl AlgebraHom {
    pub fn new(source: Arc<DgAlgebra>, target: Arc<DgAlgebra>, images: Vec<LinComb>) -> Result<AlgebraHom> {
        if images.len() != source.dim() {
            return Err(Error::Invalid(format!(
                "homomorphism needs {} images, got {}",
                source.dim(),
                images.len()
            )));
        }
        for c in &images {
            check_lincomb(c, target.dim(), target.field())?;
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                source.field(),
                target.field()
            )));
        }
        Ok(AlgebraHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(a: &Arc<DgAlgebra>) -> AlgebraHom {
        let images = (0..a.dim()).map(|i| LinComb::basis(i, a.field())).collect();
        AlgebraHom::new(a.clone(), a.clone(), images).expect("identity is well-formed")
    }

    pub fn apply(&self, c: &LinComb) -> LinComb {
        let f = self.target.field();
        let mut out = LinComb::zero();
        for (i, s) in c.terms() {
            out = out.add(&self.images[i].scale(s, f), f);
        }
        out
    }

    /// For each source idempotent, the set of target family positions it
    /// maps onto — defined when the image is a sum of distinct
    /// distinguished idempotents with coefficient one, which is the shape
    /// the engine supports.
    pub fn idempotent_targets(&self) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for k in 0..self.source.idempotent_count() {
            let img = &self.images[self.source.idempotent(k)];
            let mut positions = Vec::new();
            for (t, c) in img.terms() {
                let Some(pos) = self.target.family_position(t) else {
                    return Err(Error::Invalid(format!(
                        "image of idempotent {} is not a sum of distinguished idempotents",
                        self.source.label(self.source.idempotent(k))
                    )));
                };
                if !c.is_one() {
                    return Err(Error::Invalid(format!(
                        "image of idempotent {} has a coefficient other than 1",
                        self.source.label(self.source.idempotent(k))
                    )));
                }
                positions.push(pos);
            }
            out.push(positions);
        }
        Ok(out)
    }

    /// Total check: degree 0, multiplicative, commutes with differentials,
    /// idempotents map to orthogonal sums of distinguished idempotents,
    /// and the unitarity condition (every target idempotent is hit).
    pub fn check(&self) -> Report {
        let mut report = Report::default();
        let f = self.target.field();
        for i in 0..self.source.dim() {
            for (t, _) in self.images[i].terms() {
                if self.target.degree(t) != self.source.degree(i) {
                    report.push(
                        Law::HomDegreeZero,
                        format!("ι({}) -> {}", self.source.label(i), self.target.label(t)),
                    );
                }
            }
        }
        for i in 0..self.source.dim() {
            for j in 0..self.source.dim() {
                let lhs = self.apply(&self.source.mul_basis(i, j));
                let rhs = self.target.mul_elems(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    report.push(
                        Law::HomMultiplicative,
                        format!("({}, {})", self.source.label(i), self.source.label(j)),
                    );
                }
            }
        }
        for i in 0..self.source.dim() {
            let lhs = self.apply(&self.source.diff_basis(i));
            let rhs = self.target.diff_elem(&self.images[i]);
            if lhs != rhs {
                report.push(Law::HomDifferential, self.source.label(i).to_string());
            }
        }
        match self.idempotent_targets() {
            Err(_) => {
                report.push(Law::HomIdempotentImage, "idempotent images");
            }
            Ok(targets) => {
                let mut seen = std::collections::BTreeSet::new();
                for (k, ts) in targets.iter().enumerate() {
                    for &t in ts {
                        if !seen.insert(t) {
                            report.push(
                                Law::HomIdempotentImage,
                                format!(
                                    "target idempotent {} hit twice",
                                    self.target.label(self.target.idempotent(t))
                                ),
                            );
                        }
                        let _ = k;
                    }
                }
                if seen.len() != self.target.idempotent_count() {
                    report.push(
                        Law::Unitarity,
                        "some target idempotent is not in the image of the source family",
                    );
                }
            }
        }
        let _ = f;
        report
    }

    pub fn is_unitary(&self) -> bool {
        self.check().is_valid()
    }
}
