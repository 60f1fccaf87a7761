//! Graded vector spaces with bounded degree support, degree-homogeneous
//! maps between them, and exact homology.

use crate::error::{Error, Result};
use crate::matrix::{KernelBasis, Matrix, QuotientMap};
use crate::scalar::{Field, Scalar};
use std::collections::BTreeMap;

/// Hard bound on the degree window of any constructed object. Operations
/// that grow windows (shift, tensor, Hom) check against it and refuse to
/// run past it.
pub const DEGREE_BOUND: i32 = 64;

pub fn check_degree(n: i32) -> Result<()> {
    if n.abs() > DEGREE_BOUND {
        return Err(Error::WindowOverflow(format!(
            "degree {n} exceeds the global bound ±{DEGREE_BOUND}"
        )));
    }
    Ok(())
}

/// Finite-dimensional graded space: an ordered, labelled basis per degree.
/// Degrees outside the stored window are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSpace {
    field: Field,
    degrees: BTreeMap<i32, Vec<String>>,
}

impl GradedSpace {
    pub fn new(field: Field, degrees: BTreeMap<i32, Vec<String>>) -> Result<GradedSpace> {
        let mut cleaned = BTreeMap::new();
        for (n, labels) in degrees {
            if labels.is_empty() {
                continue;
            }
            check_degree(n)?;
            let mut seen = std::collections::BTreeSet::new();
            for l in &labels {
                if !seen.insert(l.clone()) {
                    return Err(Error::Invalid(format!(
                        "duplicate basis label `{l}` in degree {n}"
                    )));
                }
            }
            cleaned.insert(n, labels);
        }
        Ok(GradedSpace {
            field,
            degrees: cleaned,
        })
    }

    pub fn zero(field: Field) -> GradedSpace {
        GradedSpace {
            field,
            degrees: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, n: i32) -> usize {
        self.degrees.get(&n).map_or(0, Vec::len)
    }

    pub fn labels(&self, n: i32) -> &[String] {
        self.degrees.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `[lo, hi]` of the nonzero degrees, or `None` for the zero space.
    pub fn window(&self) -> Option<(i32, i32)> {
        let lo = self.degrees.keys().next()?;
        let hi = self.degrees.keys().last()?;
        Some((*lo, *hi))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.degrees.keys().copied()
    }

    pub fn index_of(&self, n: i32, label: &str) -> Option<usize> {
        self.labels(n).iter().position(|l| l == label)
    }

    /// The same space with degrees shifted: `self[k]^n = self^{n+k}`.
    pub fn shifted(&self, k: i32) -> Result<GradedSpace> {
        let mut degrees = BTreeMap::new();
        for (n, labels) in &self.degrees {
            let m = n - k;
            check_degree(m)?;
            degrees.insert(m, labels.clone());
        }
        Ok(GradedSpace {
            field: self.field,
            degrees,
        })
    }
}

/// A degree-`d` family of per-degree matrices: the block at `n` maps
/// source degree-`n` coordinates to target degree-`n+d` coordinates.
/// Zero blocks are never stored, so structural equality is semantic
/// equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    degree: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn new(
        source: GradedSpace,
        target: GradedSpace,
        degree: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<GradedMap> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                source.field(),
                target.field()
            )));
        }
        let mut cleaned = BTreeMap::new();
        for (n, m) in blocks {
            let (rows, cols) = (target.dim(n + degree), source.dim(n));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "block at degree {n} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != source.field() {
                return Err(Error::FieldMismatch(format!(
                    "block at degree {n} lives over {}",
                    m.field()
                )));
            }
            if rows > 0 && cols > 0 && !m.is_zero() {
                cleaned.insert(n, m);
            }
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            blocks: cleaned,
        })
    }

    pub fn zero(source: GradedSpace, target: GradedSpace, degree: i32) -> Result<GradedMap> {
        GradedMap::new(source, target, degree, BTreeMap::new())
    }

    pub fn identity(space: &GradedSpace) -> GradedMap {
        let mut blocks = BTreeMap::new();
        for n in space.degrees() {
            blocks.insert(n, Matrix::identity(space.field(), space.dim(n)));
        }
        GradedMap::new(space.clone(), space.clone(), 0, blocks).expect("identity blocks fit")
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// The block at `n`, materializing zeros for absent entries.
    pub fn block(&self, n: i32) -> Matrix {
        match self.blocks.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(
                self.source.field(),
                self.target.dim(n + self.degree),
                self.source.dim(n),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `g ∘ f` with the degree offset applied; the result has degree
    /// `deg f + deg g`.
    pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap> {
        if f.target != g.source {
            return Err(Error::ShapeMismatch(
                "composition: target of inner map differs from source of outer map".into(),
            ));
        }
        let degree = f.degree + g.degree;
        let mut blocks = BTreeMap::new();
        for n in f.source.degrees() {
            let inner = f.block(n);
            let outer = g.block(n + f.degree);
            if outer.rows() == 0 || inner.cols() == 0 {
                continue;
            }
            blocks.insert(n, outer.mul(&inner)?);
        }
        GradedMap::new(f.source.clone(), g.target.clone(), degree, blocks)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::ShapeMismatch(
                "sum of graded maps with different shapes".into(),
            ));
        }
        let mut blocks = BTreeMap::new();
        let keys: std::collections::BTreeSet<i32> = self
            .blocks
            .keys()
            .chain(other.blocks.keys())
            .copied()
            .collect();
        for n in keys {
            blocks.insert(n, self.block(n).add(&other.block(n))?);
        }
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree, blocks)
    }

    pub fn scale(&self, c: &Scalar) -> Result<GradedMap> {
        let mut blocks = BTreeMap::new();
        for (n, m) in &self.blocks {
            blocks.insert(*n, m.scale(c));
        }
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree, blocks)
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&self.source.field().from_integer(-1))
            .expect("negation preserves shape")
    }

    /// Apply to coordinates at a single degree.
    pub fn apply(&self, n: i32, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        self.block(n).apply(coords)
    }

    /// Reinterpret a map `M → N` as a map `M[k] → N[k]` (blocks shift,
    /// no signs — signs are the caller's concern).
    pub fn shifted(&self, k: i32) -> Result<GradedMap> {
        let source = self.source.shifted(k)?;
        let target = self.target.shifted(k)?;
        let mut blocks = BTreeMap::new();
        for (n, m) in &self.blocks {
            blocks.insert(n - k, m.clone());
        }
        GradedMap::new(source, target, self.degree, blocks)
    }
}

/// Homology at a single degree, per the kernel/image description.
#[derive(Clone, Debug)]
pub struct HomologyAt {
    pub dim: usize,
    pub cycles: Vec<Vec<Scalar>>,
    pub boundaries: Vec<Vec<Scalar>>,
}

/// `H^n = ker(d_out at n) / im(d_in at n−1)` for one degree `n`.
///
/// `d_in` and `d_out` are degree +1 maps with `target(d_in) =
/// source(d_out)`; the composite must vanish.
pub fn homology_at(d_in: &GradedMap, d_out: &GradedMap, n: i32) -> Result<HomologyAt> {
    if d_in.degree() != 1 || d_out.degree() != 1 {
        return Err(Error::ShapeMismatch(
            "homology expects degree +1 differentials".into(),
        ));
    }
    if d_in.target() != d_out.source() {
        return Err(Error::ShapeMismatch(
            "homology: d_in target differs from d_out source".into(),
        ));
    }
    let composite = GradedMap::compose(d_out, d_in)?;
    if !composite.is_zero() {
        let bad = d_in
            .source()
            .degrees()
            .find(|&k| !composite.block(k).is_zero())
            .unwrap_or(n);
        return Err(Error::NotAComplex(bad));
    }
    let cycles_basis = d_out.block(n).kernel_basis();
    let image = d_in.block(n - 1).rank_kernel_image().image;
    let dim = cycles_basis.dim() - image.len();
    Ok(HomologyAt {
        dim,
        cycles: cycles_basis.vectors.clone(),
        boundaries: image,
    })
}

/// Homology of a whole bounded complex, with chosen representatives:
/// cycles are an echelon kernel basis and classes live in the echelon
/// complement of the boundary span.
#[derive(Clone, Debug)]
pub struct GradedHomology {
    space: GradedSpace,
    at: BTreeMap<i32, DegreeHomology>,
}

#[derive(Clone, Debug)]
struct DegreeHomology {
    cycles: KernelBasis,
    quotient: QuotientMap,
}

impl GradedHomology {
    /// Requires `d : space → space` of degree +1 with `d∘d = 0`; the
    /// complex condition is asserted before anything else.
    pub fn new(space: &GradedSpace, d: &GradedMap) -> Result<GradedHomology> {
        if d.source() != space || d.target() != space || d.degree() != 1 {
            return Err(Error::ShapeMismatch(
                "differential must be a degree +1 endomap of the space".into(),
            ));
        }
        let dd = GradedMap::compose(d, d)?;
        if !dd.is_zero() {
            let bad = space
                .degrees()
                .find(|&k| !dd.block(k).is_zero())
                .expect("nonzero composite has a nonzero block");
            return Err(Error::NotAComplex(bad));
        }
        let field = space.field();
        let mut at = BTreeMap::new();
        for n in space.degrees() {
            let cycles = d.block(n).kernel_basis();
            let image = d.block(n - 1).rank_kernel_image().image;
            let mut rows = Vec::new();
            for b in &image {
                let coords = cycles
                    .coords_of(b)
                    .expect("boundaries are cycles in a complex");
                rows.push(coords);
            }
            let quotient = QuotientMap::new(field, cycles.dim(), &rows)?;
            at.insert(n, DegreeHomology { cycles, quotient });
        }
        Ok(GradedHomology {
            space: space.clone(),
            at,
        })
    }

    pub fn dim(&self, n: i32) -> usize {
        self.at.get(&n).map_or(0, |d| d.quotient.dim())
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.at.iter().map(|(n, d)| (*n, d.quotient.dim())).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.at.values().all(|d| d.quotient.dim() == 0)
    }

    /// Homology class of a degree-`n` vector; `None` when it is not a cycle.
    pub fn class_of(&self, n: i32, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let Some(d) = self.at.get(&n) else {
            if v.iter().all(Scalar::is_zero) {
                return Ok(Some(Vec::new()));
            }
            return Err(Error::ShapeMismatch(format!(
                "no degree-{n} component in the complex"
            )));
        };
        match d.cycles.coords_of(v) {
            None => Ok(None),
            Some(coords) => Ok(Some(d.quotient.reduce(&coords)?)),
        }
    }

    /// A cycle representing the class with the given quotient coordinates.
    pub fn representative(&self, n: i32, class: &[Scalar]) -> Result<Vec<Scalar>> {
        let Some(d) = self.at.get(&n) else {
            return Err(Error::ShapeMismatch(format!(
                "no degree-{n} component in the complex"
            )));
        };
        let cycle_coords = d.quotient.lift(class)?;
        let field = self.space.field();
        let mut v = vec![field.zero(); self.space.dim(n)];
        for (c, basis) in cycle_coords.iter().zip(&d.cycles.vectors) {
            if c.is_zero() {
                continue;
            }
            for (i, b) in basis.iter().enumerate() {
                v[i] = field.add(&v[i], &field.mul(c, b));
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn space(parts: &[(i32, &[&str])]) -> GradedSpace {
        let mut degrees = BTreeMap::new();
        for (n, labels) in parts {
            degrees.insert(*n, labels.iter().map(|s| s.to_string()).collect());
        }
        GradedSpace::new(q(), degrees).unwrap()
    }

    #[test]
    fn window_and_dims() {
        let v = space(&[(0, &["a", "b"]), (2, &["c"])]);
        assert_eq!(v.window(), Some((0, 2)));
        assert_eq!(v.dim(0), 2);
        assert_eq!(v.dim(1), 0);
        assert_eq!(v.total_dim(), 3);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let mut degrees = BTreeMap::new();
        degrees.insert(0, vec!["a".to_string(), "a".to_string()]);
        assert!(GradedSpace::new(q(), degrees).is_err());
    }

    #[test]
    fn shift_inverts() {
        let v = space(&[(0, &["a"]), (1, &["b"])]);
        let w = v.shifted(1).unwrap();
        assert_eq!(w.dim(-1), 1);
        assert_eq!(w.dim(0), 1);
        assert_eq!(w.shifted(-1).unwrap(), v);
    }

    #[test]
    fn window_bound_enforced() {
        let v = space(&[(60, &["a"])]);
        assert!(v.shifted(-10).is_err());
        let mut degrees = BTreeMap::new();
        degrees.insert(100, vec!["a".to_string()]);
        assert!(GradedSpace::new(q(), degrees).is_err());
    }

    #[test]
    fn compose_degree_bookkeeping() {
        let a = space(&[(0, &["a"])]);
        let b = space(&[(1, &["b"])]);
        let c = space(&[(0, &["c"])]);
        let f = GradedMap::new(
            a.clone(),
            b.clone(),
            1,
            BTreeMap::from([(0, Matrix::identity(q(), 1))]),
        )
        .unwrap();
        let g = GradedMap::new(
            b,
            c.clone(),
            -1,
            BTreeMap::from([(1, Matrix::identity(q(), 1))]),
        )
        .unwrap();
        let gf = GradedMap::compose(&g, &f).unwrap();
        assert_eq!(gf.degree(), 0);
        assert!(gf.block(0).get(0, 0).is_one());

        let id = GradedMap::identity(&a);
        assert_eq!(GradedMap::compose(&f, &id).unwrap(), f);
    }

    #[test]
    fn homology_zero_differential() {
        let v = space(&[(3, &["a", "b", "c"])]);
        let d = GradedMap::zero(v.clone(), v.clone(), 1).unwrap();
        let h = GradedHomology::new(&v, &d).unwrap();
        assert_eq!(h.dim(3), 3);
        assert!(!h.is_acyclic());
    }

    #[test]
    fn homology_two_term_identity() {
        // K --id--> K in degrees 0, 1: exact, H = 0 everywhere.
        // Oracle: rank-nullity — ker d^0 = 0 so H^0 = 0; im d^0 is all of
        // degree 1 so H^1 = 1 − 1 = 0.
        let v = space(&[(0, &["x"]), (1, &["y"])]);
        let d = GradedMap::new(
            v.clone(),
            v.clone(),
            1,
            BTreeMap::from([(0, Matrix::identity(q(), 1))]),
        )
        .unwrap();
        let h = GradedHomology::new(&v, &d).unwrap();
        assert!(h.is_acyclic());
    }

    #[test]
    fn homology_at_injective_out() {
        let u = space(&[(-1, &["u"])]);
        let v = space(&[(0, &["x"]), (1, &["y"])]);
        let d_in = GradedMap::zero(u, v.clone(), 1).unwrap();
        let d_out = GradedMap::new(
            v.clone(),
            v.clone(),
            1,
            BTreeMap::from([(0, Matrix::identity(q(), 1))]),
        )
        .unwrap();
        let h = homology_at(&d_in, &d_out, 0).unwrap();
        assert_eq!(h.dim, 0);
        assert!(h.cycles.is_empty());
    }

    #[test]
    fn not_a_complex_detected() {
        let v = space(&[(0, &["x"]), (1, &["y"]), (2, &["z"])]);
        let blocks = BTreeMap::from([
            (0, Matrix::identity(q(), 1)),
            (1, Matrix::identity(q(), 1)),
        ]);
        let d = GradedMap::new(v.clone(), v.clone(), 1, blocks).unwrap();
        assert!(matches!(
            GradedHomology::new(&v, &d),
            Err(Error::NotAComplex(0))
        ));
    }

    #[test]
    fn class_and_representative_roundtrip() {
        let v = space(&[(0, &["x", "y"]), (1, &["z"])]);
        // d(x) = z, d(y) = z: cycles in degree 0 = span{x - y}
        let d = GradedMap::new(
            v.clone(),
            v.clone(),
            1,
            BTreeMap::from([(
                0,
                Matrix::new(q(), 1, 2, vec![q().one(), q().one()]).unwrap(),
            )]),
        )
        .unwrap();
        let h = GradedHomology::new(&v, &d).unwrap();
        assert_eq!(h.dim(0), 1);
        assert_eq!(h.dim(1), 0);
        let class = h
            .class_of(0, &[q().one(), q().from_integer(-1)])
            .unwrap()
            .unwrap();
        assert_eq!(class.len(), 1);
        let rep = h.representative(0, &class).unwrap();
        let again = h.class_of(0, &rep).unwrap().unwrap();
        assert_eq!(again, class);
        // x alone is not a cycle
        assert!(h.class_of(0, &[q().one(), q().zero()]).unwrap().is_none());
    }
}
