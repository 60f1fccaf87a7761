//! Morphisms of dg modules, Hom-complexes, cones, homotopies and
//! quasi-isomorphisms.
//!
//! A Hom-complex is never written down symbolically: its degree-n
//! component is computed as the exact kernel of the graded-linearity
//! constraint system inside all K-linear degree-n maps, so every element
//! is a concrete matrix family and every claim about it is a rank
//! computation.

use crate::algebra::LinComb;
use crate::error::{Error, Result};
use crate::graded::{check_degree, GradedHomology, GradedMap, GradedSpace};
use crate::matrix::{KernelBasis, Matrix};
use crate::module::{same_algebra, DgModule, ModBasisElement, Side};
use crate::report::{Law, Report};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A homogeneous graded map between dg modules, tagged with its degree.
/// Nothing about module linearity is assumed at construction; see
/// [`DgMorphism::linearity_report`] and [`DgMorphism::is_chain_map`].
#[derive(Clone, PartialEq, Debug)]
pub struct DgMorphism {
    pub source: Arc<DgModule>,
    pub target: Arc<DgModule>,
    degree: i32,
    map: GradedMap,
}

pub fn same_module(a: &Arc<DgModule>, b: &Arc<DgModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl DgMorphism {
    pub fn from_graded(
        source: Arc<DgModule>,
        target: Arc<DgModule>,
        map: GradedMap,
    ) -> Result<DgMorphism> {
        if map.source() != &source.underlying_space() || map.target() != &target.underlying_space()
        {
            return Err(Error::ShapeMismatch(
                "graded map does not match the module bases".into(),
            ));
        }
        Ok(DgMorphism {
            source,
            target,
            degree: map.degree(),
            map,
        })
    }

    /// Build from the image of every source basis element; term degrees
    /// must equal `|x| + degree`.
    pub fn from_images(
        source: Arc<DgModule>,
        target: Arc<DgModule>,
        degree: i32,
        images: &[LinComb],
    ) -> Result<DgMorphism> {
        if images.len() != source.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} basis elements",
                images.len(),
                source.dim()
            )));
        }
        let field = source.field();
        let sspace = source.underlying_space();
        let tspace = target.underlying_space();
        let mut blocks: BTreeMap<i32, Matrix> = BTreeMap::new();
        for n in sspace.degrees() {
            blocks.insert(n, Matrix::zero(field, tspace.dim(n + degree), sspace.dim(n)));
        }
        for (i, img) in images.iter().enumerate() {
            let n = source.degree(i);
            let col = source.position_in_degree(i);
            for (t, c) in img.terms() {
                if target.degree(t) != n + degree {
                    return Err(Error::ShapeMismatch(format!(
                        "image of `{}` has a term `{}` off degree {}",
                        source.label(i),
                        target.label(t),
                        n + degree
                    )));
                }
                let row = target.position_in_degree(t);
                blocks.get_mut(&n).unwrap().set(row, col, c.clone());
            }
        }
        let map = GradedMap::new(sspace, tspace, degree, blocks)?;
        Ok(DgMorphism {
            source,
            target,
            degree,
            map,
        })
    }

    pub fn zero(source: Arc<DgModule>, target: Arc<DgModule>, degree: i32) -> DgMorphism {
        let map = GradedMap::zero(
            source.underlying_space(),
            target.underlying_space(),
            degree,
        )
        .expect("zero map always fits");
        DgMorphism {
            source,
            target,
            degree,
            map,
        }
    }

    pub fn identity(module: &Arc<DgModule>) -> DgMorphism {
        let map = GradedMap::identity(&module.underlying_space());
        DgMorphism {
            source: module.clone(),
            target: module.clone(),
            degree: 0,
            map,
        }
    }

    /// The differential of a module, packaged as a degree +1 morphism
    /// value (it is *not* module-linear; it exists for composition
    /// plumbing).
    pub fn differential(module: &Arc<DgModule>) -> Result<DgMorphism> {
        let map = module.differential_map()?;
        Ok(DgMorphism {
            source: module.clone(),
            target: module.clone(),
            degree: 1,
            map,
        })
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn graded(&self) -> &GradedMap {
        &self.map
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn image_of_basis(&self, i: usize) -> LinComb {
        let n = self.source.degree(i);
        let col = self.source.position_in_degree(i);
        let block = self.map.block(n);
        let field = self.source.field();
        let mut out = LinComb::zero();
        for row in 0..block.rows() {
            let c = block.get(row, col);
            if c.is_zero() {
                continue;
            }
            let t = self
                .target
                .index_at(n + self.degree, row)
                .expect("block row indexes a target basis element");
            out.add_term(t, c, field);
        }
        out
    }

    pub fn apply(&self, x: &LinComb) -> LinComb {
        let field = self.source.field();
        let mut out = LinComb::zero();
        for (i, c) in x.terms() {
            out = out.add(&self.image_of_basis(i).scale(c, field), field);
        }
        out
    }

    /// `g ∘ f`, degree additive (composition in the graded category).
    pub fn compose(g: &DgMorphism, f: &DgMorphism) -> Result<DgMorphism> {
        if !same_module(&f.target, &g.source) {
            return Err(Error::ShapeMismatch(
                "composition of morphisms over different modules".into(),
            ));
        }
        let map = GradedMap::compose(&g.map, &f.map)?;
        Ok(DgMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            degree: f.degree + g.degree,
            map,
        })
    }

    pub fn add(&self, other: &DgMorphism) -> Result<DgMorphism> {
        if !same_module(&self.source, &other.source) || !same_module(&self.target, &other.target) {
            return Err(Error::ShapeMismatch("sum over different modules".into()));
        }
        Ok(DgMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            map: self.map.add(&other.map)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> DgMorphism {
        DgMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            map: self.map.scale(c).expect("scaling preserves shape"),
        }
    }

    pub fn neg(&self) -> DgMorphism {
        self.scale(&self.source.field().from_integer(-1))
    }

    /// Graded A-linearity with the side-appropriate sign: right modules
    /// `f(xa) = f(x)a`, left modules `f(ax) = (−1)^{|f||a|} a f(x)`.
    /// Checked over every (basis element, algebra basis) pair, which also
    /// verifies that idempotent blocks are respected.
    pub fn linearity_report(&self) -> Report {
        let mut report = Report::default();
        let field = self.source.field();
        let src = &self.source;
        let tgt = &self.target;
        for m in 0..src.dim() {
            let fm = self.image_of_basis(m);
            for a in 0..src.right_algebra().dim() {
                let lhs = self.apply(&src.right_act_basis(m, a));
                let rhs = tgt.right_act(&fm, &LinComb::basis(a, field));
                if lhs != rhs {
                    report.push(
                        Law::GradedLinearity,
                        format!("f({}·{})", src.label(m), src.right_algebra().label(a)),
                    );
                }
            }
            for a in 0..src.left_algebra().dim() {
                let lhs = self.apply(&src.left_act_basis(a, m));
                let sign = field.sign(self.degree as i64 * src.left_algebra().degree(a) as i64);
                let rhs = tgt
                    .left_act(&LinComb::basis(a, field), &fm)
                    .scale(&sign, field);
                if lhs != rhs {
                    report.push(
                        Law::GradedLinearity,
                        format!("f({}·{})", src.left_algebra().label(a), src.label(m)),
                    );
                }
            }
        }
        report
    }

    pub fn is_module_morphism(&self) -> bool {
        self.linearity_report().is_valid()
    }

    /// The Hom-complex differential applied to this morphism:
    /// `d(f) = d_N ∘ f − (−1)^{|f|} f ∘ d_M`.
    pub fn hom_differential(&self) -> Result<DgMorphism> {
        let d_n = DgMorphism::differential(&self.target)?;
        let d_m = DgMorphism::differential(&self.source)?;
        let sign = self.source.field().sign(self.degree as i64);
        let lhs = DgMorphism::compose(&d_n, self)?;
        let rhs = DgMorphism::compose(self, &d_m)?.scale(&sign);
        lhs.add(&rhs.neg())
    }

    /// Degree 0 and `d_N ∘ f = f ∘ d_M`.
    pub fn is_chain_map(&self) -> bool {
        self.degree == 0
            && self
                .hom_differential()
                .map(|d| d.is_zero())
                .unwrap_or(false)
    }

    /// Per-degree invertibility (a dg isomorphism when also a chain map).
    pub fn is_bijective(&self) -> bool {
        if self.degree != 0 {
            return false;
        }
        let s = self.source.underlying_space();
        let t = self.target.underlying_space();
        let degrees: std::collections::BTreeSet<i32> = s.degrees().chain(t.degrees()).collect();
        degrees.into_iter().all(|n| {
            let b = self.map.block(n);
            b.rows() == b.cols() && b.rank() == b.rows()
        })
    }

    /// Exact inverse of a degree-0 bijection, blockwise.
    pub fn inverse(&self) -> Option<DgMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let s = self.source.underlying_space();
        let mut blocks = BTreeMap::new();
        for n in self.target.underlying_space().degrees() {
            let fwd = self.map.block(n);
            if fwd.rows() == 0 {
                continue;
            }
            blocks.insert(n, fwd.inverse()?);
        }
        let map = GradedMap::new(self.target.underlying_space(), s, 0, blocks).ok()?;
        Some(DgMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            degree: 0,
            map,
        })
    }
}

/// The signed Hom-bifunctor action of Example-1.2 type:
/// `f ↦ (−1)^{|α|(|φ|+|f|)} φ ∘ f ∘ α` for `α : M' → M`, `φ : N → N'`.
pub fn hom_bifunctor_action(
    alpha: &DgMorphism,
    phi: &DgMorphism,
    f: &DgMorphism,
) -> Result<DgMorphism> {
    let sign = f
        .source
        .field()
        .sign(alpha.degree() as i64 * (phi.degree() as i64 + f.degree() as i64));
    let inner = DgMorphism::compose(f, alpha)?;
    Ok(DgMorphism::compose(phi, &inner)?.scale(&sign))
}

/// Variable space for constraint solving: one unknown per (source basis
/// element, target basis element) pair at the right degree offset,
/// optionally restricted to idempotent blocks.
#[derive(Clone, Copy, Default)]
pub struct BlockFilter {
    pub source_left: Option<usize>,
    pub source_right: Option<usize>,
    pub target_left: Option<usize>,
    pub target_right: Option<usize>,
}

impl BlockFilter {
    fn admits_source(&self, b: &ModBasisElement) -> bool {
        self.source_left.map_or(true, |k| b.left == k)
            && self.source_right.map_or(true, |k| b.right == k)
    }

    fn admits_target(&self, b: &ModBasisElement) -> bool {
        self.target_left.map_or(true, |k| b.left == k)
            && self.target_right.map_or(true, |k| b.right == k)
    }
}

pub struct VarSpace {
    source: Arc<DgModule>,
    target: Arc<DgModule>,
    degree: i32,
    vars: Vec<(usize, usize)>,
    lookup: BTreeMap<(usize, usize), usize>,
}

impl VarSpace {
    pub fn new(
        source: Arc<DgModule>,
        target: Arc<DgModule>,
        degree: i32,
        filter: BlockFilter,
    ) -> VarSpace {
        let mut vars = Vec::new();
        let mut lookup = BTreeMap::new();
        for (s, sb) in source.basis().iter().enumerate() {
            if !filter.admits_source(sb) {
                continue;
            }
            for (t, tb) in target.basis().iter().enumerate() {
                if tb.degree != sb.degree + degree || !filter.admits_target(tb) {
                    continue;
                }
                lookup.insert((s, t), vars.len());
                vars.push((s, t));
            }
        }
        VarSpace {
            source,
            target,
            degree,
            vars,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Rows expressing graded linearity over the enabled sides.
    fn linearity_rows(&self, impose_right: bool, impose_left: bool) -> Vec<Vec<Scalar>> {
        let field = self.source.field();
        let mut rows = Vec::new();
        let src = &self.source;
        let tgt = &self.target;
        if impose_right {
            let alg = src.right_algebra().clone();
            for s in 0..src.dim() {
                for a in 0..alg.dim() {
                    let sa = src.right_act_basis(s, a);
                    let d_out = src.degree(s) + alg.degree(a) + self.degree;
                    for (tp, tb) in tgt.basis().iter().enumerate() {
                        if tb.degree != d_out {
                            continue;
                        }
                        let mut row = vec![field.zero(); self.vars.len()];
                        let mut nonzero = false;
                        for (m, cm) in sa.terms() {
                            if let Some(&v) = self.lookup.get(&(m, tp)) {
                                row[v] = field.add(&row[v], cm);
                                nonzero = true;
                            }
                        }
                        for (t, tb2) in tgt.basis().iter().enumerate() {
                            if tb2.degree != src.degree(s) + self.degree {
                                continue;
                            }
                            let Some(&v) = self.lookup.get(&(s, t)) else {
                                continue;
                            };
                            let ta = tgt.right_act_basis(t, a);
                            if let Some(c) = ta.coeff(tp) {
                                row[v] = field.sub(&row[v], c);
                                nonzero = true;
                            }
                        }
                        if nonzero && row.iter().any(|c| !c.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        if impose_left {
            let alg = src.left_algebra().clone();
            for s in 0..src.dim() {
                for a in 0..alg.dim() {
                    // f(a·x) = (−1)^{|f||a|} a·f(x)
                    let asx = src.left_act_basis(a, s);
                    let sign = field.sign(self.degree as i64 * alg.degree(a) as i64);
                    let d_out = src.degree(s) + alg.degree(a) + self.degree;
                    for (tp, tb) in tgt.basis().iter().enumerate() {
                        if tb.degree != d_out {
                            continue;
                        }
                        let mut row = vec![field.zero(); self.vars.len()];
                        let mut nonzero = false;
                        for (m, cm) in asx.terms() {
                            if let Some(&v) = self.lookup.get(&(m, tp)) {
                                row[v] = field.add(&row[v], cm);
                                nonzero = true;
                            }
                        }
                        for (t, tb2) in tgt.basis().iter().enumerate() {
                            if tb2.degree != src.degree(s) + self.degree {
                                continue;
                            }
                            let Some(&v) = self.lookup.get(&(s, t)) else {
                                continue;
                            };
                            let at = tgt.left_act_basis(a, t);
                            if let Some(c) = at.coeff(tp) {
                                row[v] = field.sub(&row[v], &field.mul(c, &sign));
                                nonzero = true;
                            }
                        }
                        if nonzero && row.iter().any(|c| !c.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        rows
    }

    /// Flatten a morphism into the variable coordinates; `None` when it
    /// has support outside the variable set.
    pub fn flatten(&self, f: &DgMorphism) -> Option<Vec<Scalar>> {
        if f.degree() != self.degree
            || !same_module(&f.source, &self.source)
            || !same_module(&f.target, &self.target)
        {
            return None;
        }
        let field = self.source.field();
        let mut out = vec![field.zero(); self.vars.len()];
        for s in 0..self.source.dim() {
            let img = f.image_of_basis(s);
            for (t, c) in img.terms() {
                match self.lookup.get(&(s, t)) {
                    Some(&v) => out[v] = c.clone(),
                    None => return None,
                }
            }
        }
        Some(out)
    }

    pub fn morphism_from_vec(&self, v: &[Scalar]) -> Result<DgMorphism> {
        let field = self.source.field();
        let mut images = vec![LinComb::zero(); self.source.dim()];
        for (idx, (s, t)) in self.vars.iter().enumerate() {
            images[*s].add_term(*t, &v[idx], field);
        }
        DgMorphism::from_images(
            self.source.clone(),
            self.target.clone(),
            self.degree,
            &images,
        )
    }

    fn elementary(&self, idx: usize) -> DgMorphism {
        let field = self.source.field();
        let (s, t) = self.vars[idx];
        let mut images = vec![LinComb::zero(); self.source.dim()];
        images[s] = LinComb::basis(t, field);
        DgMorphism::from_images(
            self.source.clone(),
            self.target.clone(),
            self.degree,
            &images,
        )
        .expect("elementary morphism has consistent degrees")
    }
}

/// One degree of a Hom-complex: an echelonized basis of the graded-linear
/// maps, with exact coordinate extraction.
pub struct HomBasis {
    pub vars: VarSpace,
    kernel: KernelBasis,
    pub elements: Vec<DgMorphism>,
}

impl HomBasis {
    pub fn solve(
        source: &Arc<DgModule>,
        target: &Arc<DgModule>,
        degree: i32,
        impose_right: bool,
        impose_left: bool,
        filter: BlockFilter,
    ) -> Result<HomBasis> {
        let field = source.field();
        let vars = VarSpace::new(source.clone(), target.clone(), degree, filter);
        let rows = vars.linearity_rows(impose_right, impose_left);
        let matrix = if rows.is_empty() {
            Matrix::zero(field, 1, vars.len())
        } else {
            Matrix::from_rows(field, vars.len(), &rows)?
        };
        let kernel = matrix.kernel_basis();
        let elements = kernel
            .vectors
            .iter()
            .map(|v| vars.morphism_from_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomBasis {
            vars,
            kernel,
            elements,
        })
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn coords_of(&self, f: &DgMorphism) -> Option<Vec<Scalar>> {
        let flat = self.vars.flatten(f)?;
        self.kernel.coords_of(&flat)
    }

    pub fn element_from_coords(&self, coords: &[Scalar]) -> Result<DgMorphism> {
        if coords.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for a {}-dimensional Hom component",
                coords.len(),
                self.dim()
            )));
        }
        let field = self.vars.source.field();
        let mut acc = DgMorphism::zero(
            self.vars.source.clone(),
            self.vars.target.clone(),
            self.vars.degree,
        );
        for (c, e) in coords.iter().zip(&self.elements) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&e.scale(c))?;
        }
        let _ = field;
        Ok(acc)
    }
}

/// The full Hom-complex HOM(M,N) of two modules on the same side over the
/// same algebra(s): per-degree bases of graded-linear maps plus the
/// differential `d(f) = d_N∘f − (−1)^{|f|} f∘d_M`, verified to square to
/// zero.
pub struct HomComplex {
    pub source: Arc<DgModule>,
    pub target: Arc<DgModule>,
    components: BTreeMap<i32, HomBasis>,
    space: GradedSpace,
    differential: GradedMap,
}

impl HomComplex {
    pub fn new(source: &Arc<DgModule>, target: &Arc<DgModule>) -> Result<HomComplex> {
        if source.effective_side() != target.effective_side() {
            return Err(Error::SideMismatch(format!(
                "HOM between a {} and a {} module",
                source.effective_side(),
                target.effective_side()
            )));
        }
        if !same_algebra(source.left_algebra(), target.left_algebra())
            || !same_algebra(source.right_algebra(), target.right_algebra())
        {
            return Err(Error::AlgebraMismatch(
                "HOM between modules over different algebras".into(),
            ));
        }
        let field = source.field();
        let mut components = BTreeMap::new();
        if let (Some((slo, shi)), Some((tlo, thi))) = (
            source.underlying_space().window(),
            target.underlying_space().window(),
        ) {
            let lo = tlo - shi;
            let hi = thi - slo;
            check_degree(lo)?;
            check_degree(hi)?;
            for n in lo..=hi {
                let basis = HomBasis::solve(source, target, n, true, true, BlockFilter::default())?;
                if basis.dim() > 0 {
                    components.insert(n, basis);
                }
            }
        }
        let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (n, basis) in &components {
            degrees.insert(
                *n,
                (0..basis.dim()).map(|k| format!("h{n}i{k}")).collect(),
            );
        }
        let space = GradedSpace::new(field, degrees)?;
        let mut blocks: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (n, basis) in &components {
            let rows = components.get(&(n + 1)).map_or(0, HomBasis::dim);
            let mut block = Matrix::zero(field, rows, basis.dim());
            for (col, f) in basis.elements.iter().enumerate() {
                let df = f.hom_differential()?;
                if df.is_zero() {
                    continue;
                }
                let Some(next) = components.get(&(n + 1)) else {
                    return Err(Error::Invalid(
                        "Hom differential escapes the computed window".into(),
                    ));
                };
                let coords = next.coords_of(&df).ok_or_else(|| {
                    Error::Invalid("Hom differential left the linear-map space".into())
                })?;
                for (row, c) in coords.iter().enumerate() {
                    block.set(row, col, c.clone());
                }
            }
            blocks.insert(*n, block);
        }
        let differential = GradedMap::new(space.clone(), space.clone(), 1, blocks)?;
        let dd = GradedMap::compose(&differential, &differential)?;
        if !dd.is_zero() {
            let bad = space
                .degrees()
                .find(|&k| !dd.block(k).is_zero())
                .unwrap_or(0);
            return Err(Error::NotAComplex(bad));
        }
        Ok(HomComplex {
            source: source.clone(),
            target: target.clone(),
            components,
            space,
            differential,
        })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn dim(&self, n: i32) -> usize {
        self.components.get(&n).map_or(0, HomBasis::dim)
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.components
            .iter()
            .map(|(n, b)| (*n, b.dim()))
            .collect()
    }

    pub fn component(&self, n: i32) -> Option<&HomBasis> {
        self.components.get(&n)
    }

    pub fn basis_morphism(&self, n: i32, k: usize) -> &DgMorphism {
        &self.components[&n].elements[k]
    }

    pub fn coords_at(&self, n: i32, f: &DgMorphism) -> Option<Vec<Scalar>> {
        match self.components.get(&n) {
            Some(b) => b.coords_of(f),
            None => {
                if f.is_zero() {
                    Some(Vec::new())
                } else {
                    None
                }
            }
        }
    }

    pub fn element_at(&self, n: i32, coords: &[Scalar]) -> Result<DgMorphism> {
        match self.components.get(&n) {
            Some(b) => b.element_from_coords(coords),
            None if coords.is_empty() => {
                Ok(DgMorphism::zero(self.source.clone(), self.target.clone(), n))
            }
            None => Err(Error::ShapeMismatch(format!("no Hom component at {n}"))),
        }
    }

    pub fn homology(&self) -> Result<GradedHomology> {
        GradedHomology::new(&self.space, &self.differential)
    }

    /// An echelon basis of the degree-`n` cycles Z^n, as morphisms.
    pub fn cycles_at(&self, n: i32) -> Result<Vec<DgMorphism>> {
        let Some(basis) = self.components.get(&n) else {
            return Ok(Vec::new());
        };
        let block = self.differential.block(n);
        let kernel = block.kernel_basis();
        kernel
            .vectors
            .iter()
            .map(|v| basis.element_from_coords(v))
            .collect()
    }
}

/// The cone of a chain map `f : M → N`, together with the canonical
/// conflation maps `N → C(f) → M[1]`.
pub struct Cone {
    pub module: Arc<DgModule>,
    pub shifted_source: Arc<DgModule>,
    pub inclusion: DgMorphism,
    pub projection: DgMorphism,
}

/// Underlying space `N ⊕ M[1]`, differential `[[d_N, f],[0, d_{M[1]}]]`.
/// Labels from `N` are prefixed `t.`, labels from `M` are prefixed `s.`.
pub fn cone(f: &DgMorphism) -> Result<Cone> {
    if !f.is_chain_map() {
        return Err(Error::NotAChainMap(
            "cone requires a degree-0 cycle morphism".into(),
        ));
    }
    let field = f.source.field();
    let m = &f.source;
    let n = &f.target;
    let nt = n.dim();
    let mut basis = Vec::with_capacity(nt + m.dim());
    for b in n.basis() {
        basis.push(ModBasisElement {
            label: format!("t.{}", b.label),
            degree: b.degree,
            left: b.left,
            right: b.right,
        });
    }
    for b in m.basis() {
        check_degree(b.degree - 1)?;
        basis.push(ModBasisElement {
            label: format!("s.{}", b.label),
            degree: b.degree - 1,
            left: b.left,
            right: b.right,
        });
    }

    let mut right_action = BTreeMap::new();
    for ((x, a), c) in n.stored_right_action() {
        right_action.insert((*x, *a), c.clone());
    }
    for ((x, a), c) in m.stored_right_action() {
        right_action.insert((nt + x, *a), c.map_terms(field, |i| (nt + i, field.one())));
    }
    let mut left_action = BTreeMap::new();
    for ((a, x), c) in n.stored_left_action() {
        left_action.insert((*a, *x), c.clone());
    }
    for ((a, x), c) in m.stored_left_action() {
        // left action on the shifted part carries (−1)^{|a|}
        let sign = field.sign(m.left_algebra().degree(*a) as i64);
        left_action.insert(
            (*a, nt + x),
            c.map_terms(field, |i| (nt + i, field.one())).scale(&sign, field),
        );
    }

    let mut diff = BTreeMap::new();
    for (x, c) in n.stored_diff() {
        diff.insert(*x, c.clone());
    }
    for x in 0..m.dim() {
        let mut d = f
            .image_of_basis(x)
            .map_terms(field, |i| (i, field.one()));
        let dm = m
            .diff_basis(x)
            .map_terms(field, |i| (nt + i, field.one()))
            .scale(&field.from_integer(-1), field);
        d = d.add(&dm, field);
        if !d.is_zero() {
            diff.insert(nt + x, d);
        }
    }

    let module = Arc::new(match n.side() {
        Side::Right => DgModule::new_right(
            n.right_algebra().clone(),
            basis,
            right_action,
            diff,
        )?,
        Side::Left => DgModule::new_left(n.left_algebra().clone(), basis, left_action, diff)?,
        Side::Bimodule => DgModule::new_bimodule(
            n.left_algebra().clone(),
            n.right_algebra().clone(),
            basis,
            left_action,
            right_action,
            diff,
        )?,
    });

    let shifted_source = Arc::new(m.shift(1)?);
    let mut incl_images = Vec::with_capacity(n.dim());
    for i in 0..n.dim() {
        incl_images.push(LinComb::basis(i, field));
    }
    let inclusion = DgMorphism::from_images(n.clone(), module.clone(), 0, &incl_images)?;
    let mut proj_images = vec![LinComb::zero(); module.dim()];
    for (j, img) in proj_images.iter_mut().enumerate().skip(nt) {
        *img = LinComb::basis(j - nt, field);
    }
    let projection = DgMorphism::from_images(module.clone(), shifted_source.clone(), 0, &proj_images)?;

    Ok(Cone {
        module,
        shifted_source,
        inclusion,
        projection,
    })
}

/// Solve `op(f) = rhs` for a graded-linear `f : source → target` of the
/// given degree, where `op` is linear in `f`. Free variables are pinned
/// to zero, so the witness is deterministic. `None` certifies that no
/// linear solution exists.
pub fn solve_hom_equation(
    source: &Arc<DgModule>,
    target: &Arc<DgModule>,
    degree: i32,
    op: impl Fn(&DgMorphism) -> Result<DgMorphism>,
    rhs: &DgMorphism,
) -> Result<Option<DgMorphism>> {
    let field = source.field();
    let vars = VarSpace::new(source.clone(), target.clone(), degree, BlockFilter::default());
    let out_vars = VarSpace::new(
        rhs.source.clone(),
        rhs.target.clone(),
        rhs.degree(),
        BlockFilter::default(),
    );
    let lin_rows = vars.linearity_rows(true, true);
    let mut op_cols = Vec::with_capacity(vars.len());
    for v in 0..vars.len() {
        let image = op(&vars.elementary(v))?;
        let flat = out_vars.flatten(&image).ok_or_else(|| {
            Error::ShapeMismatch("operator output does not fit the expected Hom space".into())
        })?;
        op_cols.push(flat);
    }
    let rhs_flat = out_vars
        .flatten(rhs)
        .ok_or_else(|| Error::ShapeMismatch("rhs does not fit the expected Hom space".into()))?;

    let mut rows = Vec::new();
    let mut b = Vec::new();
    for row in &lin_rows {
        rows.push(row.clone());
        b.push(field.zero());
    }
    for coord in 0..out_vars.len() {
        let mut row = Vec::with_capacity(vars.len());
        for col in op_cols.iter() {
            row.push(col[coord].clone());
        }
        rows.push(row);
        b.push(rhs_flat[coord].clone());
    }
    let matrix = Matrix::from_rows(field, vars.len(), &rows)?;
    match matrix.solve(&b)? {
        None => Ok(None),
        Some(x) => Ok(Some(vars.morphism_from_vec(&x)?)),
    }
}

/// A degree −1 morphism σ with `f = d_N∘σ + σ∘d_M`, or a certificate
/// (`None`) that none exists.
pub fn null_homotopy(f: &DgMorphism) -> Result<Option<DgMorphism>> {
    if !f.is_chain_map() {
        return Err(Error::NotAChainMap(
            "null-homotopy is defined for chain maps".into(),
        ));
    }
    let d_n = DgMorphism::differential(&f.target)?;
    let d_m = DgMorphism::differential(&f.source)?;
    solve_hom_equation(
        &f.source,
        &f.target,
        -1,
        |sigma| {
            let a = DgMorphism::compose(&d_n, sigma)?;
            let b = DgMorphism::compose(sigma, &d_m)?;
            a.add(&b)
        },
        f,
    )
}

/// A module is contractible when its identity is null-homotopic; the
/// witness σ is returned.
pub fn is_contractible(module: &Arc<DgModule>) -> Result<Option<DgMorphism>> {
    null_homotopy(&DgMorphism::identity(module))
}

/// Quasi-isomorphism via the cone: `C(f)` acyclic.
pub fn is_quasi_iso(f: &DgMorphism) -> Result<bool> {
    let c = cone(f)?;
    Ok(c.module.homology()?.is_acyclic())
}

/// Independent route: `H(f)` is an isomorphism in every degree. Used to
/// cross-check the cone criterion, never to replace it.
pub fn is_quasi_iso_by_homology(f: &DgMorphism) -> Result<bool> {
    if !f.is_chain_map() {
        return Err(Error::NotAChainMap("quasi-isomorphism test".into()));
    }
    let hs = f.source.homology()?;
    let ht = f.target.homology()?;
    let field = f.source.field();
    let degrees: std::collections::BTreeSet<i32> = f
        .source
        .underlying_space()
        .degrees()
        .chain(f.target.underlying_space().degrees())
        .collect();
    for n in degrees {
        let (ds, dt) = (hs.dim(n), ht.dim(n));
        if ds != dt {
            return Ok(false);
        }
        if ds == 0 {
            continue;
        }
        let mut cols = Vec::new();
        for k in 0..ds {
            let mut class = vec![field.zero(); ds];
            class[k] = field.one();
            let rep = hs.representative(n, &class)?;
            let x = f.source.lincomb_at(n, &rep)?;
            let fx = f.apply(&x);
            let (deg, coords) = match f.target.coords_of(&fx)? {
                Some(dc) => dc,
                None => (n, vec![field.zero(); f.target.underlying_space().dim(n)]),
            };
            let img_class = ht
                .class_of(deg, &coords)?
                .ok_or_else(|| Error::Invalid("chain map sent a cycle off the cycles".into()))?;
            cols.push(img_class);
        }
        let mut mat = Matrix::zero(field, dt, ds);
        for (c, col) in cols.iter().enumerate() {
            for (r, val) in col.iter().enumerate() {
                mat.set(r, c, val.clone());
            }
        }
        if mat.rank() != ds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the conflation normal-form check.
pub struct SesCheck {
    pub report: Report,
    /// The recovered degree +1 connecting map s : N → L, when the
    /// sequence splits in the graded category.
    pub connecting: Option<DgMorphism>,
}

/// Checks that `0 → L →u M →v N → 0` is a conflation (exact and split in
/// the graded category), recovers the normal form `δ = [[d_L, s],[0,
/// d_N]]`, verifies `d_L∘s + s∘d_N = 0` and that the canonical comparison
/// `M → L⊕N` is an isomorphism of dg modules.
pub fn ses_to_triangle_check(u: &DgMorphism, v: &DgMorphism) -> Result<SesCheck> {
    let mut report = Report::default();
    let l = &u.source;
    let m = &u.target;
    let n = &v.target;
    if !same_module(&v.source, m) {
        return Err(Error::ShapeMismatch("v must start where u ends".into()));
    }
    let field = l.field();
    if !u.is_chain_map() {
        report.push(Law::ChainMap, "u");
    }
    if !v.is_chain_map() {
        report.push(Law::ChainMap, "v");
    }
    if !u.is_module_morphism() {
        report.push(Law::GradedLinearity, "u");
    }
    if !v.is_module_morphism() {
        report.push(Law::GradedLinearity, "v");
    }
    if !report.is_valid() {
        return Ok(SesCheck {
            report,
            connecting: None,
        });
    }

    // degreewise exactness: u injective, v surjective, im u = ker v
    let degrees: std::collections::BTreeSet<i32> = l
        .underlying_space()
        .degrees()
        .chain(m.underlying_space().degrees())
        .chain(n.underlying_space().degrees())
        .collect();
    let vu = DgMorphism::compose(v, u)?;
    if !vu.is_zero() {
        report.push(Law::Exactness, "v∘u ≠ 0");
    }
    for deg in degrees {
        let ub = u.graded().block(deg);
        let vb = v.graded().block(deg);
        if ub.rank() != ub.cols() {
            report.push(Law::Exactness, format!("u not injective in degree {deg}"));
        }
        if vb.rank() != vb.rows() {
            report.push(Law::Exactness, format!("v not surjective in degree {deg}"));
        }
        if ub.rank() + vb.rank() != m.underlying_space().dim(deg) {
            report.push(Law::Exactness, format!("im u ≠ ker v in degree {deg}"));
        }
    }
    if !report.is_valid() {
        return Ok(SesCheck {
            report,
            connecting: None,
        });
    }

    // graded splitting: an A-linear retraction r (r∘u = 1) and section w
    // (v∘w = 1); failure means the sequence is not a conflation
    let id_l = DgMorphism::identity(l);
    let r = solve_hom_equation(m, l, 0, |r| DgMorphism::compose(r, u), &id_l)?;
    let id_n = DgMorphism::identity(n);
    let w = solve_hom_equation(n, m, 0, |w| DgMorphism::compose(v, w), &id_n)?;
    let (Some(r), Some(w)) = (r, w) else {
        report.push(
            Law::GradedSplitting,
            "no graded retraction/section exists",
        );
        return Ok(SesCheck {
            report,
            connecting: None,
        });
    };

    // s' = (1 − u∘r)∘w is the complementary section; the connecting map
    // is s = r∘d_M∘s'
    let ur = DgMorphism::compose(u, &r)?;
    let one_minus_ur = DgMorphism::identity(m).add(&ur.neg())?;
    let s_prime = DgMorphism::compose(&one_minus_ur, &w)?;
    let d_m = DgMorphism::differential(m)?;
    let s = DgMorphism::compose(&r, &DgMorphism::compose(&d_m, &s_prime)?)?;

    if !s.is_module_morphism() {
        report.push(Law::GradedLinearity, "recovered s");
    }
    // d_L∘s + s∘d_N = 0
    let d_l = DgMorphism::differential(l)?;
    let d_n = DgMorphism::differential(n)?;
    let anti = DgMorphism::compose(&d_l, &s)?.add(&DgMorphism::compose(&s, &d_n)?)?;
    if !anti.is_zero() {
        report.push(Law::DifferentialSquare, "d_L∘s + s∘d_N ≠ 0");
    }

    // the normal-form module L⊕N with differential [[d_L, s],[0, d_N]]
    let nl = l.dim();
    let mut basis = Vec::with_capacity(nl + n.dim());
    for b in l.basis() {
        basis.push(ModBasisElement {
            label: format!("l.{}", b.label),
            degree: b.degree,
            left: b.left,
            right: b.right,
        });
    }
    for b in n.basis() {
        basis.push(ModBasisElement {
            label: format!("n.{}", b.label),
            degree: b.degree,
            left: b.left,
            right: b.right,
        });
    }
    let mut right_action = BTreeMap::new();
    for ((x, a), c) in l.stored_right_action() {
        right_action.insert((*x, *a), c.clone());
    }
    for ((x, a), c) in n.stored_right_action() {
        right_action.insert((nl + x, *a), c.map_terms(field, |i| (nl + i, field.one())));
    }
    let mut left_action = BTreeMap::new();
    for ((a, x), c) in l.stored_left_action() {
        left_action.insert((*a, *x), c.clone());
    }
    for ((a, x), c) in n.stored_left_action() {
        left_action.insert((*a, nl + x), c.map_terms(field, |i| (nl + i, field.one())));
    }
    let mut diff = BTreeMap::new();
    for (x, c) in l.stored_diff() {
        diff.insert(*x, c.clone());
    }
    for x in 0..n.dim() {
        let mut d = s.image_of_basis(x);
        let dn = n
            .diff_basis(x)
            .map_terms(field, |i| (nl + i, field.one()));
        d = d.add(&dn, field);
        if !d.is_zero() {
            diff.insert(nl + x, d);
        }
    }
    let normal = Arc::new(match m.side() {
        Side::Right => {
            DgModule::new_right(m.right_algebra().clone(), basis, right_action, diff)?
        }
        Side::Left => DgModule::new_left(m.left_algebra().clone(), basis, left_action, diff)?,
        Side::Bimodule => DgModule::new_bimodule(
            m.left_algebra().clone(),
            m.right_algebra().clone(),
            basis,
            left_action,
            right_action,
            diff,
        )?,
    });

    // comparison θ = (r, v) : M → L⊕N
    let mut theta_images = Vec::with_capacity(m.dim());
    for x in 0..m.dim() {
        let mut img = r.image_of_basis(x);
        let vpart = v
            .image_of_basis(x)
            .map_terms(field, |i| (nl + i, field.one()));
        img = img.add(&vpart, field);
        theta_images.push(img);
    }
    let theta = DgMorphism::from_images(m.clone(), normal.clone(), 0, &theta_images)?;
    if !theta.is_chain_map() {
        report.push(Law::ConeComparison, "comparison is not a chain map");
    }
    if !theta.is_bijective() {
        report.push(Law::ConeComparison, "comparison is not bijective");
    }
    if !theta.is_module_morphism() {
        report.push(Law::ConeComparison, "comparison is not A-linear");
    }

    Ok(SesCheck {
        report,
        connecting: Some(s),
    })
}
