//! The two classical dg bifunctors on bimodules: the unitarized HOM and
//! the tensor product over a middle algebra.
//!
//! A Hom bimodule is assembled blockwise: the (e_i, ν_k) block consists
//! of the linear maps killing all but one idempotent slice of the source
//! and landing in one slice of the target. With finite idempotent
//! families the blocks sum to the whole Hom space, which is exactly the
//! statement that the unitarization B·HOM·C is all of HOM; the
//! constructor asserts this instead of assuming it.

use crate::algebra::LinComb;
use crate::error::{Error, Result};
use crate::graded::check_degree;
use crate::hom::{same_module, BlockFilter, DgMorphism, HomBasis};
use crate::matrix::QuotientMap;
use crate::module::{same_algebra, DgModule, ModBasisElement};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Which linearity the elements of a Hom bimodule satisfy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum HomVariant {
    /// Right-A-linear maps; outer structures act through the left
    /// algebras of the two arguments.
    RightLinear,
    /// Left-B-linear maps with the Koszul sign; outer structures act
    /// through the right algebras (the Cor 8.3 situation).
    LeftLinear,
}

struct Block {
    filter: BlockFilter,
    basis: HomBasis,
    /// module basis index of each block element
    module_indices: Vec<usize>,
}

/// A unitarized Hom bimodule `overline{HOM}(P,Q)` realized as a concrete
/// [`DgModule`] whose basis elements are explicit graded-linear maps
/// `P → Q`.
pub struct BimoduleHom {
    pub source: Arc<DgModule>,
    pub target: Arc<DgModule>,
    module: Arc<DgModule>,
    variant: HomVariant,
    blocks: BTreeMap<(i32, usize, usize), Block>,
    /// per module basis index: (block key, index inside the block)
    element_home: Vec<((i32, usize, usize), usize)>,
}

impl BimoduleHom {
    pub fn module(&self) -> &Arc<DgModule> {
        &self.module
    }

    /// The concrete map behind a module basis element.
    pub fn basis_morphism(&self, i: usize) -> &DgMorphism {
        let (key, j) = &self.element_home[i];
        &self.blocks[key].basis.elements[*j]
    }

    /// Realize a linear combination of module basis elements as a map.
    pub fn morphism_from(&self, c: &LinComb) -> Result<DgMorphism> {
        let field = self.source.field();
        let mut degree = None;
        for (i, _) in c.terms() {
            let d = self.module.degree(i);
            if *degree.get_or_insert(d) != d {
                return Err(Error::Invalid("inhomogeneous Hom element".into()));
            }
        }
        let mut acc = DgMorphism::zero(
            self.source.clone(),
            self.target.clone(),
            degree.unwrap_or(0),
        );
        for (i, coeff) in c.terms() {
            acc = acc.add(&self.basis_morphism(i).scale(coeff))?;
        }
        let _ = field;
        Ok(acc)
    }

    /// Coordinates of a homogeneous graded-linear map in the module
    /// basis; `None` when the map is not in the Hom space.
    pub fn coords_of_morphism(&self, f: &DgMorphism) -> Option<LinComb> {
        let field = self.source.field();
        let n = f.degree();
        let mut out = LinComb::zero();
        let mut rebuilt = DgMorphism::zero(self.source.clone(), self.target.clone(), n);
        for (key, block) in &self.blocks {
            if key.0 != n {
                continue;
            }
            // restrict f to the block: kill filtered-out source elements,
            // project images onto filtered-in target elements
            let mut images = vec![LinComb::zero(); self.source.dim()];
            for (s, sb) in self.source.basis().iter().enumerate() {
                if !filter_admits_source(&block.filter, sb) {
                    continue;
                }
                let img = f.image_of_basis(s);
                for (t, c) in img.terms() {
                    if filter_admits_target(&block.filter, self.target.element(t)) {
                        images[s].add_term(t, c, field);
                    }
                }
            }
            let restricted =
                DgMorphism::from_images(self.source.clone(), self.target.clone(), n, &images)
                    .ok()?;
            let coords = block.basis.coords_of(&restricted)?;
            for (j, c) in coords.iter().enumerate() {
                out.add_term(block.module_indices[j], c, field);
            }
            rebuilt = rebuilt.add(&restricted).ok()?;
        }
        // the blocks must reassemble f exactly (unitarity of the element)
        let diff = f.add(&rebuilt.neg()).ok()?;
        if diff.is_zero() {
            Some(out)
        } else {
            None
        }
    }
}

fn filter_admits_source(f: &BlockFilter, b: &ModBasisElement) -> bool {
    f.source_left.map_or(true, |k| b.left == k) && f.source_right.map_or(true, |k| b.right == k)
}

fn filter_admits_target(f: &BlockFilter, b: &ModBasisElement) -> bool {
    f.target_left.map_or(true, |k| b.left == k) && f.target_right.map_or(true, |k| b.right == k)
}

fn hom_degree_range(p: &DgModule, q: &DgModule) -> Result<Option<(i32, i32)>> {
    match (p.underlying_space().window(), q.underlying_space().window()) {
        (Some((slo, shi)), Some((tlo, thi))) => {
            let lo = tlo - shi;
            let hi = thi - slo;
            check_degree(lo)?;
            check_degree(hi)?;
            Ok(Some((lo, hi)))
        }
        _ => Ok(None),
    }
}

/// `overline{HOM}_A(P, Q)` for `P` a (S,A)-bimodule and `Q` a (T,A)-
/// bimodule: the right-A-linear maps as a (T,S)-bimodule with
/// `(t·f·s)(p) = t·f(s·p)`, the Hom differential, and blockwise
/// unitarity. With the spec's finite families the blocks exhaust the
/// Hom space; this is asserted degree by degree.
pub fn overline_hom(p: &Arc<DgModule>, q: &Arc<DgModule>) -> Result<BimoduleHom> {
    if !same_algebra(p.right_algebra(), q.right_algebra()) {
        return Err(Error::AlgebraMismatch(
            "HOM over mismatched right algebras".into(),
        ));
    }
    let s_alg = p.left_algebra().clone();
    let t_alg = q.left_algebra().clone();
    let field = p.field();

    let mut blocks = BTreeMap::new();
    let mut element_home = Vec::new();
    let mut basis = Vec::new();
    if let Some((lo, hi)) = hom_degree_range(p, q)? {
        for n in lo..=hi {
            let mut block_total = 0;
            for t_pos in 0..t_alg.idempotent_count() {
                for s_pos in 0..s_alg.idempotent_count() {
                    let filter = BlockFilter {
                        source_left: Some(s_pos),
                        target_left: Some(t_pos),
                        ..BlockFilter::default()
                    };
                    let hb = HomBasis::solve(p, q, n, true, false, filter)?;
                    if hb.dim() == 0 {
                        continue;
                    }
                    block_total += hb.dim();
                    let mut module_indices = Vec::with_capacity(hb.dim());
                    for j in 0..hb.dim() {
                        let idx = basis.len();
                        module_indices.push(idx);
                        element_home.push(((n, t_pos, s_pos), j));
                        basis.push(ModBasisElement {
                            label: format!("h{n}.{t_pos}.{s_pos}.{j}"),
                            degree: n,
                            left: t_pos,
                            right: s_pos,
                        });
                    }
                    blocks.insert(
                        (n, t_pos, s_pos),
                        Block {
                            filter,
                            basis: hb,
                            module_indices,
                        },
                    );
                }
            }
            // unitarization = whole Hom space in the finite case
            let full = HomBasis::solve(p, q, n, true, false, BlockFilter::default())?;
            if full.dim() != block_total {
                return Err(Error::Invalid(format!(
                    "unitarization gap at degree {n}: blocks {block_total}, full {}",
                    full.dim()
                )));
            }
        }
    }

    let mut hom = BimoduleHom {
        source: p.clone(),
        target: q.clone(),
        module: Arc::new(DgModule::zero(
            crate::module::Side::Bimodule,
            t_alg.clone(),
            s_alg.clone(),
        )),
        variant: HomVariant::RightLinear,
        blocks,
        element_home,
    };

    // actions and differential, expressed back in the block bases
    let mut left_action = BTreeMap::new();
    let mut right_action = BTreeMap::new();
    let mut diff = BTreeMap::new();
    let n_elems = basis.len();
    for i in 0..n_elems {
        let f = hom_basis_morphism(&hom, i).clone();
        // left action: (t·f)(p) = t·f(p)
        for a in 0..t_alg.dim() {
            if t_alg.family_position(a).is_some() {
                continue;
            }
            let images: Vec<LinComb> = (0..p.dim())
                .map(|s| q.left_act(&LinComb::basis(a, field), &f.image_of_basis(s)))
                .collect();
            let af = DgMorphism::from_images(
                p.clone(),
                q.clone(),
                f.degree() + t_alg.degree(a),
                &images,
            )?;
            if let Some(c) = nonzero_coords(&hom, &af)? {
                left_action.insert((a, i), c);
            }
        }
        // right action: (f·s)(p) = f(s·p)
        for a in 0..s_alg.dim() {
            if s_alg.family_position(a).is_some() {
                continue;
            }
            let images: Vec<LinComb> = (0..p.dim())
                .map(|s| f.apply(&p.left_act_basis(a, s)))
                .collect();
            let fa = DgMorphism::from_images(
                p.clone(),
                q.clone(),
                f.degree() + s_alg.degree(a),
                &images,
            )?;
            if let Some(c) = nonzero_coords(&hom, &fa)? {
                right_action.insert((i, a), c);
            }
        }
        let df = f.hom_differential()?;
        if let Some(c) = nonzero_coords(&hom, &df)? {
            diff.insert(i, c);
        }
    }

    let module = DgModule::new_bimodule(t_alg, s_alg, basis, left_action, right_action, diff)?
        .tighten_side();
    hom.module = Arc::new(module);
    Ok(hom)
}

fn hom_basis_morphism(h: &BimoduleHom, i: usize) -> &DgMorphism {
    let (key, j) = &h.element_home[i];
    &h.blocks[key].basis.elements[*j]
}

fn nonzero_coords(h: &BimoduleHom, f: &DgMorphism) -> Result<Option<LinComb>> {
    if f.is_zero() {
        return Ok(None);
    }
    match h.coords_of_morphism(f) {
        Some(c) => Ok(Some(c)),
        None => Err(Error::Invalid(
            "Hom bimodule action left the Hom space".into(),
        )),
    }
}

/// `overline{HOM}_{B°}(W, X)` for `W` a (B,C)-bimodule and `X` a (B,A)-
/// bimodule: the left-B-linear maps (with the Koszul linearity sign) as a
/// (C,A)-bimodule via `(c·f·a)(w) = (−1)^{(|c|+|a|)|w| + |c||f|} f(w·c)·a`.
pub fn overline_hom_left(w: &Arc<DgModule>, x: &Arc<DgModule>) -> Result<BimoduleHom> {
    if !same_algebra(w.left_algebra(), x.left_algebra()) {
        return Err(Error::AlgebraMismatch(
            "HOM over mismatched left algebras".into(),
        ));
    }
    let c_alg = w.right_algebra().clone();
    let a_alg = x.right_algebra().clone();
    let field = w.field();

    let mut blocks = BTreeMap::new();
    let mut element_home = Vec::new();
    let mut basis = Vec::new();
    if let Some((lo, hi)) = hom_degree_range(w, x)? {
        for n in lo..=hi {
            let mut block_total = 0;
            for c_pos in 0..c_alg.idempotent_count() {
                for a_pos in 0..a_alg.idempotent_count() {
                    let filter = BlockFilter {
                        source_right: Some(c_pos),
                        target_right: Some(a_pos),
                        ..BlockFilter::default()
                    };
                    let hb = HomBasis::solve(w, x, n, false, true, filter)?;
                    if hb.dim() == 0 {
                        continue;
                    }
                    block_total += hb.dim();
                    let mut module_indices = Vec::with_capacity(hb.dim());
                    for j in 0..hb.dim() {
                        let idx = basis.len();
                        module_indices.push(idx);
                        element_home.push(((n, c_pos, a_pos), j));
                        basis.push(ModBasisElement {
                            label: format!("g{n}.{c_pos}.{a_pos}.{j}"),
                            degree: n,
                            left: c_pos,
                            right: a_pos,
                        });
                    }
                    blocks.insert(
                        (n, c_pos, a_pos),
                        Block {
                            filter,
                            basis: hb,
                            module_indices,
                        },
                    );
                }
            }
            let full = HomBasis::solve(w, x, n, false, true, BlockFilter::default())?;
            if full.dim() != block_total {
                return Err(Error::Invalid(format!(
                    "unitarization gap at degree {n}: blocks {block_total}, full {}",
                    full.dim()
                )));
            }
        }
    }

    let mut hom = BimoduleHom {
        source: w.clone(),
        target: x.clone(),
        module: Arc::new(DgModule::zero(
            crate::module::Side::Bimodule,
            c_alg.clone(),
            a_alg.clone(),
        )),
        variant: HomVariant::LeftLinear,
        blocks,
        element_home,
    };

    let mut left_action = BTreeMap::new();
    let mut right_action = BTreeMap::new();
    let mut diff = BTreeMap::new();
    let n_elems = basis.len();
    for i in 0..n_elems {
        let f = hom_basis_morphism(&hom, i).clone();
        let nf = f.degree() as i64;
        // (c·f)(w) = (−1)^{|c||w| + |c||f|} f(w·c)
        for c in 0..c_alg.dim() {
            if c_alg.family_position(c).is_some() {
                continue;
            }
            let dc = c_alg.degree(c) as i64;
            let images: Vec<LinComb> = (0..w.dim())
                .map(|s| {
                    let sign = field.sign(dc * (w.degree(s) as i64 + nf));
                    f.apply(&w.right_act_basis(s, c)).scale(&sign, field)
                })
                .collect();
            let cf =
                DgMorphism::from_images(w.clone(), x.clone(), f.degree() + c_alg.degree(c), &images)?;
            if let Some(coords) = nonzero_coords(&hom, &cf)? {
                left_action.insert((c, i), coords);
            }
        }
        // (f·a)(w) = (−1)^{|a||w|} f(w)·a
        for a in 0..a_alg.dim() {
            if a_alg.family_position(a).is_some() {
                continue;
            }
            let da = a_alg.degree(a) as i64;
            let images: Vec<LinComb> = (0..w.dim())
                .map(|s| {
                    let sign = field.sign(da * w.degree(s) as i64);
                    x.right_act(&f.image_of_basis(s), &LinComb::basis(a, field))
                        .scale(&sign, field)
                })
                .collect();
            let fa =
                DgMorphism::from_images(w.clone(), x.clone(), f.degree() + a_alg.degree(a), &images)?;
            if let Some(coords) = nonzero_coords(&hom, &fa)? {
                right_action.insert((i, a), coords);
            }
        }
        let df = f.hom_differential()?;
        if let Some(coords) = nonzero_coords(&hom, &df)? {
            diff.insert(i, coords);
        }
    }

    let module = DgModule::new_bimodule(c_alg, a_alg, basis, left_action, right_action, diff)?
        .tighten_side();
    hom.module = Arc::new(module);
    Ok(hom)
}

/// The push-forward `φ_*` on Hom bimodules: `f ↦ φ∘f`, a module morphism
/// `overline{HOM}(P,X) → overline{HOM}(P,Y)` of degree `|φ|`.
pub fn hom_push(
    from: &BimoduleHom,
    to: &BimoduleHom,
    phi: &DgMorphism,
) -> Result<DgMorphism> {
    if !same_module(&from.source, &to.source) {
        return Err(Error::ShapeMismatch("hom_push over different sources".into()));
    }
    let images = (0..from.module().dim())
        .map(|i| {
            let f = from.basis_morphism(i);
            let pf = DgMorphism::compose(phi, f)?;
            Ok(match to.coords_of_morphism(&pf) {
                Some(c) => c,
                None => {
                    if pf.is_zero() {
                        LinComb::zero()
                    } else {
                        return Err(Error::Invalid("push-forward left the Hom space".into()));
                    }
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DgMorphism::from_images(
        from.module().clone(),
        to.module().clone(),
        phi.degree(),
        &images,
    )
}

/// The signed pull-back `α^*` on Hom bimodules: `f ↦ (−1)^{|α||f|} f∘α`,
/// a module morphism `overline{HOM}(M,X) → overline{HOM}(N,X)` for
/// `α : N → M`.
pub fn hom_pull(
    from: &BimoduleHom,
    to: &BimoduleHom,
    alpha: &DgMorphism,
) -> Result<DgMorphism> {
    if !same_module(&from.target, &to.target) {
        return Err(Error::ShapeMismatch("hom_pull over different targets".into()));
    }
    let field = from.source.field();
    let images = (0..from.module().dim())
        .map(|i| {
            let f = from.basis_morphism(i);
            let sign = field.sign(alpha.degree() as i64 * f.degree() as i64);
            let fa = DgMorphism::compose(f, alpha)?.scale(&sign);
            Ok(match to.coords_of_morphism(&fa) {
                Some(c) => c,
                None => {
                    if fa.is_zero() {
                        LinComb::zero()
                    } else {
                        return Err(Error::Invalid("pull-back left the Hom space".into()));
                    }
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DgMorphism::from_images(
        from.module().clone(),
        to.module().clone(),
        alpha.degree(),
        &images,
    )
}

struct TensorDegree {
    /// ambient basis: (u index, x index) pairs of this total degree
    pairs: Vec<(usize, usize)>,
    lookup: BTreeMap<(usize, usize), usize>,
    quotient: QuotientMap,
    /// module basis index of each quotient representative
    module_indices: Vec<usize>,
}

/// `U ⊗_B X` for `U` a (C,B)-bimodule and `X` a (B,A)-bimodule: the
/// degreewise quotient of the pair space by the middle-action relations
/// `ub⊗x − u⊗bx`, with representatives chosen by echelon pivoting. The
/// relation space is checked to be closed under the tensor differential
/// before any quotient is taken.
pub struct TensorProduct {
    pub left: Arc<DgModule>,
    pub right: Arc<DgModule>,
    module: Arc<DgModule>,
    degrees: BTreeMap<i32, TensorDegree>,
}

impl TensorProduct {
    pub fn module(&self) -> &Arc<DgModule> {
        &self.module
    }

    /// The class of `u_i ⊗ x_j` in the quotient module.
    pub fn reduce_pair(&self, i: usize, j: usize) -> Result<LinComb> {
        let field = self.left.field();
        let n = self.left.degree(i) + self.right.degree(j);
        let Some(td) = self.degrees.get(&n) else {
            return Ok(LinComb::zero());
        };
        let pos = td.lookup[&(i, j)];
        let mut v = vec![field.zero(); td.pairs.len()];
        v[pos] = field.one();
        let coords = td.quotient.reduce(&v)?;
        Ok(LinComb::from_terms(
            coords
                .into_iter()
                .enumerate()
                .map(|(k, c)| (td.module_indices[k], c)),
            field,
        ))
    }

    /// Reduce an ambient pair-space combination (entries keyed by
    /// (u index, x index) with coefficients).
    pub fn reduce_combination(
        &self,
        terms: impl IntoIterator<Item = ((usize, usize), Scalar)>,
    ) -> Result<LinComb> {
        let field = self.left.field();
        let mut out = LinComb::zero();
        for ((i, j), c) in terms {
            let class = self.reduce_pair(i, j)?;
            out = out.add(&class.scale(&c, field), field);
        }
        Ok(out)
    }
}

/// Build `U ⊗_B X`.
pub fn tensor_over(u: &Arc<DgModule>, x: &Arc<DgModule>) -> Result<TensorProduct> {
    if !same_algebra(u.right_algebra(), x.left_algebra()) {
        return Err(Error::AlgebraMismatch(
            "tensor over mismatched middle algebras".into(),
        ));
    }
    let field = u.field();
    let b_alg = u.right_algebra().clone();
    let c_alg = u.left_algebra().clone();
    let a_alg = x.right_algebra().clone();

    // ambient pair space, graded by total degree
    let mut by_degree: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..u.dim() {
        for j in 0..x.dim() {
            let n = u.degree(i) + x.degree(j);
            check_degree(n)?;
            by_degree.entry(n).or_default().push((i, j));
        }
    }
    let mut degrees: BTreeMap<i32, TensorDegree> = BTreeMap::new();
    for (n, pairs) in by_degree {
        let lookup: BTreeMap<(usize, usize), usize> = pairs
            .iter()
            .enumerate()
            .map(|(k, p)| (*p, k))
            .collect();
        degrees.insert(
            n,
            TensorDegree {
                pairs,
                lookup,
                quotient: QuotientMap::new(field, 0, &[])?,
                module_indices: Vec::new(),
            },
        );
    }

    // relation spanners ub⊗x − u⊗bx, collected per degree
    let mut relations: BTreeMap<i32, Vec<Vec<Scalar>>> = BTreeMap::new();
    let ambient_vec = |td: &TensorDegree, terms: &[((usize, usize), Scalar)]| {
        let mut v = vec![field.zero(); td.pairs.len()];
        for ((i, j), c) in terms {
            let pos = td.lookup[&(*i, *j)];
            v[pos] = field.add(&v[pos], c);
        }
        v
    };
    for i in 0..u.dim() {
        for b in 0..b_alg.dim() {
            let ub = u.right_act_basis(i, b);
            for j in 0..x.dim() {
                let bx = x.left_act_basis(b, j);
                let n = u.degree(i) + b_alg.degree(b) + x.degree(j);
                let mut terms: Vec<((usize, usize), Scalar)> = Vec::new();
                for (m, c) in ub.terms() {
                    terms.push(((m, j), c.clone()));
                }
                for (m, c) in bx.terms() {
                    terms.push(((i, m), field.neg(c)));
                }
                if terms.is_empty() {
                    continue;
                }
                let Some(td) = degrees.get(&n) else { continue };
                let v = ambient_vec(td, &terms);
                if v.iter().any(|c| !c.is_zero()) {
                    relations.entry(n).or_default().push(v);
                }
            }
        }
    }

    for (n, td) in degrees.iter_mut() {
        let rel = relations.remove(n).unwrap_or_default();
        td.quotient = QuotientMap::new(field, td.pairs.len(), &rel)?;
    }

    // d(N) ⊆ N: the tensor differential of every relation spanner must
    // reduce to zero
    let tensor_diff = |pairs: &[((usize, usize), Scalar)]| -> Vec<((usize, usize), Scalar)> {
        let mut out = Vec::new();
        for ((i, j), c) in pairs {
            for (m, cv) in u.diff_basis(*i).terms() {
                out.push(((m, *j), field.mul(c, cv)));
            }
            let sign = field.sign(u.degree(*i) as i64);
            for (m, cv) in x.diff_basis(*j).terms() {
                out.push(((*i, m), field.mul(&field.mul(c, cv), &sign)));
            }
        }
        out
    };
    let mut tensor = TensorProduct {
        left: u.clone(),
        right: x.clone(),
        module: Arc::new(DgModule::zero(
            crate::module::Side::Bimodule,
            c_alg.clone(),
            a_alg.clone(),
        )),
        degrees,
    };
    // assign module basis indices to quotient representatives
    let mut basis = Vec::new();
    let mut keys: Vec<i32> = tensor.degrees.keys().copied().collect();
    keys.sort_unstable();
    for n in &keys {
        let td = tensor.degrees.get_mut(n).unwrap();
        let reps: Vec<usize> = td.quotient.representative_indices().to_vec();
        for &rep in &reps {
            let (i, j) = td.pairs[rep];
            td.module_indices.push(basis.len());
            basis.push(ModBasisElement {
                label: format!("{}@{}", u.label(i), x.label(j)),
                degree: *n,
                left: u.element(i).left,
                right: x.element(j).right,
            });
        }
    }

    // closure of the relations under d
    for i in 0..u.dim() {
        for b in 0..b_alg.dim() {
            let ub = u.right_act_basis(i, b);
            for j in 0..x.dim() {
                let bx = x.left_act_basis(b, j);
                let mut terms: Vec<((usize, usize), Scalar)> = Vec::new();
                for (m, c) in ub.terms() {
                    terms.push(((m, j), c.clone()));
                }
                for (m, c) in bx.terms() {
                    terms.push(((i, m), field.neg(c)));
                }
                let image = tensor_diff(&terms);
                let reduced = tensor.reduce_combination(image)?;
                if !reduced.is_zero() {
                    return Err(Error::Invalid(format!(
                        "tensor relations are not closed under d at ({}, {}, {})",
                        u.label(i),
                        b_alg.label(b),
                        x.label(j)
                    )));
                }
            }
        }
    }

    // induced actions and differential on representatives
    let mut left_action = BTreeMap::new();
    let mut right_action = BTreeMap::new();
    let mut diff = BTreeMap::new();
    let rep_list: Vec<(usize, usize, usize)> = keys
        .iter()
        .flat_map(|n| {
            let td = &tensor.degrees[n];
            td.quotient
                .representative_indices()
                .iter()
                .enumerate()
                .map(|(k, &rep)| {
                    let (i, j) = td.pairs[rep];
                    (td.module_indices[k], i, j)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    for (idx, i, j) in &rep_list {
        // c·(u⊗x) = cu⊗x
        for c in 0..c_alg.dim() {
            if c_alg.family_position(c).is_some() {
                continue;
            }
            let cu = u.left_act_basis(c, *i);
            let mut terms = Vec::new();
            for (m, cv) in cu.terms() {
                terms.push(((m, *j), cv.clone()));
            }
            let class = tensor.reduce_combination(terms)?;
            if !class.is_zero() {
                left_action.insert((c, *idx), class);
            }
        }
        // (u⊗x)·a = u⊗xa
        for a in 0..a_alg.dim() {
            if a_alg.family_position(a).is_some() {
                continue;
            }
            let xa = x.right_act_basis(*j, a);
            let mut terms = Vec::new();
            for (m, cv) in xa.terms() {
                terms.push(((*i, m), cv.clone()));
            }
            let class = tensor.reduce_combination(terms)?;
            if !class.is_zero() {
                right_action.insert((*idx, a), class);
            }
        }
        // d(u⊗x) = du⊗x + (−1)^{|u|} u⊗dx
        let image = tensor_diff(&[(((*i), (*j)), field.one())]);
        let class = tensor.reduce_combination(image)?;
        if !class.is_zero() {
            diff.insert(*idx, class);
        }
    }

    let module =
        DgModule::new_bimodule(c_alg, a_alg, basis, left_action, right_action, diff)?
            .tighten_side();
    tensor.module = Arc::new(module);
    Ok(tensor)
}

/// `α ⊗ φ` on tensor products: `(u⊗x) ↦ (−1)^{|φ||u|} α(u)⊗φ(x)`,
/// checked to be well-defined on the quotient by evaluating it on every
/// relation spanner.
pub fn tensor_on_morphisms(
    from: &TensorProduct,
    to: &TensorProduct,
    alpha: &DgMorphism,
    phi: &DgMorphism,
) -> Result<DgMorphism> {
    if !same_module(&alpha.source, &from.left)
        || !same_module(&phi.source, &from.right)
        || !same_module(&alpha.target, &to.left)
        || !same_module(&phi.target, &to.right)
    {
        return Err(Error::ShapeMismatch(
            "tensor_on_morphisms endpoints do not match".into(),
        ));
    }
    let field = from.left.field();
    let pair_image = |i: usize, j: usize| -> Vec<((usize, usize), Scalar)> {
        let sign = field.sign(phi.degree() as i64 * from.left.degree(i) as i64);
        let au = alpha.image_of_basis(i);
        let px = phi.image_of_basis(j);
        let mut out = Vec::new();
        for (m, cu) in au.terms() {
            for (t, cx) in px.terms() {
                out.push(((m, t), field.mul(&field.mul(cu, cx), &sign)));
            }
        }
        out
    };

    // well-definedness on relation spanners: ub⊗x − u⊗bx maps into the
    // relation space of the target
    let u = &from.left;
    let x = &from.right;
    let b_alg = u.right_algebra().clone();
    for i in 0..u.dim() {
        for b in 0..b_alg.dim() {
            let ub = u.right_act_basis(i, b);
            for j in 0..x.dim() {
                let bx = x.left_act_basis(b, j);
                let mut image = Vec::new();
                for (m, c) in ub.terms() {
                    for (t, cv) in pair_image(m, j) {
                        image.push((t, field.mul(c, &cv)));
                    }
                }
                for (m, c) in bx.terms() {
                    for (t, cv) in pair_image(i, m) {
                        image.push((t, field.neg(&field.mul(c, &cv))));
                    }
                }
                let class = to.reduce_combination(image)?;
                if !class.is_zero() {
                    return Err(Error::Invalid(format!(
                        "α⊗φ is not well-defined on the relation at ({}, {}, {})",
                        u.label(i),
                        b_alg.label(b),
                        x.label(j)
                    )));
                }
            }
        }
    }

    let mut images = vec![LinComb::zero(); from.module().dim()];
    for n in from.degrees.keys() {
        let td = &from.degrees[n];
        for (k, &rep) in td.quotient.representative_indices().iter().enumerate() {
            let (i, j) = td.pairs[rep];
            let class = to.reduce_combination(pair_image(i, j))?;
            images[td.module_indices[k]] = class;
        }
    }
    DgMorphism::from_images(
        from.module().clone(),
        to.module().clone(),
        alpha.degree() + phi.degree(),
        &images,
    )
}

/// The middle-unit isomorphism `B ⊗_B X ≅ X`, `b⊗x ↦ bx`, returned as an
/// explicit module morphism (its inverse is `x ↦ Σ e_i ⊗ x`, which the
/// bijectivity check certifies without materializing).
pub fn tensor_unit_iso(t: &TensorProduct, regular: &Arc<DgModule>) -> Result<DgMorphism> {
    if !same_module(&t.left, regular) {
        return Err(Error::ShapeMismatch(
            "tensor_unit_iso expects the regular bimodule on the left".into(),
        ));
    }
    let x = &t.right;
    let mut images = vec![LinComb::zero(); t.module().dim()];
    for n in t.degrees.keys() {
        let td = &t.degrees[n];
        for (k, &rep) in td.quotient.representative_indices().iter().enumerate() {
            let (b, j) = td.pairs[rep];
            // regular bimodule basis index b is an algebra basis index
            images[td.module_indices[k]] = x.left_act_basis(b, j);
        }
    }
    DgMorphism::from_images(t.module().clone(), x.clone(), 0, &images)
}

/// Expose the variant for diagnostics.
impl BimoduleHom {
    pub fn is_left_linear_variant(&self) -> bool {
        self.variant == HomVariant::LeftLinear
    }
}
