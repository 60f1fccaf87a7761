//! Dense exact matrices with deterministic Gauss–Jordan elimination.
//!
//! Pivots are always the leftmost nonzero entry, so every echelon form,
//! kernel basis, image basis and solution produced here is reproducible
//! bit for bit. Degrees are tiny at desk scale; sparsity is a non-goal.

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use std::fmt;

/// Row-major dense matrix over a single field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rank_kernel_image`]: exact rank plus echelonized
/// bases for the kernel (vectors in the source) and image (vectors in the
/// target).
#[derive(Clone, Debug)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Vec<Vec<Scalar>>,
    pub image: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        for s in &data {
            if !field.contains(s) {
                return Err(Error::FieldMismatch(format!(
                    "entry {s} does not belong to {field}"
                )));
            }
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Scalar>]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Matrix::new(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "add {}x{} to {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = f.add(out.get(i, j), &f.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector application (vectors are column coordinates).
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                out[i] = f.add(&out[i], &f.mul(a, &v[j]));
            }
        }
        Ok(out)
    }

    fn compatible(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    /// Reduced row echelon form with leftmost-pivot selection. Returns the
    /// echelon matrix and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact rank together with echelonized kernel and image bases.
    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let kernel = self.kernel_basis();
        // echelon basis of the column space: row-reduce the transpose
        let (te, tp) = self.transpose().rref();
        let image = (0..tp.len()).map(|i| te.row(i).to_vec()).collect();
        RankKernelImage {
            rank: tp.len(),
            kernel: kernel.vectors,
            image,
        }
    }

    pub fn kernel_basis(&self) -> KernelBasis {
        let f = self.field;
        let (e, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut vectors = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(e.get(r, fc));
            }
            vectors.push(v);
        }
        KernelBasis {
            field: f,
            ambient: self.cols,
            vectors,
            free_cols: free,
        }
    }

    /// One solution of `self · x = b`, echelon back-substitution with free
    /// variables pinned to zero, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "rhs of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let f = self.field;
        let mut aug = Matrix::zero(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            if !f.contains(&b[i]) {
                return Err(Error::FieldMismatch(format!(
                    "rhs entry {} does not belong to {}",
                    b[i], f
                )));
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (e, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = e.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Exact inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let f = self.field;
        let n = self.rows;
        let mut aug = Matrix::zero(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (e, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Matrix::zero(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, e.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Echelonized kernel basis with coordinate extraction: each basis vector
/// has a 1 in "its" free column and 0 in every other free column, so the
/// coordinates of a kernel vector are just its entries at the free columns.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    field: Field,
    ambient: usize,
    pub vectors: Vec<Vec<Scalar>>,
    free_cols: Vec<usize>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Coordinates of `v` in this basis, or `None` when `v` is not in the
    /// spanned subspace (membership is verified, never assumed).
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient {
            return None;
        }
        let f = self.field;
        let coords: Vec<Scalar> = self.free_cols.iter().map(|&c| v[c].clone()).collect();
        let mut rebuilt = vec![f.zero(); self.ambient];
        for (c, basis) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (i, b) in basis.iter().enumerate() {
                rebuilt[i] = f.add(&rebuilt[i], &f.mul(c, b));
            }
        }
        if rebuilt == v {
            Some(coords)
        } else {
            None
        }
    }
}

/// Quotient of `K^n` by the row span of a relation matrix. Coset
/// representatives are the standard basis vectors at non-pivot columns
/// (the echelon complement), and reduction rewrites any vector into those
/// coordinates.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    field: Field,
    ambient: usize,
    echelon: Matrix,
    pivots: Vec<usize>,
    reps: Vec<usize>,
}

impl QuotientMap {
    pub fn new(field: Field, ambient: usize, relations: &[Vec<Scalar>]) -> Result<QuotientMap> {
        let m = Matrix::from_rows(field, ambient, relations)?;
        let (echelon, pivots) = m.rref();
        let reps = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        Ok(QuotientMap {
            field,
            ambient,
            echelon,
            pivots,
            reps,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Indices of the ambient coordinates that represent the quotient basis.
    pub fn representative_indices(&self) -> &[usize] {
        &self.reps
    }

    /// Class of `v` in quotient coordinates.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.ambient {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        let f = self.field;
        let mut w = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            if w[pc].is_zero() {
                continue;
            }
            let factor = w[pc].clone();
            for j in 0..self.ambient {
                let v = f.sub(&w[j], &f.mul(&factor, self.echelon.get(r, j)));
                w[j] = v;
            }
        }
        debug_assert!(self.pivots.iter().all(|&pc| w[pc].is_zero()));
        Ok(self.reps.iter().map(|&c| w[c].clone()).collect())
    }

    /// Ambient representative of a quotient-coordinate vector.
    pub fn lift(&self, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        if coords.len() != self.reps.len() {
            return Err(Error::ShapeMismatch(format!(
                "coordinate vector of length {} for quotient dimension {}",
                coords.len(),
                self.reps.len()
            )));
        }
        let mut v = vec![self.field.zero(); self.ambient];
        for (&c, s) in self.reps.iter().zip(coords) {
            v[c] = s.clone();
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

    fn m(rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        let f = q();
        Matrix::new(
            f,
            rows,
            cols,
            entries.iter().map(|&n| f.from_integer(n)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_rank_kernel_image() {
        // 2x2 identity over Q: rank 2, empty kernel, standard-basis image
        let rki = Matrix::identity(q(), 2).rank_kernel_image();
        assert_eq!(rki.rank, 2);
        assert!(rki.kernel.is_empty());
        assert_eq!(rki.image.len(), 2);
        assert_eq!(rki.image[0], vec![q().one(), q().zero()]);
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let rki = Matrix::zero(q(), 3, 2).rank_kernel_image();
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.len(), 2);
        assert!(rki.image.is_empty());
    }

    #[test]
    fn rank_one_kernel() {
        // [[1,2],[2,4]]: rank 1, kernel spanned by (-2, 1) ~ (2, -1)
        let rki = m(2, 2, &[1, 2, 2, 4]).rank_kernel_image();
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel.len(), 1);
        let v = &rki.kernel[0];
        // echelon kernel basis normalizes the free coordinate to 1
        assert_eq!(v[0], q().from_integer(-2));
        assert_eq!(v[1], q().from_integer(1));
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = Matrix::identity(q(), 2);
        let b = vec![q().one(), q().zero()];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);
        let z = Matrix::zero(q(), 2, 2);
        assert!(z.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_free_variables_zero() {
        // [1 1] x = 3 has solution line; the deterministic answer is (3, 0)
        let a = m(1, 2, &[1, 1]);
        let x = a.solve(&[q().from_integer(3)]).unwrap().unwrap();
        assert_eq!(x, vec![q().from_integer(3), q().zero()]);
        // oracle: enumerate points on the solution line and confirm the
        // returned one is among them and satisfies the equation
        let back = a.apply(&x).unwrap();
        assert_eq!(back, vec![q().from_integer(3)]);
    }

    #[test]
    fn fp_compose_scalars() {
        let f5 = Field::prime(5).unwrap();
        let a = Matrix::new(f5, 1, 1, vec![f5.from_integer(2)]).unwrap();
        let b = Matrix::new(f5, 1, 1, vec![f5.from_integer(3)]).unwrap();
        let c = a.mul(&b).unwrap();
        assert!(c.get(0, 0).is_one());
    }

    #[test]
    fn mixed_field_rejected() {
        let f5 = Field::prime(5).unwrap();
        let r = Matrix::new(q(), 1, 2, vec![q().one(), f5.one()]);
        assert!(matches!(r, Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn kernel_coords_roundtrip() {
        let a = m(2, 4, &[1, 2, 0, 1, 0, 0, 1, 3]);
        let k = a.kernel_basis();
        assert_eq!(k.dim(), 2);
        let f = q();
        // combine basis vectors with coefficients (2, -1) and re-extract
        let mut v = vec![f.zero(); 4];
        for (c, basis) in [f.from_integer(2), f.from_integer(-1)].iter().zip(&k.vectors) {
            for i in 0..4 {
                v[i] = f.add(&v[i], &f.mul(c, &basis[i]));
            }
        }
        let coords = k.coords_of(&v).unwrap();
        assert_eq!(coords, vec![f.from_integer(2), f.from_integer(-1)]);
        // a vector outside the kernel is rejected
        assert!(k.coords_of(&[f.one(), f.zero(), f.zero(), f.zero()]).is_none());
    }

    #[test]
    fn quotient_reduce_lift() {
        let f = q();
        // quotient of K^3 by span{(1,1,0)}: representatives are e2, e3
        let qm = QuotientMap::new(f, 3, &[vec![f.one(), f.one(), f.zero()]]).unwrap();
        assert_eq!(qm.dim(), 2);
        let r = qm.reduce(&[f.one(), f.zero(), f.from_integer(2)]).unwrap();
        assert_eq!(r, vec![f.from_integer(-1), f.from_integer(2)]);
        let lifted = qm.lift(&r).unwrap();
        let again = qm.reduce(&lifted).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(2, 2, &[1, 2, 3, 4]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(q(), 2));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }
}
