use super::{Field, UniPoly};
use crate::error::{Error, Result};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.fmt_elem(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> std::hash::Hash for Mat<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn scalar(field: &F, n: usize, c: &F::Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::from_vec(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_int_rows(field: &F, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
                .collect(),
        )
    }

    pub fn from_fn(
        field: &F,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> F::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: &F, n: usize, cols: &[Vec<F::Elem>]) -> Self {
        Self::from_fn(field, n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn random(field: &F, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Self {
        let data = (0..rows * cols).map(|_| field.random_elem(rng)).collect();
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn into_data(self) -> Vec<F::Elem> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [F::Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if !f.is_zero(a) {
                    f.axpy(dst, a, other.row(k));
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Mat {
            data,
            ..self.clone_shape()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Mat {
            data,
            ..self.clone_shape()
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &F::Elem, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.field.axpy(&mut self.data, c, &other.data);
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = self.clone();
        self.field.scale(&mut out.data, c);
        out
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Mat {
            data: self.data.iter().map(|a| f.neg(a)).collect(),
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> Self {
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Kronecker product; index (i*rb + k, j*cb + l).
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let (rb, cb) = (other.rows, other.cols);
        let mut out = Self::zeros(f, self.rows * rb, self.cols * cb);
        let oc = out.cols;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..rb {
                    let start = (i * rb + k) * oc + j * cb;
                    f.axpy(&mut out.data[start..start + cb], a, other.row(k));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(&self.field, rows.len(), self.cols, |i, j| {
            self.get(rows[i], j).clone()
        })
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(&self.field, rows, cols, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat {
            data,
            rows: self.rows + other.rows,
            ..self.clone_shape()
        }
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let field = blocks[0].field.clone();
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(&field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Entrywise image under a field map.
    pub fn map<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> Mat<G> {
        Mat {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(&self.data[i * cols + c])) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&self.data[r * cols + c]).unwrap();
            f.scale(&mut self.data[r * cols + c..(r + 1) * cols], &inv);
            let pivot_row: Vec<F::Elem> = self.data[r * cols + c..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let x = self.data[i * cols + c].clone();
                if !f.is_zero(&x) {
                    let neg = f.neg(&x);
                    f.axpy(
                        &mut self.data[i * cols + c..(i + 1) * cols],
                        &neg,
                        &pivot_row,
                    );
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, as the columns of the result.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Some X with self * X = rhs.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "system has {} rows, right-hand side {}",
                self.rows, rhs.rows
            )));
        }
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::NoSolution);
        }
        let f = &self.field;
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NoSolution);
        }
        Ok(r.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Columns of the result form a basis of the column space, chosen among
    /// the columns of self.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Evaluate a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, p: &UniPoly<F>) -> Self {
        let f = &self.field;
        let n = self.rows;
        let mut acc = Self::zeros(f, n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = f.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }
}

/// Characteristic polynomial det(xI - m), via reduction to upper Hessenberg
/// form by similarity and the standard three-term recurrence.
pub fn charpoly<F: Field>(m: &Mat<F>) -> Result<UniPoly<F>> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let f = m.field.clone();
    let n = m.rows;
    let mut h = m.clone();
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !f.is_zero(h.get(i, c))) else {
            continue;
        };
        if p != c + 1 {
            for j in 0..n {
                h.data.swap(p * n + j, (c + 1) * n + j);
            }
            for i in 0..n {
                h.data.swap(i * n + p, i * n + c + 1);
            }
        }
        let piv_inv = f.inv(h.get(c + 1, c)).unwrap();
        for i in c + 2..n {
            let x = h.get(i, c).clone();
            if f.is_zero(&x) {
                continue;
            }
            let t = f.mul(&x, &piv_inv);
            // row_i -= t * row_{c+1}
            let src: Vec<F::Elem> = h.row(c + 1).to_vec();
            let neg = f.neg(&t);
            f.axpy(h.row_mut(i), &neg, &src);
            // col_{c+1} += t * col_i
            for r in 0..n {
                let v = h.get(r, i).clone();
                if !f.is_zero(&v) {
                    let cur = f.add(h.get(r, c + 1), &f.mul(&t, &v));
                    h.set(r, c + 1, cur);
                }
            }
        }
    }
    let x = UniPoly::x(&f);
    let mut ps: Vec<UniPoly<F>> = vec![UniPoly::one(&f)];
    for k in 0..n {
        let mut pk = x
            .sub(&UniPoly::new(&f, vec![h.get(k, k).clone()]))
            .mul(&ps[k]);
        let mut prod = f.one();
        for i in (0..k).rev() {
            prod = f.mul(&prod, h.get(i + 1, i));
            if f.is_zero(&prod) {
                break;
            }
            let c = f.mul(&prod, h.get(i, k));
            if !f.is_zero(&c) {
                pk = pk.sub(&ps[i].scale(&c));
            }
        }
        ps.push(pk);
    }
    Ok(ps.pop().unwrap())
}

/// Incrementally maintained semi-echelon basis of a subspace of F^n.
///
/// Stored rows have a leading one at their pivot and zeros at the pivots of
/// all earlier rows, so reduction in insertion order is exact.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    n: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    /// Coordinates of each stored row in terms of the accepted input vectors.
    coords: Vec<Vec<F::Elem>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: &F, n: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
            coords: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    /// Reduce v; returns the residue and the combination of stored rows
    /// that was subtracted.
    fn reduce(&self, v: &mut [F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut used = vec![f.zero(); self.rows.len()];
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let c = v[p].clone();
            if !f.is_zero(&c) {
                f.axpy(v, &f.neg(&c), row);
                used[k] = c;
            }
        }
        used
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds v if independent; returns whether it was added.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.n);
        let f = self.field.clone();
        let mut w = v.to_vec();
        let used = self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&w[p]).unwrap();
        f.scale(&mut w, &inv);
        // new row = (v - sum used_k row_k) * inv, expressed in inputs
        let k = self.rows.len();
        let mut coord = vec![f.zero(); k + 1];
        coord[k] = f.one();
        for (j, c) in used.iter().enumerate() {
            if !f.is_zero(c) {
                f.axpy(&mut coord, &f.neg(c), &self.coords[j]);
            }
        }
        f.scale(&mut coord, &inv);
        for c in self.coords.iter_mut() {
            c.push(f.zero());
        }
        self.rows.push(w);
        self.pivots.push(p);
        self.coords.push(coord);
        true
    }

    /// Coordinates of v in terms of the accepted input vectors (in the
    /// order they were accepted), or `None` if v is outside the span.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let mut w = v.to_vec();
        let used = self.reduce(&mut w);
        if !w.iter().all(|x| f.is_zero(x)) {
            return None;
        }
        let mut out = vec![f.zero(); self.rows.len()];
        for (c, coord) in used.iter().zip(&self.coords) {
            if !f.is_zero(c) {
                f.axpy(&mut out, c, coord);
            }
        }
        Some(out)
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis of the vectors annihilated by every stored row.
    pub fn annihilator(&self) -> Mat<F> {
        if self.rows.is_empty() {
            return Mat::identity(&self.field, self.n);
        }
        Mat::from_rows(&self.field, self.rows.clone())
            .expect("rows share a length")
            .kernel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::Fq;

    fn f5() -> Fq {
        Fq::prime(5).unwrap()
    }

    #[test]
    fn charpoly_small_cases() {
        let f = f5();
        let j3 = Mat::from_int_rows(&f, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        assert_eq!(
            charpoly(&j3).unwrap(),
            UniPoly::from_ints(&f, &[0, 0, 0, 1])
        );
        let id = Mat::identity(&f, 2);
        assert_eq!(charpoly(&id).unwrap(), UniPoly::from_ints(&f, &[1, 3, 1]));
        // companion of x^3 + 2x + 4
        let comp =
            Mat::from_int_rows(&f, &[vec![0, 0, -4], vec![1, 0, -2], vec![0, 1, 0]]).unwrap();
        assert_eq!(
            charpoly(&comp).unwrap(),
            UniPoly::from_ints(&f, &[4, 2, 0, 1])
        );
    }

    #[test]
    fn charpoly_nonsquare() {
        let m = Mat::zeros(&f5(), 2, 3);
        assert!(matches!(charpoly(&m), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn solve_and_kernel() {
        let f = f5();
        let id = Mat::identity(&f, 3);
        let b = Mat::from_int_rows(&f, &[vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(id.solve(&b).unwrap(), b);
        assert_eq!(Mat::zeros(&f, 2, 3).kernel().cols(), 3);
        let j3 = Mat::from_int_rows(&f, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        let k = j3.kernel();
        assert_eq!(k.cols(), 1);
        assert!(j3.mul(&k).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f5();
        let m = Mat::from_int_rows(&f, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn echelon_coordinates() {
        let f = f5();
        let mut e = EchelonBasis::new(&f, 3);
        let a = vec![1, 2, 0];
        let b = vec![0, 1, 1];
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        let c: Vec<u32> = vec![2, 2, 3]; // 2a + 3b
        let co = e.coordinates(&c).unwrap();
        assert_eq!(co, vec![2, 3]);
        assert!(!e.insert(&c));
    }
}
