use crate::error::{Error, Result};
use crate::exact_linalg::{EchelonBasis, Field, Mat};

/// A finite-dimensional module over an algebra given by generators: one
/// square matrix per generator. Intertwiners commute with every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep<F: Field> {
    field: F,
    dim: usize,
    gens: Vec<Mat<F>>,
}

#[derive(Clone, Debug)]
enum SpinEvent<F: Field> {
    Seed,
    Child {
        parent: usize,
        gen: usize,
    },
    /// `gen * v[vertex] = sum coords[m] v[m]`
    Relation {
        vertex: usize,
        gen: usize,
        coords: Vec<F::Elem>,
    },
}

/// A basis of the module built by spinning seed vectors under the
/// generators, with the relations found along the way.
#[derive(Clone, Debug)]
struct Spin<F: Field> {
    events: Vec<SpinEvent<F>>,
    /// spin vectors as columns
    basis: Mat<F>,
}

impl<F: Field> Rep<F> {
    pub fn new(field: &F, dim: usize, gens: Vec<Mat<F>>) -> Result<Self> {
        for (k, g) in gens.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::InvalidModule(format!(
                    "generator {k} is {}x{}, module dimension is {dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            if g.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Rep {
            field: field.clone(),
            dim,
            gens,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Mat<F>] {
        &self.gens
    }

    pub fn gen(&self, k: usize) -> &Mat<F> {
        &self.gens[k]
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.gens.len() != other.gens.len() {
            return Err(Error::Mismatch(format!(
                "{} vs {} generators",
                self.gens.len(),
                other.gens.len()
            )));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| Mat::block_diag(&[a, b]))
            .collect();
        Rep::new(&self.field, self.dim + other.dim, gens)
    }

    /// Kronecker product of generator matrices (group-like generators).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| a.kron(b))
            .collect();
        Rep::new(&self.field, self.dim * other.dim, gens)
    }

    /// Inverse-transpose action (group-like generators).
    pub fn dual(&self) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.inverse().map(|i| i.transpose()))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::InvalidModule("generator matrix is singular".into()))?;
        Rep::new(&self.field, self.dim, gens)
    }

    /// Action in a new basis: `S^-1 g S`.
    pub fn conjugate(&self, s: &Mat<F>, s_inv: &Mat<F>) -> Self {
        Rep {
            field: self.field.clone(),
            dim: self.dim,
            gens: self.gens.iter().map(|g| s_inv.mul(&g.mul(s))).collect(),
        }
    }

    /// Action on the invariant subspace spanned by the columns of `basis`.
    pub fn submodule(&self, basis: &Mat<F>) -> Result<Self> {
        let k = basis.cols();
        let gens = self
            .gens
            .iter()
            .map(|g| basis.solve(&g.mul(basis)))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::InvalidModule("subspace is not invariant".into()))?;
        Rep::new(&self.field, k, gens)
    }

    /// Action on the quotient by the invariant subspace spanned by the
    /// columns of `sub`, in the basis of standard vectors completing it.
    pub fn quotient(&self, sub: &Mat<F>) -> Result<Self> {
        let (full, _) = complete_basis(sub);
        let k = sub.cols();
        let inv = full.inverse()?;
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let c = inv.mul(&g.mul(&full));
                c.submatrix(k, k, self.dim - k, self.dim - k)
            })
            .collect();
        Rep::new(&self.field, self.dim - k, gens)
    }

    /// Smallest invariant subspace containing the columns of `vectors`,
    /// as basis columns.
    pub fn spin_closure(&self, vectors: &[Vec<F::Elem>]) -> Mat<F> {
        let mut ech = EchelonBasis::new(&self.field, self.dim);
        let mut found: Vec<Vec<F::Elem>> = Vec::new();
        for v in vectors {
            if ech.insert(v) {
                found.push(v.clone());
            }
        }
        let mut i = 0;
        while i < found.len() {
            for g in &self.gens {
                let w = g.mul_vec(&found[i]);
                if ech.insert(&w) {
                    found.push(w);
                }
            }
            i += 1;
        }
        Mat::from_cols(&self.field, self.dim, &found)
    }

    fn spin(&self) -> Spin<F> {
        let f = &self.field;
        let n = self.dim;
        let mut ech = EchelonBasis::new(f, n);
        let mut vecs: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
        let mut events = Vec::new();
        let mut next_seed = 0;
        let mut l = 0;
        while vecs.len() < n {
            if l == vecs.len() {
                // span closed: add the first standard vector outside it
                loop {
                    let mut e = vec![f.zero(); n];
                    e[next_seed] = f.one();
                    next_seed += 1;
                    if ech.insert(&e) {
                        vecs.push(e);
                        events.push(SpinEvent::Seed);
                        break;
                    }
                }
            }
            for (k, g) in self.gens.iter().enumerate() {
                let w = g.mul_vec(&vecs[l]);
                match ech.coordinates(&w) {
                    Some(coords) => events.push(SpinEvent::Relation {
                        vertex: l,
                        gen: k,
                        coords,
                    }),
                    None => {
                        ech.insert(&w);
                        vecs.push(w);
                        events.push(SpinEvent::Child { parent: l, gen: k });
                    }
                }
            }
            l += 1;
        }
        // remaining vertices still owe their relations
        while l < vecs.len() {
            for (k, g) in self.gens.iter().enumerate() {
                let w = g.mul_vec(&vecs[l]);
                let coords = ech.coordinates(&w).expect("basis is complete");
                events.push(SpinEvent::Relation {
                    vertex: l,
                    gen: k,
                    coords,
                });
            }
            l += 1;
        }
        Spin {
            events,
            basis: Mat::from_cols(f, n, &vecs),
        }
    }

    /// Basis of Hom(self, other): matrices F (other.dim x self.dim) with
    /// F * self.gen(k) = other.gen(k) * F for every k.
    pub fn hom_space(&self, other: &Self) -> Result<Vec<Mat<F>>> {
        self.check_compatible(other)?;
        let f = &self.field;
        let (da, db) = (self.dim, other.dim);
        if da == 0 || db == 0 {
            return Ok(Vec::new());
        }
        let spin = self.spin();
        // q[l]: image of spin vector l, a db x r matrix in the current
        // parametrization of the solution space
        let mut q: Vec<Mat<F>> = Vec::with_capacity(da);
        let mut r = 0usize;
        let mut pending = EchelonBasis::new(f, 0);
        let reduce = |q: &mut Vec<Mat<F>>, pending: &mut EchelonBasis<F>, r: &mut usize| {
            if pending.dim() == 0 {
                return;
            }
            let c = pending.annihilator();
            for m in q.iter_mut() {
                *m = m.mul(&c);
            }
            *r = c.cols();
            *pending = EchelonBasis::new(f, *r);
        };
        for ev in &spin.events {
            match ev {
                SpinEvent::Seed => {
                    reduce(&mut q, &mut pending, &mut r);
                    for m in q.iter_mut() {
                        *m = m.hstack(&Mat::zeros(f, db, db));
                    }
                    q.push(Mat::zeros(f, db, r).hstack(&Mat::identity(f, db)));
                    r += db;
                    pending = EchelonBasis::new(f, r);
                }
                SpinEvent::Child { parent, gen } => {
                    if pending.dim() * 4 >= r.max(1) {
                        reduce(&mut q, &mut pending, &mut r);
                    }
                    let m = other.gens[*gen].mul(&q[*parent]);
                    q.push(m);
                }
                SpinEvent::Relation {
                    vertex,
                    gen,
                    coords,
                } => {
                    if r == 0 || pending.is_full() {
                        continue;
                    }
                    let mut rel = other.gens[*gen].mul(&q[*vertex]);
                    for (m, c) in coords.iter().enumerate() {
                        if !f.is_zero(c) {
                            rel.add_scaled(&f.neg(c), &q[m]);
                        }
                    }
                    for i in 0..db {
                        pending.insert(rel.row(i));
                        if pending.is_full() {
                            break;
                        }
                    }
                }
            }
        }
        reduce(&mut q, &mut pending, &mut r);
        if r == 0 {
            return Ok(Vec::new());
        }
        let t_inv = spin.basis.inverse()?;
        let mut out = Vec::with_capacity(r);
        for k in 0..r {
            let img = Mat::from_fn(f, db, da, |i, l| q[l].get(i, k).clone());
            out.push(img.mul(&t_inv));
        }
        Ok(out)
    }

    /// Exact intertwining check.
    pub fn is_hom(&self, other: &Self, m: &Mat<F>) -> bool {
        m.rows() == other.dim
            && m.cols() == self.dim
            && self
                .gens
                .iter()
                .zip(&other.gens)
                .all(|(a, b)| m.mul(a) == b.mul(m))
    }
}

/// Extend the columns of `sub` (independent) to a basis by appending
/// standard vectors; returns the full basis matrix and the indices of the
/// standard vectors added.
pub fn complete_basis<F: Field>(sub: &Mat<F>) -> (Mat<F>, Vec<usize>) {
    let f = sub.field();
    let n = sub.rows();
    let mut ech = EchelonBasis::new(f, n);
    let mut cols: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
    for j in 0..sub.cols() {
        let c = sub.col(j);
        ech.insert(&c);
        cols.push(c);
    }
    let mut added = Vec::new();
    for i in 0..n {
        if ech.is_full() {
            break;
        }
        let mut e = vec![f.zero(); n];
        e[i] = f.one();
        if ech.insert(&e) {
            cols.push(e);
            added.push(i);
        }
    }
    (Mat::from_cols(f, n, &cols), added)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::Fq;

    fn jordan(f: &Fq, n: usize) -> Mat<Fq> {
        Mat::from_fn(f, n, n, |i, j| if i == j || j == i + 1 { 1 } else { 0 })
    }

    #[test]
    fn hom_dims_cyclic_group() {
        let f = Fq::prime(5).unwrap();
        let j = |n| Rep::new(&f, n, vec![jordan(&f, n)]).unwrap();
        // Hom(J_a, J_b) has dimension min(a, b) for Z/p
        for a in 1..=5 {
            for b in 1..=5 {
                let h = j(a).hom_space(&j(b)).unwrap();
                assert_eq!(h.len(), a.min(b), "Hom(J{a}, J{b})");
                for m in &h {
                    assert!(j(a).is_hom(&j(b), m));
                }
            }
        }
    }

    #[test]
    fn hom_of_direct_sums_with_several_seeds() {
        let f = Fq::prime(3).unwrap();
        let j2 = Rep::new(&f, 2, vec![jordan(&f, 2)]).unwrap();
        let j1 = Rep::new(&f, 1, vec![Mat::identity(&f, 1)]).unwrap();
        let a = j2.direct_sum(&j1).unwrap().direct_sum(&j1).unwrap();
        // End(J2 + 2 J1) = 2 + 2*1 + 2*1 + 4*1 = 10
        assert_eq!(a.hom_space(&a).unwrap().len(), 10);
    }

    #[test]
    fn trivial_algebra_hom_is_all_matrices() {
        let f = Fq::prime(2).unwrap();
        let a = Rep::new(&f, 2, vec![]).unwrap();
        let b = Rep::new(&f, 3, vec![]).unwrap();
        assert_eq!(a.hom_space(&b).unwrap().len(), 6);
    }
}
