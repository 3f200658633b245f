use super::Rep;
use crate::error::{Error, Result};
use crate::exact_linalg::{EchelonBasis, Field, Fq, Mat};
use crate::groups::{GroupRef, PermGroup, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A kG-module over GF(p^r): one matrix per group generator.
#[derive(Clone, Debug)]
pub struct GModule {
    group: GroupRef,
    rep: Rep<Fq>,
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.rep == other.rep
    }
}

/// An intertwiner between two modules.
#[derive(Clone, Debug)]
pub struct ModMorphism {
    pub source: GModule,
    pub target: GModule,
    /// target.dim x source.dim
    pub matrix: Mat<Fq>,
}

/// The permutation group of a subgroup, generated by its generator elements.
pub fn subgroup_group(g: &PermGroup, h: &Subgroup, name: &str) -> Result<GroupRef> {
    Ok(Arc::new(g.subgroup_as_group(h, name)?))
}

impl GModule {
    /// Wraps matrices without checking the group relations; see
    /// [`GModule::validate`].
    pub fn new(group: &GroupRef, field: &Fq, dim: usize, action: Vec<Mat<Fq>>) -> Result<Self> {
        if action.len() != group.num_generators() {
            return Err(Error::InvalidModule(format!(
                "{} matrices for {} generators",
                action.len(),
                group.num_generators()
            )));
        }
        Ok(GModule {
            group: group.clone(),
            rep: Rep::new(field, dim, action)?,
        })
    }

    pub fn from_rep(group: &GroupRef, rep: Rep<Fq>) -> Result<Self> {
        if rep.num_gens() != group.num_generators() {
            return Err(Error::Mismatch("generator count differs from group".into()));
        }
        Ok(GModule {
            group: group.clone(),
            rep,
        })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn field(&self) -> &Fq {
        self.rep.field()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn dim_mod_p(&self) -> u32 {
        (self.dim() % self.field().p() as usize) as u32
    }

    pub fn rep(&self) -> &Rep<Fq> {
        &self.rep
    }

    pub fn action(&self) -> &[Mat<Fq>] {
        self.rep.gens()
    }

    pub fn trivial(group: &GroupRef, field: &Fq) -> Self {
        let gens = vec![Mat::identity(field, 1); group.num_generators()];
        GModule::new(group, field, 1, gens).expect("shapes agree")
    }

    pub fn sign(group: &GroupRef, field: &Fq) -> Self {
        let gens = group
            .generators()
            .iter()
            .map(|g| {
                let odd = g.cycles().iter().filter(|c| c.len() % 2 == 0).count() % 2 == 1;
                Mat::scalar(field, 1, &field.from_int(if odd { -1 } else { 1 }))
            })
            .collect();
        GModule::new(group, field, 1, gens).expect("shapes agree")
    }

    /// The natural permutation module on the moved points.
    pub fn permutation(group: &GroupRef, field: &Fq) -> Self {
        let n = group.degree();
        let gens = group
            .generators()
            .iter()
            .map(|g| Mat::from_fn(field, n, n, |i, j| if g.apply(j) == i { 1 } else { 0 }))
            .collect();
        GModule::new(group, field, n, gens).expect("shapes agree")
    }

    pub fn regular(group: &GroupRef, field: &Fq) -> Self {
        let n = group.order();
        let gens = (0..group.num_generators())
            .map(|k| {
                let gk = group.generator_index(k);
                let mut m = Mat::zeros(field, n, n);
                for x in 0..n {
                    m.set(group.mul(gk, x), x, 1);
                }
                m
            })
            .collect();
        GModule::new(group, field, n, gens).expect("shapes agree")
    }

    /// Unipotent Jordan block of size k for a cyclic group given by a
    /// single generator.
    pub fn jordan(group: &GroupRef, field: &Fq, k: usize) -> Result<Self> {
        if group.num_generators() != 1 {
            return Err(Error::InvalidModule(
                "Jordan-block modules need a one-generator group".into(),
            ));
        }
        let m = Mat::from_fn(field, k, k, |i, j| if i == j || j == i + 1 { 1 } else { 0 });
        let out = GModule::new(group, field, k, vec![m])?;
        out.validate()?;
        Ok(out)
    }

    /// Permutation module modulo the constant vectors.
    pub fn perm_mod_constants(group: &GroupRef, field: &Fq) -> Result<Self> {
        let perm = Self::permutation(group, field);
        let ones = Mat::from_fn(field, perm.dim(), 1, |_, _| 1);
        Self::from_rep(group, perm.rep.quotient(&ones)?)
    }

    /// Vectors with coordinate sum zero.
    pub fn sum_zero(group: &GroupRef, field: &Fq) -> Result<Self> {
        let perm = Self::permutation(group, field);
        let n = perm.dim();
        let basis = Mat::from_fn(field, n, n - 1, |i, j| {
            if i == j {
                1
            } else if i == j + 1 {
                field.neg(&1)
            } else {
                0
            }
        });
        Self::from_rep(group, perm.rep.submodule(&basis)?)
    }

    /// Sum-zero vectors modulo constants; requires the characteristic to
    /// divide the degree so that constants have sum zero.
    pub fn sum_zero_mod_constants(group: &GroupRef, field: &Fq) -> Result<Self> {
        let n = group.degree();
        if !n.is_multiple_of(field.p() as usize) {
            return Err(Error::InvalidModule(
                "constants have nonzero sum when p does not divide the degree".into(),
            ));
        }
        let h = Self::sum_zero(group, field)?;
        // constants in the sum-zero basis e_j - e_{j+1}: coefficients 1, 2, ..., n-1
        let ones = Mat::from_fn(field, n - 1, 1, |i, _| field.from_int(i as i64 + 1));
        Self::from_rep(group, h.rep.quotient(&ones)?)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if *self.group != *other.group {
            return Err(Error::Mismatch(format!(
                "groups {} and {} differ",
                self.group.name(),
                other.group.name()
            )));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::from_rep(&self.group, self.rep.tensor(&other.rep)?)
    }

    pub fn dual(&self) -> Self {
        Self::from_rep(
            &self.group,
            self.rep.dual().expect("group generators act invertibly"),
        )
        .expect("same group")
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::from_rep(&self.group, self.rep.direct_sum(&other.rep)?)
    }

    pub fn hom_space(&self, other: &Self) -> Result<Vec<Mat<Fq>>> {
        self.check_same(other)?;
        self.rep.hom_space(&other.rep)
    }

    /// Matrix of a group element, via its generator word.
    pub fn element_matrix(&self, x: usize) -> Mat<Fq> {
        let f = self.field();
        let mut m = Mat::identity(f, self.dim());
        for &k in self.group.word(x).iter().rev() {
            m = self.rep.gen(k).mul(&m);
        }
        m
    }

    /// Matrices of all group elements, indexed like the group.
    pub fn all_element_matrices(&self) -> Vec<Mat<Fq>> {
        let g = &self.group;
        let mut out: Vec<Mat<Fq>> = Vec::with_capacity(g.order());
        out.push(Mat::identity(self.field(), self.dim()));
        for i in 1..g.order() {
            let (parent, k) = g.parent(i);
            let m = self.rep.gen(k).mul(&out[parent]);
            out.push(m);
        }
        out
    }

    /// Check invertibility and the group relations: exhaustively on all
    /// elements for groups of order at most 400, otherwise on 200 seeded
    /// random words.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        for (k, m) in self.action().iter().enumerate() {
            if !m.is_invertible() {
                return Err(Error::InvalidModule(format!(
                    "generator g{k} acts singularly"
                )));
            }
        }
        if g.order() <= 400 {
            let all = self.all_element_matrices();
            for x in 0..g.order() {
                for k in 0..g.num_generators() {
                    let y = g.mul(g.generator_index(k), x);
                    if self.rep.gen(k).mul(&all[x]) != all[y] {
                        return Err(Error::InvalidModule(format!(
                            "relation fails: g{k} * element {x}"
                        )));
                    }
                }
            }
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = self.field();
        for _ in 0..200 {
            let len = rng.gen_range(4..24);
            let mut x = 0usize;
            let mut m = Mat::identity(f, self.dim());
            for _ in 0..len {
                let k = rng.gen_range(0..g.num_generators());
                x = g.mul(g.generator_index(k), x);
                m = self.rep.gen(k).mul(&m);
            }
            if m != self.element_matrix(x) {
                return Err(Error::InvalidModule("random word relation fails".into()));
            }
        }
        Ok(())
    }

    /// Restriction to a subgroup; `target` is the subgroup as a permutation
    /// group whose generators are elements of `h`.
    pub fn restrict(&self, h: &Subgroup, target: &GroupRef) -> Result<Self> {
        let mut gens = Vec::with_capacity(target.num_generators());
        for p in target.generators() {
            let x = self
                .group
                .index_of(p)
                .filter(|&x| h.contains(x))
                .ok_or_else(|| Error::NotASubgroup(format!("{p:?} is not in the subgroup")))?;
            gens.push(self.element_matrix(x));
        }
        GModule::new(target, self.field(), self.dim(), gens)
    }

    /// Induction from `self` (a module over the permutation group of `h`)
    /// to `g`, over minimal-index left coset representatives.
    pub fn induce(&self, g: &GroupRef, h: &Subgroup) -> Result<Self> {
        let hg = &self.group;
        if hg.order() != h.order()
            || h.elements
                .iter()
                .any(|&x| hg.index_of(g.element(x)).is_none())
        {
            return Err(Error::NotASubgroup(format!(
                "{} is not the given subgroup of {}",
                hg.name(),
                g.name()
            )));
        }
        let f = self.field();
        let local = self.all_element_matrices();
        let reps = g.coset_reps(h);
        let mut coset_of = vec![0usize; g.order()];
        for (j, &x) in reps.iter().enumerate() {
            for &y in &h.elements {
                coset_of[g.mul(x, y)] = j;
            }
        }
        let d = self.dim();
        let n = reps.len() * d;
        let mut gens = Vec::with_capacity(g.num_generators());
        for k in 0..g.num_generators() {
            let gk = g.generator_index(k);
            let mut m = Mat::zeros(f, n, n);
            for (j, &xj) in reps.iter().enumerate() {
                let y = g.mul(gk, xj);
                let kk = coset_of[y];
                let hh = g.mul(g.inverse(reps[kk]), y);
                let hidx = hg.index_of(g.element(hh)).expect("coset element lies in h");
                let block = &local[hidx];
                for a in 0..d {
                    for b in 0..d {
                        m.set(kk * d + a, j * d + b, *block.get(a, b));
                    }
                }
            }
            gens.push(m);
        }
        GModule::new(g, f, n, gens)
    }

    fn require_p_group(&self) -> Result<()> {
        let p = self.field().p() as u64;
        if !self.group.is_p_group(p) {
            return Err(Error::NotAPGroup(p));
        }
        Ok(())
    }

    /// Radical `I * M` for the augmentation ideal I (p-groups).
    pub fn radical(&self) -> Mat<Fq> {
        let f = self.field();
        let d = self.dim();
        let id = Mat::identity(f, d);
        let mut vs = Vec::new();
        for g in self.action() {
            let m = g.sub(&id);
            for j in 0..d {
                vs.push(m.col(j));
            }
        }
        self.rep.spin_closure(&vs)
    }

    /// Heller shift: kernel of the projective cover (p-groups only).
    pub fn heller_shift(&self) -> Result<Self> {
        self.require_p_group()?;
        let f = self.field();
        let g = &self.group;
        let d = self.dim();
        let rad = self.radical();
        let (_, top) = crate::modrep::rep::complete_basis(&rad);
        let t = top.len();
        let n = g.order();
        // images rho(x) m_j, column (j, x) at j * n + x
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(t * n);
        for &tj in &top {
            let mut imgs: Vec<Vec<u32>> = Vec::with_capacity(n);
            let mut e = vec![0u32; d];
            e[tj] = 1;
            imgs.push(e);
            for x in 1..n {
                let (parent, k) = g.parent(x);
                let v = self.rep.gen(k).mul_vec(&imgs[parent]);
                imgs.push(v);
            }
            cols.extend(imgs);
        }
        if t == 0 {
            return GModule::new(g, f, 0, vec![Mat::zeros(f, 0, 0); g.num_generators()]);
        }
        let pi = Mat::from_cols(f, d, &cols);
        let ker = pi.kernel();
        let free = Self::regular(g, f);
        let mut cover = free.clone();
        for _ in 1..t {
            cover = cover.direct_sum(&free)?;
        }
        Self::from_rep(g, cover.rep.submodule(&ker)?)
    }

    /// Inverse Heller shift, via duality.
    pub fn heller_inverse(&self) -> Result<Self> {
        Ok(self.dual().heller_shift()?.dual())
    }

    /// Higman's criterion for relative H-projectivity.
    pub fn higman_projective(&self, h: &Subgroup) -> Result<bool> {
        let g = &self.group;
        if !g.is_subgroup(h) {
            return Err(Error::NotASubgroup("element set is not a subgroup".into()));
        }
        let f = self.field();
        let d = self.dim();
        let hgens: Vec<Mat<Fq>> = h.gens.iter().map(|&x| self.element_matrix(x)).collect();
        let res = Rep::new(f, d, hgens)?;
        let end_h = res.hom_space(&res)?;
        let reps = g.coset_reps(h);
        let conj: Vec<(Mat<Fq>, Mat<Fq>)> = reps
            .iter()
            .map(|&x| (self.element_matrix(x), self.element_matrix(g.inverse(x))))
            .collect();
        let mut span = EchelonBasis::new(f, d * d);
        for phi in &end_h {
            let mut tr = Mat::zeros(f, d, d);
            for (a, ai) in &conj {
                tr = tr.add(&a.mul(&phi.mul(ai)));
            }
            span.insert(tr.data());
            if span.contains(Mat::identity(f, d).data()) {
                return Ok(true);
            }
        }
        Ok(span.contains(Mat::identity(f, d).data()))
    }

    /// Same module over a larger field.
    pub fn extend_field(&self, big: &Fq) -> Result<Self> {
        let emb = self.field().embedding_into(big)?;
        let gens = self
            .action()
            .iter()
            .map(|m| m.map(big, |&x| emb.apply(x)))
            .collect();
        GModule::new(&self.group, big, self.dim(), gens)
    }
}

impl ModMorphism {
    pub fn new(source: &GModule, target: &GModule, matrix: Mat<Fq>) -> Result<Self> {
        source.check_same(target)?;
        if !source.rep.is_hom(&target.rep, &matrix) {
            return Err(Error::InvalidModule("matrix does not intertwine".into()));
        }
        Ok(ModMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    /// Negligible iff Tr(f g) = 0 for every g: target -> source.
    pub fn is_negligible(&self) -> Result<bool> {
        let f = self.source.field().clone();
        let back = self.target.hom_space(&self.source)?;
        Ok(back.iter().all(|g| f.is_zero(&self.matrix.mul(g).trace())))
    }

    pub fn compose(&self, after: &ModMorphism) -> Result<ModMorphism> {
        ModMorphism::new(&self.source, &after.target, after.matrix.mul(&self.matrix))
    }

    /// f ⊗ id_a
    pub fn tensor_id(&self, a: &GModule) -> Result<ModMorphism> {
        let id = Mat::identity(a.field(), a.dim());
        ModMorphism::new(
            &self.source.tensor(a)?,
            &self.target.tensor(a)?,
            self.matrix.kron(&id),
        )
    }

    /// id_a ⊗ f
    pub fn id_tensor(&self, a: &GModule) -> Result<ModMorphism> {
        let id = Mat::identity(a.field(), a.dim());
        ModMorphism::new(
            &a.tensor(&self.source)?,
            &a.tensor(&self.target)?,
            id.kron(&self.matrix),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;

    fn f(p: u64) -> Fq {
        Fq::prime(p).unwrap()
    }

    #[test]
    fn basic_modules_validate() {
        let s5 = catalog("symmetric:5").unwrap();
        let k = f(5);
        GModule::permutation(&s5, &k).validate().unwrap();
        GModule::sign(&s5, &k).validate().unwrap();
        let v4 = GModule::perm_mod_constants(&s5, &k).unwrap();
        assert_eq!(v4.dim(), 4);
        v4.validate().unwrap();
        let v3 = GModule::sum_zero_mod_constants(&s5, &k).unwrap();
        assert_eq!(v3.dim(), 3);
        v3.validate().unwrap();
        let bad = GModule::new(
            &s5,
            &k,
            1,
            vec![Mat::identity(&k, 1), Mat::scalar(&k, 1, &2)],
        )
        .unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn hom_space_examples() {
        let s3 = catalog("symmetric:3").unwrap();
        let k3 = f(3);
        let triv = GModule::trivial(&s3, &k3);
        let perm = GModule::permutation(&s3, &k3);
        assert_eq!(triv.hom_space(&perm).unwrap().len(), 1);
        let z5 = catalog("cyclic:5").unwrap();
        let reg = GModule::regular(&z5, &f(5));
        assert_eq!(reg.hom_space(&reg).unwrap().len(), 5);
        let k5 = f(5);
        let t = GModule::trivial(&s3, &k5);
        let s = GModule::sign(&s3, &k5);
        assert_eq!(t.hom_space(&s).unwrap().len(), 0);
    }

    #[test]
    fn dual_is_involutive() {
        let z3 = catalog("cyclic:3").unwrap();
        let j2 = GModule::jordan(&z3, &f(3), 2).unwrap();
        assert_eq!(j2.dual().dual(), j2);
    }

    #[test]
    fn negligible_morphisms() {
        let z5 = catalog("cyclic:5").unwrap();
        let k = f(5);
        let reg = GModule::regular(&z5, &k);
        let id = ModMorphism::new(&reg, &reg, Mat::identity(&k, 5)).unwrap();
        assert!(id.is_negligible().unwrap());
        let t = GModule::trivial(&z5, &k);
        let idt = ModMorphism::new(&t, &t, Mat::identity(&k, 1)).unwrap();
        assert!(!idt.is_negligible().unwrap());
        let zero = ModMorphism::new(&t, &t, Mat::zeros(&k, 1, 1)).unwrap();
        assert!(zero.is_negligible().unwrap());
    }

    #[test]
    fn restrict_and_induce_dims() {
        let s5 = catalog("symmetric:5").unwrap();
        let k = f(5);
        let p = s5.sylow(5);
        let pg = subgroup_group(&s5, &p, "Z5").unwrap();
        let r = GModule::permutation(&s5, &k).restrict(&p, &pg).unwrap();
        assert_eq!(r.dim(), 5);
        r.validate().unwrap();
        let ind = GModule::trivial(&pg, &k).induce(&s5, &p).unwrap();
        assert_eq!(ind.dim(), 24);
        ind.validate().unwrap();
    }

    #[test]
    fn heller_shifts() {
        let z2 = catalog("cyclic:2").unwrap();
        let k2 = f(2);
        assert_eq!(GModule::trivial(&z2, &k2).heller_shift().unwrap().dim(), 1);
        let v4 = catalog("klein_four").unwrap();
        let om = GModule::trivial(&v4, &k2).heller_shift().unwrap();
        assert_eq!(om.dim(), 3);
        om.validate().unwrap();
        assert_eq!(om.heller_shift().unwrap().dim(), 5);
        assert_eq!(
            GModule::trivial(&v4, &k2).heller_inverse().unwrap().dim(),
            3
        );
        let s3 = catalog("symmetric:3").unwrap();
        assert!(matches!(
            GModule::trivial(&s3, &k2).heller_shift(),
            Err(Error::NotAPGroup(2))
        ));
    }

    #[test]
    fn higman_examples() {
        let z5 = catalog("cyclic:5").unwrap();
        let k = f(5);
        let reg = GModule::regular(&z5, &k);
        assert!(reg.higman_projective(&z5.trivial()).unwrap());
        let t = GModule::trivial(&z5, &k);
        assert!(!t.higman_projective(&z5.trivial()).unwrap());
        assert!(t.higman_projective(&z5.whole()).unwrap());
    }
}
