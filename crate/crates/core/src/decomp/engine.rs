use crate::error::{Error, Result};
use crate::exact_linalg::{
    charpoly, split_for_fitting, CycloField, EchelonBasis, Field, FittingSplit, Fq, Mat,
    RatFuncField, Rationals, UniPoly,
};
use crate::modrep::Rep;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Embedding of a field into an extension.
pub type FieldMap<F> = Box<dyn Fn(&<F as Field>::Elem) -> <F as Field>::Elem + Send + Sync>;

/// Fields the Fitting decomposition can run over.
pub trait DecompField: Field {
    /// Degree over the prime field for extendable fields.
    fn total_degree(&self) -> Option<u32> {
        None
    }

    /// The extension of total degree `degree` together with the embedding.
    fn extend_to(&self, degree: u32) -> Result<(Self, FieldMap<Self>)> {
        Err(Error::InvalidField(format!(
            "no extension of degree {degree} available"
        )))
    }

    /// Candidate eigenvalues used to split characteristic polynomials over
    /// infinite fields.
    fn root_hints(&self) -> Vec<Self::Elem> {
        Vec::new()
    }
}

impl DecompField for Fq {
    fn total_degree(&self) -> Option<u32> {
        Some(self.degree())
    }

    fn extend_to(&self, degree: u32) -> Result<(Self, FieldMap<Self>)> {
        if !degree.is_multiple_of(self.degree()) {
            return Err(Error::InvalidField(format!(
                "degree {degree} is not a multiple of {}",
                self.degree()
            )));
        }
        let big = Fq::new(self.p() as u64, degree)?;
        let emb = self.embedding_into(&big)?;
        Ok((big, Box::new(move |x| emb.apply(*x))))
    }
}

impl DecompField for Rationals {
    fn root_hints(&self) -> Vec<Self::Elem> {
        (-4..=4).map(|k| self.from_int(k)).collect()
    }
}

impl DecompField for CycloField {
    fn root_hints(&self) -> Vec<Self::Elem> {
        let n = self.order() as i64;
        let mut out = vec![self.zero()];
        for k in 0..n {
            let z = self.zeta_pow(k);
            out.push(self.neg(&z));
            out.push(z);
        }
        out
    }
}

impl DecompField for RatFuncField {
    fn root_hints(&self) -> Vec<Self::Elem> {
        let mut out = vec![self.zero()];
        for k in -8..=8 {
            let z = self.t_pow(k);
            out.push(self.neg(&z));
            out.push(z);
        }
        out
    }
}

/// Search budget for the decomposition.
#[derive(Clone, Debug)]
pub struct DecompOptions {
    pub seed: u64,
    /// Random endomorphisms tried after the basis elements.
    pub random_candidates: usize,
    pub max_dim: usize,
    /// Extend the field when an endomorphism has an irreducible
    /// characteristic polynomial factor of degree > 1.
    pub allow_extension: bool,
    /// Cap on the total degree of the coefficient field.
    pub extension_cap: u32,
}

impl Default for DecompOptions {
    fn default() -> Self {
        DecompOptions {
            seed: 0,
            random_candidates: 64,
            max_dim: 256,
            allow_extension: true,
            extension_cap: 8,
        }
    }
}

impl DecompOptions {
    pub fn with_seed(seed: u64) -> Self {
        DecompOptions {
            seed,
            ..Default::default()
        }
    }
}

/// An indecomposable direct summand in the coordinates of the input.
#[derive(Clone, Debug)]
pub struct Piece<F: Field> {
    pub rep: Rep<F>,
    /// ambient x dim; the columns span the summand.
    pub inclusion: Mat<F>,
    /// dim x ambient; projection along the other summands.
    pub projection: Mat<F>,
    /// Basis of the endomorphism algebra of the summand.
    pub endomorphisms: Vec<Mat<F>>,
}

/// A complete decomposition, possibly over an extension of the input field.
#[derive(Clone, Debug)]
pub struct RepDecomposition<F: Field> {
    pub field: F,
    /// The input, mapped into `field`.
    pub input: Rep<F>,
    pub pieces: Vec<Piece<F>>,
}

enum Step<F: Field> {
    Split(Vec<Piece<F>>),
    Indecomposable,
    Extend(u32),
    Unresolved,
}

/// Decompose into indecomposables by Fitting splitting of endomorphisms,
/// extending the field when an endomorphism has no rational eigenvalue.
pub fn decompose_rep<F: DecompField>(
    rep: &Rep<F>,
    opts: &DecompOptions,
) -> Result<RepDecomposition<F>> {
    if rep.dim() > opts.max_dim {
        return Err(Error::DimCapExceeded {
            dim: rep.dim(),
            cap: opts.max_dim,
        });
    }
    let mut current = rep.clone();
    loop {
        match decompose_fixed(&current, opts) {
            Err(Error::NeedsExtension(target)) if opts.allow_extension => {
                // always embed straight from the input field so repeated
                // extensions stay compatible
                let (big, emb) = rep.field().extend_to(target)?;
                let gens = rep.gens().iter().map(|g| g.map(&big, &emb)).collect();
                current = Rep::new(&big, rep.dim(), gens)?;
            }
            other => return other,
        }
    }
}

fn decompose_fixed<F: DecompField>(
    rep: &Rep<F>,
    opts: &DecompOptions,
) -> Result<RepDecomposition<F>> {
    let f = rep.field().clone();
    let d = rep.dim();
    let hints = f.root_hints();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut done = Vec::new();
    if d > 0 {
        let mut work = vec![Piece {
            rep: rep.clone(),
            inclusion: Mat::identity(&f, d),
            projection: Mat::identity(&f, d),
            endomorphisms: rep.hom_space(rep)?,
        }];
        while let Some(piece) = work.pop() {
            match step(&piece, &mut rng, opts, &hints)? {
                Step::Split(parts) => work.extend(parts.into_iter().rev()),
                Step::Indecomposable => done.push(piece),
                Step::Extend(e) => {
                    let total = f.total_degree().unwrap_or(1) * e;
                    if total > opts.extension_cap {
                        return Err(Error::ExtensionCapExceeded {
                            cap: opts.extension_cap,
                        });
                    }
                    return Err(Error::NeedsExtension(total));
                }
                Step::Unresolved => {
                    return Err(Error::IndecomposabilityUnresolved {
                        dim: piece.rep.dim(),
                    })
                }
            }
        }
    }
    Ok(RepDecomposition {
        field: f,
        input: rep.clone(),
        pieces: done,
    })
}

fn random_combination<F: Field>(basis: &[Mat<F>], rng: &mut ChaCha8Rng) -> Mat<F> {
    let f = basis[0].field();
    let mut acc = Mat::zeros(f, basis[0].rows(), basis[0].cols());
    for b in basis {
        acc.add_scaled(&f.random_elem(rng), b);
    }
    acc
}

fn step<F: DecompField>(
    piece: &Piece<F>,
    rng: &mut ChaCha8Rng,
    opts: &DecompOptions,
    hints: &[F::Elem],
) -> Result<Step<F>> {
    let end = &piece.endomorphisms;
    if end.len() <= 1 {
        return Ok(Step::Indecomposable);
    }
    let mut ext: Option<u32> = None;
    let try_one = |phi: &Mat<F>, ext: &mut Option<u32>| -> Result<Option<Vec<Piece<F>>>> {
        let chi = charpoly(phi)?;
        let split = split_for_fitting(&chi, opts.seed, hints)?;
        if split.splits() {
            return Ok(Some(fitting_split(piece, phi, &split)?));
        }
        if let Some(e) = split.extension_degree() {
            *ext = Some(ext.map_or(e as u32, |x| num_integer::lcm(x, e as u32)));
        }
        Ok(None)
    };
    for phi in end {
        if let Some(parts) = try_one(phi, &mut ext)? {
            return Ok(Step::Split(parts));
        }
    }
    if ext.is_none() && is_local(end, opts.seed, hints)? {
        return Ok(Step::Indecomposable);
    }
    for _ in 0..opts.random_candidates {
        let phi = random_combination(end, rng);
        if let Some(parts) = try_one(&phi, &mut ext)? {
            return Ok(Step::Split(parts));
        }
    }
    for a in end {
        for b in end {
            if let Some(parts) = try_one(&a.mul(b), &mut ext)? {
                return Ok(Step::Split(parts));
            }
        }
    }
    Ok(match ext {
        Some(e) => Step::Extend(e),
        None => Step::Unresolved,
    })
}

/// Split along the generalized eigenspaces of `phi`, one per coprime part
/// of its characteristic polynomial.
fn fitting_split<F: Field>(
    piece: &Piece<F>,
    phi: &Mat<F>,
    split: &FittingSplit<F>,
) -> Result<Vec<Piece<F>>> {
    let f = phi.field();
    let d = phi.rows();
    let mut s: Option<Mat<F>> = None;
    let mut sizes = Vec::new();
    for p in split.powers() {
        let k = phi.eval_poly(&p).kernel();
        sizes.push(k.cols());
        s = Some(match s {
            None => k,
            Some(acc) => acc.hstack(&k),
        });
    }
    let s = s.expect("at least two parts");
    if s.cols() != d {
        return Err(Error::Mismatch(format!(
            "generalized eigenspaces have total dimension {} in dimension {d}",
            s.cols()
        )));
    }
    let s_inv = s.inverse()?;
    let gens: Vec<Mat<F>> = piece
        .rep
        .gens()
        .iter()
        .map(|g| s_inv.mul(g).mul(&s))
        .collect();
    let ends: Vec<Mat<F>> = piece
        .endomorphisms
        .iter()
        .map(|e| s_inv.mul(e).mul(&s))
        .collect();
    let mut out = Vec::new();
    let mut off = 0;
    for &k in &sizes {
        let block = |m: &Mat<F>| m.submatrix(off, off, k, k);
        let rep = Rep::new(f, k, gens.iter().map(block).collect())?;
        let mut eb = EchelonBasis::new(f, k * k);
        let mut endo = Vec::new();
        for e in &ends {
            let b = block(e);
            if eb.insert(b.data()) {
                endo.push(b);
            }
        }
        out.push(Piece {
            rep,
            inclusion: piece.inclusion.mul(&s.submatrix(0, off, d, k)),
            projection: s_inv.submatrix(off, 0, k, d).mul(&piece.projection),
            endomorphisms: endo,
        });
        off += k;
    }
    Ok(out)
}

/// Rigorous check that the algebra spanned by `end` is `k·I ⊕ N` with `N`
/// a nilpotent ideal, which makes the module absolutely indecomposable.
pub fn is_local<F: Field>(end: &[Mat<F>], seed: u64, hints: &[F::Elem]) -> Result<bool> {
    let Some(first) = end.first() else {
        return Ok(false);
    };
    let f = first.field();
    let d = first.rows();
    let mut span = EchelonBasis::new(f, d * d);
    let mut nil = Vec::new();
    for psi in end {
        let chi = charpoly(psi)?;
        let split = split_for_fitting(&chi, seed, hints)?;
        let lambda = match split.parts.as_slice() {
            [(g, _, _)] if g.degree() == Some(1) => f.neg(&g.monic().coeff(0)),
            _ => return Ok(false),
        };
        let n = psi.sub(&Mat::scalar(f, d, &lambda));
        if span.insert(n.data()) {
            nil.push(n);
        }
    }
    for a in &nil {
        for b in &nil {
            if !span.contains(a.mul(b).data()) {
                return Ok(false);
            }
        }
    }
    let mut power = nil.clone();
    for _ in 0..=d {
        if power.is_empty() {
            return Ok(true);
        }
        let mut next_span = EchelonBasis::new(f, d * d);
        let mut next = Vec::new();
        for x in &power {
            for b in &nil {
                let p = x.mul(b);
                if next_span.insert(p.data()) {
                    next.push(p);
                }
            }
        }
        power = next;
    }
    Ok(false)
}

/// Exact isomorphism test for modules whose endomorphism algebra is local
/// with residue field equal to the base field: the non-invertible
/// morphisms form a proper subspace, so some basis element is invertible
/// exactly when the modules are isomorphic.
pub fn iso_indecomposable<F: Field>(a: &Rep<F>, b: &Rep<F>) -> Result<Option<Mat<F>>> {
    if a.dim() != b.dim() {
        return Ok(None);
    }
    Ok(a.hom_space(b)?.into_iter().find(|m| m.is_invertible()))
}

/// Generator characteristic polynomials: invariants of the isomorphism class.
pub fn rep_invariants<F: Field>(rep: &Rep<F>) -> Result<Vec<UniPoly<F>>> {
    rep.gens().iter().map(charpoly).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jordan(f: &Fq, n: usize) -> Mat<Fq> {
        Mat::from_fn(f, n, n, |i, j| if i == j || j == i + 1 { 1 } else { 0 })
    }

    #[test]
    fn jordan_blocks_are_indecomposable() {
        let f = Fq::prime(5).unwrap();
        let rep = Rep::new(&f, 5, vec![jordan(&f, 5)]).unwrap();
        let dec = decompose_rep(&rep, &DecompOptions::default()).unwrap();
        assert_eq!(dec.pieces.len(), 1);
        let two = Rep::new(&f, 2, vec![Mat::identity(&f, 2)]).unwrap();
        assert_eq!(
            decompose_rep(&two, &DecompOptions::default())
                .unwrap()
                .pieces
                .len(),
            2
        );
    }

    #[test]
    fn rotation_needs_extension() {
        // x^2 + 1 is irreducible over GF(3)
        let f = Fq::prime(3).unwrap();
        let m = Mat::from_int_rows(&f, &[vec![0, -1], vec![1, 0]]).unwrap();
        let rep = Rep::new(&f, 2, vec![m]).unwrap();
        let opts = DecompOptions {
            allow_extension: false,
            ..Default::default()
        };
        assert_eq!(
            decompose_rep(&rep, &opts).unwrap_err(),
            Error::NeedsExtension(2)
        );
        let dec = decompose_rep(&rep, &DecompOptions::default()).unwrap();
        assert_eq!(dec.field.degree(), 2);
        assert_eq!(dec.pieces.len(), 2);
        assert!(dec.pieces.iter().all(|p| p.rep.dim() == 1));
    }

    #[test]
    fn projections_and_inclusions_reassemble() {
        let f = Fq::prime(3).unwrap();
        let a = Rep::new(&f, 3, vec![jordan(&f, 3)]).unwrap();
        let b = Rep::new(&f, 2, vec![jordan(&f, 2)]).unwrap();
        let sum = a.direct_sum(&b).unwrap().direct_sum(&b).unwrap();
        let dec = decompose_rep(&sum, &DecompOptions::with_seed(7)).unwrap();
        let mut dims: Vec<usize> = dec.pieces.iter().map(|p| p.rep.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![2, 2, 3]);
        let mut total = Mat::zeros(&f, 7, 7);
        for p in &dec.pieces {
            assert!(p.projection.mul(&p.inclusion).is_identity());
            total = total.add(&p.inclusion.mul(&p.projection));
            // inclusion intertwines
            assert!(sum.gen(0).mul(&p.inclusion) == p.inclusion.mul(p.rep.gen(0)));
        }
        assert!(total.is_identity());
    }

    #[test]
    fn rational_split_with_hints() {
        let q = Rationals;
        let m = Mat::from_int_rows(&q, &[vec![1, 1], vec![0, 2]]).unwrap();
        let rep = Rep::new(&q, 2, vec![m]).unwrap();
        assert_eq!(
            decompose_rep(&rep, &DecompOptions::default())
                .unwrap()
                .pieces
                .len(),
            2
        );
    }
}
