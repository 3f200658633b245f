//! Krull–Schmidt decomposition of modules into indecomposables, exact
//! isomorphism tests, and a registry of indecomposable isomorphism classes.

mod engine;
mod registry;

pub use engine::{
    decompose_rep, is_local, iso_indecomposable, rep_invariants, DecompField, DecompOptions,
    FieldMap, Piece, RepDecomposition,
};
pub use registry::{Classification, ClassifiedSummand, IndecRecord, Registry, RegistryJson};

use crate::error::{Error, Result};
use crate::exact_linalg::{Field, Fq, Mat};
use crate::modrep::GModule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One indecomposable summand with its embedding and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: GModule,
    /// ambient x dim
    pub inclusion: Mat<Fq>,
    /// dim x ambient
    pub projection: Mat<Fq>,
}

/// `input ≅ ⊕ summands`, over `field` (an extension of the input field when
/// one was needed).
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub field: Fq,
    pub input: GModule,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.summands.iter().map(|s| s.module.dim()).collect();
        d.sort_unstable();
        d
    }
}

pub fn decompose(a: &GModule, opts: &DecompOptions) -> Result<Decomposition> {
    let dec = decompose_rep(a.rep(), opts)?;
    let input = GModule::from_rep(a.group(), dec.input)?;
    let summands = dec
        .pieces
        .into_iter()
        .map(|p| {
            Ok(Summand {
                module: GModule::from_rep(a.group(), p.rep)?,
                inclusion: p.inclusion,
                projection: p.projection,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition {
        field: dec.field,
        input,
        summands,
    })
}

pub fn is_indecomposable(a: &GModule, opts: &DecompOptions) -> Result<bool> {
    if a.dim() == 0 {
        return Ok(false);
    }
    Ok(decompose(a, opts)?.summands.len() == 1)
}

/// Exact isomorphism test for indecomposable modules over the same field.
pub fn is_isomorphic_indecomposable(a: &GModule, b: &GModule) -> Result<Option<Mat<Fq>>> {
    if *a.group() != *b.group() {
        return Err(Error::Mismatch("modules over different groups".into()));
    }
    iso_indecomposable(a.rep(), b.rep())
}

/// Isomorphism test returning a witness `b.dim x a.dim` when one exists.
///
/// Random combinations of a Hom basis are tried first (exhaustively when
/// the search space is small); otherwise both sides are decomposed and
/// the multisets of indecomposables compared. `IsoUndecided` is returned
/// only when neither route settles the question.
pub fn is_isomorphic(a: &GModule, b: &GModule, opts: &DecompOptions) -> Result<Option<Mat<Fq>>> {
    if *a.group() != *b.group() {
        return Err(Error::Mismatch("modules over different groups".into()));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.dim() != b.dim() {
        return Ok(None);
    }
    let f = a.field();
    let hom = a.hom_space(b)?;
    if hom.len() != b.hom_space(a)?.len() {
        return Ok(None);
    }
    if let Some(m) = hom.iter().find(|m| m.is_invertible()) {
        return Ok(Some(m.clone()));
    }
    if hom.is_empty() {
        return Ok(if a.dim() == 0 {
            Some(Mat::zeros(f, 0, 0))
        } else {
            None
        });
    }
    let q = f.size() as u64;
    let space = (q as f64).powi(hom.len() as i32);
    if space <= 4096.0 {
        let total = q.pow(hom.len() as u32);
        for idx in 0..total {
            let mut acc = Mat::zeros(f, b.dim(), a.dim());
            let mut x = idx;
            for h in &hom {
                acc.add_scaled(&((x % q) as u32), h);
                x /= q;
            }
            if acc.is_invertible() {
                return Ok(Some(acc));
            }
        }
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..200 {
        let mut acc = Mat::zeros(f, b.dim(), a.dim());
        for h in &hom {
            acc.add_scaled(&f.random_elem(&mut rng), h);
        }
        if acc.is_invertible() {
            return Ok(Some(acc));
        }
    }
    let strict = DecompOptions {
        allow_extension: false,
        ..opts.clone()
    };
    let (da, db) = match (decompose(a, &strict), decompose(b, &strict)) {
        (Ok(x), Ok(y)) => (x, y),
        _ => return Err(Error::IsoUndecided),
    };
    let mut reg = Registry::new(a.group(), f);
    let mut la = Vec::new();
    for s in &da.summands {
        la.push(reg.insert(&s.module)?.0);
    }
    let mut lb = Vec::new();
    for s in &db.summands {
        lb.push(reg.insert(&s.module)?.0);
    }
    la.sort_unstable();
    lb.sort_unstable();
    if la != lb {
        return Ok(None);
    }
    // assemble a witness summand by summand
    let mut used = vec![false; db.summands.len()];
    let mut acc = Mat::zeros(f, b.dim(), a.dim());
    for sa in &da.summands {
        let (j, iso) = db
            .summands
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .find_map(|(j, sb)| {
                is_isomorphic_indecomposable(&sa.module, &sb.module)
                    .ok()
                    .flatten()
                    .map(|m| (j, m))
            })
            .ok_or(Error::IsoUndecided)?;
        used[j] = true;
        let sb = &db.summands[j];
        acc = acc.add(&sb.inclusion.mul(&iso).mul(&sa.projection));
    }
    Ok(Some(acc))
}

/// True when every indecomposable summand has dimension divisible by p.
pub fn negligible_object(a: &GModule, opts: &DecompOptions) -> Result<bool> {
    Ok(decompose(a, opts)?
        .summands
        .iter()
        .all(|s| s.module.dim_mod_p() == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;

    fn f(p: u64) -> Fq {
        Fq::prime(p).unwrap()
    }

    #[test]
    fn permutation_module_of_s3_mod_3_is_indecomposable() {
        let g = catalog("symmetric:3").unwrap();
        let m = GModule::permutation(&g, &f(3));
        assert!(is_indecomposable(&m, &DecompOptions::default()).unwrap());
    }

    #[test]
    fn jordan_tensor_square() {
        let g = catalog("cyclic:3").unwrap();
        let j2 = GModule::jordan(&g, &f(3), 2).unwrap();
        let dec = decompose(&j2.tensor(&j2).unwrap(), &DecompOptions::default()).unwrap();
        assert_eq!(dec.dims(), vec![1, 3]);
        let j5 = GModule::jordan(&catalog("cyclic:5").unwrap(), &f(5), 5).unwrap();
        assert!(is_indecomposable(&j5, &DecompOptions::default()).unwrap());
    }

    #[test]
    fn regular_klein_four_squared() {
        let g = catalog("klein_four").unwrap();
        let r = GModule::regular(&g, &f(2));
        let dec = decompose(&r.tensor(&r).unwrap(), &DecompOptions::default()).unwrap();
        assert_eq!(dec.dims(), vec![4, 4, 4, 4]);
        for s in &dec.summands {
            assert!(is_isomorphic_indecomposable(&s.module, &r)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn non_split_extensions_differ() {
        // [1 | sign] and [sign | 1] for S3 over GF(3): (1 2) acts by
        // diag(1,-1) or diag(-1,1) with a nonzero corner from the 3-cycle
        let g = catalog("symmetric:3").unwrap();
        let fld = f(3);
        let t = Mat::from_int_rows(&fld, &[vec![1, 0], vec![0, -1]]).unwrap();
        let c = Mat::from_int_rows(&fld, &[vec![1, 1], vec![0, 1]]).unwrap();
        let a = GModule::new(&g, &fld, 2, vec![t.clone(), c.clone()]).unwrap();
        let b = GModule::new(&g, &fld, 2, vec![t.neg(), c]).unwrap();
        a.validate().unwrap();
        b.validate().unwrap();
        assert!(is_indecomposable(&a, &DecompOptions::default()).unwrap());
        assert!(is_isomorphic(&a, &b, &DecompOptions::default())
            .unwrap()
            .is_none());
        let k2 = GModule::trivial(&g, &fld)
            .direct_sum(&GModule::trivial(&g, &fld))
            .unwrap();
        assert!(!is_indecomposable(&k2, &DecompOptions::default()).unwrap());
    }

    #[test]
    fn isomorphism_witness_is_intertwiner() {
        let g = catalog("cyclic:3").unwrap();
        let fld = f(3);
        let a = GModule::jordan(&g, &fld, 2)
            .unwrap()
            .direct_sum(&GModule::trivial(&g, &fld))
            .unwrap();
        let b = GModule::trivial(&g, &fld)
            .direct_sum(&GModule::jordan(&g, &fld, 2).unwrap())
            .unwrap();
        let w = is_isomorphic(&a, &b, &DecompOptions::default())
            .unwrap()
            .unwrap();
        assert!(w.is_invertible());
        assert!(a.rep().is_hom(b.rep(), &w));
    }
}
