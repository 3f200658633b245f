use super::oracle::{oracle_tensor, TensorResult};
use super::theta::{theta, ThetaElem};
use super::{gl2_fusion, nu, qdim, QObject, QOrder};
use crate::basedring::{
    catalog, closure, embed_search, is_embedding, BasedRing, Budget, Closure, FusionOracle,
    IsoOptions, Summand,
};
use crate::error::Result;
use crate::exact_linalg::{CycloField, Field, Mat, Rationals};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use std::time::Duration;

/// Which generators seed the closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QcaseGenerators {
    /// `V(1,1), V(0,2), V(n-1,n-1), V(0,n+1)` at a root of unity and
    /// `V(1,1), V(1,2)` for generic q.
    Standard,
    Custom(Vec<(i64, usize)>),
}

impl QcaseGenerators {
    pub fn objects(&self, order: QOrder) -> Result<Vec<QObject>> {
        let pairs: Vec<(i64, usize)> = match (self, order) {
            (QcaseGenerators::Custom(v), _) => v.clone(),
            (QcaseGenerators::Standard, QOrder::Root(n)) => {
                let n = n as i64;
                vec![(1, 1), (0, 2), (n - 1, n as usize - 1), (0, n as usize + 1)]
            }
            (QcaseGenerators::Standard, QOrder::Generic) => vec![(1, 1), (1, 2)],
        };
        pairs
            .into_iter()
            .map(|(m, d)| QObject::new(order, m, d))
            .collect()
    }
}

struct QOracle {
    order: QOrder,
    objects: Vec<QObject>,
    index: HashMap<QObject, usize>,
    max_dim: usize,
    jobs: usize,
    /// Every product computed so far, for the invariant checks.
    log: Mutex<BTreeMap<(usize, usize), TensorResult>>,
}

impl QOracle {
    fn tensor(&self, pairs: &[(usize, usize)]) -> Vec<Result<TensorResult>> {
        let one = |&(i, j): &(usize, usize)| {
            oracle_tensor(&self.objects[i], &self.objects[j], self.max_dim)
        };
        if self.jobs <= 1 || pairs.len() <= 1 {
            return pairs.iter().map(one).collect();
        }
        let chunk = pairs.len().div_ceil(self.jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = pairs
                .chunks(chunk)
                .map(|c| s.spawn(move || c.iter().map(one).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("oracle worker panicked"))
                .collect()
        })
    }
}

fn summands(t: &TensorResult) -> Vec<Summand<QObject>> {
    t.summands
        .iter()
        .map(|&object| Summand {
            object,
            negligible: false,
        })
        .chain(t.negligible.iter().map(|&object| Summand {
            object,
            negligible: true,
        }))
        .collect()
}

impl FusionOracle for QOracle {
    type Obj = QObject;

    fn unit(&self) -> QObject {
        QObject::unit(self.order)
    }

    fn lookup(&self, x: &QObject) -> Result<Option<usize>> {
        Ok(self.index.get(x).copied())
    }

    fn register(&mut self, x: QObject) -> Result<usize> {
        let k = self.objects.len();
        self.index.insert(x, k);
        self.objects.push(x);
        Ok(k)
    }

    fn object(&self, i: usize) -> &QObject {
        &self.objects[i]
    }

    fn dual(&self, x: &QObject) -> Result<QObject> {
        Ok(x.dual())
    }

    fn split(&self, x: &QObject) -> Result<Vec<Summand<QObject>>> {
        Ok(vec![Summand {
            object: *x,
            negligible: x.is_negligible(),
        }])
    }

    fn size(&self, x: &QObject) -> usize {
        x.d
    }

    fn products(&self, pairs: &[(usize, usize)]) -> Vec<Result<Vec<Summand<QObject>>>> {
        let results = self.tensor(pairs);
        let mut log = self.log.lock().expect("oracle log poisoned");
        pairs
            .iter()
            .zip(results)
            .map(|(p, r)| {
                r.map(|t| {
                    let s = summands(&t);
                    log.insert(*p, t);
                    s
                })
            })
            .collect()
    }
}

/// One row of the θ table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub label: String,
    pub nu: u64,
    pub unreduced: ThetaElem,
    pub reduced: ThetaElem,
}

/// Outcome of [`extract_ring`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QcaseReport {
    /// `None` for generic q.
    pub n: Option<u64>,
    pub level: usize,
    pub generators: Vec<String>,
    pub simples: Vec<String>,
    pub ring: BasedRing,
    pub closed: bool,
    pub stop_reason: Option<String>,
    pub products_checked: usize,
    pub negligible_dim: usize,
    /// Image of each simple in the target ring, by label.
    pub embedding: Option<Vec<String>>,
    pub target: String,
    pub nu_additive: bool,
    pub qdim_multiplicative: bool,
    pub theta_homomorphism: bool,
    pub theta_injective_nu0: Option<bool>,
    pub nilpotent: bool,
    pub theta: Vec<ThetaRow>,
    pub problems: Vec<String>,
    pub verdict: bool,
}

/// `Vec_{Z/n} ⊠ Ver ⊠ Rep PGL(2)` truncated for word length `level`.
pub fn qcase_target(n: u64, level: usize) -> Result<BasedRing> {
    QOrder::root(n)?;
    catalog(&format!(
        "product(product(group_ring({n}),verlinde({n})),pgl2_trunc({}))",
        2 * level + 2
    ))
}

/// `K(Rep GL(2))` on the weights `(m1,m2)` with `|m1|, |m2| <= bound`,
/// keeping the products whose summands all lie inside.
pub fn gl2_ring(bound: i64) -> Result<BasedRing> {
    let mut ws = Vec::new();
    for m1 in -bound..=bound {
        for m2 in -bound..=m1 {
            ws.push((m1, m2));
        }
    }
    let pos: HashMap<(i64, i64), usize> = ws.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut constants = Vec::new();
    for (i, &a) in ws.iter().enumerate() {
        for (j, &b) in ws.iter().enumerate() {
            let out = gl2_fusion(a, b)?;
            if let Some(ks) = out.iter().map(|w| pos.get(w)).collect::<Option<Vec<_>>>() {
                for k in ks {
                    constants.push((i, j, *k, 1));
                }
            }
        }
    }
    let dual = ws.iter().map(|&(m1, m2)| pos[&(-m2, -m1)]).collect();
    BasedRing::new(
        ws.iter().map(|(a, b)| format!("({a},{b})")).collect(),
        pos[&(0, 0)],
        dual,
        constants,
        true,
        Some(bound as u32),
    )
}

/// Comparison of the generic-q oracle with the GL(2) rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2Agreement {
    pub max_m: i64,
    pub max_d: usize,
    pub checked: usize,
    /// `(x, y, oracle, rule)` for each disagreement.
    pub mismatches: Vec<(String, String, Vec<String>, Vec<String>)>,
}

impl Gl2Agreement {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Every product of `V(m,d)` with `0 <= m <= max_m`, `1 <= d <= max_d`
/// over `Q(t)`, compared with [`gl2_fusion`].
pub fn gl2_agreement(max_m: i64, max_d: usize) -> Result<Gl2Agreement> {
    let mut objs = Vec::new();
    for m in 0..=max_m {
        for d in 1..=max_d {
            objs.push(QObject::new(QOrder::Generic, m, d)?);
        }
    }
    let mut rep = Gl2Agreement {
        max_m,
        max_d,
        checked: 0,
        mismatches: Vec::new(),
    };
    for x in &objs {
        for y in &objs {
            let t = oracle_tensor(x, y, usize::MAX)?;
            let mut rule = gl2_fusion(x.weights(), y.weights())?
                .into_iter()
                .map(|(a, b)| QObject::from_weights(a, b))
                .collect::<Result<Vec<_>>>()?;
            rule.sort();
            rep.checked += 1;
            if t.summands != rule || !t.negligible.is_empty() {
                rep.mismatches.push((
                    x.label(),
                    y.label(),
                    t.summands.iter().map(QObject::label).collect(),
                    rule.iter().map(QObject::label).collect(),
                ));
            }
        }
    }
    Ok(rep)
}

fn theta_rank(rows: &[ThetaElem]) -> Result<usize> {
    if rows.is_empty() {
        return Ok(0);
    }
    let max_w = rows.iter().map(ThetaElem::max_w).max().unwrap_or(0);
    let ints: Vec<Vec<i64>> = rows.iter().map(|r| r.coordinates(max_w)).collect();
    Ok(Mat::from_int_rows(&Rationals, &ints)?.rank())
}

/// Semisimplified ring of the `V(m,d)` reached from the generators in at
/// most `level` tensor factors, checked against the expected target ring.
pub fn extract_ring(
    order: QOrder,
    level: usize,
    generators: &QcaseGenerators,
    budget: Budget,
    jobs: usize,
) -> Result<QcaseReport> {
    if let QOrder::Root(n) = order {
        QOrder::root(n)?;
    }
    let budget = Budget {
        max_word_length: level,
        ..budget
    };
    let gens = generators.objects(order)?;
    let mut oracle = QOracle {
        order,
        objects: Vec::new(),
        index: HashMap::new(),
        max_dim: budget.max_tensor_dim,
        jobs: jobs.max(1),
        log: Mutex::new(BTreeMap::new()),
    };
    let cl: Closure = closure(&mut oracle, &gens, budget)?;
    let q = oracle;
    let log = q.log.into_inner().expect("oracle log poisoned");
    let labels: Vec<String> = q.objects.iter().map(QObject::label).collect();
    let ring = cl.ring(labels.clone(), level)?;

    // invariant checks on every computed product
    let mut problems = Vec::new();
    let mut nu_ok = true;
    let mut qdim_ok = true;
    let mut theta_ok = true;
    let mut nil_ok = true;
    let mut negligible_dim = 0;
    let cyclo = order.n().map(CycloField::new);
    for ((i, j), t) in &log {
        let (x, y) = (q.objects[*i], q.objects[*j]);
        negligible_dim += t.negligible_dim;
        if !t.nilpotent {
            nil_ok = false;
            problems.push(format!("E not nilpotent on {x} ⊗ {y}"));
        }
        if let Some(f) = &cyclo {
            let z = f.zeta();
            let lhs = f.mul(&qdim(f, &x, &z)?, &qdim(f, &y, &z)?);
            let mut rhs = f.zero();
            for s in t.summands.iter().chain(&t.negligible) {
                rhs = f.add(&rhs, &qdim(f, s, &z)?);
            }
            if lhs != rhs {
                qdim_ok = false;
                problems.push(format!("qdim not multiplicative on {x} ⊗ {y}"));
            }
            let n = order.n().unwrap_or(1);
            let want = (nu(&x)? + nu(&y)?) % (2 * n);
            for s in &t.summands {
                if nu(s)? != want {
                    nu_ok = false;
                    problems.push(format!("ν({s}) != ν({x}) + ν({y})"));
                }
            }
            let prod = theta(&x)?.1.mul(&theta(&y)?.1)?;
            let mut sum = ThetaElem::zero(n, true);
            for s in &t.summands {
                sum = sum.add(&theta(s)?.1)?;
            }
            if prod != sum {
                theta_ok = false;
                problems.push(format!("θ({x} ⊗ {y}) = {sum}, θ({x})θ({y}) = {prod}"));
            }
        } else {
            let mut total = Vec::new();
            for s in &t.summands {
                total.push(s.weights());
            }
            total.sort();
            let mut want = gl2_fusion(x.weights(), y.weights())?;
            want.sort();
            if total != want {
                problems.push(format!("{x} ⊗ {y} differs from the GL(2) rule"));
            }
        }
    }

    let mut theta_rows = Vec::new();
    let mut injective = None;
    if order.n().is_some() {
        let mut nu0 = Vec::new();
        for x in &q.objects {
            let (un, red) = theta(x)?;
            let v = nu(x)?;
            if v == 0 {
                nu0.push(red.clone());
            }
            theta_rows.push(ThetaRow {
                label: x.label(),
                nu: v,
                unreduced: un,
                reduced: red,
            });
        }
        let ok = theta_rank(&nu0)? == nu0.len();
        if !ok {
            problems.push("θ is not injective on the ν = 0 part".into());
        }
        injective = Some(ok);
    }

    let (target, target_name) = match order {
        QOrder::Root(n) => (
            qcase_target(n, level)?,
            format!(
                "group_ring({n}) ⊠ verlinde({n}) ⊠ pgl2_trunc({})",
                2 * level + 2
            ),
        ),
        QOrder::Generic => (gl2_ring(level as i64)?, format!("gl2({level})")),
    };
    let opts = IsoOptions {
        pins: Vec::new(),
        timeout: Duration::from_secs(300),
    };
    let embedding = match embed_search(&ring, &target, &opts)? {
        Some(sigma) if is_embedding(&ring, &target, &sigma) => Some(sigma),
        Some(_) => {
            problems.push("search returned a map that is not an embedding".into());
            None
        }
        None => {
            problems.push(format!("no embedding into {target_name}"));
            None
        }
    };
    let verdict = problems.is_empty() && embedding.is_some();
    Ok(QcaseReport {
        n: order.n(),
        level,
        generators: gens.iter().map(QObject::label).collect(),
        simples: labels,
        closed: cl.closed,
        stop_reason: cl.stop_reason.clone(),
        products_checked: log.len(),
        negligible_dim,
        embedding: embedding.map(|s| s.iter().map(|&k| target.basis()[k].clone()).collect()),
        target: target_name,
        nu_additive: nu_ok,
        qdim_multiplicative: qdim_ok,
        theta_homomorphism: theta_ok,
        theta_injective_nu0: injective,
        nilpotent: nil_ok,
        theta: theta_rows,
        problems,
        verdict,
        ring,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn gl2_ring_is_valid() {
        let r = gl2_ring(2).unwrap();
        assert_eq!(r.rank(), 15);
        assert!(r.validate().ok);
    }

    #[test]
    fn generic_level_three() {
        let rep = extract_ring(
            QOrder::Generic,
            3,
            &QcaseGenerators::Standard,
            Budget::default(),
            1,
        )
        .unwrap();
        assert!(rep.verdict, "{:?}", rep.problems);
    }

    #[test]
    fn root_three_level_two() {
        let o = QOrder::root(3).unwrap();
        let rep = extract_ring(o, 2, &QcaseGenerators::Standard, Budget::default(), 2).unwrap();
        assert!(rep.verdict, "{:?}", rep.problems);
        assert_eq!(rep.theta_injective_nu0, Some(true));
    }

    #[test]
    fn generic_oracle_follows_gl2_rule() {
        let rep = gl2_agreement(2, 3).unwrap();
        assert_eq!(rep.checked, 81);
        assert!(rep.ok(), "{:?}", rep.mismatches);
    }

    #[test]
    fn even_order_rejected() {
        assert_eq!(
            extract_ring(
                QOrder::Root(4),
                2,
                &QcaseGenerators::Standard,
                Budget::default(),
                1
            )
            .unwrap_err(),
            Error::UnsupportedOrder(4)
        );
    }
}

#[cfg(test)]
mod theta_golden {
    use super::*;
    use crate::qcase::ThetaTerm;

    fn w_diff(n: u64, plus: u32, minus: u32) -> ThetaElem {
        let mut terms = vec![
            ThetaTerm {
                chi: 0,
                w: plus,
                coeff: 1,
            },
            ThetaTerm {
                chi: 0,
                w: minus,
                coeff: -1,
            },
        ];
        terms.sort();
        ThetaElem {
            n,
            terms,
            reduced: true,
        }
    }

    /// θ(V(0,2rn+1)) forced by the oracle decomposition of `X ⊗ X` with
    /// `X = V(0,rn+1)`: the weight-count value `W_{2r} - W_{2r-1}` is
    /// consistent, the shifted `W_{2r+1} - W_{2r}` is not.
    #[test]
    fn long_strings_fixed_by_oracle() {
        for n in [3u64, 5] {
            let o = QOrder::root(n).unwrap();
            for r in 1..=2usize {
                let x = QObject::new(o, 0, r * n as usize + 1).unwrap();
                let target = QObject::new(o, 0, 2 * r * n as usize + 1).unwrap();
                let t = oracle_tensor(&x, &x, 144).unwrap();
                assert!(t.summands.contains(&target), "{:?}", t.summands);
                let mut forced = theta(&x).unwrap().1.mul(&theta(&x).unwrap().1).unwrap();
                let mut seen = false;
                for s in &t.summands {
                    if *s == target && !seen {
                        seen = true;
                        continue;
                    }
                    let neg = ThetaElem {
                        n,
                        terms: theta(s)
                            .unwrap()
                            .1
                            .terms
                            .iter()
                            .map(|t| ThetaTerm {
                                coeff: -t.coeff,
                                ..*t
                            })
                            .collect(),
                        reduced: true,
                    };
                    forced = forced.add(&neg).unwrap();
                }
                let r = r as u32;
                assert_eq!(forced, w_diff(n, 2 * r, 2 * r - 1));
                assert_ne!(forced, w_diff(n, 2 * r + 1, 2 * r));
            }
        }
    }
}
