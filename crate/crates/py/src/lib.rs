//! Python bindings. Rings, runs and reports cross the boundary as JSON
//! strings in the same formats the CLI writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use ssimp_core::basedring::{self, iso_search, BasedRing, IsoOptions};
use ssimp_core::char2;
use ssimp_core::error::Error;
use ssimp_core::exact_linalg::Fq;
use ssimp_core::groups;
use ssimp_core::qcase::{self, QObject, QOrder, QcaseGenerators};
use ssimp_core::ssimp::{self as core_ssimp, Budget, RunOptions};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded(_)
        | Error::Timeout
        | Error::IsoUndecided
        | Error::DimCapExceeded { .. }
        | Error::OrderCapExceeded { .. }
        | Error::ExtensionCapExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("artifacts serialize")
}

fn ring(text: &str) -> PyResult<BasedRing> {
    BasedRing::from_json_str(text).map_err(py_err)
}

/// Semisimplify a group's modules over GF(p^degree); returns the run
/// (ring plus provenance) as JSON.
#[pyfunction]
#[pyo3(signature = (group, prime, generators, degree=1, seed=0, max_simples=64, max_tensor_dim=144, word_length=6, jobs=1))]
#[allow(clippy::too_many_arguments)]
pub fn semisimplify(
    group: &str,
    prime: u64,
    generators: Vec<String>,
    degree: u32,
    seed: u64,
    max_simples: usize,
    max_tensor_dim: usize,
    word_length: usize,
    jobs: usize,
) -> PyResult<String> {
    let g = groups::catalog(group).map_err(py_err)?;
    let f = Fq::new(prime, degree).map_err(py_err)?;
    let gens = generators
        .iter()
        .map(|s| Ok((s.clone(), core_ssimp::generator_module(s, &g, &f)?)))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(py_err)?;
    let opts = RunOptions {
        budget: Budget {
            max_simples,
            max_tensor_dim,
            max_word_length: word_length,
        },
        seed,
        jobs: jobs.max(1),
    };
    let run = core_ssimp::semisimplify(&g, &f, &gens, &opts).map_err(py_err)?;
    Ok(json(&run.to_json().map_err(py_err)?))
}

/// A catalog ring (e.g. "ver_p(5)", "group_ring:Z4") as JSON.
#[pyfunction]
pub fn ring_catalog(name: &str) -> PyResult<String> {
    Ok(basedring::catalog(name).map_err(py_err)?.to_json_string())
}

/// Whether a ring JSON satisfies the based-ring axioms.
#[pyfunction]
pub fn ring_validate(ring_json: &str) -> PyResult<bool> {
    Ok(ring(ring_json)?.validate().ok)
}

/// An isomorphism between two rings as a list `sigma` with `a_i -> b_sigma[i]`, or None.
#[pyfunction]
pub fn ring_iso(a_json: &str, b_json: &str) -> PyResult<Option<Vec<usize>>> {
    iso_search(&ring(a_json)?, &ring(b_json)?, &IsoOptions::default()).map_err(py_err)
}

#[pyfunction]
pub fn lucas_binom(a: u64, b: u64, p: u64) -> PyResult<u64> {
    char2::lucas_binom(a, b, p).map_err(py_err)
}

/// Parity facts and the GL/SL/PGL rings for n, as JSON.
#[pyfunction]
#[pyo3(signature = (n, level=3))]
pub fn char2_report(n: u64, level: usize) -> PyResult<String> {
    Ok(json(&char2::char2_report(n, level).map_err(py_err)?))
}

/// GL(2) Clebsch–Gordan rule on dominant weights.
#[pyfunction]
pub fn gl2_fusion(a: (i64, i64), b: (i64, i64)) -> PyResult<Vec<(i64, i64)>> {
    qcase::gl2_fusion(a, b).map_err(py_err)
}

/// θ(V(m,d)) at a root of unity of order n, unreduced and reduced.
#[pyfunction]
pub fn theta(n: u64, m: i64, d: usize) -> PyResult<(String, String)> {
    let x = QObject::new(QOrder::root(n).map_err(py_err)?, m, d).map_err(py_err)?;
    let (un, red) = qcase::theta(&x).map_err(py_err)?;
    Ok((un.to_string(), red.to_string()))
}

/// Decomposition of V(m1,d1) ⊗ V(m2,d2); n = None means generic q.
#[pyfunction]
#[pyo3(signature = (x, y, n=None))]
pub fn qcase_tensor(x: (i64, usize), y: (i64, usize), n: Option<u64>) -> PyResult<String> {
    let order = match n {
        Some(n) => QOrder::root(n).map_err(py_err)?,
        None => QOrder::Generic,
    };
    let a = QObject::new(order, x.0, x.1).map_err(py_err)?;
    let b = QObject::new(order, y.0, y.1).map_err(py_err)?;
    Ok(json(&qcase::oracle_tensor(&a, &b, 144).map_err(py_err)?))
}

/// Extraction report of the semisimplified ring; n = None means generic q.
#[pyfunction]
#[pyo3(signature = (n=None, level=4, max_simples=64, max_tensor_dim=144))]
pub fn qcase_extract(
    n: Option<u64>,
    level: usize,
    max_simples: usize,
    max_tensor_dim: usize,
) -> PyResult<String> {
    let order = match n {
        Some(n) => QOrder::root(n).map_err(py_err)?,
        None => QOrder::Generic,
    };
    let budget = Budget {
        max_simples,
        max_tensor_dim,
        max_word_length: level,
    };
    let rep =
        qcase::extract_ring(order, level, &QcaseGenerators::Standard, budget, 1).map_err(py_err)?;
    Ok(json(&rep))
}

#[pymodule]
fn ssimp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(semisimplify, m)?)?;
    m.add_function(wrap_pyfunction!(ring_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(ring_validate, m)?)?;
    m.add_function(wrap_pyfunction!(ring_iso, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_binom, m)?)?;
    m.add_function(wrap_pyfunction!(char2_report, m)?)?;
    m.add_function(wrap_pyfunction!(gl2_fusion, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(qcase_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(qcase_extract, m)?)?;
    Ok(())
}
