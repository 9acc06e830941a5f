//! Python bindings for the `ainf` toolkit.

use std::collections::BTreeMap;
use std::sync::Arc;

use ainf::bar::tilde_b;
use ainf::commands::{self, Command, RunOptions, Verify};
use ainf::graded::{Element, GradedBasis, Grading, MultiMap};
use ainf::linalg::Field;
use ainf::model::{self, parse_lincomb, CORPUS};
use ainf::report;
use ainf::transfer::{self as xfer, TransferOptions, TransferResult};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(_ainf, AinfError, PyException);

fn py_err(e: ainf::Error) -> PyErr {
    AinfError::new_err(e.to_string())
}

fn element(basis: &GradedBasis, field: Field, text: &str) -> PyResult<Element> {
    let terms = parse_lincomb(field, text).map_err(py_err)?;
    let mut out: Option<Element> = None;
    for (c, name) in terms {
        let i = basis
            .lookup(&name)
            .or_else(|_| basis.lookup(&format!("[{name}]")))
            .map_err(py_err)?;
        let g = Element::generator(basis, i, field).scaled(&c);
        match &mut out {
            Some(e) if e.degree() != g.degree() => {
                return Err(AinfError::new_err(format!("`{text}` is not homogeneous")));
            }
            Some(e) => e.add_assign(&g),
            None => out = Some(g),
        }
    }
    out.ok_or_else(|| AinfError::new_err("empty element"))
}

fn table(map: &MultiMap) -> BTreeMap<String, String> {
    map.entries().map(|(t, v)| (map.tuple_name(t), v.display(map.target()).to_string())).collect()
}

/// A validated model: algebra, coalgebra, module and twisting data.
#[pyclass(frozen, name = "Model")]
struct PyModel(model::Model);

#[pymethods]
impl PyModel {
    /// Parses a model from TOML text.
    #[staticmethod]
    fn load(text: &str) -> PyResult<Self> {
        model::Model::load(text).map(PyModel).map_err(py_err)
    }

    #[staticmethod]
    fn load_path(path: &str) -> PyResult<Self> {
        model::Model::load_path(path.as_ref()).map(PyModel).map_err(py_err)
    }

    /// Loads one of the bundled example models.
    #[staticmethod]
    fn corpus(name: &str) -> PyResult<Self> {
        model::corpus_model(name).map(PyModel).map_err(py_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.file.name.clone()
    }

    #[getter]
    fn field(&self) -> String {
        self.0.field.to_string()
    }

    #[getter]
    fn grading(&self) -> &'static str {
        self.0.grading.as_str()
    }

    /// The sections present in the model.
    fn sections(&self) -> Vec<&'static str> {
        let m = &self.0;
        [
            ("algebra", m.algebra.is_some()),
            ("coalgebra", m.coalgebra.is_some()),
            ("module", m.module.is_some()),
            ("twisting", m.twisting.is_some()),
        ]
        .into_iter()
        .filter_map(|(n, present)| present.then_some(n))
        .collect()
    }

    /// Serializes the model back to TOML.
    fn emit(&self) -> String {
        self.0.file.emit()
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, {}, {})", self.0.file.name, self.0.field, self.0.grading.as_str())
    }
}

/// A command report.
#[pyclass(frozen, name = "Report")]
struct PyReport(report::Report);

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed()
    }

    #[getter]
    fn betti(&self) -> BTreeMap<String, Vec<usize>> {
        self.0.betti.clone()
    }

    /// Operation tables as `{name: {input: value}}`.
    #[getter]
    fn operations(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        self.0
            .operations
            .iter()
            .map(|(k, es)| (k.clone(), es.iter().map(|e| (e.input.clone(), e.value.clone())).collect()))
            .collect()
    }

    /// `(name, passed, defect_count)` per check; `passed` is None when skipped.
    #[getter]
    fn checks(&self) -> Vec<(String, Option<bool>, usize)> {
        self.0.checks.iter().map(|c| (c.name.clone(), c.passed, c.defect_count)).collect()
    }

    fn json(&self) -> String {
        self.0.to_json()
    }

    fn table(&self) -> String {
        self.0.to_table()
    }

    fn __str__(&self) -> String {
        self.0.to_table()
    }
}

/// The transferred A(∞)-algebra `(H(C), {Xᵢ})` with the morphism `{fᵢ}`.
#[pyclass(frozen, name = "Transfer")]
struct PyTransfer {
    result: TransferResult,
    algebra: Arc<ainf::dg::DGAlgebra>,
}

#[pymethods]
impl PyTransfer {
    /// Betti numbers of the reduced homology, by degree.
    #[getter]
    fn betti(&self) -> Vec<usize> {
        self.result.homology.betti()
    }

    /// Names of the homology basis classes.
    #[getter]
    fn basis(&self) -> Vec<(String, i32)> {
        self.result.algebra.basis.generators().map(|(_, n, d)| (n.to_string(), d)).collect()
    }

    #[getter]
    fn arity_cap(&self) -> usize {
        self.result.arity_cap
    }

    /// Nonzero values of `Xₙ` as `{input: value}`.
    fn x(&self, n: usize) -> PyResult<BTreeMap<String, String>> {
        match self.result.algebra.ops.get(n.wrapping_sub(1)) {
            Some(op) => Ok(table(op)),
            None => Err(AinfError::new_err(format!("X{n} is outside the arity cap"))),
        }
    }

    /// Nonzero values of `fₙ` as `{input: value}`.
    fn f(&self, n: usize) -> PyResult<BTreeMap<String, String>> {
        match self.result.morphism.comps.get(n.wrapping_sub(1)) {
            Some(op) => Ok(table(op)),
            None => Err(AinfError::new_err(format!("f{n} is outside the arity cap"))),
        }
    }

    /// Number of defects in the Stasheff, morphism and section identities.
    fn defects(&self) -> usize {
        xfer::verify_transfer(&self.result).defects.len()
    }

    /// `X₃(a, b, c)` together with the textbook Massey coset
    /// `(representative, indeterminacy, contained)`.
    fn massey(&self, a: &str, b: &str, c: &str) -> PyResult<(String, String, Vec<String>, bool)> {
        let hb = &self.result.algebra.basis;
        let field = self.result.source.field;
        let (x, y, z) = (element(hb, field, a)?, element(hb, field, b)?, element(hb, field, c)?);
        let x3 = xfer::massey_via_x3(&self.result, &x, &y, &z).map_err(py_err)?;
        let coset = xfer::massey_oracle(&self.algebra, &self.result.homology, &x, &y, &z).map_err(py_err)?;
        let inside = coset.contains(&x3, hb, field).map_err(py_err)?;
        Ok((
            x3.display(hb).to_string(),
            coset.representative.display(hb).to_string(),
            coset.indeterminacy.iter().map(|e| e.display(hb).to_string()).collect(),
            inside,
        ))
    }
}

/// Transfers the algebra of `model` to its homology through `degree_cap`.
#[pyfunction]
#[pyo3(signature = (model, degree_cap, arity_cap=None, seed=None))]
fn transfer(model: &PyModel, degree_cap: i32, arity_cap: Option<usize>, seed: Option<u64>) -> PyResult<PyTransfer> {
    let algebra = model.0.algebra.clone().ok_or_else(|| AinfError::new_err("model has no algebra"))?;
    let h = xfer::reduced_homology(&algebra, degree_cap).map_err(py_err)?;
    let result = xfer::transfer_algebra(&algebra, &h, degree_cap, TransferOptions { arity_cap, perturb: seed })
        .map_err(py_err)?;
    Ok(PyTransfer { result, algebra })
}

/// Betti numbers of `B̃` of the transferred structure, through `degree_cap`.
#[pyfunction]
#[pyo3(signature = (t, degree_cap, length_cap=None))]
fn tilde_b_betti(t: &PyTransfer, degree_cap: i32, length_cap: Option<usize>) -> PyResult<Vec<usize>> {
    let b = tilde_b(t.result.algebra.clone(), degree_cap, length_cap).map_err(py_err)?;
    b.betti(degree_cap).map_err(py_err)
}

/// Runs a command by name and returns its report.
#[pyfunction]
#[pyo3(signature = (command, model, degree_cap, arity_cap=None, length_cap=None, field=None, grading=None, verify="strict", triple=None))]
#[allow(clippy::too_many_arguments)]
fn run(
    command: &str,
    model: &PyModel,
    degree_cap: i32,
    arity_cap: Option<usize>,
    length_cap: Option<usize>,
    field: Option<&str>,
    grading: Option<&str>,
    verify: &str,
    triple: Option<[String; 3]>,
) -> PyResult<PyReport> {
    let cmd: Command = command.parse().map_err(py_err)?;
    let opts = RunOptions {
        degree_cap,
        arity_cap,
        length_cap,
        field: field.map(Field::parse).transpose().map_err(py_err)?,
        grading: grading.map(Grading::parse).transpose().map_err(py_err)?,
        verify: match verify {
            "strict" => Verify::Strict,
            "fast" => Verify::Fast,
            other => return Err(AinfError::new_err(format!("unknown verify mode `{other}`"))),
        },
        triple,
    };
    commands::run(cmd, &model.0, &opts).map(PyReport).map_err(py_err)
}

/// Names of the bundled example models.
#[pyfunction]
fn corpus() -> Vec<&'static str> {
    CORPUS.iter().map(|(n, _)| *n).collect()
}

/// Names of the available commands.
#[pyfunction]
fn command_names() -> Vec<&'static str> {
    Command::ALL.iter().map(|c| c.name()).collect()
}

#[pymodule]
fn _ainf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AinfError", m.py().get_type::<AinfError>())?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyTransfer>()?;
    m.add_function(wrap_pyfunction!(transfer, m)?)?;
    m.add_function(wrap_pyfunction!(tilde_b_betti, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    m.add_function(wrap_pyfunction!(command_names, m)?)?;
    Ok(())
}
