//! Homology with a cycle-choosing map, class projection and bounding operator.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dg::ChainComplex;
use crate::error::{Error, Result};
use crate::graded::{Element, GradedBasis, MultiMap};
use crate::linalg::{kernel_basis, rank, rref, solve_particular, Field, Matrix, Scalar};

#[derive(Clone, Debug)]
struct DegreeData {
    positions: Vec<usize>,
    /// Differential arriving in this degree (columns: source generators).
    into: Matrix,
    into_positions: Vec<usize>,
    /// Differential leaving this degree.
    out: Matrix,
    /// Columns: boundary basis then the chosen representatives.
    classes: Matrix,
    n_boundaries: usize,
    hgens: Vec<usize>,
}

/// Homology of a complex through a degree cap, with the maps used by the
/// transfer: `f1` (cycle choice), `project` (class of a cycle) and `bound`.
#[derive(Clone, Debug)]
pub struct HomologyData {
    pub complex: Arc<ChainComplex>,
    pub cap: i32,
    pub basis: Arc<GradedBasis>,
    pub f1: MultiMap,
    reps: Vec<Element>,
    degrees: BTreeMap<i32, DegreeData>,
}

/// Matrix of the differential from degree `from` to `from + d`, restricted to
/// the given generator lists.
fn differential_matrix(c: &ChainComplex, source: &[usize], target: &[usize]) -> Matrix {
    let field = c.field;
    let mut m = Matrix::zeros(field, target.len(), source.len());
    let row_of: BTreeMap<usize, usize> = target.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    for (j, &g) in source.iter().enumerate() {
        for (h, x) in c.d_gen(g).terms() {
            if let Some(&i) = row_of.get(&h) {
                m.set(i, j, x.clone());
            }
        }
    }
    m
}

fn check_reach(c: &ChainComplex, q: i32) -> Result<()> {
    if let Some(n) = c.complete_through {
        if q + 1 > n {
            return Err(Error::CapExceeded(format!(
                "homology in degree {q} needs the complex through degree {}, but it is only known through {n}",
                q + 1
            )));
        }
    }
    Ok(())
}

/// Betti numbers in degrees `0..=cap` from ranks alone.
pub fn betti_numbers(c: &ChainComplex, cap: i32) -> Result<Vec<usize>> {
    let d = c.grading.d();
    let mut out = Vec::new();
    for q in 0..=cap {
        check_reach(c, q)?;
        let here = c.basis.in_degree(q);
        let r_out = rank(&differential_matrix(c, &here, &c.basis.in_degree(q + d)))?;
        let r_in = rank(&differential_matrix(c, &c.basis.in_degree(q - d), &here))?;
        out.push(here.len() - r_out - r_in);
    }
    Ok(out)
}

fn independent_rows(field: Field, rows: &[Vec<Scalar>]) -> Result<usize> {
    if rows.is_empty() {
        return Ok(0);
    }
    rank(&Matrix::from_rows(field, rows.to_vec())?)
}

impl HomologyData {
    pub fn compute(c: Arc<ChainComplex>, cap: i32) -> Result<HomologyData> {
        let field = c.field;
        let d = c.grading.d();
        let mut raw: Vec<(i32, DegreeData, Vec<Vec<Scalar>>)> = Vec::new();
        for q in 0..=cap {
            check_reach(&c, q)?;
            let positions = c.basis.in_degree(q);
            let into_positions = c.basis.in_degree(q - d);
            let into = differential_matrix(&c, &into_positions, &positions);
            let out = differential_matrix(&c, &positions, &c.basis.in_degree(q + d));
            // boundary basis: nonzero rows of rref(intoᵀ)
            let mut boundaries = Vec::new();
            if !into_positions.is_empty() && !positions.is_empty() {
                let mut t = Matrix::zeros(field, into.cols(), into.rows());
                for i in 0..into.rows() {
                    for j in 0..into.cols() {
                        t.set(j, i, into.get(i, j).clone());
                    }
                }
                let r = rref(&t)?;
                for i in 0..r.pivots.len() {
                    boundaries.push(r.echelon.row(i).to_vec());
                }
            }
            let cycles = kernel_basis(&out)?;
            let mut span = boundaries.clone();
            let mut reps = Vec::new();
            let mut r0 = span.len();
            for z in cycles {
                span.push(z.clone());
                let r = independent_rows(field, &span)?;
                if r > r0 {
                    r0 = r;
                    reps.push(z);
                } else {
                    span.pop();
                }
            }
            let n_boundaries = boundaries.len();
            let mut cols = boundaries;
            cols.extend(reps.iter().cloned());
            let classes = Matrix::from_columns(field, positions.len(), &cols)?;
            raw.push((q, DegreeData { positions, into, into_positions, out, classes, n_boundaries, hgens: vec![] }, reps));
        }
        let mut gens = Vec::new();
        let mut rep_elems = Vec::new();
        let mut degrees = BTreeMap::new();
        for (q, mut data, reps) in raw {
            for (k, z) in reps.iter().enumerate() {
                let e = Element::from_dense(q, &data.positions, z);
                let name = match e.terms().collect::<Vec<_>>().as_slice() {
                    [(g, x)] if x.is_one() => format!("[{}]", c.basis.name(*g)),
                    _ => format!("h{q}_{k}"),
                };
                data.hgens.push(gens.len());
                gens.push((name, q));
                rep_elems.push(e);
            }
            degrees.insert(q, data);
        }
        let reduced = gens.iter().all(|(_, q)| *q > 0);
        let basis = Arc::new(GradedBasis::new(gens, reduced)?);
        let mut f1 = MultiMap::linear(basis.clone(), c.basis.clone(), 0);
        for (i, e) in rep_elems.iter().enumerate() {
            f1.set(vec![i], e.clone())?;
        }
        Ok(HomologyData { complex: c, cap, basis, f1, reps: rep_elems, degrees })
    }

    pub fn field(&self) -> Field {
        self.complex.field
    }

    /// Betti numbers in degrees `0..=cap`.
    pub fn betti(&self) -> Vec<usize> {
        (0..=self.cap).map(|q| self.degrees.get(&q).map_or(0, |d| d.hgens.len())).collect()
    }

    pub fn representative(&self, h: usize) -> &Element {
        &self.reps[h]
    }

    fn degree_data(&self, q: i32) -> Result<&DegreeData> {
        self.degrees
            .get(&q)
            .ok_or_else(|| Error::CapExceeded(format!("degree {q} is outside the homology range 0..={}", self.cap)))
    }

    pub fn is_cycle(&self, z: &Element) -> Result<bool> {
        if z.is_zero() {
            return Ok(true);
        }
        Ok(self.complex.d(z).is_zero())
    }

    /// Homology class of a cycle, in the homology basis.
    pub fn project(&self, z: &Element) -> Result<Element> {
        let q = z.degree();
        if z.is_zero() {
            return Ok(Element::zero(q));
        }
        if !self.is_cycle(z)? {
            return Err(Error::NotACycle);
        }
        let data = self.degree_data(q)?;
        let v = z.to_dense(&data.positions, self.field());
        let x = solve_particular(&data.classes, &v)?
            .ok_or_else(|| Error::Internal("cycle outside boundaries + representatives".into()))?;
        let mut out = Element::zero(q);
        for (k, &h) in data.hgens.iter().enumerate() {
            out.add_term(h, x[data.n_boundaries + k].clone());
        }
        Ok(out)
    }

    /// Canonical pre-boundary of a null-homologous cycle (free variables zero).
    pub fn bound(&self, z: &Element) -> Result<Element> {
        let q = z.degree();
        let pre = q - self.complex.grading.d();
        if z.is_zero() {
            return Ok(Element::zero(pre));
        }
        if !self.is_cycle(z)? {
            return Err(Error::NotACycle);
        }
        let data = self.degree_data(q)?;
        let v = z.to_dense(&data.positions, self.field());
        match solve_particular(&data.into, &v)? {
            Some(y) => Ok(Element::from_dense(pre, &data.into_positions, &y)),
            None => Err(Error::NonzeroClass),
        }
    }

    /// Basis of cycles in the pre-boundary degree of `q`: the freedom in `bound`.
    pub fn bounding_freedom(&self, q: i32) -> Result<Vec<Element>> {
        let data = self.degree_data(q)?;
        let pre = q - self.complex.grading.d();
        Ok(kernel_basis(&data.into)?
            .into_iter()
            .map(|v| Element::from_dense(pre, &data.into_positions, &v))
            .collect())
    }

    /// Replaces each representative by `rep + shift`, where every shift must be
    /// a boundary. Classes and the homology basis stay the same.
    pub fn with_shifted_representatives(&self, shifts: &[Element]) -> Result<HomologyData> {
        if shifts.len() != self.reps.len() {
            return Err(Error::DimensionMismatch { expected: self.reps.len(), found: shifts.len() });
        }
        let mut out = self.clone();
        for (h, s) in shifts.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            self.bound(s)?;
            out.reps[h].add_assign(s);
        }
        let field = self.field();
        for data in out.degrees.values_mut() {
            let mut cols: Vec<Vec<Scalar>> =
                (0..data.n_boundaries).map(|j| data.classes.column(j)).collect();
            for &h in &data.hgens {
                cols.push(out.reps[h].to_dense(&data.positions, field));
            }
            data.classes = Matrix::from_columns(field, data.positions.len(), &cols)?;
        }
        let mut f1 = MultiMap::linear(out.basis.clone(), self.complex.basis.clone(), 0);
        for (i, e) in out.reps.iter().enumerate() {
            f1.set(vec![i], e.clone())?;
        }
        out.f1 = f1;
        Ok(out)
    }

    /// Rank of the differential leaving degree `q` (used by consistency tests).
    pub fn out_rank(&self, q: i32) -> Result<usize> {
        rank(&self.degree_data(q)?.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Grading;

    fn complex(gens: &[(&str, i32)], d: &[(&str, &str)]) -> Arc<ChainComplex> {
        let f = Field::Rational;
        let b = Arc::new(GradedBasis::new(gens.iter().map(|(n, q)| (n.to_string(), *q)), false).unwrap());
        let mut m = MultiMap::linear(b.clone(), b.clone(), -1);
        for (src, dst) in d {
            let s = b.index_of(src).unwrap();
            let t = b.index_of(dst).unwrap();
            m.set(vec![s], Element::generator(&b, t, f)).unwrap();
        }
        Arc::new(ChainComplex::new(Grading::Homological, f, b, m, None).unwrap())
    }

    #[test]
    fn zero_differential_betti() {
        let c = complex(&[("x", 0), ("z", 2)], &[]);
        let h = HomologyData::compute(c, 2).unwrap();
        assert_eq!(h.betti(), vec![1, 0, 1]);
        assert_eq!(h.basis.name(0), "[x]");
    }

    #[test]
    fn acyclic_pair() {
        let c = complex(&[("x", 0), ("y", 1)], &[("y", "x")]);
        let h = HomologyData::compute(c.clone(), 1).unwrap();
        assert_eq!(h.betti(), vec![0, 0]);
        let x = c.generator(0);
        assert_eq!(h.bound(&x).unwrap(), c.generator(1));
        assert_eq!(h.bound(&Element::zero(0)).unwrap(), Element::zero(1));
        assert_eq!(betti_numbers(&c, 1).unwrap(), vec![0, 0]);
    }

    #[test]
    fn bound_errors() {
        let c = complex(&[("x", 0), ("y", 1), ("w", 1)], &[("y", "x")]);
        let h = HomologyData::compute(c.clone(), 1).unwrap();
        assert_eq!(h.bound(&c.generator(1)), Err(Error::NotACycle));
        assert_eq!(h.bound(&c.generator(2)), Err(Error::NonzeroClass));
    }

    #[test]
    fn truncated_complex_reports_cap() {
        let mut c = (*complex(&[("x", 0)], &[])).clone();
        c.complete_through = Some(1);
        assert!(matches!(HomologyData::compute(Arc::new(c), 1), Err(Error::CapExceeded(_))));
    }
}
