//! Transfer of A(∞)-structure from a DG algebra (and a DG module over it) to
//! homology, together with Massey products read off from `X₃` and an
//! independent Massey-product oracle.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ainf::{auto_arity_cap, dga_to_ainf, dgmodule_to_ainf, tuples, AInfAlgebra, AInfModule, AInfModuleMorphism, AInfMorphism};
use crate::dg::{DGAlgebra, DGModule, DefectReport};
use crate::error::{Error, Result};
use crate::graded::{Element, GradedBasis, Grading, MultiMap};
use crate::homology::HomologyData;
use crate::linalg::{rank, Field, Matrix, Scalar};

/// How to resolve the choices in the induction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransferOptions {
    /// Requested arity cap; `None` derives it from the degree cap.
    pub arity_cap: Option<usize>,
    /// Seed for non-canonical choices: representatives shifted by boundaries
    /// and every bounding element shifted by cycles. `None` is canonical.
    pub perturb: Option<u64>,
}

/// Weight cap for algebra tuples whose operation values land in degrees `≤ cap`.
pub fn algebra_weight_cap(grading: Grading, degree_cap: i32) -> i32 {
    match grading {
        Grading::Homological => degree_cap + 2,
        Grading::Cohomological => degree_cap,
    }
}

/// Weight cap for module tuples whose operation values land in degrees `≤ cap`.
pub fn module_weight_cap(grading: Grading, degree_cap: i32) -> i32 {
    match grading {
        Grading::Homological => degree_cap + 1,
        Grading::Cohomological => degree_cap,
    }
}

/// Homology of the augmentation ideal of `c` through `degree_cap`.
pub fn reduced_homology(c: &DGAlgebra, degree_cap: i32) -> Result<HomologyData> {
    HomologyData::compute(Arc::new(c.reduced()?.complex), degree_cap)
}

#[derive(Clone, Debug)]
pub struct TransferResult {
    /// `C` viewed as an A(∞)-algebra on its augmentation ideal.
    pub source: Arc<AInfAlgebra>,
    /// `(H(C), {Xᵢ})`.
    pub algebra: Arc<AInfAlgebra>,
    /// `{fᵢ} : H(C) → C`.
    pub morphism: Arc<AInfMorphism>,
    pub homology: Arc<HomologyData>,
    pub degree_cap: i32,
    pub weight_cap: i32,
    pub arity_cap: usize,
}

#[derive(Clone, Debug)]
pub struct ModuleTransferResult {
    pub algebra: Arc<TransferResult>,
    /// `D` viewed as an A(∞)-module over `C`.
    pub source: Arc<AInfModule>,
    /// `(H(D), {Yᵢ})` over `(H(C), {Xᵢ})`.
    pub module: Arc<AInfModule>,
    /// `({fᵢ}, {gᵢ})`.
    pub morphism: Arc<AInfModuleMorphism>,
    pub homology: Arc<HomologyData>,
    pub weight_cap: i32,
    pub arity_cap: usize,
}

/// `Uₙ` on one tuple, for a morphism whose source operations and components
/// are known below arity `n = tuple.len()`.
pub fn compute_u(f: &AInfMorphism, tuple: &[usize]) -> Result<Element> {
    let n = tuple.len();
    if f.comps.len() >= n || f.source.ops.len() >= n {
        return Err(Error::ArityMismatch { expected: n - 1, found: f.comps.len().max(f.source.ops.len()) });
    }
    let mut u = f.composite_right(tuple);
    u.sub_assign(&f.composite_left(tuple));
    Ok(u)
}

/// `Vₙ` on one module tuple, for a module morphism known below arity `n`.
pub fn compute_v(g: &AInfModuleMorphism, tuple: &[usize]) -> Result<Element> {
    let n = tuple.len();
    if g.comps.len() >= n || g.source.ops.len() >= n {
        return Err(Error::ArityMismatch { expected: n - 1, found: g.comps.len().max(g.source.ops.len()) });
    }
    let mut v = g.composite_right(tuple);
    v.sub_assign(&g.composite_left(tuple));
    Ok(v)
}

fn small_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_i64(field, rng.gen_range(-2..=2))
}

/// Random boundary shifts for every homology representative.
fn perturbed_homology(h: &HomologyData, rng: &mut ChaCha8Rng) -> Result<HomologyData> {
    let c = &h.complex;
    let d = c.grading.d();
    let mut shifts = Vec::new();
    for g in 0..h.basis.len() {
        let q = h.basis.degree(g);
        let mut pre = Element::zero(q - d);
        for x in c.basis.in_degree(q - d) {
            pre.add_term(x, small_scalar(h.field(), rng));
        }
        shifts.push(c.d(&pre));
    }
    h.with_shifted_representatives(&shifts)
}

fn add_random_cycles(h: &HomologyData, target_degree: i32, e: &mut Element, rng: &mut ChaCha8Rng) -> Result<()> {
    for z in h.bounding_freedom(target_degree)? {
        let s = small_scalar(h.field(), rng);
        e.add_scaled(&s, &z);
    }
    Ok(())
}

fn resolve_arity(grading: Grading, basis: &GradedBasis, weight_cap: i32, requested: Option<usize>, extra: usize) -> Result<usize> {
    let auto = auto_arity_cap(grading, basis.min_degree().unwrap_or(1), weight_cap) + extra;
    match requested {
        Some(a) if a > auto => Err(Error::CapExceeded(format!(
            "arity {a} needs operations beyond the degree cap; at most {auto} is supported"
        ))),
        Some(a) => Ok(a),
        None => Ok(auto),
    }
}

/// Builds `(H(C), {Xᵢ})` and `{fᵢ}` by induction on the arity:
/// `Xₙ = class(Uₙ)` and `fₙ = bound(f₁Xₙ − Uₙ)`.
pub fn transfer_algebra(c: &DGAlgebra, h: &HomologyData, degree_cap: i32, opts: TransferOptions) -> Result<TransferResult> {
    let source = Arc::new(dga_to_ainf(c)?);
    if *h.complex.basis != *source.basis {
        return Err(Error::BasisMismatch { slot: 0 });
    }
    if h.cap < degree_cap {
        return Err(Error::CapExceeded(format!(
            "homology is known through degree {}, the transfer needs {degree_cap}",
            h.cap
        )));
    }
    let grading = source.grading;
    let field = source.field;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.perturb.unwrap_or(0));
    let h = match opts.perturb {
        Some(_) => perturbed_homology(h, &mut rng)?,
        None => h.clone(),
    };
    let hb = h.basis.clone();
    let weight_cap = algebra_weight_cap(grading, degree_cap);
    let arity_cap = resolve_arity(grading, &hb, weight_cap, opts.arity_cap, 0)?;

    let mut alg = AInfAlgebra {
        grading,
        field,
        basis: hb.clone(),
        ops: vec![MultiMap::linear(hb.clone(), hb.clone(), grading.d())],
        arity_cap: Some(arity_cap),
        weight_cap: Some(weight_cap),
    };
    let mut comps = vec![h.f1.clone()];
    for n in 2..=arity_cap {
        let f = AInfMorphism { source: Arc::new(alg.clone()), target: source.clone(), comps: comps.clone() };
        let ts = tuples(grading, &vec![&*hb; n], n, weight_cap);
        let solved: Vec<(Vec<usize>, Element, Element)> = ts
            .par_iter()
            .map(|t| -> Result<_> {
                let u = compute_u(&f, t)?;
                if !h.complex.d(&u).is_zero() {
                    return Err(Error::Internal(format!(
                        "U_{n} is not a cycle on {}",
                        crate::ainf::names(&hb, t)
                    )));
                }
                let x = h.project(&u)?;
                let mut rhs = h.f1.evaluate(&[&x])?;
                rhs.sub_assign(&u);
                let fn_val = h.bound(&rhs).map_err(|e| match e {
                    Error::NonzeroClass | Error::NotACycle => {
                        Error::Internal(format!("f₁X_{n} − U_{n} does not bound on {}", crate::ainf::names(&hb, t)))
                    }
                    e => e,
                })?;
                Ok((t.clone(), x, fn_val))
            })
            .collect::<Result<_>>()?;
        let mut xn = alg.new_op(n);
        let mut fnn = f.new_comp(n);
        for (t, x, mut fv) in solved {
            if opts.perturb.is_some() {
                let q = fv.degree() + grading.d();
                add_random_cycles(&h, q, &mut fv, &mut rng)?;
            }
            xn.set(t.clone(), x)?;
            fnn.set(t, fv)?;
        }
        alg.ops.push(xn);
        comps.push(fnn);
    }
    let algebra = Arc::new(alg);
    let morphism = Arc::new(AInfMorphism { source: algebra.clone(), target: source.clone(), comps });
    Ok(TransferResult { source, algebra, morphism, homology: Arc::new(h), degree_cap, weight_cap, arity_cap })
}

/// Builds `(H(D), {Yᵢ})` and `{gᵢ}` over a finished algebra transfer:
/// `Yₙ = class(Vₙ)` and `gₙ = bound(g₁Yₙ − Vₙ)`.
pub fn transfer_module(t: &TransferResult, d: &DGModule, hd: &HomologyData, opts: TransferOptions) -> Result<ModuleTransferResult> {
    let source = Arc::new(dgmodule_to_ainf(d, t.source.clone())?);
    if *hd.complex.basis != *source.basis {
        return Err(Error::BasisMismatch { slot: 0 });
    }
    if hd.cap < t.degree_cap {
        return Err(Error::CapExceeded(format!(
            "module homology is known through degree {}, the transfer needs {}",
            hd.cap, t.degree_cap
        )));
    }
    let grading = t.algebra.grading;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.perturb.unwrap_or(0).wrapping_add(1));
    let hd = match opts.perturb {
        Some(_) => perturbed_homology(hd, &mut rng)?,
        None => hd.clone(),
    };
    let hb = hd.basis.clone();
    let weight_cap = module_weight_cap(grading, t.degree_cap);
    let arity_cap = resolve_arity(grading, &t.algebra.basis, weight_cap, opts.arity_cap, 1)?;
    let mut module = AInfModule {
        algebra: t.algebra.clone(),
        basis: hb.clone(),
        ops: vec![MultiMap::linear(hb.clone(), hb.clone(), grading.d())],
        weight_cap: Some(weight_cap),
    };
    let mut comps = vec![hd.f1.clone()];
    for n in 2..=arity_cap {
        let g = AInfModuleMorphism {
            algebra_map: t.morphism.clone(),
            source: Arc::new(module.clone()),
            target: source.clone(),
            comps: comps.clone(),
        };
        let ts = module.tuples(n, weight_cap);
        let solved: Vec<(Vec<usize>, Element, Element)> = ts
            .par_iter()
            .map(|tp| -> Result<_> {
                let v = compute_v(&g, tp)?;
                if !hd.complex.d(&v).is_zero() {
                    return Err(Error::Internal(format!(
                        "V_{n} is not a cycle on {}",
                        crate::ainf::module_names(&module, tp)
                    )));
                }
                let y = hd.project(&v)?;
                let mut rhs = hd.f1.evaluate(&[&y])?;
                rhs.sub_assign(&v);
                let gv = hd.bound(&rhs).map_err(|e| match e {
                    Error::NonzeroClass | Error::NotACycle => Error::Internal(format!(
                        "g₁Y_{n} − V_{n} does not bound on {}",
                        crate::ainf::module_names(&module, tp)
                    )),
                    e => e,
                })?;
                Ok((tp.clone(), y, gv))
            })
            .collect::<Result<_>>()?;
        let mut yn = module.new_op(n);
        let mut gn = g.new_comp(n);
        for (tp, y, mut gv) in solved {
            if opts.perturb.is_some() {
                let q = gv.degree() + grading.d();
                add_random_cycles(&hd, q, &mut gv, &mut rng)?;
            }
            yn.set(tp.clone(), y)?;
            gn.set(tp, gv)?;
        }
        module.ops.push(yn);
        comps.push(gn);
    }
    let module = Arc::new(module);
    let morphism = Arc::new(AInfModuleMorphism {
        algebra_map: t.morphism.clone(),
        source: module.clone(),
        target: source.clone(),
        comps,
    });
    Ok(ModuleTransferResult {
        algebra: Arc::new(t.clone()),
        source,
        module,
        morphism,
        homology: Arc::new(hd),
        weight_cap,
        arity_cap,
    })
}

/// Checks that `π∘f₁ = id` on the homology basis.
fn check_identity_on_homology(h: &HomologyData, f1: &MultiMap, label: &str) -> DefectReport {
    let mut report = DefectReport::default();
    for g in 0..h.basis.len() {
        let cls = h.project(&f1.eval_gens(&[g]));
        let ok = matches!(&cls, Ok(e) if *e == Element::generator(&h.basis, g, h.field()));
        if !ok {
            let shown = match cls {
                Ok(e) => e.display(&h.basis).to_string(),
                Err(e) => e.to_string(),
            };
            report.push(label, h.basis.name(g).to_string(), shown);
        }
    }
    report
}

/// Re-runs every checker on an algebra transfer.
pub fn verify_transfer(t: &TransferResult) -> DefectReport {
    let mut report = DefectReport::default();
    if let Some(x1) = t.algebra.ops.first() {
        if !x1.is_zero() {
            report.push("X₁ = 0", "X₁".into(), "nonzero".into());
        }
    }
    report.extend(t.algebra.verify(t.weight_cap, Some(t.arity_cap)));
    report.extend(t.morphism.verify(t.weight_cap, Some(t.arity_cap)));
    report.extend(check_identity_on_homology(&t.homology, &t.morphism.comps[0], "π∘f₁ = id"));
    report
}

/// Re-runs every checker on a module transfer.
pub fn verify_module_transfer(m: &ModuleTransferResult) -> DefectReport {
    let mut report = DefectReport::default();
    if let Some(y1) = m.module.ops.first() {
        if !y1.is_zero() {
            report.push("Y₁ = 0", "Y₁".into(), "nonzero".into());
        }
    }
    report.extend(m.module.verify(m.weight_cap, Some(m.arity_cap)));
    report.extend(m.morphism.verify(m.weight_cap, Some(m.arity_cap)));
    report.extend(check_identity_on_homology(&m.homology, &m.morphism.comps[0], "π∘g₁ = id"));
    report
}

/// `X₃(a⊗b⊗c)` for homology elements with `X₂(a⊗b) = X₂(b⊗c) = 0`.
pub fn massey_via_x3(t: &TransferResult, a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let x2 = t.algebra.op(2);
    let prod = |x: &Element, y: &Element| -> Result<Element> {
        match x2 {
            Some(m) => m.evaluate(&[x, y]),
            None => Ok(Element::zero(x.degree() + y.degree())),
        }
    };
    if !prod(a, b)?.is_zero() {
        return Err(Error::MasseyUndefined("the product of the first two classes is nonzero".into()));
    }
    if !prod(b, c)?.is_zero() {
        return Err(Error::MasseyUndefined("the product of the last two classes is nonzero".into()));
    }
    match t.algebra.ops.get(2) {
        Some(x3) => x3.evaluate(&[a, b, c]),
        None => Err(Error::CapExceeded("X₃ lies beyond the arity cap".into())),
    }
}

/// A Massey product as a coset: a representative class and a spanning set of
/// the indeterminacy, all in homology coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyCoset {
    pub representative: Element,
    pub indeterminacy: Vec<Element>,
}

impl MasseyCoset {
    /// Whether `x` lies in `representative + span(indeterminacy)`.
    pub fn contains(&self, x: &Element, hbasis: &GradedBasis, field: Field) -> Result<bool> {
        if x.degree() != self.representative.degree() && !(x.is_zero() && self.representative.is_zero()) {
            return Ok(false);
        }
        let q = self.representative.degree();
        let positions = hbasis.in_degree(q);
        let mut diff = x.clone();
        if x.is_zero() {
            diff = Element::zero(q);
        }
        diff.sub_assign(&self.representative);
        let rows: Vec<Vec<Scalar>> = self.indeterminacy.iter().map(|e| e.to_dense(&positions, field)).collect();
        let base = if rows.is_empty() { 0 } else { rank(&Matrix::from_rows(field, rows.clone())?)? };
        let mut with = rows;
        with.push(diff.to_dense(&positions, field));
        Ok(rank(&Matrix::from_rows(field, with)?)? == base)
    }
}

/// Textbook Massey product `⟨a, b, c⟩` computed directly in `C`: choose `u`,
/// `v` with `∂u = (−1)^{|a|} ab` and `∂v = (−1)^{|b|} bc`; the coset is
/// `[(−1)^{|a|+|b|} u·c − (−1)^{|a|} a·v] + a·H + H·c`.
pub fn massey_oracle(c: &DGAlgebra, h: &HomologyData, a: &Element, b: &Element, cc: &Element) -> Result<MasseyCoset> {
    let r = c.reduced()?;
    if *h.complex.basis != **r.basis() {
        return Err(Error::BasisMismatch { slot: 0 });
    }
    let lift = |x: &Element| h.f1.evaluate(&[x]);
    let (fa, fb, fc) = (lift(a)?, lift(b)?, lift(cc)?);
    let sa = crate::graded::odd(a.degree());
    let sb = crate::graded::odd(b.degree());
    let ab = r.mul(&fa, &fb).signed(sa);
    let bc = r.mul(&fb, &fc).signed(sb);
    fn undefined(which: &'static str) -> impl Fn(Error) -> Error {
        move |e| match e {
            Error::NonzeroClass => Error::MasseyUndefined(format!("the product {which} does not bound")),
            e => e,
        }
    }
    let u = h.bound(&ab).map_err(undefined("ab"))?;
    let v = h.bound(&bc).map_err(undefined("bc"))?;
    let mut rep = r.mul(&u, &fc).signed(sa ^ sb);
    rep.sub_assign(&r.mul(&fa, &v).signed(sa));
    let representative = h.project(&rep)?;
    let mut indeterminacy = Vec::new();
    for z in h.basis.in_degree(u.degree()) {
        let x = r.mul(h.representative(z), &fc);
        indeterminacy.push(h.project(&x)?);
    }
    for w in h.basis.in_degree(v.degree()) {
        let x = r.mul(&fa, h.representative(w));
        indeterminacy.push(h.project(&x)?);
    }
    indeterminacy.retain(|e| !e.is_zero());
    Ok(MasseyCoset { representative, indeterminacy })
}
