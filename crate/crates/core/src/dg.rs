//! Differential graded algebras, coalgebras and modules, with identity checks.
//!
//! Models may be truncated: `complete_through = Some(n)` says the basis and all
//! tables are exact up to degree `n` and nothing is known above it. Checks only
//! visit tuples whose intermediate terms stay inside that range.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{odd, tensor_add, Element, GradedBasis, Grading, MultiMap, TensorSum};
use crate::linalg::{Field, Scalar};

/// One violated identity with its witnessing generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub identity: String,
    pub witness: String,
    pub value: String,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on ({}): {}", self.identity, self.witness, self.value)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub defects: Vec<Defect>,
}

impl DefectReport {
    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn push(&mut self, identity: &str, witness: String, value: String) {
        self.defects.push(Defect { identity: identity.to_string(), witness, value });
    }

    pub fn extend(&mut self, other: DefectReport) {
        self.defects.extend(other.defects);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub grading: Grading,
    pub field: Field,
    pub basis: Arc<GradedBasis>,
    pub differential: MultiMap,
    /// Highest degree whose data is exact; `None` for untruncated complexes.
    pub complete_through: Option<i32>,
}

impl ChainComplex {
    pub fn new(
        grading: Grading,
        field: Field,
        basis: Arc<GradedBasis>,
        differential: MultiMap,
        complete_through: Option<i32>,
    ) -> Result<ChainComplex> {
        if differential.arity() != 1 || differential.shift() != grading.d() {
            return Err(Error::Validation("differential must be a linear map of degree d".into()));
        }
        if differential.sources()[0] != basis || *differential.target() != basis {
            return Err(Error::Validation("differential must act on the complex basis".into()));
        }
        Ok(ChainComplex { grading, field, basis, differential, complete_through })
    }

    /// Complex with zero differential.
    pub fn zero(grading: Grading, field: Field, basis: Arc<GradedBasis>) -> ChainComplex {
        let d = MultiMap::linear(basis.clone(), basis.clone(), grading.d());
        ChainComplex { grading, field, basis, differential: d, complete_through: None }
    }

    pub fn d(&self, e: &Element) -> Element {
        self.differential.evaluate(&[e]).expect("element lies in the complex basis")
    }

    pub fn d_gen(&self, g: usize) -> Element {
        self.differential.eval_gens(&[g])
    }

    /// Whether identities whose inputs have total degree `total` can be checked.
    pub fn checkable(&self, total: i32) -> bool {
        let reach = total + self.grading.d().max(0);
        self.complete_through.is_none_or(|n| reach <= n)
    }

    pub fn generator(&self, g: usize) -> Element {
        Element::generator(&self.basis, g, self.field)
    }

    pub fn check(&self, cap: i32) -> DefectReport {
        let mut report = DefectReport::default();
        for g in 0..self.basis.len() {
            let deg = self.basis.degree(g);
            if deg > cap || !self.checkable(deg + self.grading.d().max(0)) {
                continue;
            }
            let dd = self.d(&self.d_gen(g));
            if !dd.is_zero() {
                report.push("d∘d = 0", self.basis.name(g).to_string(), dd.display(&self.basis).to_string());
            }
        }
        report
    }
}

/// Differential graded algebra, optionally unital.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    pub complex: ChainComplex,
    pub product: MultiMap,
    pub unit: Option<usize>,
}

impl DGAlgebra {
    pub fn new(complex: ChainComplex, product: MultiMap, unit: Option<usize>) -> Result<DGAlgebra> {
        let b = &complex.basis;
        if product.arity() != 2 || product.shift() != 0 {
            return Err(Error::Validation("product must be bilinear of degree 0".into()));
        }
        if product.sources().iter().any(|s| s != b) || product.target() != b {
            return Err(Error::Validation("product must act on the algebra basis".into()));
        }
        if let Some(u) = unit {
            if b.degree(u) != 0 {
                return Err(Error::Validation("unit must have degree 0".into()));
            }
        }
        Ok(DGAlgebra { complex, product, unit })
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.complex.basis
    }

    pub fn field(&self) -> Field {
        self.complex.field
    }

    pub fn grading(&self) -> Grading {
        self.complex.grading
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.product.evaluate(&[a, b]).expect("elements lie in the algebra basis")
    }

    pub fn mul_gens(&self, a: usize, b: usize) -> Element {
        self.product.eval_gens(&[a, b])
    }

    /// The augmentation ideal (all generators except the unit). Without a unit
    /// the algebra is returned unchanged.
    pub fn reduced(&self) -> Result<DGAlgebra> {
        let Some(u) = self.unit else {
            return Ok(self.clone());
        };
        let b = self.basis();
        let (nb, map) = b.without(&[u], false)?;
        let nb = Arc::new(nb);
        let remap = |e: &Element, what: &str| -> Result<Element> {
            let mut out = Element::zero(e.degree());
            for (g, c) in e.terms() {
                match map[g] {
                    Some(ng) => out.add_term(ng, c.clone()),
                    None => {
                        return Err(Error::Validation(format!("{what} has a unit component; not augmented")))
                    }
                }
            }
            Ok(out)
        };
        let mut d = MultiMap::linear(nb.clone(), nb.clone(), self.grading().d());
        for (t, v) in self.complex.differential.entries() {
            if let Some(g) = map[t[0]] {
                d.set(vec![g], remap(v, "a differential")?)?;
            }
        }
        let mut p = MultiMap::new(vec![nb.clone(), nb.clone()], nb.clone(), 0);
        for (t, v) in self.product.entries() {
            if let (Some(x), Some(y)) = (map[t[0]], map[t[1]]) {
                p.set(vec![x, y], remap(v, "a product")?)?;
            }
        }
        let cx = ChainComplex::new(self.grading(), self.field(), nb, d, self.complex.complete_through)?;
        DGAlgebra::new(cx, p, None)
    }

    pub fn check(&self, cap: i32) -> DefectReport {
        let mut report = self.complex.check(cap);
        let b = self.basis().clone();
        let cx = &self.complex;
        let n = b.len();
        let field = self.field();
        if let Some(u) = self.unit {
            if !cx.d_gen(u).is_zero() {
                report.push("d(1) = 0", b.name(u).into(), cx.d_gen(u).display(&b).to_string());
            }
            for a in 0..n {
                if b.degree(a) > cap {
                    continue;
                }
                let ga = cx.generator(a);
                for (l, r) in [(u, a), (a, u)] {
                    let v = self.mul_gens(l, r);
                    if v != ga {
                        report.push(
                            "unit law",
                            format!("{}, {}", b.name(l), b.name(r)),
                            v.display(&b).to_string(),
                        );
                    }
                }
            }
        }
        for a in 0..n {
            for c in 0..n {
                let total = b.degree(a) + b.degree(c);
                if total > cap || !cx.checkable(total) {
                    continue;
                }
                // d(ab) - (da)b - (-1)^{|a|} a(db)
                let mut v = cx.d(&self.mul_gens(a, c));
                v.sub_assign(&self.mul(&cx.d_gen(a), &cx.generator(c)));
                let t = self.mul(&cx.generator(a), &cx.d_gen(c));
                v.add_scaled(&Scalar::from_i64(field, if odd(b.degree(a)) { 1 } else { -1 }), &t);
                if !v.is_zero() {
                    report.push("Leibniz", format!("{}, {}", b.name(a), b.name(c)), v.display(&b).to_string());
                }
            }
        }
        for a in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let total = b.degree(a) + b.degree(c) + b.degree(e);
                    if total > cap || !cx.checkable(total) {
                        continue;
                    }
                    let mut v = self.mul(&self.mul_gens(a, c), &cx.generator(e));
                    v.sub_assign(&self.mul(&cx.generator(a), &self.mul_gens(c, e)));
                    if !v.is_zero() {
                        report.push(
                            "associativity",
                            format!("{}, {}, {}", b.name(a), b.name(c), b.name(e)),
                            v.display(&b).to_string(),
                        );
                    }
                }
            }
        }
        report
    }
}

/// Differential graded coalgebra stored through its reduced coproduct.
///
/// `levels` is a filtration that the reduced coproduct splits strictly (every
/// tensor factor has positive level, levels add up) and the differential does
/// not raise. For a simply connected chain coalgebra it is the degree; for
/// bar constructions it is the word length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGCoalgebra {
    pub grading: Grading,
    pub field: Field,
    pub basis: Arc<GradedBasis>,
    pub differential: MultiMap,
    pub coproduct: BTreeMap<usize, Vec<(usize, usize, Scalar)>>,
    pub counit: Option<usize>,
    pub levels: Vec<usize>,
    pub complete_through: Option<i32>,
}

impl DGCoalgebra {
    pub fn new(
        grading: Grading,
        field: Field,
        basis: Arc<GradedBasis>,
        differential: MultiMap,
        coproduct: BTreeMap<usize, Vec<(usize, usize, Scalar)>>,
        counit: Option<usize>,
    ) -> Result<DGCoalgebra> {
        if differential.arity() != 1 || differential.shift() != grading.d() {
            return Err(Error::Validation("coalgebra differential must be linear of degree d".into()));
        }
        if let Some(u) = counit {
            if basis.degree(u) != 0 {
                return Err(Error::Validation("counit generator must have degree 0".into()));
            }
        }
        for (&g, parts) in &coproduct {
            for (l, r, _) in parts {
                if Some(*l) == counit || Some(*r) == counit || Some(g) == counit {
                    return Err(Error::Validation(
                        "reduced coproduct may not involve the counit generator".into(),
                    ));
                }
            }
        }
        let levels = (0..basis.len()).map(|g| basis.degree(g).max(0) as usize).collect();
        Ok(DGCoalgebra { grading, field, basis, differential, coproduct, counit, levels, complete_through: None })
    }

    pub fn with_levels(mut self, levels: Vec<usize>) -> DGCoalgebra {
        assert_eq!(levels.len(), self.basis.len());
        self.levels = levels;
        self
    }

    pub fn with_complete_through(mut self, n: Option<i32>) -> DGCoalgebra {
        self.complete_through = n;
        self
    }

    pub fn complex(&self) -> ChainComplex {
        ChainComplex {
            grading: self.grading,
            field: self.field,
            basis: self.basis.clone(),
            differential: self.differential.clone(),
            complete_through: self.complete_through,
        }
    }

    pub fn d_gen(&self, g: usize) -> Element {
        self.differential.eval_gens(&[g])
    }

    pub fn reduced_coproduct(&self, g: usize) -> &[(usize, usize, Scalar)] {
        self.coproduct.get(&g).map_or(&[], Vec::as_slice)
    }

    /// Generators other than the counit.
    pub fn reduced_generators(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.basis.len()).filter(move |&g| Some(g) != self.counit)
    }

    /// Iterated reduced diagonal: `Δ̄¹ = id`, `Δ̄ⁱ = (id ⊗ Δ̄ⁱ⁻¹) Δ̄`.
    pub fn iterated_coproduct(&self, i: usize, g: usize) -> TensorSum {
        assert!(i >= 1, "iterated coproduct needs i ≥ 1");
        let mut out = TensorSum::new();
        if Some(g) == self.counit {
            return out;
        }
        if i == 1 {
            out.insert(vec![g], self.field.one());
            return out;
        }
        for (l, r, c) in self.reduced_coproduct(g) {
            for (tail, c2) in self.iterated_coproduct(i - 1, *r) {
                let mut key = Vec::with_capacity(i);
                key.push(*l);
                key.extend(tail);
                tensor_add(&mut out, key, c * &c2);
            }
        }
        out
    }

    /// All reduced iterated diagonals `Δ̄ⁱ g` for `i ≥ 1`, keyed by tuple.
    pub fn all_iterated(&self, g: usize) -> TensorSum {
        let mut out = TensorSum::new();
        let max = self.levels[g].max(1);
        for i in 1..=max {
            let s = self.iterated_coproduct(i, g);
            if s.is_empty() && i > 1 {
                break;
            }
            for (k, c) in s {
                tensor_add(&mut out, k, c);
            }
        }
        out
    }

    fn checkable(&self, deg: i32) -> bool {
        let reach = deg + self.grading.d().max(0);
        self.complete_through.is_none_or(|n| reach <= n)
    }

    pub fn check(&self, cap: i32) -> DefectReport {
        let mut report = self.complex().check(cap);
        let b = &self.basis;
        let name2 = |l: usize, r: usize| format!("{}|{}", b.name(l), b.name(r));
        for g in self.reduced_generators() {
            let deg = b.degree(g);
            if deg > cap || !self.checkable(deg) {
                continue;
            }
            for (l, r, _) in self.reduced_coproduct(g) {
                if b.degree(*l) + b.degree(*r) != deg {
                    report.push("coproduct degree", b.name(g).into(), name2(*l, *r));
                }
                if self.levels[*l] == 0 || self.levels[*r] == 0 || self.levels[*l] + self.levels[*r] > self.levels[g] {
                    report.push("coproduct filtration", b.name(g).into(), name2(*l, *r));
                }
            }
            let mut lhs = TensorSum::new();
            let mut rhs = TensorSum::new();
            for (l, r, c) in self.reduced_coproduct(g) {
                for (rl, rr, c2) in self.reduced_coproduct(*r) {
                    tensor_add(&mut rhs, vec![*l, *rl, *rr], c * c2);
                }
                for (ll, lr, c2) in self.reduced_coproduct(*l) {
                    tensor_add(&mut lhs, vec![*ll, *lr, *r], c * c2);
                }
            }
            if lhs != rhs {
                report.push("coassociativity", b.name(g).into(), format!("{} vs {} terms", lhs.len(), rhs.len()));
            }
            let dg = self.d_gen(g);
            if let Some(u) = self.counit {
                if dg.coeff(u).is_some() {
                    report.push("d preserves the coaugmentation coideal", b.name(g).into(), dg.display(b).to_string());
                }
            }
            for (h, _) in dg.terms() {
                if self.levels[h] > self.levels[g] {
                    report.push("d respects the filtration", b.name(g).into(), b.name(h).into());
                }
            }
            // Δ̄ d g = (d ⊗ 1 + 1 ⊗ d) Δ̄ g with the Koszul sign on 1 ⊗ d
            let mut left = TensorSum::new();
            for (h, c) in dg.terms() {
                for (l, r, c2) in self.reduced_coproduct(h) {
                    tensor_add(&mut left, vec![*l, *r], c * c2);
                }
            }
            let mut right = TensorSum::new();
            for (l, r, c) in self.reduced_coproduct(g) {
                for (h, c2) in self.d_gen(*l).terms() {
                    tensor_add(&mut right, vec![h, *r], c * c2);
                }
                let s = Scalar::from_i64(self.field, if odd(b.degree(*l)) { -1 } else { 1 });
                for (h, c2) in self.d_gen(*r).terms() {
                    tensor_add(&mut right, vec![*l, h], &(c * c2) * &s);
                }
            }
            if left != right {
                report.push("coderivation", b.name(g).into(), format!("{} vs {} terms", left.len(), right.len()));
            }
        }
        report
    }
}

/// Left differential graded module over a [`DGAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGModule {
    pub algebra: Arc<DGAlgebra>,
    pub complex: ChainComplex,
    pub action: MultiMap,
}

impl DGModule {
    pub fn new(algebra: Arc<DGAlgebra>, complex: ChainComplex, action: MultiMap) -> Result<DGModule> {
        if action.arity() != 2 || action.shift() != 0 {
            return Err(Error::Validation("module action must be bilinear of degree 0".into()));
        }
        if action.sources()[0] != *algebra.basis()
            || action.sources()[1] != complex.basis
            || *action.target() != complex.basis
        {
            return Err(Error::Validation("module action has the wrong bases".into()));
        }
        Ok(DGModule { algebra, complex, action })
    }

    /// The algebra as a module over itself.
    pub fn regular(algebra: Arc<DGAlgebra>) -> DGModule {
        let complex = algebra.complex.clone();
        let action = algebra.product.clone();
        DGModule { algebra, complex, action }
    }

    pub fn act(&self, a: &Element, m: &Element) -> Element {
        self.action.evaluate(&[a, m]).expect("elements lie in the right bases")
    }

    pub fn check(&self, cap: i32) -> DefectReport {
        let mut report = self.complex.check(cap);
        let ab = self.algebra.basis().clone();
        let mb = self.complex.basis.clone();
        let alg = &self.algebra;
        let field = self.complex.field;
        let cx = &self.complex;
        if let Some(u) = alg.unit {
            for m in 0..mb.len() {
                if mb.degree(m) > cap {
                    continue;
                }
                let v = self.action.eval_gens(&[u, m]);
                if v != cx.generator(m) {
                    report.push("unit acts as identity", mb.name(m).into(), v.display(&mb).to_string());
                }
            }
        }
        for a in 0..ab.len() {
            for m in 0..mb.len() {
                let total = ab.degree(a) + mb.degree(m);
                if total > cap || !cx.checkable(total) || !alg.complex.checkable(ab.degree(a)) {
                    continue;
                }
                let mut v = cx.d(&self.action.eval_gens(&[a, m]));
                v.sub_assign(&self.act(&alg.complex.d_gen(a), &cx.generator(m)));
                let t = self.act(&alg.complex.generator(a), &cx.d_gen(m));
                v.add_scaled(&Scalar::from_i64(field, if odd(ab.degree(a)) { 1 } else { -1 }), &t);
                if !v.is_zero() {
                    report.push("module Leibniz", format!("{}, {}", ab.name(a), mb.name(m)), v.display(&mb).to_string());
                }
            }
        }
        for a in 0..ab.len() {
            for c in 0..ab.len() {
                for m in 0..mb.len() {
                    let total = ab.degree(a) + ab.degree(c) + mb.degree(m);
                    if total > cap || !cx.checkable(total) {
                        continue;
                    }
                    let mut v = self.act(&alg.mul_gens(a, c), &cx.generator(m));
                    v.sub_assign(&self.act(&alg.complex.generator(a), &self.action.eval_gens(&[c, m])));
                    if !v.is_zero() {
                        report.push(
                            "action associativity",
                            format!("{}, {}, {}", ab.name(a), ab.name(c), mb.name(m)),
                            v.display(&mb).to_string(),
                        );
                    }
                }
            }
        }
        report
    }
}
