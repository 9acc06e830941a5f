//! A(∞)-algebras, modules and their morphisms as arity-indexed families of
//! [`MultiMap`]s, with checkers that evaluate each defining identity.
//!
//! Signs follow one rule throughout: an operation inserted after `k` letters
//! picks up `(-1)^k` times the parity sign of those `k` letters. Morphism
//! components are composed without extra signs. These are the Koszul signs
//! for the suspended module, so `m_i`, `f_i`, `p_i`, `g_i` all behave as
//! maps on tensor words.

use std::sync::Arc;

use rayon::prelude::*;

use crate::dg::{DGAlgebra, DGModule, DefectReport};
use crate::error::{Error, Result};
use crate::graded::{odd, Element, GradedBasis, Grading, MultiMap};
use crate::linalg::{Field, Scalar};

/// An ordered composition `(k₁, …, k_t)` of `total = Σ kₚ`, all parts ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive index ranges of the parts.
    pub fn blocks(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        let mut start = 0;
        self.0.iter().map(move |&k| {
            let r = start..start + k;
            start += k;
            r
        })
    }
}

/// All compositions of `n`, lexicographically ordered.
pub fn compositions(n: usize) -> Vec<Composition> {
    fn rec(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if n == 0 {
            out.push(Composition(prefix.clone()));
            return;
        }
        for k in 1..=n {
            prefix.push(k);
            rec(n - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Compositions of `n` with exactly `t` parts.
pub fn compositions_with_parts(n: usize, t: usize) -> Vec<Composition> {
    compositions(n).into_iter().filter(|c| c.len() == t).collect()
}

/// All `n`-tuples over `bases` (one basis per slot) with weight at most `cap`,
/// in lexicographic order. `letters` is the number of slots that count
/// towards the word length in the homological weight.
pub fn tuples(grading: Grading, bases: &[&GradedBasis], letters: usize, cap: i32) -> Vec<Vec<usize>> {
    let mins: Vec<i32> = bases.iter().map(|b| b.min_degree().unwrap_or(0)).collect();
    let mut out = Vec::new();
    if bases.iter().any(|b| b.is_empty()) {
        return out;
    }
    fn rec(
        grading: Grading,
        bases: &[&GradedBasis],
        mins: &[i32],
        letters: usize,
        cap: i32,
        cur: &mut Vec<usize>,
        sum: i32,
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = cur.len();
        if k == bases.len() {
            if grading.weight(sum, letters) <= cap {
                out.push(cur.clone());
            }
            return;
        }
        let rest_min: i32 = mins[k + 1..].iter().sum();
        for g in 0..bases[k].len() {
            let s = sum + bases[k].degree(g);
            if grading.weight(s + rest_min, letters) > cap {
                continue;
            }
            cur.push(g);
            rec(grading, bases, mins, letters, cap, cur, s, out);
            cur.pop();
        }
    }
    rec(grading, bases, &mins, letters, cap, &mut Vec::new(), 0, &mut out);
    out
}

/// Largest word length that fits under a weight cap, for letters of degree at
/// least `min_degree`.
pub fn auto_arity_cap(grading: Grading, min_degree: i32, weight_cap: i32) -> usize {
    let per_letter = grading.weight(min_degree, 1).max(1);
    (weight_cap.max(0) / per_letter).max(1) as usize
}

/// Sign `(-1)^k · â₁⋯â_k` for an insertion after the first `k` letters.
pub(crate) fn insertion_sign(bases: &[&GradedBasis], tuple: &[usize], k: usize) -> bool {
    let hats = (0..k).filter(|&i| odd(bases[i].degree(tuple[i]))).count();
    (k + hats) % 2 == 1
}

fn sgn(field: Field, negative: bool) -> Scalar {
    Scalar::from_i64(field, if negative { -1 } else { 1 })
}

/// `Σ (−1)^k · outer(â₁,…,â_k, inner(a_{k+1..k+j}), a_{k+j+1},…)` over the
/// `(k, j)` pairs admitted by `allowed`. `inner` gets the block and returns
/// an element of the basis that fills the new slot; `outer` accumulates.
#[allow(clippy::too_many_arguments)]
pub(crate) fn insertion_sum(
    field: Field,
    bases: &[&GradedBasis],
    tuple: &[usize],
    allowed: impl Fn(usize, usize) -> bool,
    inner: impl Fn(usize, usize) -> Element,
    mut outer: impl FnMut(&[usize], &Scalar),
) {
    let n = tuple.len();
    let mut scratch = Vec::with_capacity(n);
    for k in 0..n {
        let s = sgn(field, insertion_sign(bases, tuple, k));
        for j in 1..=n - k {
            if !allowed(k, j) {
                continue;
            }
            let v = inner(k, j);
            for (g, c) in v.terms() {
                scratch.clear();
                scratch.extend_from_slice(&tuple[..k]);
                scratch.push(g);
                scratch.extend_from_slice(&tuple[k + j..]);
                outer(&scratch, &(&s * c));
            }
        }
    }
}

/// A(∞)-algebra `(M, {m_i})`. `ops[i-1]` is `m_i`; missing arities are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfAlgebra {
    pub grading: Grading,
    pub field: Field,
    pub basis: Arc<GradedBasis>,
    pub ops: Vec<MultiMap>,
    /// Highest arity with authoritative data; `None` means all higher `m_i` vanish.
    pub arity_cap: Option<usize>,
    /// Tuples of weight above this cap are outside the model.
    pub weight_cap: Option<i32>,
}

impl AInfAlgebra {
    pub fn op(&self, i: usize) -> Option<&MultiMap> {
        self.ops.get(i - 1).filter(|m| !m.is_zero())
    }

    pub fn eval(&self, i: usize, tuple: &[usize]) -> Element {
        match self.ops.get(i - 1) {
            Some(m) => m.eval_gens(tuple),
            None => Element::zero(self.out_degree(i, tuple)),
        }
    }

    pub fn out_degree(&self, i: usize, tuple: &[usize]) -> i32 {
        tuple.iter().map(|&g| self.basis.degree(g)).sum::<i32>() + self.grading.op_shift(i)
    }

    pub fn tuple_weight(&self, tuple: &[usize]) -> i32 {
        self.grading.weight(tuple.iter().map(|&g| self.basis.degree(g)).sum(), tuple.len())
    }

    /// Highest arity that can carry nonzero data below the weight cap.
    pub fn effective_arity_cap(&self, weight_cap: i32) -> usize {
        let auto = auto_arity_cap(self.grading, self.basis.min_degree().unwrap_or(1), weight_cap);
        match self.arity_cap {
            Some(a) => a.min(auto),
            None => auto,
        }
    }

    pub fn new_op(&self, i: usize) -> MultiMap {
        MultiMap::new(vec![self.basis.clone(); i], self.basis.clone(), self.grading.op_shift(i))
    }

    /// Trivial structure (all operations zero).
    pub fn trivial(grading: Grading, field: Field, basis: Arc<GradedBasis>) -> AInfAlgebra {
        AInfAlgebra { grading, field, basis, ops: vec![], arity_cap: None, weight_cap: None }
    }

    /// Stasheff defect on one generator tuple: zero iff the identity holds there.
    pub fn stasheff_defect(&self, tuple: &[usize]) -> Element {
        let n = tuple.len();
        let b = &*self.basis;
        let bases = vec![b; n];
        let degree = tuple.iter().map(|&g| b.degree(g)).sum::<i32>() - self.grading.d() * (n as i32 - 3);
        let mut acc = Element::zero(degree);
        insertion_sum(
            self.field,
            &bases,
            tuple,
            |_, _| true,
            |k, j| self.eval(j, &tuple[k..k + j]),
            |t, c| {
                if let Some(m) = self.ops.get(t.len() - 1) {
                    m.accumulate(&mut acc, c, t);
                }
            },
        );
        acc
    }

    /// All Stasheff defects through the caps, in canonical tuple order.
    pub fn verify(&self, weight_cap: i32, arity_cap: Option<usize>) -> DefectReport {
        let cap = self.weight_cap.map_or(weight_cap, |w| w.min(weight_cap));
        let arity = arity_cap.unwrap_or_else(|| self.effective_arity_cap(cap));
        let mut report = DefectReport::default();
        for n in 1..=arity {
            let ts = tuples(self.grading, &vec![&*self.basis; n], n, cap);
            let found: Vec<_> = ts
                .par_iter()
                .filter_map(|t| {
                    let d = self.stasheff_defect(t);
                    (!d.is_zero()).then(|| (t.clone(), d))
                })
                .collect();
            for (t, d) in found {
                report.push(
                    &format!("Stasheff identity (arity {n})"),
                    names(&self.basis, &t),
                    d.display(&self.basis).to_string(),
                );
            }
        }
        report
    }
}

pub(crate) fn names(b: &GradedBasis, t: &[usize]) -> String {
    t.iter().map(|&g| b.name(g)).collect::<Vec<_>>().join("⊗")
}

/// Views a DG algebra as an A(∞)-algebra on its augmentation ideal:
/// `m₁ = ∂`, `m₂(a⊗b) = −(−1)^{|a|} a·b`, `mᵢ = 0` for `i ≥ 3`.
pub fn dga_to_ainf(a: &DGAlgebra) -> Result<AInfAlgebra> {
    let r = a.reduced()?;
    let basis = r.basis().clone();
    let grading = r.grading();
    let field = r.field();
    let m1 = r.complex.differential.clone();
    let mut m2 = MultiMap::new(vec![basis.clone(), basis.clone()], basis.clone(), 0);
    for (t, v) in r.product.entries() {
        let neg = !odd(basis.degree(t[0]));
        m2.set(t.clone(), v.clone().signed(neg))?;
    }
    let weight_cap = r.complex.complete_through.map(|n| match grading {
        Grading::Homological => n + 1,
        Grading::Cohomological => n - 2,
    });
    Ok(AInfAlgebra { grading, field, basis, ops: vec![m1, m2], arity_cap: None, weight_cap })
}

/// A(∞)-morphism `{f_i}`; `comps[i-1]` is `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfMorphism {
    pub source: Arc<AInfAlgebra>,
    pub target: Arc<AInfAlgebra>,
    pub comps: Vec<MultiMap>,
}

impl AInfMorphism {
    pub fn identity(a: Arc<AInfAlgebra>) -> AInfMorphism {
        let mut f1 = MultiMap::linear(a.basis.clone(), a.basis.clone(), 0);
        for g in 0..a.basis.len() {
            f1.set(vec![g], Element::generator(&a.basis, g, a.field)).expect("identity entry");
        }
        AInfMorphism { source: a.clone(), target: a, comps: vec![f1] }
    }

    pub fn new_comp(&self, i: usize) -> MultiMap {
        MultiMap::new(
            vec![self.source.basis.clone(); i],
            self.target.basis.clone(),
            self.source.grading.morphism_shift(i),
        )
    }

    pub fn eval(&self, i: usize, tuple: &[usize]) -> Element {
        match self.comps.get(i - 1) {
            Some(f) => f.eval_gens(tuple),
            None => Element::zero(
                tuple.iter().map(|&g| self.source.basis.degree(g)).sum::<i32>()
                    + self.source.grading.morphism_shift(i),
            ),
        }
    }

    /// `Σ_t Σ_{S(t,n)} m'_t(f_{k₁}(…) ⊗ ⋯ ⊗ f_{k_t}(…))`.
    pub fn composite_right(&self, tuple: &[usize]) -> Element {
        let n = tuple.len();
        let degree = tuple.iter().map(|&g| self.source.basis.degree(g)).sum::<i32>()
            + self.source.grading.morphism_shift(n)
            + self.source.grading.d();
        let mut acc = Element::zero(degree);
        for comp in compositions(n) {
            let t = comp.len();
            let Some(m) = self.target.op(t) else { continue };
            let vals: Vec<Element> = comp.blocks().map(|r| self.eval(r.len(), &tuple[r])).collect();
            if vals.iter().any(Element::is_zero) {
                continue;
            }
            let refs: Vec<&Element> = vals.iter().collect();
            acc.add_assign(&m.evaluate(&refs).expect("values lie in the target basis"));
        }
        acc
    }

    /// `Σ (−1)^k f_{n−j+1}(â₁…â_k ⊗ m_j(…) ⊗ …)`.
    pub fn composite_left(&self, tuple: &[usize]) -> Element {
        let n = tuple.len();
        let b = &*self.source.basis;
        let degree = tuple.iter().map(|&g| b.degree(g)).sum::<i32>()
            + self.source.grading.morphism_shift(n)
            + self.source.grading.d();
        let mut acc = Element::zero(degree);
        insertion_sum(
            self.source.field,
            &vec![b; n],
            tuple,
            |_, _| true,
            |k, j| self.source.eval(j, &tuple[k..k + j]),
            |t, c| {
                if let Some(f) = self.comps.get(t.len() - 1) {
                    f.accumulate(&mut acc, c, t);
                }
            },
        );
        acc
    }

    /// Left side minus right side of the morphism identity on one tuple.
    pub fn morphism_defect(&self, tuple: &[usize]) -> Element {
        let mut d = self.composite_left(tuple);
        d.sub_assign(&self.composite_right(tuple));
        d
    }

    pub fn verify(&self, weight_cap: i32, arity_cap: Option<usize>) -> DefectReport {
        let cap = [self.source.weight_cap, self.target.weight_cap]
            .into_iter()
            .flatten()
            .fold(weight_cap, i32::min);
        let arity = arity_cap.unwrap_or_else(|| self.source.effective_arity_cap(cap));
        let mut report = DefectReport::default();
        for n in 1..=arity {
            let ts = tuples(self.source.grading, &vec![&*self.source.basis; n], n, cap);
            let found: Vec<_> = ts
                .par_iter()
                .filter_map(|t| {
                    let d = self.morphism_defect(t);
                    (!d.is_zero()).then(|| (t.clone(), d))
                })
                .collect();
            for (t, d) in found {
                report.push(
                    &format!("morphism identity (arity {n})"),
                    names(&self.source.basis, &t),
                    d.display(&self.target.basis).to_string(),
                );
            }
        }
        report
    }
}

/// A(∞)-module `(P, {p_i})` over an A(∞)-algebra. `ops[i-1]` is
/// `p_i : M^{⊗(i−1)} ⊗ P → P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfModule {
    pub algebra: Arc<AInfAlgebra>,
    pub basis: Arc<GradedBasis>,
    pub ops: Vec<MultiMap>,
    pub weight_cap: Option<i32>,
}

impl AInfModule {
    pub fn grading(&self) -> Grading {
        self.algebra.grading
    }

    pub fn field(&self) -> Field {
        self.algebra.field
    }

    pub fn new_op(&self, i: usize) -> MultiMap {
        let mut srcs = vec![self.algebra.basis.clone(); i - 1];
        srcs.push(self.basis.clone());
        MultiMap::new(srcs, self.basis.clone(), self.grading().op_shift(i))
    }

    pub fn slot_bases(&self, n: usize) -> Vec<&GradedBasis> {
        let mut v = vec![&*self.algebra.basis; n - 1];
        v.push(&*self.basis);
        v
    }

    pub fn tuple_degree(&self, tuple: &[usize]) -> i32 {
        let n = tuple.len();
        tuple[..n - 1].iter().map(|&g| self.algebra.basis.degree(g)).sum::<i32>() + self.basis.degree(tuple[n - 1])
    }

    pub fn eval(&self, i: usize, tuple: &[usize]) -> Element {
        match self.ops.get(i - 1) {
            Some(p) => p.eval_gens(tuple),
            None => Element::zero(self.tuple_degree(tuple) + self.grading().op_shift(i)),
        }
    }

    /// Both insertion sums of the module identity on `(a₁,…,a_{n−1}, b)`.
    pub fn module_defect(&self, tuple: &[usize]) -> Element {
        let n = tuple.len();
        let bases = self.slot_bases(n);
        let degree = self.tuple_degree(tuple) - self.grading().d() * (n as i32 - 3);
        let mut acc = Element::zero(degree);
        // algebra operations on blocks inside a₁…a_{n−1}
        insertion_sum(
            self.field(),
            &bases,
            tuple,
            |k, j| k + j < n,
            |k, j| self.algebra.eval(j, &tuple[k..k + j]),
            |t, c| {
                if let Some(p) = self.ops.get(t.len() - 1) {
                    p.accumulate(&mut acc, c, t);
                }
            },
        );
        // module operations on suffixes ending in b
        insertion_sum(
            self.field(),
            &bases,
            tuple,
            |k, j| k + j == n,
            |k, j| self.eval(j, &tuple[k..k + j]),
            |t, c| {
                if let Some(p) = self.ops.get(t.len() - 1) {
                    p.accumulate(&mut acc, c, t);
                }
            },
        );
        acc
    }

    pub fn tuples(&self, n: usize, cap: i32) -> Vec<Vec<usize>> {
        tuples(self.grading(), &self.slot_bases(n), n - 1, cap)
    }

    pub fn effective_cap(&self, weight_cap: i32) -> i32 {
        [self.weight_cap, self.algebra.weight_cap].into_iter().flatten().fold(weight_cap, i32::min)
    }

    pub fn verify(&self, weight_cap: i32, arity_cap: Option<usize>) -> DefectReport {
        let cap = self.effective_cap(weight_cap);
        let arity = arity_cap.unwrap_or_else(|| self.algebra.effective_arity_cap(cap) + 1);
        let mut report = DefectReport::default();
        for n in 1..=arity {
            let ts = self.tuples(n, cap);
            let found: Vec<_> = ts
                .par_iter()
                .filter_map(|t| {
                    let d = self.module_defect(t);
                    (!d.is_zero()).then(|| (t.clone(), d))
                })
                .collect();
            for (t, d) in found {
                report.push(
                    &format!("module identity (arity {n})"),
                    module_names(self, &t),
                    d.display(&self.basis).to_string(),
                );
            }
        }
        report
    }
}

pub(crate) fn module_names(p: &AInfModule, t: &[usize]) -> String {
    let n = t.len();
    let mut parts: Vec<&str> = t[..n - 1].iter().map(|&g| p.algebra.basis.name(g)).collect();
    parts.push(p.basis.name(t[n - 1]));
    parts.join("⊗")
}

/// Views a DG module as an A(∞)-module over `dga_to_ainf(module.algebra)`:
/// `p₁ = ∂`, `p₂(a⊗b) = −(−1)^{|a|} a·b`.
pub fn dgmodule_to_ainf(m: &DGModule, algebra: Arc<AInfAlgebra>) -> Result<AInfModule> {
    let basis = m.complex.basis.clone();
    let full = m.algebra.basis();
    let mut p2 = MultiMap::new(vec![algebra.basis.clone(), basis.clone()], basis.clone(), 0);
    for (t, v) in m.action.entries() {
        if Some(t[0]) == m.algebra.unit {
            continue;
        }
        let a = algebra.basis.lookup(full.name(t[0]))?;
        let neg = !odd(full.degree(t[0]));
        p2.set(vec![a, t[1]], v.clone().signed(neg))?;
    }
    let p1 = MultiMap::new(vec![basis.clone()], basis.clone(), m.complex.grading.d());
    let mut p1 = p1;
    for (t, v) in m.complex.differential.entries() {
        p1.set(t.clone(), v.clone())?;
    }
    let weight_cap = m.complex.complete_through.map(|n| match m.complex.grading {
        Grading::Homological => n + 1,
        Grading::Cohomological => n - 2,
    });
    if algebra.grading != m.complex.grading {
        return Err(Error::Validation("module and algebra gradings differ".into()));
    }
    Ok(AInfModule { algebra, basis, ops: vec![p1, p2], weight_cap })
}

/// Morphism of A(∞)-modules: an algebra morphism `{f_i}` and `{g_i}` with
/// `g_i : M^{⊗(i−1)} ⊗ P → P'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfModuleMorphism {
    pub algebra_map: Arc<AInfMorphism>,
    pub source: Arc<AInfModule>,
    pub target: Arc<AInfModule>,
    pub comps: Vec<MultiMap>,
}

impl AInfModuleMorphism {
    pub fn identity(p: Arc<AInfModule>) -> AInfModuleMorphism {
        let f = Arc::new(AInfMorphism::identity(p.algebra.clone()));
        let mut g1 = MultiMap::linear(p.basis.clone(), p.basis.clone(), 0);
        for g in 0..p.basis.len() {
            g1.set(vec![g], Element::generator(&p.basis, g, p.field())).expect("identity entry");
        }
        AInfModuleMorphism { algebra_map: f, source: p.clone(), target: p, comps: vec![g1] }
    }

    pub fn new_comp(&self, i: usize) -> MultiMap {
        let mut srcs = vec![self.source.algebra.basis.clone(); i - 1];
        srcs.push(self.source.basis.clone());
        MultiMap::new(srcs, self.target.basis.clone(), self.source.grading().morphism_shift(i))
    }

    pub fn eval(&self, i: usize, tuple: &[usize]) -> Element {
        match self.comps.get(i - 1) {
            Some(g) => g.eval_gens(tuple),
            None => Element::zero(self.source.tuple_degree(tuple) + self.source.grading().morphism_shift(i)),
        }
    }

    /// Source-side terms: `g` after the source module differential on the
    /// bar side (algebra operations and module operations).
    pub fn composite_left(&self, tuple: &[usize]) -> Element {
        let n = tuple.len();
        let src = &*self.source;
        let bases = src.slot_bases(n);
        let grading = src.grading();
        let degree = src.tuple_degree(tuple) + grading.morphism_shift(n) + grading.d();
        let mut acc = Element::zero(degree);
        let mut put = |t: &[usize], c: &Scalar| {
            if let Some(g) = self.comps.get(t.len() - 1) {
                g.accumulate(&mut acc, c, t);
            }
        };
        insertion_sum(src.field(), &bases, tuple, |k, j| k + j < n, |k, j| src.algebra.eval(j, &tuple[k..k + j]), &mut put);
        insertion_sum(src.field(), &bases, tuple, |k, j| k + j == n, |k, j| src.eval(j, &tuple[k..k + j]), &mut put);
        acc
    }

    /// `Σ_t Σ_{S(t,n)} p'_t(f_{k₁}(…) ⊗ ⋯ ⊗ f_{k_{t−1}}(…) ⊗ g_{k_t}(… ⊗ b))`.
    pub fn composite_right(&self, tuple: &[usize]) -> Element {
        let n = tuple.len();
        let grading = self.source.grading();
        let degree = self.source.tuple_degree(tuple) + grading.morphism_shift(n) + grading.d();
        let mut acc = Element::zero(degree);
        for comp in compositions(n) {
            let t = comp.len();
            let Some(p) = self.target.ops.get(t - 1).filter(|p| !p.is_zero()) else { continue };
            let blocks: Vec<_> = comp.blocks().collect();
            let mut vals: Vec<Element> = blocks[..t - 1]
                .iter()
                .map(|r| self.algebra_map.eval(r.len(), &tuple[r.clone()]))
                .collect();
            let last = blocks[t - 1].clone();
            vals.push(self.eval(last.len(), &tuple[last]));
            if vals.iter().any(Element::is_zero) {
                continue;
            }
            let refs: Vec<&Element> = vals.iter().collect();
            acc.add_assign(&p.evaluate(&refs).expect("values lie in the target bases"));
        }
        acc
    }

    pub fn module_morphism_defect(&self, tuple: &[usize]) -> Element {
        let mut d = self.composite_left(tuple);
        d.sub_assign(&self.composite_right(tuple));
        d
    }

    pub fn verify(&self, weight_cap: i32, arity_cap: Option<usize>) -> DefectReport {
        let cap = [self.source.effective_cap(weight_cap), self.target.effective_cap(weight_cap)]
            .into_iter()
            .fold(weight_cap, i32::min);
        let arity = arity_cap.unwrap_or_else(|| self.source.algebra.effective_arity_cap(cap) + 1);
        let mut report = DefectReport::default();
        for n in 1..=arity {
            let ts = self.source.tuples(n, cap);
            let found: Vec<_> = ts
                .par_iter()
                .filter_map(|t| {
                    let d = self.module_morphism_defect(t);
                    (!d.is_zero()).then(|| (t.clone(), d))
                })
                .collect();
            for (t, d) in found {
                report.push(
                    &format!("module morphism identity (arity {n})"),
                    module_names(&self.source, &t),
                    d.display(&self.target.basis).to_string(),
                );
            }
        }
        report
    }
}
