//! Twisting cochains into A(∞)-algebras, the gauge action of degree-0 maps,
//! twisted tensor products, and transfer of a twisting cochain to homology.
//!
//! A twisting cochain `φ : K → M` satisfies `φd = Σᵢ mᵢ(φ⊗⋯⊗φ)Δ̄ⁱ`. Maps
//! `K → Ā` are stored as linear [`MultiMap`]s into the augmentation ideal and
//! are taken to vanish on the counit, so convolutions only see `Δ̄`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::ainf::{AInfAlgebra, AInfModule, AInfMorphism};
use crate::bar::{tilde_b, TildeB};
use crate::dg::{ChainComplex, DGAlgebra, DGCoalgebra, DefectReport};
use crate::error::{Error, Result};
use crate::graded::{odd, tensor_expand, Element, GradedBasis, MultiMap};
use crate::linalg::Scalar;
use crate::transfer::TransferResult;

/// `φ : K → M` of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingCochain {
    pub source: Arc<DGCoalgebra>,
    pub target: Arc<AInfAlgebra>,
    pub map: MultiMap,
}

impl TwistingCochain {
    pub fn new(source: Arc<DGCoalgebra>, target: Arc<AInfAlgebra>, map: MultiMap) -> Result<TwistingCochain> {
        if source.grading != target.grading {
            return Err(Error::Validation("coalgebra and algebra gradings differ".into()));
        }
        if map.arity() != 1 || map.sources()[0] != source.basis || *map.target() != target.basis {
            return Err(Error::BasisMismatch { slot: 0 });
        }
        if map.shift() != source.grading.d() {
            return Err(Error::Validation("a twisting cochain has the degree of the differential".into()));
        }
        if let Some(u) = source.counit {
            if !map.eval_gens(&[u]).is_zero() {
                return Err(Error::Validation("a twisting cochain must vanish on the counit".into()));
            }
        }
        Ok(TwistingCochain { source, target, map })
    }

    pub fn value(&self, k: usize) -> Element {
        self.map.eval_gens(&[k])
    }
}

/// Evaluates the `i`-th member of an operation family on elements, refusing
/// to read past the arity or weight caps.
fn eval_family(
    ops: &[MultiMap],
    i: usize,
    arity_cap: Option<usize>,
    weight: &dyn Fn(&[usize]) -> Option<i32>,
    weight_cap: Option<i32>,
    vals: &[&Element],
    zero_degree: i32,
) -> Result<Element> {
    if vals.iter().any(|v| v.is_zero()) {
        return Ok(Element::zero(zero_degree));
    }
    let Some(m) = ops.get(i - 1) else {
        return match arity_cap {
            Some(a) if i > a => Err(Error::CapExceeded(format!("arity {i} is beyond the arity cap {a}"))),
            _ => Ok(Element::zero(zero_degree)),
        };
    };
    if let Some(cap) = weight_cap {
        for t in tensor_expand(vals).keys() {
            if let Some(w) = weight(t) {
                if w > cap && !m.is_zero() {
                    return Err(Error::CapExceeded(format!("operation needed on a tuple of weight {w}, cap is {cap}")));
                }
            }
        }
    }
    m.evaluate(vals)
}

fn algebra_op(a: &AInfAlgebra, i: usize, vals: &[&Element]) -> Result<Element> {
    let deg = vals.iter().map(|v| v.degree()).sum::<i32>() + a.grading.op_shift(i);
    eval_family(&a.ops, i, a.arity_cap, &|t| Some(a.tuple_weight(t)), a.weight_cap, vals, deg)
}

fn morphism_comp(f: &AInfMorphism, i: usize, vals: &[&Element]) -> Result<Element> {
    let deg = vals.iter().map(|v| v.degree()).sum::<i32>() + f.source.grading.morphism_shift(i);
    let cap = [f.source.weight_cap, f.target.weight_cap].into_iter().flatten().min();
    eval_family(&f.comps, i, f.source.arity_cap, &|t| Some(f.source.tuple_weight(t)), cap, vals, deg)
}

fn module_op(p: &AInfModule, i: usize, vals: &[&Element]) -> Result<Element> {
    let deg = vals.iter().map(|v| v.degree()).sum::<i32>() + p.grading().op_shift(i);
    let arity = p.algebra.arity_cap.map(|a| a + 1);
    let cap = p.effective_cap(i32::MAX);
    let cap = (cap != i32::MAX).then_some(cap);
    eval_family(&p.ops, i, arity, &|t| Some(p.grading().weight(p.tuple_degree(t), t.len() - 1)), cap, vals, deg)
}

/// `Σᵢ opᵢ(φ(k₁), …, φ(kᵢ))` over `Δ̄ⁱ k`, for `i ≥ min_arity`.
fn sum_over_diagonals(
    k: &DGCoalgebra,
    g: usize,
    phi: &MultiMap,
    min_arity: usize,
    degree: i32,
    op: &dyn Fn(usize, &[&Element]) -> Result<Element>,
) -> Result<Element> {
    let mut acc = Element::zero(degree);
    for (key, c) in k.all_iterated(g) {
        let i = key.len();
        if i < min_arity {
            continue;
        }
        let vals: Vec<Element> = key.iter().map(|&x| phi.eval_gens(&[x])).collect();
        let refs: Vec<&Element> = vals.iter().collect();
        let v = op(i, &refs)?;
        acc.add_scaled(&c, &v);
    }
    Ok(acc)
}

fn within(k: &DGCoalgebra, g: usize, cap: i32) -> bool {
    let deg = k.basis.degree(g);
    deg <= cap && k.complete_through.is_none_or(|n| deg + k.grading.d().max(0) <= n)
}

/// `φd − Σᵢ mᵢ(φ^{⊗i})Δ̄ⁱ` on every generator of degree at most `cap`.
pub fn twisting_defect(phi: &TwistingCochain, cap: i32) -> Result<DefectReport> {
    let k = &*phi.source;
    let gens: Vec<usize> = k.reduced_generators().filter(|&g| within(k, g, cap)).collect();
    let found: Vec<(usize, Element)> = gens
        .par_iter()
        .map(|&g| -> Result<_> {
            let deg = k.basis.degree(g) + 2 * k.grading.d();
            let mut lhs = phi.map.evaluate(&[&k.d_gen(g)])?;
            if lhs.is_zero() {
                lhs = Element::zero(deg);
            }
            let rhs = sum_over_diagonals(k, g, &phi.map, 1, deg, &|i, v| algebra_op(&phi.target, i, v))?;
            lhs.sub_assign(&rhs);
            Ok((g, lhs))
        })
        .collect::<Result<_>>()?;
    let mut report = DefectReport::default();
    for (g, e) in found {
        if !e.is_zero() {
            report.push("twisting condition", k.basis.name(g).to_string(), e.display(&phi.target.basis).to_string());
        }
    }
    Ok(report)
}

/// The coalgebra map `K → B̃(M)`, `k ↦ Σᵢ (φ⊗⋯⊗φ)Δ̄ⁱ k`.
pub fn cochain_to_coalgebra_map(phi: &TwistingCochain, bar: &TildeB) -> Result<MultiMap> {
    let k = &*phi.source;
    let mut map = MultiMap::linear(k.basis.clone(), bar.basis().clone(), 0);
    for g in 0..k.basis.len() {
        let deg = k.basis.degree(g);
        if deg > bar.degree_cap {
            continue;
        }
        let mut e = Element::zero(deg);
        if Some(g) == k.counit {
            e.add_term(bar.index[&Vec::new()], k.field.one());
        } else {
            for (key, c) in k.all_iterated(g) {
                let vals: Vec<Element> = key.iter().map(|&x| phi.value(x)).collect();
                let refs: Vec<&Element> = vals.iter().collect();
                for (w, c2) in tensor_expand(&refs) {
                    let j = bar.index.get(&w).ok_or_else(|| {
                        Error::CapExceeded("word outside the B̃ truncation".into())
                    })?;
                    e.add_term(*j, &c * &c2);
                }
            }
        }
        map.set(vec![g], e)?;
    }
    Ok(map)
}

/// Convolution `(u⋆v)(x) = Σ (−1)^{|v||x'|} u(x')·v(x'')` over `Δ̄x`, with
/// the product of a DG algebra on its augmentation ideal.
pub fn convolve(k: &DGCoalgebra, a: &DGAlgebra, u: &MultiMap, v: &MultiMap) -> Result<MultiMap> {
    let shift = u.shift() + v.shift();
    let mut out = MultiMap::linear(k.basis.clone(), a.basis().clone(), shift);
    for g in k.reduced_generators() {
        let mut e = Element::zero(k.basis.degree(g) + shift);
        for (l, r, c) in k.reduced_coproduct(g) {
            let (ul, vr) = (u.eval_gens(&[*l]), v.eval_gens(&[*r]));
            if ul.is_zero() || vr.is_zero() {
                continue;
            }
            let sign = odd(v.shift()) && odd(k.basis.degree(*l));
            let p = a.mul(&ul, &vr).signed(sign);
            e.add_scaled(c, &p);
        }
        out.set(vec![g], e)?;
    }
    Ok(out)
}

/// `D'f = ∂f + (−1)^{|f|} f d`.
pub fn cochain_differential(k: &DGCoalgebra, a: &DGAlgebra, f: &MultiMap) -> Result<MultiMap> {
    let shift = f.shift() + k.grading.d();
    let mut out = MultiMap::linear(k.basis.clone(), a.basis().clone(), shift);
    for g in k.reduced_generators() {
        let mut e = a.complex.d(&f.eval_gens(&[g]));
        if e.is_zero() {
            e = Element::zero(k.basis.degree(g) + shift);
        }
        let fd = f.evaluate(&[&k.d_gen(g)])?;
        if !fd.is_zero() {
            e.add_assign(&fd.signed(odd(f.shift())));
        }
        out.set(vec![g], e)?;
    }
    Ok(out)
}

fn add_maps(a: &MultiMap, b: &MultiMap, scale: &Scalar) -> Result<MultiMap> {
    let mut out = a.clone();
    for (t, v) in b.entries() {
        let mut e = out.get(t).cloned().unwrap_or_else(|| Element::zero(v.degree()));
        e.add_scaled(scale, v);
        out.set(t.clone(), e)?;
    }
    Ok(out)
}

/// A degree-0 map `c : K → Ā` vanishing in degree 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransform {
    pub map: MultiMap,
}

impl GaugeTransform {
    pub fn new(k: &DGCoalgebra, map: MultiMap) -> Result<GaugeTransform> {
        if map.shift() != 0 || map.sources()[0] != k.basis {
            return Err(Error::Validation("a gauge transform is a degree-0 map out of the coalgebra".into()));
        }
        for g in 0..k.basis.len() {
            if k.basis.degree(g) == 0 && !map.eval_gens(&[g]).is_zero() {
                return Err(Error::Validation(format!("a gauge transform must vanish on {}", k.basis.name(g))));
            }
        }
        Ok(GaugeTransform { map })
    }
}

/// `(1+c)⋆φ = (1+c)·φ·(1+c)⁻¹ − (D'c)·(1+c)⁻¹`, products being convolutions
/// and `(1+c)⁻¹ = Σₙ (−c)^{⋆n}`.
pub fn gauge(phi: &TwistingCochain, c: &GaugeTransform, a: &DGAlgebra) -> Result<TwistingCochain> {
    let k = &*phi.source;
    let field = k.field;
    let minus_one = Scalar::from_i64(field, -1);
    let minus_c = add_maps(&MultiMap::linear(k.basis.clone(), a.basis().clone(), 0), &c.map, &minus_one)?;
    // e = (1+c)⁻¹ − 1
    let mut e = minus_c.clone();
    let mut power = minus_c.clone();
    let max_level = k.levels.iter().copied().max().unwrap_or(0);
    for _ in 1..=max_level {
        power = convolve(k, a, &power, &minus_c)?;
        if power.is_zero() {
            break;
        }
        e = add_maps(&e, &power, &field.one())?;
    }
    let one = field.one();
    let phi_e = convolve(k, a, &phi.map, &e)?;
    let c_phi = convolve(k, a, &c.map, &phi.map)?;
    let c_phi_e = convolve(k, a, &c_phi, &e)?;
    let dc = cochain_differential(k, a, &c.map)?;
    let dc_e = convolve(k, a, &dc, &e)?;
    let mut out = phi.map.clone();
    for m in [&c_phi, &phi_e, &c_phi_e] {
        out = add_maps(&out, m, &one)?;
    }
    for m in [&dc, &dc_e] {
        out = add_maps(&out, m, &minus_one)?;
    }
    TwistingCochain::new(phi.source.clone(), phi.target.clone(), out)
}

/// `f*φ = Σₜ fₜ(φ⊗⋯⊗φ)Δ̄ᵗ`.
pub fn f_star(phi: &TwistingCochain, f: &AInfMorphism) -> Result<TwistingCochain> {
    if phi.target.basis != f.source.basis {
        return Err(Error::BasisMismatch { slot: 0 });
    }
    let k = &*phi.source;
    let mut out = MultiMap::linear(k.basis.clone(), f.target.basis.clone(), k.grading.d());
    for g in k.reduced_generators() {
        let deg = k.basis.degree(g) + k.grading.d();
        let e = sum_over_diagonals(k, g, &phi.map, 1, deg, &|i, v| morphism_comp(f, i, v))?;
        out.set(vec![g], e)?;
    }
    TwistingCochain::new(phi.source.clone(), f.target.clone(), out)
}

/// Output of [`transfer_twisting`].
#[derive(Clone, Debug)]
pub struct TwistingTransfer {
    /// `φ* : K → H` with the transferred operations.
    pub phi_star: TwistingCochain,
    /// `cₙ`, one per filtration level, in increasing order.
    pub gauges: Vec<(usize, GaugeTransform)>,
    /// `φ^{(n)} = (1+cₙ)⋆φ^{(n−1)}`, starting with `φ^{(0)} = φ`.
    pub stages: Vec<TwistingCochain>,
    pub cap: i32,
}

impl TwistingTransfer {
    /// The stabilized cochain `φ^∞`.
    pub fn phi_infinity(&self) -> &TwistingCochain {
        self.stages.last().expect("at least the initial stage")
    }
}

fn levels_strictly_drop(k: &DGCoalgebra) -> bool {
    k.reduced_generators()
        .all(|g| k.d_gen(g).terms().all(|(h, _)| Some(h) == k.counit || k.levels[h] < k.levels[g]))
}

/// Transfers a twisting cochain `φ : K → C` to `φ* : K → (H(C), {Xᵢ})` by
/// induction on the filtration of `K`: `Wₙ = φ^{(n−1)} − Σ_{t≥2} fₜ(φ*^{⊗t})Δ̄ᵗ`,
/// `φ*ₙ = class(Wₙ)`, `∂cₙ = Wₙ − f₁φ*ₙ`, `φ^{(n)} = (1+cₙ)⋆φ^{(n−1)}`.
pub fn transfer_twisting(c: &DGAlgebra, phi: &TwistingCochain, t: &TransferResult, cap: i32) -> Result<TwistingTransfer> {
    let k = phi.source.clone();
    if phi.target.basis != t.source.basis {
        return Err(Error::BasisMismatch { slot: 0 });
    }
    if !levels_strictly_drop(&k) {
        return Err(Error::Unsuitable(
            "the coalgebra differential must lower the filtration (simply connected coalgebra)".into(),
        ));
    }
    let r = c.reduced()?;
    let h = &t.homology;
    let hb = t.algebra.basis.clone();
    let grading = k.grading;
    let mut star = MultiMap::linear(k.basis.clone(), hb.clone(), grading.d());
    let mut stages = vec![phi.clone()];
    let mut gauges = Vec::new();
    let mut by_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for g in k.reduced_generators().filter(|&g| within(&k, g, cap)) {
        by_level.entry(k.levels[g]).or_default().push(g);
    }
    for (&n, gens) in &by_level {
        let current = stages.last().expect("initial stage").clone();
        let partial = TwistingCochain { source: k.clone(), target: t.algebra.clone(), map: star.clone() };
        let solved: Vec<(usize, Element, Element)> = gens
            .par_iter()
            .map(|&g| -> Result<_> {
                let deg = k.basis.degree(g) + grading.d();
                let mut w = current.value(g);
                if w.is_zero() {
                    w = Element::zero(deg);
                }
                let higher = sum_over_diagonals(&k, g, &partial.map, 2, deg, &|i, v| morphism_comp(&t.morphism, i, v))?;
                w.sub_assign(&higher);
                if !h.complex.d(&w).is_zero() {
                    return Err(Error::Internal(format!("W_{n} is not a cycle on {}", k.basis.name(g))));
                }
                let cls = h.project(&w)?;
                let mut rhs = w.clone();
                rhs.sub_assign(&h.f1.evaluate(&[&cls])?);
                let cn = h.bound(&rhs).map_err(|e| match e {
                    Error::NonzeroClass | Error::NotACycle => {
                        Error::Internal(format!("W_{n} − f₁φ*_{n} does not bound on {}", k.basis.name(g)))
                    }
                    e => e,
                })?;
                Ok((g, cls, cn))
            })
            .collect::<Result<_>>()?;
        let mut cmap = MultiMap::linear(k.basis.clone(), r.basis().clone(), 0);
        for (g, cls, cn) in solved {
            star.set(vec![g], cls)?;
            cmap.set(vec![g], cn)?;
        }
        let cn = GaugeTransform::new(&k, cmap)?;
        let next = if cn.map.is_zero() { current } else { gauge(&current, &cn, &r)? };
        stages.push(next);
        gauges.push((n, cn));
    }
    let phi_star = TwistingCochain::new(k, t.algebra.clone(), star)?;
    Ok(TwistingTransfer { phi_star, gauges, stages, cap })
}

fn map_difference(a: &MultiMap, b: &MultiMap, k: &DGCoalgebra, gens: &[usize], label: &str, report: &mut DefectReport) {
    for &g in gens {
        let mut d = a.eval_gens(&[g]);
        let y = b.eval_gens(&[g]);
        if d.is_zero() {
            d = y.negated();
        } else if !y.is_zero() {
            d.sub_assign(&y);
        }
        if !d.is_zero() {
            report.push(label, k.basis.name(g).to_string(), d.display(a.target()).to_string());
        }
    }
}

/// Re-checks conditions (a), (b), (c) and `f*φ* = φ^∞`.
pub fn verify_twisting_transfer(tt: &TwistingTransfer, c: &DGAlgebra, t: &TransferResult) -> Result<DefectReport> {
    let k = tt.phi_star.source.clone();
    let r = c.reduced()?;
    let mut report = twisting_defect(&tt.phi_star, tt.cap)?;
    let gens: Vec<usize> = k.reduced_generators().filter(|&g| within(&k, g, tt.cap)).collect();
    for (i, (n, cn)) in tt.gauges.iter().enumerate() {
        let again = gauge(&tt.stages[i], cn, &r)?;
        map_difference(&again.map, &tt.stages[i + 1].map, &k, &gens, &format!("stage {n} is the gauge of stage {}", n - 1), &mut report);
        report.extend(twisting_defect(&tt.stages[i + 1], tt.cap)?);
    }
    let fs = f_star(&tt.phi_star, &t.morphism)?;
    for (i, (n, _)) in tt.gauges.iter().enumerate() {
        let level: Vec<usize> = gens.iter().copied().filter(|&g| k.levels[g] == *n).collect();
        map_difference(&tt.stages[i + 1].map, &fs.map, &k, &level, &format!("stage {n} agrees with f*φ* in level {n}"), &mut report);
    }
    map_difference(&fs.map, &tt.phi_infinity().map, &k, &gens, "f*φ* = φ^∞", &mut report);
    Ok(report)
}

/// `K ⊗_φ P` through a degree cap.
#[derive(Clone, Debug)]
pub struct TwistedTensorProduct {
    pub pairs: Vec<(usize, usize)>,
    pub complex: ChainComplex,
}

/// Builds `∂_φ(k⊗b) = dk⊗b + Σ (−1)^{|k₀|} k₀ ⊗ pᵢ(φk₁, …, φk_{i−1}, b)`,
/// where `k₀` runs over the first factor of the full coproduct.
pub fn twisted_tensor(phi: &TwistingCochain, p: &AInfModule, cap: i32) -> Result<TwistedTensorProduct> {
    let k = &*phi.source;
    if p.algebra.basis != phi.target.basis {
        return Err(Error::BasisMismatch { slot: 0 });
    }
    let Some(u) = k.counit else {
        return Err(Error::Unsuitable("the coalgebra needs a counit".into()));
    };
    let grading = k.grading;
    let mut pairs = Vec::new();
    for g in 0..k.basis.len() {
        for b in 0..p.basis.len() {
            if k.basis.degree(g) + p.basis.degree(b) <= cap {
                pairs.push((g, b));
            }
        }
    }
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let basis = Arc::new(GradedBasis::new(
        pairs.iter().map(|&(g, b)| (format!("{}⊗{}", k.basis.name(g), p.basis.name(b)), k.basis.degree(g) + p.basis.degree(b))),
        false,
    )?);
    let field = k.field;
    let rows: Vec<Result<Option<Element>>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(g, b))| {
            let deg = basis.degree(i) + grading.d();
            if deg > cap {
                return Ok(None);
            }
            let mut terms: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            let mut put = |kk: usize, e: &Element, c: &Scalar| {
                for (bb, x) in e.terms() {
                    let v = c * x;
                    let slot = terms.entry((kk, bb)).or_insert_with(|| field.zero());
                    *slot = &*slot + &v;
                }
            };
            let bgen = Element::generator(&p.basis, b, field);
            // dk ⊗ b
            for (h, c) in k.d_gen(g).terms() {
                put(h, &bgen, c);
            }
            // i = 1: (−1)^{|k|} k ⊗ p₁(b)
            let sk = Scalar::from_i64(field, if odd(k.basis.degree(g)) { -1 } else { 1 });
            put(g, &p.eval(1, &[b]), &sk);
            // i ≥ 2 with k₀ the counit: Δ̄^{i−1} k
            // i ≥ 2 with k₀ = l from Δ̄k = Σ l ⊗ r: Δ̄^{i−1} r
            let mut heads: Vec<(usize, usize, Scalar)> = Vec::new();
            if g != u {
                heads.push((u, g, field.one()));
                heads.extend(k.reduced_coproduct(g).iter().cloned());
            }
            for (l, rest, c) in heads {
                let sl = Scalar::from_i64(field, if odd(k.basis.degree(l)) { -1 } else { 1 });
                for (key, c2) in k.all_iterated(rest) {
                    let i = key.len() + 1;
                    let mut vals: Vec<Element> = key.iter().map(|&x| phi.value(x)).collect();
                    vals.push(bgen.clone());
                    let refs: Vec<&Element> = vals.iter().collect();
                    let v = module_op(p, i, &refs)?;
                    put(l, &v, &(&(&c * &c2) * &sl));
                }
            }
            let mut e = Element::zero(deg);
            for ((kk, bb), x) in terms {
                let j = index.get(&(kk, bb)).ok_or_else(|| {
                    Error::CapExceeded("twisted differential left the truncation".into())
                })?;
                e.add_term(*j, x);
            }
            Ok(Some(e))
        })
        .collect();
    let mut d = MultiMap::linear(basis.clone(), basis.clone(), grading.d());
    for (i, row) in rows.into_iter().enumerate() {
        if let Some(e) = row? {
            d.set(vec![i], e)?;
        }
    }
    let complex = ChainComplex::new(grading, field, basis, d, Some(cap))?;
    let dd = complex.check(cap);
    if let Some(first) = dd.defects.first() {
        return Err(Error::Validation(format!("∂_φ∘∂_φ ≠ 0 on {}", first.witness)));
    }
    Ok(TwistedTensorProduct { pairs, complex })
}

/// Output of [`uniqueness_iso`].
#[derive(Clone, Debug)]
pub struct UniquenessIso {
    pub morphism: AInfMorphism,
    /// Weight and arity caps inside which `{g*ᵢ}` is fully determined.
    pub weight_cap: i32,
    pub arity_cap: usize,
}

/// The A(∞)-isomorphism `{g*ᵢ} : (H, {X′ᵢ}) → (H, {Xᵢ})` between two
/// transfers of the same algebra, obtained by transferring the twisting
/// cochain `B̃(H, {X′ᵢ}) → C` given by `{f′ᵢ}` along `{fᵢ}`.
pub fn uniqueness_iso(c: &DGAlgebra, t: &TransferResult, t_prime: &TransferResult, length_cap: Option<usize>) -> Result<UniquenessIso> {
    if t.algebra.basis != t_prime.algebra.basis {
        return Err(Error::Validation("the two transfers use different homology bases".into()));
    }
    let grading = t.algebra.grading;
    let arity = length_cap.unwrap_or(t.arity_cap).min(t.arity_cap).min(t_prime.arity_cap);
    let weight = t.weight_cap.min(t_prime.weight_cap);
    let (bar_cap, verify_cap) = match grading {
        crate::graded::Grading::Homological => (weight, weight),
        crate::graded::Grading::Cohomological => (weight - arity as i32, weight - arity as i32 + 1),
    };
    let bar = tilde_b(t_prime.algebra.clone(), bar_cap, Some(arity))?;
    let k = Arc::new(bar.coalgebra.clone());
    let mut phi = MultiMap::linear(k.basis.clone(), t.source.basis.clone(), grading.d());
    for (i, w) in bar.words.iter().enumerate() {
        if !w.is_empty() {
            phi.set(vec![i], t_prime.morphism.eval(w.len(), w))?;
        }
    }
    let phi = TwistingCochain::new(k.clone(), t.source.clone(), phi)?;
    let tt = transfer_twisting(c, &phi, t, bar_cap)?;
    let mut comps: Vec<MultiMap> = Vec::new();
    for n in 1..=arity {
        let mut g = MultiMap::new(vec![t_prime.algebra.basis.clone(); n], t.algebra.basis.clone(), grading.morphism_shift(n));
        for (i, w) in bar.words.iter().enumerate() {
            if w.len() == n {
                g.set(w.clone(), tt.phi_star.value(i))?;
            }
        }
        comps.push(g);
    }
    let mut source = (*t_prime.algebra).clone();
    source.arity_cap = Some(arity);
    let morphism = AInfMorphism { source: Arc::new(source), target: t.algebra.clone(), comps };
    Ok(UniquenessIso { morphism, weight_cap: verify_cap, arity_cap: arity })
}
