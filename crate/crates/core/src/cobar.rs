//! The cobar construction `ΩK = (T(s⁻¹K̄), ∂)` of a simply connected
//! homological DG coalgebra, truncated at a degree cap, and the universal
//! twisting cochain `K → ΩK`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::dg::{ChainComplex, DGAlgebra, DGCoalgebra};
use crate::error::{Error, Result};
use crate::graded::{odd, tensor_add, Element, GradedBasis, Grading, MultiMap, TensorSum};
use crate::linalg::Scalar;

/// A truncated cobar construction together with its universal twisting cochain.
#[derive(Clone, Debug)]
pub struct Cobar {
    pub algebra: Arc<DGAlgebra>,
    /// Words over the reduced generators of `K`; word 0 is the unit.
    pub words: Vec<Vec<usize>>,
    /// `φ(k) = s⁻¹k` as a map from `K` to the augmentation ideal of `ΩK`.
    pub universal: MultiMap,
    pub reduced_basis: Arc<GradedBasis>,
}

fn cobar_name(k: &GradedBasis, w: &[usize]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        format!("{{{}}}", w.iter().map(|&g| k.name(g)).collect::<Vec<_>>().join("."))
    }
}

/// Builds `ΩK` through `degree_cap`; data in the top degrees is exact since
/// the differential lowers degree and products only add.
pub fn cobar(k: &DGCoalgebra, degree_cap: i32) -> Result<Cobar> {
    if k.grading != Grading::Homological {
        return Err(Error::Unsuitable("the cobar construction needs a homological coalgebra".into()));
    }
    let letters: Vec<usize> = k.reduced_generators().collect();
    if let Some(&g) = letters.iter().find(|&&g| k.basis.degree(g) < 2) {
        return Err(Error::NotReduced(format!(
            "{} has degree {}; the cobar construction needs a simply connected coalgebra",
            k.basis.name(g),
            k.basis.degree(g)
        )));
    }
    let letter_degree = |g: usize| k.basis.degree(g) - 1;
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier: Vec<(Vec<usize>, i32)> = vec![(vec![], 0)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, d) in &frontier {
            for &g in &letters {
                let d2 = d + letter_degree(g);
                if d2 <= degree_cap {
                    let mut w2 = w.clone();
                    w2.push(g);
                    next.push((w2, d2));
                }
            }
        }
        words.extend(next.iter().map(|(w, _)| w.clone()));
        frontier = next;
    }
    let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let degree = |w: &[usize]| w.iter().map(|&g| letter_degree(g)).sum::<i32>();
    let basis = Arc::new(GradedBasis::new(words.iter().map(|w| (cobar_name(&k.basis, w), degree(w))), false)?);
    let field = k.field;

    // ∂ on single letters: s⁻¹dk + Σ (−1)^{|k'|−1} s⁻¹k' · s⁻¹k''
    let mut letter_d: BTreeMap<usize, TensorSum> = BTreeMap::new();
    for &g in &letters {
        let mut s = TensorSum::new();
        for (h, c) in k.d_gen(g).terms() {
            if Some(h) != k.counit {
                tensor_add(&mut s, vec![h], c.clone());
            }
        }
        for (l, r, c) in k.reduced_coproduct(g) {
            let sign = Scalar::from_i64(field, if odd(k.basis.degree(*l) - 1) { -1 } else { 1 });
            tensor_add(&mut s, vec![*l, *r], c * &sign);
        }
        letter_d.insert(g, s);
    }
    // Leibniz: ∂(x₁⋯xₙ) = Σ (−1)^{|x₁…x_{i−1}|} x₁⋯∂xᵢ⋯xₙ
    let mut d = MultiMap::linear(basis.clone(), basis.clone(), -1);
    for (i, w) in words.iter().enumerate() {
        if w.is_empty() {
            continue;
        }
        let mut out = Element::zero(basis.degree(i) - 1);
        let mut prefix_degree = 0;
        for (p, &g) in w.iter().enumerate() {
            let sign = Scalar::from_i64(field, if odd(prefix_degree) { -1 } else { 1 });
            for (mid, c) in &letter_d[&g] {
                let mut w2 = w[..p].to_vec();
                w2.extend_from_slice(mid);
                w2.extend_from_slice(&w[p + 1..]);
                let j = index.get(&w2).ok_or_else(|| Error::Internal("cobar differential raised degree".into()))?;
                out.add_term(*j, c * &sign);
            }
            prefix_degree += letter_degree(g);
        }
        d.set(vec![i], out)?;
    }
    let mut product = MultiMap::new(vec![basis.clone(), basis.clone()], basis.clone(), 0);
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            let mut ab = a.clone();
            ab.extend_from_slice(b);
            if let Some(&t) = index.get(&ab) {
                product.set(vec![i, j], Element::generator(&basis, t, field))?;
            }
        }
    }
    let complex = ChainComplex::new(Grading::Homological, field, basis.clone(), d, Some(degree_cap))?;
    let algebra = Arc::new(DGAlgebra::new(complex, product, Some(0))?);
    let reduced_basis = algebra.reduced()?.basis().clone();
    let mut universal = MultiMap::linear(k.basis.clone(), reduced_basis.clone(), -1);
    for &g in &letters {
        if letter_degree(g) <= degree_cap {
            let t = reduced_basis.lookup(&cobar_name(&k.basis, &[g]))?;
            universal.set(vec![g], Element::generator(&reduced_basis, t, field))?;
        }
    }
    Ok(Cobar { algebra, words, universal, reduced_basis })
}
