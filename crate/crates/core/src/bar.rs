//! The B̃-construction of an A(∞)-algebra, its comodules, and the maps
//! induced by A(∞)-morphisms.
//!
//! Words `(a₁|…|aₙ)` have degree `Σ|aᵢ| + n` in homological mode and
//! `Σ|aᵢ| − n` in cohomological mode. The construction is truncated at a
//! word-degree cap and, optionally, at a word length; the length truncation
//! is a subcomplex since `d_m` never lengthens words.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::ainf::{compositions, insertion_sum, AInfAlgebra, AInfModule, AInfModuleMorphism, AInfMorphism};
use crate::dg::{ChainComplex, DGCoalgebra, DefectReport};
use crate::error::{Error, Result};
use crate::graded::{tensor_expand, Element, GradedBasis, Grading, MultiMap};

fn word_degree(grading: Grading, letters: &GradedBasis, word: &[usize]) -> i32 {
    let sum: i32 = word.iter().map(|&g| letters.degree(g)).sum();
    match grading {
        Grading::Homological => sum + word.len() as i32,
        Grading::Cohomological => sum - word.len() as i32,
    }
}

/// Enumerates words (including the empty word) of degree ≤ `cap` and length
/// ≤ `length_cap`, in (length, lexicographic) order.
fn enumerate_words(grading: Grading, letters: &GradedBasis, cap: i32, length_cap: Option<usize>) -> Result<Vec<Vec<usize>>> {
    if let Some(g) = (0..letters.len()).find(|&g| letters.degree(g) == 0) {
        return Err(Error::NotReduced(letters.name(g).to_string()));
    }
    let min = letters.min_degree().unwrap_or(1);
    let per_letter = match grading {
        Grading::Homological => min + 1,
        Grading::Cohomological => min - 1,
    };
    let max_len = match (length_cap, per_letter) {
        (Some(l), _) => l,
        (None, p) if p > 0 => (cap.max(0) / p) as usize,
        (None, _) => {
            return Err(Error::CapExceeded(
                "degree-1 letters in cohomological mode give infinitely many words per degree; set a length cap".into(),
            ))
        }
    };
    let mut words = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..letters.len() {
                let mut w2: Vec<usize> = w.clone();
                w2.push(g);
                // prune: remaining letters only add, except in cohomological
                // mode where a letter of degree 1 adds 0
                let d = word_degree(grading, letters, &w2);
                if d <= cap {
                    next.push(w2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(words)
}

fn word_name(letters: &GradedBasis, w: &[usize]) -> String {
    if w.is_empty() {
        "[]".to_string()
    } else {
        format!("[{}]", w.iter().map(|&g| letters.name(g)).collect::<Vec<_>>().join("|"))
    }
}

/// The B̃-construction `(T^c(M), d_m)` through a cap.
#[derive(Clone, Debug)]
pub struct TildeB {
    pub algebra: Arc<AInfAlgebra>,
    pub words: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
    pub coalgebra: DGCoalgebra,
    pub degree_cap: i32,
    pub length_cap: Option<usize>,
}

/// Checks that the operation data needed on `block` lies inside the caps.
fn check_block(a: &AInfAlgebra, block: &[usize]) -> Result<()> {
    let j = block.len();
    if let Some(ac) = a.arity_cap {
        if j > ac {
            return Err(Error::CapExceeded(format!("operation of arity {j} needed, arity cap is {ac}")));
        }
    }
    if let Some(wc) = a.weight_cap {
        if a.tuple_weight(block) > wc {
            return Err(Error::CapExceeded(format!(
                "operation on a block of weight {} needed, weight cap is {wc}",
                a.tuple_weight(block)
            )));
        }
    }
    Ok(())
}

/// `d_m` applied to one word, as a sum of words.
pub(crate) fn bar_differential(a: &AInfAlgebra, word: &[usize]) -> Result<BTreeMap<Vec<usize>, crate::linalg::Scalar>> {
    let n = word.len();
    for k in 0..n {
        for j in 1..=n - k {
            if a.ops.get(j - 1).is_some_and(|m| !m.is_zero()) {
                check_block(a, &word[k..k + j])?;
            }
        }
    }
    let mut out = BTreeMap::new();
    insertion_sum(
        a.field,
        &vec![&*a.basis; n],
        word,
        |_, _| true,
        |k, j| a.eval(j, &word[k..k + j]),
        |t, c| crate::graded::tensor_add(&mut out, t.to_vec(), c.clone()),
    );
    Ok(out)
}

/// Builds the B̃-construction of a reduced A(∞)-algebra: all words of degree
/// at most `degree_cap` (and length at most `length_cap` when given).
pub fn tilde_b(a: Arc<AInfAlgebra>, degree_cap: i32, length_cap: Option<usize>) -> Result<TildeB> {
    let grading = a.grading;
    let words = enumerate_words(grading, &a.basis, degree_cap, length_cap)?;
    let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let basis = Arc::new(GradedBasis::new(
        words.iter().map(|w| (word_name(&a.basis, w), word_degree(grading, &a.basis, w))),
        false,
    )?);
    let mut d = MultiMap::linear(basis.clone(), basis.clone(), grading.d());
    for (i, w) in words.iter().enumerate() {
        if w.is_empty() {
            continue;
        }
        let target_degree = basis.degree(i) + grading.d();
        if target_degree > degree_cap {
            continue;
        }
        let dw = bar_differential(&a, w)?;
        let mut e = Element::zero(target_degree);
        for (w2, c) in dw {
            match index.get(&w2) {
                Some(&j) => e.add_term(j, c),
                None => {
                    return Err(Error::Internal(format!(
                        "d_m left the truncation on {}",
                        word_name(&a.basis, w)
                    )))
                }
            }
        }
        d.set(vec![i], e)?;
    }
    let field = a.field;
    let mut coproduct = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        let parts: Vec<_> = (1..w.len())
            .map(|s| (index[&w[..s]], index[&w[s..]], field.one()))
            .collect();
        if !parts.is_empty() {
            coproduct.insert(i, parts);
        }
    }
    let levels = words.iter().map(Vec::len).collect();
    let coalgebra = DGCoalgebra::new(grading, field, basis, d, coproduct, Some(0))?
        .with_levels(levels)
        .with_complete_through(Some(degree_cap));
    Ok(TildeB { algebra: a, words, index, coalgebra, degree_cap, length_cap })
}

impl TildeB {
    pub fn complex(&self) -> ChainComplex {
        self.coalgebra.complex()
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.coalgebra.basis
    }

    /// Betti numbers of the construction in degrees `0..=cap`; requires
    /// `cap < degree_cap`.
    pub fn betti(&self, cap: i32) -> Result<Vec<usize>> {
        crate::homology::betti_numbers(&self.complex(), cap)
    }

    /// `d_m ∘ d_m` on every word whose image stays inside the truncation.
    pub fn check_square_zero(&self) -> DefectReport {
        self.coalgebra.complex().check(self.degree_cap)
    }

    fn word_sum_to_element(&self, sum: &BTreeMap<Vec<usize>, crate::linalg::Scalar>, degree: i32) -> Result<Element> {
        let mut e = Element::zero(degree);
        for (w, c) in sum {
            let j = self.index.get(w).ok_or_else(|| {
                Error::CapExceeded(format!("word {} lies outside the target truncation", word_name(&self.algebra.basis, w)))
            })?;
            e.add_term(*j, c.clone());
        }
        Ok(e)
    }
}

/// The coalgebra map `B̃(source) → B̃(target)` induced by `{f_i}`:
/// `f(a₁…aₙ) = Σ_t Σ_{S(t,n)} f_{k₁}(…) ⊗ ⋯ ⊗ f_{k_t}(…)`.
pub fn coalgebra_map_of_morphism(f: &AInfMorphism, source: &TildeB, target: &TildeB) -> Result<MultiMap> {
    let mut map = MultiMap::linear(source.basis().clone(), target.basis().clone(), 0);
    for (i, w) in source.words.iter().enumerate() {
        let mut sum = BTreeMap::new();
        if w.is_empty() {
            sum.insert(vec![], f.source.field.one());
        }
        for comp in compositions(w.len()) {
            let vals: Vec<Element> = comp.blocks().map(|r| f.eval(r.len(), &w[r])).collect();
            let refs: Vec<&Element> = vals.iter().collect();
            for (k, c) in tensor_expand(&refs) {
                crate::graded::tensor_add(&mut sum, k, c);
            }
        }
        map.set(vec![i], target.word_sum_to_element(&sum, source.basis().degree(i))?)?;
    }
    Ok(map)
}

/// Checks `d ∘ f = f ∘ d` for a degree-0 map between two complexes, on every
/// source generator whose image under `d` is inside the source truncation.
pub fn check_chain_map(map: &MultiMap, source: &ChainComplex, target: &ChainComplex, label: &str) -> DefectReport {
    let mut report = DefectReport::default();
    for g in 0..source.basis.len() {
        let deg = source.basis.degree(g);
        if !source.checkable(deg) || !target.checkable(deg) {
            continue;
        }
        let lhs = target.d(&map.eval_gens(&[g]));
        let rhs = map.evaluate(&[&source.d_gen(g)]).expect("source differential lies in the basis");
        let mut diff = lhs;
        diff.sub_assign(&rhs);
        if !diff.is_zero() {
            report.push(label, source.basis.name(g).to_string(), diff.display(&target.basis).to_string());
        }
    }
    report
}

/// `B̃(M) ⊗ P` with the differential built from `{m_i}` and `{p_i}`.
#[derive(Clone, Debug)]
pub struct BarModule {
    pub bar: Arc<TildeB>,
    pub module: Arc<AInfModule>,
    pub pairs: Vec<(usize, usize)>,
    pub index: HashMap<(usize, usize), usize>,
    pub complex: ChainComplex,
}

/// The comodule `B̃(M) ⊗ P` of an A(∞)-module through `degree_cap`.
pub fn comodule_of_module(p: Arc<AInfModule>, bar: Arc<TildeB>, degree_cap: i32) -> Result<BarModule> {
    let grading = p.grading();
    let mut pairs = Vec::new();
    for (w, _) in bar.words.iter().enumerate() {
        for b in 0..p.basis.len() {
            if bar.basis().degree(w) + p.basis.degree(b) <= degree_cap {
                pairs.push((w, b));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
    let basis = Arc::new(GradedBasis::new(
        pairs.iter().map(|&(w, b)| {
            (
                format!("{}⊗{}", bar.basis().name(w), p.basis.name(b)),
                bar.basis().degree(w) + p.basis.degree(b),
            )
        }),
        false,
    )?);
    let mut d = MultiMap::linear(basis.clone(), basis.clone(), grading.d());
    for (i, &(w, b)) in pairs.iter().enumerate() {
        let target_degree = basis.degree(i) + grading.d();
        if target_degree > degree_cap {
            continue;
        }
        let word = &bar.words[w];
        let mut tuple = word.clone();
        tuple.push(b);
        let n = tuple.len();
        let bases = p.slot_bases(n);
        let mut acc = Element::zero(target_degree);
        let mut err = None;
        let mut put = |t: &[usize], c: &crate::linalg::Scalar| {
            let (wd, last) = t.split_at(t.len() - 1);
            match bar.index.get(wd).and_then(|&wi| index.get(&(wi, last[0]))) {
                Some(&j) => acc.add_term(j, c.clone()),
                None => {
                    err.get_or_insert(Error::CapExceeded("comodule differential left the truncation".into()));
                }
            }
        };
        insertion_sum(p.field(), &bases, &tuple, |k, j| k + j < n, |k, j| p.algebra.eval(j, &tuple[k..k + j]), &mut put);
        insertion_sum(p.field(), &bases, &tuple, |k, j| k + j == n, |k, j| p.eval(j, &tuple[k..k + j]), &mut put);
        if let Some(e) = err {
            return Err(e);
        }
        d.set(vec![i], acc)?;
    }
    let complex = ChainComplex::new(grading, p.field(), basis, d, Some(degree_cap))?;
    Ok(BarModule { bar, module: p, pairs, index, complex })
}

/// The comodule map `B̃(M) ⊗ P → B̃(M') ⊗ P'` induced by `({f_i}, {g_i})`.
pub fn comodule_map_of_morphism(g: &AInfModuleMorphism, source: &BarModule, target: &BarModule) -> Result<MultiMap> {
    let mut map = MultiMap::linear(source.complex.basis.clone(), target.complex.basis.clone(), 0);
    for (i, &(w, b)) in source.pairs.iter().enumerate() {
        let mut tuple = source.bar.words[w].clone();
        tuple.push(b);
        let n = tuple.len();
        let mut e = Element::zero(source.complex.basis.degree(i));
        for comp in compositions(n) {
            let blocks: Vec<_> = comp.blocks().collect();
            let t = blocks.len();
            let mut vals: Vec<Element> = blocks[..t - 1]
                .iter()
                .map(|r| g.algebra_map.eval(r.len(), &tuple[r.clone()]))
                .collect();
            let last = blocks[t - 1].clone();
            vals.push(g.eval(last.len(), &tuple[last]));
            let refs: Vec<&Element> = vals.iter().collect();
            for (k, c) in tensor_expand(&refs) {
                let (wd, last) = k.split_at(k.len() - 1);
                let j = target
                    .bar
                    .index
                    .get(wd)
                    .and_then(|&wi| target.index.get(&(wi, last[0])))
                    .ok_or_else(|| Error::CapExceeded("comodule map left the target truncation".into()))?;
                e.add_term(*j, c);
            }
        }
        map.set(vec![i], e)?;
    }
    Ok(map)
}
