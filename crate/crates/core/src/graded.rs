//! Graded bases, homogeneous elements and multilinear operation tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Field, Scalar};

/// Direction of the differential. Homological objects have `d` of degree -1,
/// cohomological ones degree +1. Only parities enter the signs, so every
/// construction works in both directions once the degree shifts are flipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grading {
    Homological,
    Cohomological,
}

impl Grading {
    /// Degree of the differential.
    pub fn d(self) -> i32 {
        match self {
            Grading::Homological => -1,
            Grading::Cohomological => 1,
        }
    }

    /// Degree shift of an arity-`i` algebra operation `m_i`.
    pub fn op_shift(self, i: usize) -> i32 {
        -self.d() * (i as i32 - 2)
    }

    /// Degree shift of an arity-`i` morphism component `f_i`.
    pub fn morphism_shift(self, i: usize) -> i32 {
        -self.d() * (i as i32 - 1)
    }

    /// Filtration weight of a tuple of letters with total degree `sum` and
    /// length `n`. Every recursion used here (inserting an operation, splitting
    /// a word) lowers or preserves it, which is what makes caps sound.
    pub fn weight(self, sum: i32, n: usize) -> i32 {
        match self {
            Grading::Homological => sum + n as i32,
            Grading::Cohomological => sum,
        }
    }

    pub fn parse(s: &str) -> Result<Grading> {
        match s.trim() {
            "homological" => Ok(Grading::Homological),
            "cohomological" => Ok(Grading::Cohomological),
            other => Err(Error::Validation(format!("unknown grading `{other}`"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grading::Homological => "homological",
            Grading::Cohomological => "cohomological",
        }
    }
}

#[inline]
pub fn odd(d: i32) -> bool {
    d.rem_euclid(2) == 1
}

/// Ordered list of named generators with nonnegative degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<i32>,
    index: HashMap<String, usize>,
    reduced: bool,
}

impl GradedBasis {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i32)>, reduced: bool) -> Result<GradedBasis> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (name, deg) in gens {
            let name = name.into();
            if deg < 0 {
                return Err(Error::Validation(format!("generator `{name}` has negative degree")));
            }
            if reduced && deg == 0 {
                return Err(Error::NotReduced(name));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Validation(format!("duplicate generator `{name}`")));
            }
            names.push(name);
            degrees.push(deg);
        }
        Ok(GradedBasis { names, degrees, index, reduced })
    }

    pub fn empty() -> GradedBasis {
        GradedBasis::new(Vec::<(String, i32)>::new(), false).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn generators(&self) -> impl Iterator<Item = (usize, &str, i32)> + '_ {
        self.names.iter().zip(&self.degrees).enumerate().map(|(i, (n, &d))| (i, n.as_str(), d))
    }

    /// Generators of degree `q`, in basis order.
    pub fn in_degree(&self, q: i32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == q).collect()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().max()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().min()
    }

    /// Sub-basis without the listed generators. Returns the new basis and the
    /// old-index → new-index map.
    pub fn without(&self, drop: &[usize], reduced: bool) -> Result<(GradedBasis, Vec<Option<usize>>)> {
        let mut map = vec![None; self.len()];
        let mut gens = Vec::new();
        for i in 0..self.len() {
            if drop.contains(&i) {
                continue;
            }
            map[i] = Some(gens.len());
            gens.push((self.names[i].clone(), self.degrees[i]));
        }
        Ok((GradedBasis::new(gens, reduced)?, map))
    }
}

/// A homogeneous element: a finite sum of generators of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    degree: i32,
    terms: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero(degree: i32) -> Element {
        Element { degree, terms: BTreeMap::new() }
    }

    pub fn generator(basis: &GradedBasis, i: usize, field: Field) -> Element {
        let mut e = Element::zero(basis.degree(i));
        e.terms.insert(i, field.one());
        e
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.terms.iter().map(|(&g, c)| (g, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: usize) -> Option<&Scalar> {
        self.terms.get(&g)
    }

    pub fn add_term(&mut self, g: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        assert_eq!(self.degree, other.degree, "adding elements of different degrees");
        for (&g, x) in &other.terms {
            self.add_term(g, c * x);
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        if let Some((_, x)) = other.terms.iter().next() {
            let one = x.field().one();
            self.add_scaled(&one, other);
        }
    }

    pub fn sub_assign(&mut self, other: &Element) {
        if let Some((_, x)) = other.terms.iter().next() {
            let m1 = -x.field().one();
            self.add_scaled(&m1, other);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Element {
        let mut e = Element::zero(self.degree);
        e.add_scaled(c, self);
        e
    }

    pub fn negated(&self) -> Element {
        Element {
            degree: self.degree,
            terms: self.terms.iter().map(|(&g, c)| (g, -c)).collect(),
        }
    }

    pub fn signed(self, negate: bool) -> Element {
        if negate {
            self.negated()
        } else {
            self
        }
    }

    /// Dense coordinates with respect to `positions` (generator → slot).
    pub fn to_dense(&self, positions: &[usize], field: Field) -> Vec<Scalar> {
        positions
            .iter()
            .map(|g| self.terms.get(g).cloned().unwrap_or_else(|| field.zero()))
            .collect()
    }

    pub fn from_dense(degree: i32, positions: &[usize], coords: &[Scalar]) -> Element {
        let mut e = Element::zero(degree);
        for (g, c) in positions.iter().zip(coords) {
            e.add_term(*g, c.clone());
        }
        e
    }

    pub fn display<'a>(&'a self, basis: &'a GradedBasis) -> ElementDisplay<'a> {
        ElementDisplay { e: self, basis }
    }
}

pub struct ElementDisplay<'a> {
    e: &'a Element,
    basis: &'a GradedBasis,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_zero() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.e.terms().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag != "1" {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", self.basis.name(g))?;
        }
        Ok(())
    }
}

/// `(-1)^{deg e} e`.
pub fn koszul_hat(e: &Element) -> Element {
    e.clone().signed(odd(e.degree()))
}

/// Formal sum of generator tuples, used for tensor-product expressions.
pub type TensorSum = BTreeMap<Vec<usize>, Scalar>;

pub fn tensor_add(sum: &mut TensorSum, key: Vec<usize>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match sum.get_mut(&key) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                sum.remove(&key);
            }
        }
        None => {
            sum.insert(key, c);
        }
    }
}

/// Expands `e₁ ⊗ ⋯ ⊗ e_t` into a formal sum of generator tuples.
pub fn tensor_expand(elems: &[&Element]) -> TensorSum {
    let mut out = TensorSum::new();
    if elems.iter().any(|e| e.is_zero()) {
        return out;
    }
    fn rec(elems: &[&Element], key: &mut Vec<usize>, c: Option<Scalar>, out: &mut TensorSum) {
        let k = key.len();
        if k == elems.len() {
            if let Some(c) = c {
                tensor_add(out, key.clone(), c);
            }
            return;
        }
        for (g, x) in elems[k].terms() {
            let next = match &c {
                Some(p) => p * x,
                None => x.clone(),
            };
            key.push(g);
            rec(elems, key, Some(next), out);
            key.pop();
        }
    }
    rec(elems, &mut Vec::new(), None, &mut out);
    out
}

/// A degree-homogeneous multilinear operation stored by its values on
/// generator tuples. Absent tuples evaluate to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    sources: Vec<Arc<GradedBasis>>,
    target: Arc<GradedBasis>,
    shift: i32,
    table: BTreeMap<Vec<usize>, Element>,
}

impl MultiMap {
    pub fn new(sources: Vec<Arc<GradedBasis>>, target: Arc<GradedBasis>, shift: i32) -> MultiMap {
        assert!(!sources.is_empty(), "multimap arity must be at least 1");
        MultiMap { sources, target, shift, table: BTreeMap::new() }
    }

    /// Arity-1 map `source → target`.
    pub fn linear(source: Arc<GradedBasis>, target: Arc<GradedBasis>, shift: i32) -> MultiMap {
        MultiMap::new(vec![source], target, shift)
    }

    pub fn arity(&self) -> usize {
        self.sources.len()
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn sources(&self) -> &[Arc<GradedBasis>] {
        &self.sources
    }

    pub fn target(&self) -> &Arc<GradedBasis> {
        &self.target
    }

    pub fn out_degree(&self, tuple: &[usize]) -> i32 {
        tuple.iter().zip(&self.sources).map(|(&g, b)| b.degree(g)).sum::<i32>() + self.shift
    }

    /// Stores a value; zero values are dropped.
    pub fn set(&mut self, tuple: Vec<usize>, value: Element) -> Result<()> {
        if tuple.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: tuple.len() });
        }
        for (slot, (&g, b)) in tuple.iter().zip(&self.sources).enumerate() {
            if g >= b.len() {
                return Err(Error::BasisMismatch { slot });
            }
        }
        if value.is_zero() {
            self.table.remove(&tuple);
            return Ok(());
        }
        let expected = self.out_degree(&tuple);
        if value.degree() != expected {
            return Err(Error::Validation(format!(
                "value on ({}) has degree {}, expected {expected}",
                self.tuple_name(&tuple),
                value.degree()
            )));
        }
        if value.terms().any(|(g, _)| g >= self.target.len() || self.target.degree(g) != expected) {
            return Err(Error::Validation(format!(
                "value on ({}) is not homogeneous in the target basis",
                self.tuple_name(&tuple)
            )));
        }
        self.table.insert(tuple, value);
        Ok(())
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&Element> {
        self.table.get(tuple)
    }

    /// Value on a generator tuple (zero of the right degree when absent).
    pub fn eval_gens(&self, tuple: &[usize]) -> Element {
        match self.table.get(tuple) {
            Some(v) => v.clone(),
            None => Element::zero(self.out_degree(tuple)),
        }
    }

    /// `acc += c · op(tuple)`.
    pub fn accumulate(&self, acc: &mut Element, c: &Scalar, tuple: &[usize]) {
        if let Some(v) = self.table.get(tuple) {
            acc.add_scaled(c, v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Element)> + '_ {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// Applies the operation to a formal sum of tuples.
    pub fn apply_sum(&self, sum: &TensorSum, out_degree: i32) -> Element {
        let mut acc = Element::zero(out_degree);
        for (t, c) in sum {
            self.accumulate(&mut acc, c, t);
        }
        acc
    }

    /// Multilinear extension of the table.
    pub fn evaluate(&self, args: &[&Element]) -> Result<Element> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: args.len() });
        }
        for (slot, (a, b)) in args.iter().zip(&self.sources).enumerate() {
            if a.terms().any(|(g, _)| g >= b.len() || b.degree(g) != a.degree()) {
                return Err(Error::BasisMismatch { slot });
            }
        }
        let out_degree = args.iter().map(|a| a.degree()).sum::<i32>() + self.shift;
        let mut acc = Element::zero(out_degree);
        if args.iter().any(|a| a.is_zero()) {
            return Ok(acc);
        }
        let mut tuple = Vec::with_capacity(args.len());
        self.expand(args, &mut tuple, None, &mut acc);
        Ok(acc)
    }

    fn expand(&self, args: &[&Element], tuple: &mut Vec<usize>, coeff: Option<Scalar>, acc: &mut Element) {
        let k = tuple.len();
        if k == args.len() {
            if let Some(c) = coeff {
                self.accumulate(acc, &c, tuple);
            }
            return;
        }
        for (g, c) in args[k].terms() {
            let next = match &coeff {
                Some(prev) => prev * c,
                None => c.clone(),
            };
            tuple.push(g);
            self.expand(args, tuple, Some(next), acc);
            tuple.pop();
        }
    }

    pub fn tuple_name(&self, tuple: &[usize]) -> String {
        tuple
            .iter()
            .zip(&self.sources)
            .map(|(&g, b)| if g < b.len() { b.name(g).to_string() } else { format!("#{g}") })
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext2() -> (Arc<GradedBasis>, MultiMap) {
        // exterior algebra on e1, e2 (degree 1) without unit: basis e1, e2, e12
        let b = Arc::new(GradedBasis::new([("e1", 1), ("e2", 1), ("e12", 2)], true).unwrap());
        let f = Field::Rational;
        let mut mu = MultiMap::new(vec![b.clone(), b.clone()], b.clone(), 0);
        mu.set(vec![0, 1], Element::generator(&b, 2, f)).unwrap();
        mu.set(vec![1, 0], Element::generator(&b, 2, f).negated()).unwrap();
        (b, mu)
    }

    #[test]
    fn hat_follows_parity() {
        let f = Field::Rational;
        let b = GradedBasis::new([("x", 0), ("y", 1), ("z", 3)], false).unwrap();
        let x = Element::generator(&b, 0, f);
        let y = Element::generator(&b, 1, f);
        let z2 = Element::generator(&b, 2, f).scaled(&Scalar::from_i64(f, 2));
        assert_eq!(koszul_hat(&x), x);
        assert_eq!(koszul_hat(&y), y.negated());
        assert_eq!(koszul_hat(&z2), z2.negated());
        assert_eq!(koszul_hat(&koszul_hat(&z2)), z2);
    }

    #[test]
    fn evaluate_is_multilinear() {
        let f = Field::Rational;
        let (b, mu) = ext2();
        let e1 = Element::generator(&b, 0, f);
        let e2 = Element::generator(&b, 1, f);
        let zero = Element::zero(1);
        assert!(mu.evaluate(&[&zero, &e2]).unwrap().is_zero());
        let two = Scalar::from_i64(f, 2);
        let v = mu.evaluate(&[&e1, &e2]).unwrap();
        assert_eq!(mu.evaluate(&[&e1.scaled(&two), &e2]).unwrap(), v.scaled(&two));
        // (e1 + e2) ∧ (e1 - e2) = -e12 - e12 = -2 e12
        let mut s = e1.clone();
        s.add_assign(&e2);
        let mut d = e1.clone();
        d.sub_assign(&e2);
        let r = mu.evaluate(&[&s, &d]).unwrap();
        assert_eq!(r, Element::generator(&b, 2, f).scaled(&Scalar::from_i64(f, -2)));
        assert_eq!(r.degree(), 2);
    }

    #[test]
    fn arity_and_degree_checks() {
        let f = Field::Rational;
        let (b, mut mu) = ext2();
        let e1 = Element::generator(&b, 0, f);
        assert!(matches!(mu.evaluate(&[&e1]), Err(Error::ArityMismatch { .. })));
        assert!(mu.set(vec![0, 0], Element::generator(&b, 0, f)).is_err());
        assert!(GradedBasis::new([("a", 0)], true).is_err());
        assert!(GradedBasis::new([("a", 1), ("a", 2)], false).is_err());
    }

    #[test]
    fn gradings() {
        assert_eq!(Grading::Homological.op_shift(3), 1);
        assert_eq!(Grading::Cohomological.op_shift(3), -1);
        assert_eq!(Grading::Homological.morphism_shift(2), 1);
        assert_eq!(Grading::Cohomological.morphism_shift(2), -1);
        assert_eq!(Grading::Homological.op_shift(1), -1);
    }
}
