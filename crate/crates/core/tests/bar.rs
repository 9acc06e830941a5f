//! Betti numbers of the normalized bar construction, computed directly from
//! the product and differential of a DGA, compared with the library's `B̃`
//! of both the algebra and its transferred homology.

use std::collections::HashMap;

use ainf::commands::bar_betti;
use ainf::dg::DGAlgebra;
use ainf::graded::Grading;
use ainf::linalg::{rank, Matrix, Scalar};
use ainf::model::{corpus_model, Model};

/// `d[a₁|…|aₖ] = −Σ (−1)^{εᵢ} […|daᵢ|…] + Σ (−1)^{εᵢ} […|aᵢ₋₁aᵢ|…]`,
/// with `εᵢ` the total suspended degree of the letters before `aᵢ`.
struct ClassicalBar {
    words: Vec<Vec<usize>>,
    degree: Vec<i32>,
    index: HashMap<Vec<usize>, usize>,
}

fn shifted(grading: Grading, d: i32) -> i32 {
    match grading {
        Grading::Homological => d + 1,
        Grading::Cohomological => d - 1,
    }
}

impl ClassicalBar {
    fn new(a: &DGAlgebra, max_degree: i32, max_len: usize) -> ClassicalBar {
        let b = a.basis();
        let g = a.grading();
        let mut words = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for x in 0..b.len() {
                    let mut v: Vec<usize> = w.clone();
                    v.push(x);
                    let deg: i32 = v.iter().map(|&y| shifted(g, b.degree(y))).sum();
                    // Degree-1 cochains suspend to degree 0, so the length bound is what stops this.
                    if deg <= max_degree {
                        next.push(v);
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let degree = words.iter().map(|w| w.iter().map(|&y| shifted(g, b.degree(y))).sum()).collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        ClassicalBar { words, degree, index }
    }

    fn d(&self, a: &DGAlgebra, w: &[usize]) -> Vec<(usize, Scalar)> {
        let b = a.basis();
        let g = a.grading();
        let field = a.field();
        let mut out: HashMap<usize, Scalar> = HashMap::new();
        let mut add = |word: Vec<usize>, c: Scalar| {
            if let Some(&i) = self.index.get(&word) {
                let e = out.entry(i).or_insert_with(|| field.zero());
                *e = &*e + &c;
            }
        };
        let mut eps = 0;
        for i in 0..w.len() {
            if i > 0 {
                eps += shifted(g, b.degree(w[i - 1]));
            }
            let sign = Scalar::from_i64(field, if eps % 2 == 0 { 1 } else { -1 });
            for (y, c) in a.complex.d_gen(w[i]).terms() {
                let mut v = w.to_vec();
                v[i] = y;
                add(v, -(&sign * c));
            }
            if i > 0 {
                for (y, c) in a.mul_gens(w[i - 1], w[i]).terms() {
                    let mut v = w[..i - 1].to_vec();
                    v.push(y);
                    v.extend_from_slice(&w[i + 1..]);
                    add(v, &sign * c);
                }
            }
        }
        let mut v: Vec<(usize, Scalar)> = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    fn matrix(&self, a: &DGAlgebra, from: i32, to: i32) -> (Matrix, Vec<usize>) {
        let src: Vec<usize> = (0..self.words.len()).filter(|&i| self.degree[i] == from).collect();
        let dst: Vec<usize> = (0..self.words.len()).filter(|&i| self.degree[i] == to).collect();
        let pos: HashMap<usize, usize> = dst.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let mut m = Matrix::zeros(a.field(), dst.len(), src.len());
        for (col, &i) in src.iter().enumerate() {
            for (j, c) in self.d(a, &self.words[i]) {
                m.set(pos[&j], col, c);
            }
        }
        (m, src)
    }

    fn betti(&self, a: &DGAlgebra, through: i32) -> Vec<usize> {
        let step = a.grading().d();
        (0..=through)
            .map(|q| {
                let (out, src) = self.matrix(a, q, q + step);
                let (inc, _) = self.matrix(a, q - step, q);
                src.len() - rank(&out).unwrap() - rank(&inc).unwrap()
            })
            .collect()
    }

    fn check_square_zero(&self, a: &DGAlgebra) {
        for w in &self.words {
            let mut acc: HashMap<usize, Scalar> = HashMap::new();
            for (j, c) in self.d(a, w) {
                for (k, e) in self.d(a, &self.words[j]) {
                    let slot = acc.entry(k).or_insert_with(|| a.field().zero());
                    *slot = &*slot + &(&c * &e);
                }
            }
            assert!(acc.values().all(Scalar::is_zero), "d² ≠ 0 on {w:?}");
        }
    }
}

fn compare(m: &Model, through: i32, length: Option<usize>) {
    let a = m.algebra.as_ref().unwrap().reduced().unwrap();
    let max_len = length.unwrap_or((through + 1) as usize);
    let bar = ClassicalBar::new(&a, through + 1, max_len);
    bar.check_square_zero(&a);
    let oracle = bar.betti(&a, through);
    let (bc, bh) = bar_betti(m.algebra.as_ref().unwrap(), through, length, None).unwrap();
    assert_eq!(bc[..=through as usize], oracle[..], "{}: B(C)", m.file.name);
    assert_eq!(bh[..=through as usize], oracle[..], "{}: B̃(H)", m.file.name);
}

#[test]
fn spheres_and_wedges() {
    for name in ["s2", "s3", "wedge"] {
        compare(&corpus_model(name).unwrap(), 8, None);
    }
}

#[test]
fn bar_of_the_cp2_cobar_construction() {
    let m = corpus_model("cp2").unwrap();
    compare(&m, 8, None);
}

#[test]
fn heisenberg_with_a_length_cap() {
    let m = corpus_model("heisenberg").unwrap();
    compare(&m, 8, Some(4));
}

#[test]
fn oracle_values_for_spheres() {
    let s3 = corpus_model("s3").unwrap();
    let a = s3.algebra.as_ref().unwrap().reduced().unwrap();
    let b = ClassicalBar::new(&a, 9, 9).betti(&a, 8);
    assert_eq!(b, [1, 0, 1, 0, 1, 0, 1, 0, 1]);
    let s2 = corpus_model("s2").unwrap();
    let a = s2.algebra.as_ref().unwrap().reduced().unwrap();
    let b = ClassicalBar::new(&a, 9, 9).betti(&a, 8);
    assert_eq!(b, [1; 9]);
}
