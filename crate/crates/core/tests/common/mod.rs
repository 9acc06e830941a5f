#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write;

/// Exterior algebra on `n` degree-1 generators with `d e_k = Σ c^k_ij e_i e_j`
/// for `k ≥ base`, where `i < j < base`. Such a differential squares to zero
/// because `d` vanishes on the first `base` generators.
#[derive(Clone, Debug)]
pub struct Exterior {
    pub n: usize,
    pub base: usize,
    /// `(k, i, j, c)` with `i < j < base ≤ k`.
    pub structure: Vec<(usize, usize, usize, i64)>,
    pub field: String,
}

fn name(mask: u32) -> String {
    if mask == 0 {
        return "1".into();
    }
    let mut s = String::from("e");
    for i in 0..32 {
        if mask & (1 << i) != 0 {
            let _ = write!(s, "{}", i + 1);
        }
    }
    s
}

/// Sign of `e_S ∧ e_T` after sorting, or `None` when they overlap.
fn wedge(s: u32, t: u32) -> Option<i64> {
    if s & t != 0 {
        return None;
    }
    let mut swaps = 0;
    for j in 0..32 {
        if t & (1 << j) != 0 {
            swaps += (s >> (j + 1)).count_ones();
        }
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

fn lincomb(terms: &BTreeMap<u32, i64>) -> Option<String> {
    let parts: Vec<String> = terms.iter().filter(|(_, c)| **c != 0).map(|(m, c)| format!("{c}*{}", name(*m))).collect();
    if parts.is_empty() {
        None
    } else {
        Some(parts.join(" + ").replace("+ -", "- "))
    }
}

impl Exterior {
    fn d_gen(&self, k: usize) -> BTreeMap<u32, i64> {
        let mut out = BTreeMap::new();
        for &(kk, i, j, c) in &self.structure {
            if kk == k {
                *out.entry((1 << i) | (1 << j)).or_insert(0) += c;
            }
        }
        out
    }

    /// Leibniz extension to a monomial.
    fn d_mono(&self, mask: u32) -> BTreeMap<u32, i64> {
        let mut out = BTreeMap::new();
        let mut before = 0u32;
        for k in 0..self.n {
            if mask & (1 << k) == 0 {
                continue;
            }
            let after = mask & !((1 << (k + 1)) - 1);
            let sign = if before.count_ones().is_multiple_of(2) { 1 } else { -1 };
            for (m, c) in self.d_gen(k) {
                let Some(s1) = wedge(before, m) else { continue };
                let Some(s2) = wedge(before | m, after) else { continue };
                *out.entry(before | m | after).or_insert(0) += sign * s1 * s2 * c;
            }
            before |= 1 << k;
        }
        out
    }

    pub fn toml(&self) -> String {
        let masks: Vec<u32> = {
            let mut v: Vec<u32> = (0..(1u32 << self.n)).collect();
            v.sort_by_key(|m| (m.count_ones(), *m));
            v
        };
        let mut s = String::new();
        let _ = writeln!(s, "name = \"exterior{}\"\nfield = \"{}\"\ngrading = \"cohomological\"\n", self.n, self.field);
        let _ = writeln!(s, "[algebra]\ngenerators = [");
        for m in &masks {
            let _ = writeln!(s, "  [\"{}\", {}],", name(*m), m.count_ones());
        }
        let _ = writeln!(s, "]\nunit = \"1\"\n\n[algebra.differential]");
        for m in &masks {
            if let Some(v) = lincomb(&self.d_mono(*m)) {
                let _ = writeln!(s, "{} = \"{v}\"", name(*m));
            }
        }
        let _ = writeln!(s, "\n[algebra.product]");
        for a in &masks {
            for b in &masks {
                if *a == 0 || *b == 0 {
                    continue;
                }
                if let Some(sign) = wedge(*a, *b) {
                    let _ = writeln!(s, "\"{}*{}\" = \"{}{}\"", name(*a), name(*b), if sign < 0 { "-" } else { "" }, name(a | b));
                }
            }
        }
        s
    }
}

pub fn exterior_strategy() -> impl proptest::strategy::Strategy<Value = Exterior> {
    use proptest::prelude::*;
    (3usize..=5, 2usize..=3).prop_flat_map(|(n, base)| {
        let base = base.min(n - 1);
        let slots: Vec<(usize, usize, usize)> = (base..n)
            .flat_map(|k| (0..base).flat_map(move |i| (i + 1..base).map(move |j| (k, i, j))))
            .collect();
        let len = slots.len();
        (Just(n), Just(base), Just(slots), proptest::collection::vec(-2i64..=2, len))
    })
    .prop_flat_map(|(n, base, slots, coeffs)| {
        let structure = slots.iter().zip(&coeffs).map(|(&(k, i, j), &c)| (k, i, j, c)).filter(|t| t.3 != 0).collect();
        prop_oneof![Just("Q"), Just("Zp:2"), Just("Zp:3"), Just("Zp:5")]
            .prop_map(move |f| Exterior { n, base, structure: Vec::clone(&structure), field: f.into() })
    })
}
