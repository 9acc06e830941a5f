//! The command layer shared by the command-line tool and the Python module.

use std::str::FromStr;
use std::sync::Arc;

use crate::ainf::{dga_to_ainf, dgmodule_to_ainf};
use crate::bar::tilde_b;
use crate::dg::DGAlgebra;
use crate::error::{Error, Result};
use crate::graded::{Element, Grading};
use crate::homology::HomologyData;
use crate::linalg::Field;
use crate::model::Model;
use crate::report::{Report, ReportCaps};
use crate::transfer::{
    massey_oracle, massey_via_x3, reduced_homology, transfer_algebra, transfer_module, verify_module_transfer,
    verify_transfer, TransferOptions, TransferResult,
};
use crate::twisting::{transfer_twisting, twisted_tensor, twisting_defect, verify_twisting_transfer, TwistingCochain};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Transfer,
    ModuleTransfer,
    TildeB,
    ClassifyingSpace,
    LoopSpace,
    Massey,
    TwistTransfer,
    Fiber,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Transfer,
        Command::ModuleTransfer,
        Command::TildeB,
        Command::ClassifyingSpace,
        Command::LoopSpace,
        Command::Massey,
        Command::TwistTransfer,
        Command::Fiber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Transfer => "transfer",
            Command::ModuleTransfer => "module-transfer",
            Command::TildeB => "tilde-b",
            Command::ClassifyingSpace => "classifying-space",
            Command::LoopSpace => "loop-space",
            Command::Massey => "massey",
            Command::TwistTransfer => "twist-transfer",
            Command::Fiber => "fiber",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownName(format!("no command named {s}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Verify {
    #[default]
    Strict,
    Fast,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub degree_cap: i32,
    pub arity_cap: Option<usize>,
    pub length_cap: Option<usize>,
    pub field: Option<Field>,
    pub grading: Option<Grading>,
    pub verify: Verify,
    /// Restricts `massey` to one triple of homology generator names.
    pub triple: Option<[String; 3]>,
}

impl RunOptions {
    pub fn new(degree_cap: i32) -> RunOptions {
        RunOptions { degree_cap, arity_cap: None, length_cap: None, field: None, grading: None, verify: Verify::Strict, triple: None }
    }
}

/// Applies field and grading overrides and, for constructed algebras, makes
/// sure the construction reaches the requested degree cap.
pub fn prepare(model: &Model, opts: &RunOptions) -> Result<Model> {
    let short = model.cobar.is_some() && model.degree_cap.is_none_or(|c| c < opts.degree_cap);
    if opts.field.is_none() && opts.grading.is_none() && !short {
        return Ok(model.clone());
    }
    let mut file = model.file.clone();
    if let Some(f) = opts.field {
        file.field = f.to_string();
    }
    if let Some(g) = opts.grading {
        file.grading = g.as_str().into();
    }
    if short {
        file.caps.degree = Some(opts.degree_cap);
    }
    Model::from_file(file)
}

fn need_algebra(m: &Model, cmd: Command) -> Result<Arc<DGAlgebra>> {
    m.algebra
        .clone()
        .ok_or_else(|| Error::Unsuitable(format!("{} needs a model with an [algebra] section", cmd.name())))
}

fn strict(opts: &RunOptions) -> bool {
    opts.verify == Verify::Strict
}

fn run_transfer(a: &DGAlgebra, cap: i32, arity: Option<usize>) -> Result<(HomologyData, TransferResult)> {
    let h = reduced_homology(a, cap)?;
    let t = transfer_algebra(a, &h, cap, TransferOptions { arity_cap: arity, perturb: None })?;
    Ok((h, t))
}

fn transfer_tables(report: &mut Report, t: &TransferResult) {
    for (i, x) in t.algebra.ops.iter().enumerate().skip(1) {
        report.table(&format!("X{}", i + 1), x);
    }
}

/// Runs one command on a loaded model.
pub fn run(cmd: Command, model: &Model, opts: &RunOptions) -> Result<Report> {
    let m = prepare(model, opts)?;
    let caps = ReportCaps { degree: opts.degree_cap, arity: opts.arity_cap, length: opts.length_cap.or(m.file.caps.length) };
    let mut report = Report::new(cmd.name(), &m.file.name, &m.field.to_string(), m.grading.as_str(), caps);
    let d = opts.degree_cap;
    match cmd {
        Command::Transfer => {
            let a = need_algebra(&m, cmd)?;
            let (h, t) = run_transfer(&a, d, opts.arity_cap)?;
            report.betti.insert("H(C)".into(), h.betti());
            report.values.insert("arity cap".into(), t.arity_cap.to_string());
            transfer_tables(&mut report, &t);
            if strict(opts) {
                report.check("Stasheff and morphism identities, π∘f₁ = id", &verify_transfer(&t));
            } else {
                report.skipped("Stasheff and morphism identities, π∘f₁ = id");
            }
        }
        Command::ModuleTransfer => {
            let a = need_algebra(&m, cmd)?;
            let dm = m
                .module
                .clone()
                .ok_or_else(|| Error::Unsuitable("module-transfer needs a model with a [module] section".into()))?;
            let (h, t) = run_transfer(&a, d, opts.arity_cap)?;
            let hd = HomologyData::compute(Arc::new(dm.complex.clone()), d)?;
            let mt = transfer_module(&t, &dm, &hd, TransferOptions::default())?;
            report.betti.insert("H(C)".into(), h.betti());
            report.betti.insert("H(D)".into(), hd.betti());
            for (i, y) in mt.module.ops.iter().enumerate().skip(1) {
                report.table(&format!("Y{}", i + 1), y);
            }
            if strict(opts) {
                report.check("Stasheff and morphism identities, π∘f₁ = id", &verify_transfer(&t));
                report.check("module and module-morphism identities, π∘g₁ = id", &verify_module_transfer(&mt));
            } else {
                report.skipped("module and module-morphism identities, π∘g₁ = id");
            }
        }
        Command::TildeB | Command::ClassifyingSpace | Command::LoopSpace => {
            let a = need_algebra(&m, cmd)?;
            match (cmd, m.grading) {
                (Command::ClassifyingSpace, Grading::Cohomological) => {
                    return Err(Error::Unsuitable("classifying-space works in homological grading".into()))
                }
                (Command::LoopSpace, Grading::Homological) => {
                    return Err(Error::Unsuitable("loop-space works in cohomological grading".into()))
                }
                _ => {}
            }
            let length = opts.length_cap.or(m.file.caps.length);
            let (bc, bh) = bar_betti(&a, d, length, opts.arity_cap)?;
            report.betti.insert("B(C)".into(), bc.clone());
            report.betti.insert("B̃(H)".into(), bh.clone());
            report.check_bool(
                "B̃(H, {Xᵢ}) and B(C) have equal Betti numbers",
                bc == bh,
                &format!("{bh:?} vs {bc:?}"),
            );
        }
        Command::Massey => {
            let a = need_algebra(&m, cmd)?;
            massey_report(&mut report, &a, d, opts)?;
        }
        Command::TwistTransfer => {
            let a = need_algebra(&m, cmd)?;
            let (k, phi) = match (&m.coalgebra, &m.twisting) {
                (Some(k), Some(p)) => (k.clone(), p.clone()),
                _ => return Err(Error::Unsuitable("twist-transfer needs [coalgebra] and [twisting] sections".into())),
            };
            let (h, t) = run_transfer(&a, d, opts.arity_cap)?;
            let phi = TwistingCochain::new(k, t.source.clone(), phi)?;
            report.check("φ is a twisting cochain", &twisting_defect(&phi, d)?);
            let tt = transfer_twisting(&a, &phi, &t, d)?;
            report.betti.insert("H(C)".into(), h.betti());
            report.table("φ*", &tt.phi_star.map);
            for (n, c) in &tt.gauges {
                report.table(&format!("c{n}"), &c.map);
            }
            report.table("φ^∞", &tt.phi_infinity().map);
            if strict(opts) {
                report.check("φ* is a ∼-twisting cochain, stages are gauges, f*φ* = φ^∞", &verify_twisting_transfer(&tt, &a, &t)?);
            } else {
                report.check("φ* is a ∼-twisting cochain", &twisting_defect(&tt.phi_star, d)?);
            }
        }
        Command::Fiber => {
            let a = need_algebra(&m, cmd)?;
            let (k, phi, dm) = match (&m.coalgebra, &m.twisting, &m.module) {
                (Some(k), Some(p), Some(dm)) => (k.clone(), p.clone(), dm.clone()),
                _ => {
                    return Err(Error::Unsuitable(
                        "fiber needs [coalgebra], [twisting] and [module] sections".into(),
                    ))
                }
            };
            let (_, t) = run_transfer(&a, d, opts.arity_cap)?;
            let phi = TwistingCochain::new(k, t.source.clone(), phi)?;
            report.check("φ is a twisting cochain", &twisting_defect(&phi, d)?);
            let tt = transfer_twisting(&a, &phi, &t, d)?;
            let hd = HomologyData::compute(Arc::new(dm.complex.clone()), d)?;
            let mt = transfer_module(&t, &dm, &hd, TransferOptions::default())?;
            let p = dgmodule_to_ainf(&dm, t.source.clone())?;
            let e1 = twisted_tensor(&phi, &p, d)?;
            let e2 = twisted_tensor(&tt.phi_star, &mt.module, d)?;
            let b1 = crate::homology::betti_numbers(&e1.complex, d - 1)?;
            let b2 = crate::homology::betti_numbers(&e2.complex, d - 1)?;
            report.betti.insert("K⊗_φD".into(), b1.clone());
            report.betti.insert("K⊗_φ*H(D)".into(), b2.clone());
            report.check_bool("K⊗_φD and K⊗_φ*H(D) have equal Betti numbers", b1 == b2, &format!("{b1:?} vs {b2:?}"));
            if strict(opts) {
                report.check("φ* is a ∼-twisting cochain, stages are gauges, f*φ* = φ^∞", &verify_twisting_transfer(&tt, &a, &t)?);
                report.check("module and module-morphism identities, π∘g₁ = id", &verify_module_transfer(&mt));
            }
        }
    }
    Ok(report)
}

/// Betti numbers of `B(C)` and `B̃(H(C), {Xᵢ})` in degrees `0..=cap`.
pub fn bar_betti(a: &DGAlgebra, cap: i32, length: Option<usize>, arity: Option<usize>) -> Result<(Vec<usize>, Vec<usize>)> {
    let grading = a.grading();
    let bar_cap = cap + 1;
    // the transfer must supply every operation a word of degree ≤ bar_cap can meet
    let (hcap, arity_cap) = match (grading, length) {
        (Grading::Homological, _) => (bar_cap - 2, arity),
        (Grading::Cohomological, Some(l)) => (bar_cap + l as i32, Some(l)),
        (Grading::Cohomological, None) => {
            // without degree-1 letters the word length is bounded by the degree
            let min = a.reduced()?.basis().min_degree().unwrap_or(2);
            if min < 2 {
                return Err(Error::CapExceeded("cohomological bar constructions with degree-1 letters need a length cap".into()));
            }
            (bar_cap + bar_cap.max(0) / (min - 1), arity)
        }
    };
    let c = Arc::new(dga_to_ainf(a)?);
    let bc = tilde_b(c, bar_cap, length)?.betti(cap)?;
    let h = reduced_homology(a, hcap.max(0))?;
    let t = transfer_algebra(a, &h, hcap.max(0), TransferOptions { arity_cap, perturb: None })?;
    let bh = tilde_b(t.algebra.clone(), bar_cap, length)?.betti(cap)?;
    Ok((bc, bh))
}

fn massey_report(report: &mut Report, a: &DGAlgebra, d: i32, opts: &RunOptions) -> Result<()> {
    let (h, t) = run_transfer(a, d, opts.arity_cap)?;
    report.betti.insert("H(C)".into(), h.betti());
    let hb = t.algebra.basis.clone();
    let field = t.source.field;
    let gen = |name: &str| -> Result<Element> {
        let i = hb.lookup(name).map_err(|_| Error::UnknownName(format!("{name} is not a homology generator")))?;
        Ok(Element::generator(&hb, i, field))
    };
    let triples: Vec<[usize; 3]> = match &opts.triple {
        Some(names) => {
            // Classes may be named by the cycle they represent, with or without brackets.
            let find = |n: &String| hb.lookup(n).or_else(|_| hb.lookup(&format!("[{n}]")));
            vec![[find(&names[0])?, find(&names[1])?, find(&names[2])?]]
        }
        None => {
            let n = hb.len();
            let mut v = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        v.push([i, j, k]);
                    }
                }
            }
            v
        }
    };
    let mut all_ok = true;
    let mut count = 0;
    for [i, j, k] in triples {
        let (x, y, z) = (gen(hb.name(i))?, gen(hb.name(j))?, gen(hb.name(k))?);
        let label = format!("⟨{},{},{}⟩", hb.name(i), hb.name(j), hb.name(k));
        let x3 = match massey_via_x3(&t, &x, &y, &z) {
            Ok(v) => v,
            Err(Error::MasseyUndefined(_) | Error::CapExceeded(_)) if opts.triple.is_none() => continue,
            Err(e) => return Err(e),
        };
        let coset = match massey_oracle(a, &h, &x, &y, &z) {
            Ok(c) => c,
            Err(Error::CapExceeded(_)) if opts.triple.is_none() => continue,
            Err(e) => return Err(e),
        };
        let inside = coset.contains(&x3, &hb, field)?;
        all_ok &= inside;
        count += 1;
        let span: Vec<String> = coset.indeterminacy.iter().map(|e| e.display(&hb).to_string()).collect();
        report.values.insert(
            label,
            format!(
                "X3 = {}; textbook = {} + span{{{}}}; {}",
                x3.display(&hb),
                coset.representative.display(&hb),
                span.join(", "),
                if inside { "contained" } else { "NOT contained" }
            ),
        );
    }
    report.values.insert("admissible triples".into(), count.to_string());
    report.check_bool("X₃ lies in the textbook Massey coset", all_ok, "see values");
    if strict(opts) {
        report.check("Stasheff and morphism identities, π∘f₁ = id", &verify_transfer(&t));
    }
    Ok(())
}
