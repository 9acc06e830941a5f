//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};

use ainf::commands::{bar_betti, run, Command, RunOptions};
use ainf::graded::Element;
use ainf::model::{corpus_model, Model, CORPUS};
use ainf::report::Report;
use ainf::transfer::{
    massey_oracle, massey_via_x3, reduced_homology, transfer_algebra, verify_transfer, TransferOptions, TransferResult,
};
use ainf::twisting::uniqueness_iso;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> Model {
    corpus_model(name).unwrap()
}

fn transfer(m: &Model, cap: i32, seed: Option<u64>) -> TransferResult {
    let a = m.algebra.as_ref().unwrap();
    let h = reduced_homology(a, cap).unwrap();
    transfer_algebra(a, &h, cap, TransferOptions { arity_cap: None, perturb: seed }).unwrap()
}

fn class(t: &TransferResult, name: &str) -> Element {
    let hb = &t.algebra.basis;
    Element::generator(hb, hb.lookup(name).unwrap(), t.source.field)
}

fn report(cmd: Command, name: &str, cap: i32) -> Report {
    run(cmd, &load(name), &RunOptions::new(cap)).unwrap()
}

fn identities_hold_on_the_corpus() -> Outcome {
    for name in ["s2", "s3", "wedge", "heisenberg", "hopf", "cp2"] {
        let t = transfer(&load(name), 8, None);
        let r = verify_transfer(&t);
        ensure(r.is_empty(), || format!("{name}: {} defects, first {}", r.defects.len(), r.defects[0]))?;
    }
    Ok(())
}

fn low_arity_structure() -> Outcome {
    for (name, _) in CORPUS {
        let m = load(name);
        let Some(a) = &m.algebra else { continue };
        let cap = 8;
        let t = transfer(&m, cap, None);
        ensure(t.algebra.ops[0].is_zero(), || format!("{name}: X1 is nonzero"))?;
        // X₂(a⊗b) = −(−1)^{|a|} [f₁a · f₁b] on every pair of classes
        let r = a.reduced().unwrap();
        let hb = &t.algebra.basis;
        let x2 = &t.algebra.ops[1];
        for i in 0..hb.len() {
            for j in 0..hb.len() {
                if hb.degree(i) + hb.degree(j) > cap {
                    continue;
                }
                let prod = r.mul(&t.morphism.eval(1, &[i]), &t.morphism.eval(1, &[j]));
                let expected = t.homology.project(&prod).unwrap().signed(hb.degree(i) % 2 == 0);
                let got = x2.eval_gens(&[i, j]);
                ensure(got == expected, || {
                    format!("{name}: X2({}, {}) = {} but expected {}", hb.name(i), hb.name(j), got.display(hb), expected.display(hb))
                })?;
            }
        }
    }
    let h = transfer(&load("heisenberg"), 6, None);
    let v = h.algebra.op(2).unwrap().evaluate(&[&class(&h, "[e1]"), &class(&h, "[e23]")]).unwrap();
    ensure(v == class(&h, "[e123]"), || format!("X2([e1],[e23]) = {}", v.display(&h.algebra.basis)))?;
    for name in ["s2", "s3", "wedge"] {
        let t = transfer(&load(name), 8, None);
        ensure(t.algebra.ops.iter().skip(2).all(|x| x.is_zero()), || format!("{name}: higher Xi nonzero"))?;
        ensure(t.morphism.comps.iter().skip(1).all(|f| f.is_zero()), || format!("{name}: higher fi nonzero"))?;
    }
    Ok(())
}

fn heisenberg_massey_product() -> Outcome {
    let m = load("heisenberg");
    let a = m.algebra.as_ref().unwrap();
    let h = reduced_homology(a, 6).unwrap();
    let t = transfer_algebra(a, &h, 6, TransferOptions::default()).unwrap();
    let (x, y, z) = (class(&t, "[e1]"), class(&t, "[e2]"), class(&t, "[e2]"));
    let x3 = massey_via_x3(&t, &x, &y, &z).unwrap();
    let coset = massey_oracle(a, &h, &x, &y, &z).unwrap();
    ensure(!x3.is_zero(), || "X3([e1],[e2],[e2]) vanishes".into())?;
    ensure(coset.contains(&x3, &t.algebra.basis, t.source.field).unwrap(), || {
        format!("{} is not in the Massey coset", x3.display(&t.algebra.basis))
    })?;
    let r = report(Command::Massey, "heisenberg", 6);
    ensure(r.passed(), || r.to_table())
}

fn bar_constructions_agree() -> Outcome {
    for (name, _) in CORPUS {
        let m = load(name);
        let Some(a) = &m.algebra else { continue };
        let (bc, bh) = bar_betti(a, 8, m.file.caps.length, None).unwrap();
        ensure(bc == bh, || format!("{name}: B(C) {bc:?} vs B̃(H) {bh:?}"))?;
    }
    Ok(())
}

fn loop_space_of_s3() -> Outcome {
    let r = report(Command::LoopSpace, "s3", 8);
    let b = &r.betti["B̃(H)"];
    ensure(r.passed() && b[..] == [1, 0, 1, 0, 1, 0, 1, 0, 1], || format!("{b:?}"))
}

fn hopf_fibration() -> Outcome {
    let r = report(Command::Fiber, "hopf", 6);
    ensure(r.passed(), || r.to_table())?;
    for key in ["K⊗_φD", "K⊗_φ*H(D)"] {
        let b = &r.betti[key];
        ensure(b[..4] == [1, 0, 0, 1], || format!("{key}: {b:?}"))?;
    }
    ensure(r.checks.iter().any(|c| c.name.contains("twisting cochain") && c.passed == Some(true)), || {
        "no twisting check".into()
    })
}

fn cp2_twisting_transfer() -> Outcome {
    let r = report(Command::TwistTransfer, "cp2", 6);
    ensure(r.passed(), || r.to_table())?;
    let r = report(Command::Fiber, "cp2", 6);
    ensure(r.passed(), || r.to_table())?;
    let acyclic = vec![1, 0, 0, 0, 0, 0];
    for key in ["K⊗_φD", "K⊗_φ*H(D)"] {
        ensure(r.betti[key] == acyclic, || format!("{key}: {:?}", r.betti[key]))?;
    }
    Ok(())
}

fn heisenberg_uniqueness() -> Outcome {
    let m = load("heisenberg");
    let a = m.algebra.as_ref().unwrap();
    let t = transfer(&m, 8, None);
    let t2 = transfer(&m, 8, Some(7));
    ensure(t.algebra != t2.algebra || t.morphism != t2.morphism, || "perturbed transfer made the same choices".into())?;
    let u = uniqueness_iso(a, &t, &t2, Some(4)).unwrap();
    let hb = &t.algebra.basis;
    for g in 0..hb.len() {
        let v = u.morphism.eval(1, &[g]);
        ensure(v == Element::generator(hb, g, t.source.field), || format!("g*1({}) = {}", hb.name(g), v.display(hb)))?;
    }
    let r = u.morphism.verify(u.weight_cap, Some(u.arity_cap));
    ensure(r.is_empty(), || format!("{} defects, first {}", r.defects.len(), r.defects[0]))
}

fn all_reports() -> Vec<String> {
    let mut out = Vec::new();
    for (name, _) in CORPUS {
        let m = load(name);
        for cmd in Command::ALL {
            if let Ok(r) = run(cmd, &m, &RunOptions::new(6)) {
                out.push(r.to_json());
                out.push(r.to_table());
            }
        }
    }
    out
}

fn deterministic_reports() -> Outcome {
    let reference = all_reports();
    ensure(reference.len() > 20, || "too few reports".into())?;
    ensure(all_reports() == reference, || "second run differs".into())?;
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let again = pool.install(all_reports);
        ensure(again == reference, || format!("{threads}-thread pool differs"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 Stasheff and morphism identities on the corpus", identities_hold_on_the_corpus),
        ("2 X1 = 0, X2 sign, formal models have no higher structure", low_arity_structure),
        ("3 Heisenberg X3 lies in the Massey product", heisenberg_massey_product),
        ("4 B̃(H) and B(C) Betti numbers agree through degree 8", bar_constructions_agree),
        ("5 loop space of S3 has Betti 1 in even degrees", loop_space_of_s3),
        ("6 Hopf fibration twisted tensor products", hopf_fibration),
        ("7 CP2 twisting transfer and acyclic fibres", cp2_twisting_transfer),
        ("8 Heisenberg transfers are related by an isomorphism", heisenberg_uniqueness),
        ("9 reports are byte-identical across runs and thread counts", deterministic_reports),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
